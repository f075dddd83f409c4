//! Finite groups given by multiplication tables, their conjugacy classes and
//! character tables, and the extended-quotient constructions built on them.

pub mod chartab;
pub mod clifford;
pub mod corpus;
pub mod cyclotomic;

use std::collections::HashMap;

use num_integer::Integer;
use rand::{Rng, SeedableRng};

use crate::{AtlasError, Result};

pub use chartab::{character_table, CharacterTable};
pub use clifford::{
    c_irr_system, clifford_count, extended_quotient_2, semidirect_product, CIrrSystem,
    CliffordReport, ExtendedQuotientFinite,
};

pub const MAX_GROUP_ORDER: usize = 10_000;

/// A finite group on `0..n` with identity `0`.
#[derive(Clone, Debug)]
pub struct FiniteGroup {
    n: usize,
    table: Vec<u32>,
    inv: Vec<u32>,
    pub generators: Vec<u32>,
    /// Permutation realizing each element, when the group was built from permutations.
    pub perms: Option<Vec<Vec<u32>>>,
}

impl FiniteGroup {
    /// Build from a full multiplication table; element 0 must be the identity.
    pub fn from_table(rows: Vec<Vec<u32>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(AtlasError::Invariant("empty group".into()));
        }
        if n > MAX_GROUP_ORDER {
            return Err(AtlasError::GroupTooLarge(n, MAX_GROUP_ORDER));
        }
        let mut table = Vec::with_capacity(n * n);
        for r in &rows {
            if r.len() != n || r.iter().any(|&x| x as usize >= n) {
                return Err(AtlasError::Invariant("malformed multiplication table".into()));
            }
            table.extend_from_slice(r);
        }
        let mut g = FiniteGroup {
            n,
            table,
            inv: vec![0; n],
            generators: vec![],
            perms: None,
        };
        for a in 0..n {
            if g.mul(0, a as u32) != a as u32 || g.mul(a as u32, 0) != a as u32 {
                return Err(AtlasError::Invariant("element 0 is not the identity".into()));
            }
            let mut seen = vec![false; n];
            for b in 0..n {
                let c = g.mul(a as u32, b as u32) as usize;
                if seen[c] {
                    return Err(AtlasError::Invariant("table is not a Latin square".into()));
                }
                seen[c] = true;
            }
        }
        for a in 0..n as u32 {
            g.inv[a as usize] = (0..n as u32).find(|&b| g.mul(a, b) == 0).unwrap();
        }
        g.check_associative()?;
        g.generators = g.greedy_generators();
        Ok(g)
    }

    /// Closure of permutations of `0..m`; elements are numbered in
    /// breadth-first order from the identity.
    pub fn from_perms(gens: &[Vec<u32>]) -> Result<Self> {
        let m = gens.first().map(|g| g.len()).unwrap_or(0);
        let id: Vec<u32> = (0..m as u32).collect();
        let mut elems = vec![id.clone()];
        let mut index: HashMap<Vec<u32>, u32> = HashMap::new();
        index.insert(id, 0);
        let mut head = 0;
        while head < elems.len() {
            for g in gens {
                let p: Vec<u32> = elems[head].iter().map(|&x| g[x as usize]).collect();
                if !index.contains_key(&p) {
                    if elems.len() >= MAX_GROUP_ORDER {
                        return Err(AtlasError::GroupTooLarge(elems.len() + 1, MAX_GROUP_ORDER));
                    }
                    index.insert(p.clone(), elems.len() as u32);
                    elems.push(p);
                }
            }
            head += 1;
        }
        let n = elems.len();
        let mut table = vec![0u32; n * n];
        let mut buf = vec![0u32; m];
        for a in 0..n {
            for b in 0..n {
                // (a b)(x) = a(b(x))
                for (x, slot) in buf.iter_mut().enumerate() {
                    *slot = elems[a][elems[b][x] as usize];
                }
                table[a * n + b] = index[&buf];
            }
        }
        let mut inv = vec![0u32; n];
        for a in 0..n {
            let mut q = vec![0u32; m];
            for (i, &x) in elems[a].iter().enumerate() {
                q[x as usize] = i as u32;
            }
            inv[a] = index[&q];
        }
        let generators = gens.iter().map(|g| index[g]).filter(|&g| g != 0).collect();
        Ok(FiniteGroup {
            n,
            table,
            inv,
            generators,
            perms: Some(elems),
        })
    }

    pub fn cyclic(n: usize) -> Self {
        let rows = (0..n)
            .map(|a| (0..n).map(|b| ((a + b) % n) as u32).collect())
            .collect();
        FiniteGroup::from_table(rows).expect("cyclic table")
    }

    pub fn trivial() -> Self {
        FiniteGroup::cyclic(1)
    }

    /// Direct product; `(a, b)` has index `a + |A| b`.
    pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> Self {
        let (na, nb) = (a.order(), b.order());
        let n = na * nb;
        let rows = (0..n)
            .map(|x| {
                (0..n)
                    .map(|y| {
                        let p = a.mul((x % na) as u32, (y % na) as u32) as usize;
                        let q = b.mul((x / na) as u32, (y / na) as u32) as usize;
                        (p + na * q) as u32
                    })
                    .collect()
            })
            .collect();
        FiniteGroup::from_table(rows).expect("direct product table")
    }

    /// Parse the corpus format: `n`, then `n` rows of `n` integers; row `a`
    /// column `b` holds `ab`. Lines starting with `#` are ignored.
    pub fn parse_table(text: &str) -> Result<Self> {
        let mut nums = text
            .lines()
            .filter(|l| !l.trim_start().starts_with('#'))
            .flat_map(|l| l.split_whitespace())
            .map(|t| t.parse::<u32>());
        let bad = || AtlasError::Config("malformed group table".into());
        let n = nums.next().ok_or_else(bad)?.map_err(|_| bad())? as usize;
        let mut rows = Vec::with_capacity(n);
        for _ in 0..n {
            let mut r = Vec::with_capacity(n);
            for _ in 0..n {
                r.push(nums.next().ok_or_else(bad)?.map_err(|_| bad())?);
            }
            rows.push(r);
        }
        FiniteGroup::from_table(rows)
    }

    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.table[a as usize * self.n + b as usize]
    }

    #[inline]
    pub fn inv(&self, a: u32) -> u32 {
        self.inv[a as usize]
    }

    pub fn conj(&self, x: u32, g: u32) -> u32 {
        self.mul(self.mul(x, g), self.inv(x))
    }

    pub fn pow(&self, a: u32, k: usize) -> u32 {
        let mut r = 0;
        for _ in 0..k {
            r = self.mul(r, a);
        }
        r
    }

    pub fn elem_order(&self, a: u32) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn exponent(&self) -> usize {
        (0..self.n as u32).fold(1, |e, a| e.lcm(&self.elem_order(a)))
    }

    pub fn is_abelian(&self) -> bool {
        let gens = &self.generators;
        gens.iter()
            .all(|&a| gens.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }

    fn check_associative(&self) -> Result<()> {
        let n = self.n as u32;
        let bad = || AtlasError::Invariant("multiplication is not associative".into());
        if self.n <= 128 {
            for a in 0..n {
                for b in 0..n {
                    let ab = self.mul(a, b);
                    for c in 0..n {
                        if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                            return Err(bad());
                        }
                    }
                }
            }
        } else {
            let mut rng = rand::rngs::StdRng::seed_from_u64(0x5eed);
            for _ in 0..20_000 {
                let (a, b, c) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
                if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                    return Err(bad());
                }
            }
        }
        Ok(())
    }

    fn greedy_generators(&self) -> Vec<u32> {
        let mut gens = Vec::new();
        let mut span = self.closure(&gens);
        for a in 0..self.n as u32 {
            if span.len() == self.n {
                break;
            }
            if span.binary_search(&a).is_err() {
                gens.push(a);
                span = self.closure(&gens);
            }
        }
        gens
    }

    /// Subgroup generated by `gens`, sorted.
    pub fn closure(&self, gens: &[u32]) -> Vec<u32> {
        let mut seen = vec![false; self.n];
        seen[0] = true;
        let mut out = vec![0u32];
        let mut head = 0;
        while head < out.len() {
            let x = out[head];
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    out.push(y);
                }
            }
            head += 1;
        }
        out.sort_unstable();
        out
    }

    /// The subgroup on the given elements (which must contain 0 and be closed),
    /// together with the embedding into `self`.
    pub fn subgroup(&self, elems: &[u32]) -> Result<(FiniteGroup, Vec<u32>)> {
        let mut emb: Vec<u32> = elems.to_vec();
        emb.sort_unstable();
        emb.dedup();
        if emb.first() != Some(&0) {
            return Err(AtlasError::Invariant("subgroup must contain the identity".into()));
        }
        let pos: HashMap<u32, u32> = emb.iter().enumerate().map(|(i, &e)| (e, i as u32)).collect();
        let mut rows = Vec::with_capacity(emb.len());
        for &a in &emb {
            let mut r = Vec::with_capacity(emb.len());
            for &b in &emb {
                let c = self.mul(a, b);
                r.push(*pos.get(&c).ok_or_else(|| {
                    AtlasError::Invariant("subset is not closed under multiplication".into())
                })?);
            }
            rows.push(r);
        }
        Ok((FiniteGroup::from_table(rows)?, emb))
    }

    /// Centralizer of `a`, sorted.
    pub fn centralizer(&self, a: u32) -> Vec<u32> {
        (0..self.n as u32)
            .filter(|&x| self.mul(x, a) == self.mul(a, x))
            .collect()
    }

    pub fn classes(&self) -> ConjugacyClasses {
        conjugacy_classes(self)
    }
}

#[derive(Clone, Debug)]
pub struct ConjugacyClasses {
    pub reps: Vec<u32>,
    pub members: Vec<Vec<u32>>,
    pub class_of: Vec<usize>,
    /// For each element `g`, some `x` with `x rep x^-1 = g`.
    pub conjugator: Vec<u32>,
    pub orders: Vec<usize>,
    /// Class of the inverses.
    pub inverse: Vec<usize>,
}

impl ConjugacyClasses {
    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn size(&self, j: usize) -> usize {
        self.members[j].len()
    }
}

/// Classes ordered by (element order, size, smallest member); the identity
/// class comes first and each representative is the smallest member.
pub fn conjugacy_classes(g: &FiniteGroup) -> ConjugacyClasses {
    let n = g.order();
    let mut raw: Vec<Vec<u32>> = Vec::new();
    let mut tag = vec![usize::MAX; n];
    for a in 0..n as u32 {
        if tag[a as usize] != usize::MAX {
            continue;
        }
        let id = raw.len();
        let mut cls = vec![a];
        tag[a as usize] = id;
        let mut head = 0;
        while head < cls.len() {
            let x = cls[head];
            for &s in &g.generators {
                let y = g.conj(s, x);
                if tag[y as usize] == usize::MAX {
                    tag[y as usize] = id;
                    cls.push(y);
                }
            }
            head += 1;
        }
        cls.sort_unstable();
        raw.push(cls);
    }
    raw.sort_by_key(|c| (g.elem_order(c[0]), c.len(), c[0]));
    let mut class_of = vec![0; n];
    for (j, c) in raw.iter().enumerate() {
        for &x in c {
            class_of[x as usize] = j;
        }
    }
    let reps: Vec<u32> = raw.iter().map(|c| c[0]).collect();
    let mut conjugator = vec![u32::MAX; n];
    for &r in &reps {
        conjugator[r as usize] = 0;
        let mut queue = vec![r];
        let mut head = 0;
        while head < queue.len() {
            let x = queue[head];
            for &s in &g.generators {
                let y = g.conj(s, x);
                if conjugator[y as usize] == u32::MAX {
                    conjugator[y as usize] = g.mul(s, conjugator[x as usize]);
                    queue.push(y);
                }
            }
            head += 1;
        }
    }
    let orders = reps.iter().map(|&r| g.elem_order(r)).collect();
    let inverse = reps.iter().map(|&r| class_of[g.inv(r) as usize]).collect();
    ConjugacyClasses {
        reps,
        members: raw,
        class_of,
        conjugator,
        orders,
        inverse,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn s3() -> FiniteGroup {
        FiniteGroup::from_perms(&[vec![1, 2, 0], vec![1, 0, 2]]).unwrap()
    }

    fn brute_classes(g: &FiniteGroup) -> usize {
        let n = g.order() as u32;
        let mut seen = vec![false; n as usize];
        let mut k = 0;
        for a in 0..n {
            if !seen[a as usize] {
                k += 1;
                for x in 0..n {
                    seen[g.conj(x, a) as usize] = true;
                }
            }
        }
        k
    }

    #[test]
    fn class_counts() {
        assert_eq!(FiniteGroup::trivial().classes().len(), 1);
        assert_eq!(s3().classes().len(), 3);
        let v4 = FiniteGroup::direct_product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(2));
        assert_eq!(v4.classes().len(), 4);
        let s4 = FiniteGroup::from_perms(&[vec![1, 2, 3, 0], vec![1, 0, 2, 3]]).unwrap();
        assert_eq!(s4.order(), 24);
        assert_eq!(s4.classes().len(), brute_classes(&s4));
    }

    #[test]
    fn conjugators_conjugate() {
        let s4 = FiniteGroup::from_perms(&[vec![1, 2, 3, 0], vec![1, 0, 2, 3]]).unwrap();
        let c = s4.classes();
        for a in 0..24u32 {
            let j = c.class_of[a as usize];
            assert_eq!(s4.conj(c.conjugator[a as usize], c.reps[j]), a);
        }
        assert_eq!(c.reps[0], 0);
    }

    #[test]
    fn rejects_bad_tables() {
        assert!(FiniteGroup::from_table(vec![vec![0, 1], vec![1, 1]]).is_err());
        assert!(FiniteGroup::from_table(vec![vec![1, 0], vec![0, 1]]).is_err());
    }

    #[test]
    fn subgroup_embedding() {
        let g = s3();
        let rot = g.closure(&[g.generators[0]]);
        let (h, emb) = g.subgroup(&rot).unwrap();
        assert_eq!(h.order(), 3);
        for a in 0..3u32 {
            for b in 0..3u32 {
                assert_eq!(emb[h.mul(a, b) as usize], g.mul(emb[a as usize], emb[b as usize]));
            }
        }
    }
}
