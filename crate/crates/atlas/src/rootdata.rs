//! Based root data of split reductive complex groups and their Weyl groups.
//!
//! `X*` is identified with `Z^rank` through a chosen basis `b_i` of the
//! character lattice, written in fundamental-weight coordinates. `X_*` is the
//! dual `Z^rank` and the pairing is the dot product.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use num_traits::Zero;
use serde::Serialize;

use crate::lattice::{self, IMat, QVec, Q};
use crate::{AtlasError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CartanType {
    pub family: Family,
    pub rank: usize,
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{}", self.family, self.rank)
    }
}

impl CartanType {
    pub fn new(family: Family, rank: usize) -> Self {
        CartanType { family, rank }
    }

    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || AtlasError::UnsupportedType(s.to_string());
        let mut chars = s.chars();
        let fam = match chars.next().ok_or_else(bad)?.to_ascii_uppercase() {
            'A' => Family::A,
            'B' => Family::B,
            'C' => Family::C,
            'D' => Family::D,
            'E' => Family::E,
            'F' => Family::F,
            'G' => Family::G,
            _ => return Err(bad()),
        };
        let rank: usize = chars.as_str().parse().map_err(|_| bad())?;
        let ok = match fam {
            Family::A => rank >= 1,
            Family::B | Family::C => rank >= 2,
            Family::D => rank >= 4,
            Family::E => (6..=8).contains(&rank),
            Family::F => rank == 4,
            Family::G => rank == 2,
        };
        if !ok {
            return Err(bad());
        }
        Ok(CartanType::new(fam, rank))
    }

    /// Number of roots.
    pub fn n_roots(&self) -> usize {
        let n = self.rank;
        match self.family {
            Family::A => n * (n + 1),
            Family::B | Family::C => 2 * n * n,
            Family::D => 2 * n * (n - 1),
            Family::G => 12,
            Family::F => 48,
            Family::E => match n {
                6 => 72,
                7 => 126,
                _ => 240,
            },
        }
    }

    /// Cartan matrix `A[i][j] = <alpha_i, alpha_j^vee>` in Bourbaki numbering.
    pub fn cartan(&self) -> Result<IMat> {
        let n = self.rank;
        let mut a = lattice::identity(n);
        for row in a.iter_mut() {
            for x in row.iter_mut() {
                *x *= 2;
            }
        }
        match self.family {
            Family::A | Family::B | Family::C => {
                for i in 0..n - 1 {
                    a[i][i + 1] = -1;
                    a[i + 1][i] = -1;
                }
                if self.family == Family::B {
                    a[n - 2][n - 1] = -2;
                }
                if self.family == Family::C {
                    a[n - 1][n - 2] = -2;
                }
            }
            Family::D => {
                for i in 0..n - 2 {
                    a[i][i + 1] = -1;
                    a[i + 1][i] = -1;
                }
                a[n - 3][n - 1] = -1;
                a[n - 1][n - 3] = -1;
            }
            Family::G => {
                a[0][1] = -1;
                a[1][0] = -3;
            }
            Family::E | Family::F => {
                return Err(AtlasError::UnsupportedType(format!(
                    "{self}: root data are built only for A-D and G2"
                )))
            }
        }
        Ok(a)
    }
}

pub fn parse_types(label: &str) -> Result<Vec<CartanType>> {
    let norm = label.replace(['×', '*', '+'], "x");
    let parts: Vec<&str> = norm
        .split(['x', 'X'])
        .filter(|p| !p.trim().is_empty())
        .collect();
    if parts.is_empty() {
        return Err(AtlasError::UnsupportedType(label.to_string()));
    }
    parts.iter().map(|p| CartanType::parse(p)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Isogeny {
    Sc,
    Ad,
    /// Rows of a lattice basis in fundamental-weight coordinates.
    Explicit(IMat),
}

impl Isogeny {
    pub fn tag(&self) -> &'static str {
        match self {
            Isogeny::Sc => "sc",
            Isogeny::Ad => "ad",
            Isogeny::Explicit(_) => "explicit",
        }
    }
}

#[derive(Clone, Debug)]
pub struct RootDatum {
    pub rank: usize,
    pub factors: Vec<CartanType>,
    /// Offset of each factor's simple roots in the global numbering.
    pub factor_offsets: Vec<usize>,
    pub isogeny: Isogeny,
    /// Rows: basis of X* in fundamental-weight coordinates.
    pub basis: IMat,
    pub cartan: IMat,
    /// Roots in X* coordinates; positives first, `roots[i + n_pos] = -roots[i]`.
    pub roots: Vec<Vec<i64>>,
    /// Coroots in X_* coordinates, aligned with `roots`.
    pub coroots: Vec<Vec<i64>>,
    /// Roots in simple-root coordinates.
    pub root_coords: Vec<Vec<i64>>,
    pub n_pos: usize,
    pub root_factor: Vec<usize>,
    /// Converts fundamental-coweight coordinates `<alpha_i, v>` into X_* coordinates.
    pub coweight_to_lattice: Vec<QVec>,
    root_index: HashMap<Vec<i64>, usize>,
}

impl RootDatum {
    pub fn n_roots(&self) -> usize {
        self.roots.len()
    }

    pub fn neg(&self, i: usize) -> usize {
        if i < self.n_pos {
            i + self.n_pos
        } else {
            i - self.n_pos
        }
    }

    pub fn is_positive(&self, i: usize) -> bool {
        i < self.n_pos
    }

    pub fn root_index(&self, v: &[i64]) -> Option<usize> {
        self.root_index.get(v).copied()
    }

    pub fn pairing(&self, root: usize, coroot: usize) -> i64 {
        lattice::dot(&self.roots[root], &self.coroots[coroot])
    }

    pub fn label(&self) -> String {
        let t: Vec<String> = self.factors.iter().map(|f| f.to_string()).collect();
        format!("{} {}", t.join("x"), self.isogeny.tag())
    }

    /// Image of root `j` under the reflection in root `i`.
    pub fn reflect_root(&self, i: usize, j: usize) -> usize {
        let c = self.pairing(j, i);
        let v: Vec<i64> = self.roots[j]
            .iter()
            .zip(&self.roots[i])
            .map(|(a, b)| a - c * b)
            .collect();
        self.root_index(&v).expect("root system is closed under reflections")
    }

    /// Reflection matrix on X_* (column vectors).
    pub fn reflection_matrix(&self, i: usize) -> IMat {
        let r = self.rank;
        let a = &self.roots[i];
        let av = &self.coroots[i];
        (0..r)
            .map(|k| {
                (0..r)
                    .map(|l| i64::from(k == l) - av[k] * a[l])
                    .collect()
            })
            .collect()
    }

    /// Determinant of the basis: index of the lattice in the weight lattice.
    pub fn index_in_weight_lattice(&self) -> i64 {
        lattice::det(&self.basis).abs()
    }

    pub fn is_simply_connected(&self) -> bool {
        self.index_in_weight_lattice() == 1
    }

    pub fn is_adjoint(&self) -> bool {
        self.index_in_weight_lattice() == lattice::det(&self.cartan).abs()
    }

    /// Factor of the global simple root `i`.
    pub fn factor_of_simple(&self, i: usize) -> usize {
        let mut f = 0;
        for (k, &off) in self.factor_offsets.iter().enumerate() {
            if off <= i {
                f = k;
            }
        }
        f
    }

    /// Coordinates of a root in the orthonormal model of its (classical)
    /// factor: `e_i - e_{i+1}`, and `e_n`, `2e_n` or `e_{n-1}+e_n` at the end.
    pub fn eps_coords(&self, root: usize) -> Option<Vec<i64>> {
        let f = self.root_factor[root];
        let ct = self.factors[f];
        let off = self.factor_offsets[f];
        let n = ct.rank;
        let c = &self.root_coords[root][off..off + n];
        let dim = if ct.family == Family::A { n + 1 } else { n };
        let mut e = vec![0i64; dim];
        for (i, &ci) in c.iter().enumerate() {
            let simple: Vec<(usize, i64)> = match ct.family {
                Family::A => vec![(i, 1), (i + 1, -1)],
                Family::B | Family::C | Family::D if i + 1 < n => vec![(i, 1), (i + 1, -1)],
                Family::B => vec![(n - 1, 1)],
                Family::C => vec![(n - 1, 2)],
                Family::D => vec![(n - 2, 1), (n - 1, 1)],
                _ => return None,
            };
            for (k, x) in simple {
                e[k] += ci * x;
            }
        }
        Some(e)
    }
}

/// Build the root datum of type `label` (e.g. `"C2"`, `"A1xG2"`).
/// For `Isogeny::Explicit` the rows are a lattice basis between the root and
/// weight lattices, in fundamental-weight coordinates.
pub fn build_root_datum(label: &str, isogeny: Isogeny) -> Result<RootDatum> {
    let factors = parse_types(label)?;
    let rank: usize = factors.iter().map(|f| f.rank).sum();
    if rank > 8 {
        return Err(AtlasError::UnsupportedType(format!(
            "{label}: total rank {rank} exceeds 8"
        )));
    }
    let mut cartan = vec![vec![0i64; rank]; rank];
    let mut offsets = Vec::new();
    let mut off = 0;
    for f in &factors {
        let c = f.cartan()?;
        for i in 0..f.rank {
            for j in 0..f.rank {
                cartan[off + i][off + j] = c[i][j];
            }
        }
        offsets.push(off);
        off += f.rank;
    }
    let basis = match &isogeny {
        Isogeny::Sc => lattice::identity(rank),
        Isogeny::Ad => cartan.clone(),
        Isogeny::Explicit(rows) => {
            if rows.iter().any(|r| r.len() != rank) {
                return Err(AtlasError::Lattice(format!(
                    "lattice rows must have length {rank}"
                )));
            }
            let h = lattice::hermite_rows(rows);
            if h.len() != rank {
                return Err(AtlasError::Lattice("lattice rows are not of full rank".into()));
            }
            h
        }
    };
    let binv = lattice::inverse_q(&basis).expect("full rank basis");

    // roots in simple-root coordinates, with coroots in simple-coroot coordinates
    let mut pos: Vec<(Vec<i64>, Vec<i64>)> = Vec::new();
    let mut seen: HashMap<Vec<i64>, usize> = HashMap::new();
    let mut queue = VecDeque::new();
    for i in 0..rank {
        let e: Vec<i64> = (0..rank).map(|j| i64::from(i == j)).collect();
        seen.insert(e.clone(), pos.len());
        pos.push((e.clone(), e.clone()));
        queue.push_back(pos.len() - 1);
    }
    while let Some(k) = queue.pop_front() {
        let (rc, cc) = pos[k].clone();
        for i in 0..rank {
            // <beta, alpha_i^vee> and <alpha_i, beta^vee>
            let p: i64 = (0..rank).map(|j| rc[j] * cartan[j][i]).sum();
            let pv: i64 = (0..rank).map(|j| cc[j] * cartan[i][j]).sum();
            let mut nr = rc.clone();
            nr[i] -= p;
            let mut nc = cc.clone();
            nc[i] -= pv;
            if nr.iter().all(|&x| x >= 0) && nr.iter().any(|&x| x > 0) && !seen.contains_key(&nr)
            {
                seen.insert(nr.clone(), pos.len());
                pos.push((nr, nc));
                queue.push_back(pos.len() - 1);
            }
        }
    }
    pos.sort_by(|a, b| {
        let ha: i64 = a.0.iter().sum();
        let hb: i64 = b.0.iter().sum();
        ha.cmp(&hb).then_with(|| b.0.cmp(&a.0))
    });
    let expected: usize = factors.iter().map(|f| f.n_roots()).sum::<usize>() / 2;
    if pos.len() != expected {
        return Err(AtlasError::Invariant(format!(
            "generated {} positive roots, expected {expected}",
            pos.len()
        )));
    }
    let n_pos = pos.len();
    let mut root_coords = Vec::with_capacity(2 * n_pos);
    let mut coroot_coords = Vec::with_capacity(2 * n_pos);
    for (r, c) in &pos {
        root_coords.push(r.clone());
        coroot_coords.push(c.clone());
    }
    for (r, c) in &pos {
        root_coords.push(r.iter().map(|x| -x).collect());
        coroot_coords.push(c.iter().map(|x| -x).collect());
    }
    let mut roots = Vec::new();
    let mut coroots = Vec::new();
    for (rc, cc) in root_coords.iter().zip(&coroot_coords) {
        // fundamental-weight coordinates of the root, then lattice coordinates
        let w: Vec<i64> = (0..rank)
            .map(|i| (0..rank).map(|j| rc[j] * cartan[j][i]).sum())
            .collect();
        let mut a = Vec::with_capacity(rank);
        for j in 0..rank {
            let x: Q = (0..rank).fold(Q::zero(), |acc, i| acc + binv[i][j] * w[i]);
            if !x.is_integer() {
                return Err(AtlasError::Lattice(
                    "lattice does not contain the root lattice".into(),
                ));
            }
            a.push(x.to_integer());
        }
        roots.push(a);
        coroots.push(lattice::mat_vec(&basis, cc));
    }
    let root_factor = root_coords
        .iter()
        .map(|rc| {
            let i = rc.iter().position(|&x| x != 0).unwrap();
            let mut f = 0;
            for (k, &o) in offsets.iter().enumerate() {
                if o <= i {
                    f = k;
                }
            }
            f
        })
        .collect();
    let root_index = roots
        .iter()
        .enumerate()
        .map(|(i, r)| (r.clone(), i))
        .collect();
    let ainv = lattice::inverse_q(&cartan).expect("Cartan matrix is invertible");
    let bq: Vec<QVec> = basis
        .iter()
        .map(|r| r.iter().map(|&x| lattice::qi(x)).collect())
        .collect();
    let coweight_to_lattice = lattice::qmat_mul(&bq, &ainv);
    let rd = RootDatum {
        rank,
        factors,
        factor_offsets: offsets,
        isogeny,
        basis,
        cartan,
        roots,
        coroots,
        root_coords,
        n_pos,
        root_factor,
        coweight_to_lattice,
        root_index,
    };
    for i in 0..rd.n_roots() {
        if rd.pairing(i, i) != 2 {
            return Err(AtlasError::Invariant("<a, a^vee> != 2".into()));
        }
    }
    Ok(rd)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeylElement {
    /// Action on X_* (column vectors); the action on X* is the inverse transpose.
    pub matrix: IMat,
    /// Image of each root index.
    pub perm: Vec<u16>,
    pub length: u32,
}

#[derive(Clone, Debug)]
pub struct WeylGroup {
    pub elems: Vec<WeylElement>,
    /// Indices of the simple reflections.
    pub simple: Vec<usize>,
    /// Length of a shortest word, from the breadth-first generation.
    pub word_length: Vec<u32>,
    index: HashMap<Vec<u16>, usize>,
    n_pos: usize,
}

pub const DEFAULT_MAX_W: usize = 1_000_000;

pub fn max_weyl_order() -> usize {
    std::env::var("ATLAS_MAX_W")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_W)
}

fn length_of(perm: &[u16], n_pos: usize) -> u32 {
    perm[..n_pos].iter().filter(|&&p| p as usize >= n_pos).count() as u32
}

/// Enumerate W by breadth-first closure of the simple reflections.
pub fn generate_weyl(rd: &RootDatum) -> Result<WeylGroup> {
    let cap = max_weyl_order();
    let nr = rd.n_roots();
    let r = rd.rank;
    let id_perm: Vec<u16> = (0..nr as u16).collect();
    let mut elems = vec![WeylElement {
        matrix: lattice::identity(r),
        perm: id_perm.clone(),
        length: 0,
    }];
    let mut word_length = vec![0u32];
    let mut index = HashMap::new();
    index.insert(id_perm, 0usize);
    let gens: Vec<(Vec<u16>, IMat)> = (0..r)
        .map(|i| {
            let p = (0..nr).map(|j| rd.reflect_root(i, j) as u16).collect();
            (p, rd.reflection_matrix(i))
        })
        .collect();
    let mut simple = vec![0; r];
    let mut head = 0;
    while head < elems.len() {
        for (gi, (gp, gm)) in gens.iter().enumerate() {
            let w = &elems[head];
            let perm: Vec<u16> = w.perm.iter().map(|&x| gp[x as usize]).collect();
            if let Some(&k) = index.get(&perm) {
                if head == 0 {
                    simple[gi] = k;
                }
                continue;
            }
            if elems.len() >= cap {
                return Err(AtlasError::WeylTooLarge(cap));
            }
            let matrix = lattice::mat_mul(gm, &w.matrix);
            let length = length_of(&perm, rd.n_pos);
            let wl = word_length[head] + 1;
            index.insert(perm.clone(), elems.len());
            if head == 0 {
                simple[gi] = elems.len();
            }
            elems.push(WeylElement {
                matrix,
                perm,
                length,
            });
            word_length.push(wl);
        }
        head += 1;
    }
    Ok(WeylGroup {
        elems,
        simple,
        word_length,
        index,
        n_pos: rd.n_pos,
    })
}

impl WeylGroup {
    pub fn order(&self) -> usize {
        self.elems.len()
    }

    pub fn index_of_perm(&self, perm: &[u16]) -> Option<usize> {
        self.index.get(perm).copied()
    }

    /// Index of `a * b` (apply `b` first).
    pub fn mul(&self, a: usize, b: usize) -> usize {
        let pa = &self.elems[a].perm;
        let perm: Vec<u16> = self.elems[b].perm.iter().map(|&x| pa[x as usize]).collect();
        self.index[&perm]
    }

    pub fn inv(&self, a: usize) -> usize {
        let p = &self.elems[a].perm;
        let mut q = vec![0u16; p.len()];
        for (i, &x) in p.iter().enumerate() {
            q[x as usize] = i as u16;
        }
        self.index[&q]
    }

    /// Index of the reflection in root `i`.
    pub fn reflection(&self, rd: &RootDatum, i: usize) -> usize {
        let perm: Vec<u16> = (0..rd.n_roots()).map(|j| rd.reflect_root(i, j) as u16).collect();
        self.index[&perm]
    }

    pub fn act(&self, w: usize, v: &[Q]) -> QVec {
        lattice::mat_qvec(&self.elems[w].matrix, v)
    }

    pub fn longest(&self) -> usize {
        (0..self.order())
            .max_by_key(|&i| self.elems[i].length)
            .unwrap_or(0)
    }

    pub fn n_pos(&self) -> usize {
        self.n_pos
    }

    /// Subgroup generated by `gens`, as a sorted list of indices.
    pub fn closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order()];
        seen[0] = true;
        let mut out = vec![0usize];
        let mut head = 0;
        while head < out.len() {
            let x = out[head];
            for &g in gens {
                let y = self.mul(g, x);
                if !seen[y] {
                    seen[y] = true;
                    out.push(y);
                }
            }
            head += 1;
        }
        out.sort_unstable();
        out
    }
}

/// Coefficients of `sum_w q^{l(w)}`, lowest degree first.
pub fn poincare_polynomial(w: &WeylGroup) -> Vec<u64> {
    let top = w.elems.iter().map(|e| e.length).max().unwrap_or(0) as usize;
    let mut p = vec![0u64; top + 1];
    for e in &w.elems {
        p[e.length as usize] += 1;
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;

    fn order(label: &str, iso: Isogeny) -> usize {
        let rd = build_root_datum(label, iso).unwrap();
        generate_weyl(&rd).unwrap().order()
    }

    #[test]
    fn a1_ad_rank_one() {
        let rd = build_root_datum("A1", Isogeny::Ad).unwrap();
        assert_eq!(rd.rank, 1);
        assert_eq!(rd.roots, vec![vec![1], vec![-1]]);
        assert_eq!(rd.coroots, vec![vec![2], vec![-2]]);
        assert_eq!(order("A1", Isogeny::Ad), 2);
    }

    #[test]
    fn orders_by_closure() {
        assert_eq!(order("A2", Isogeny::Sc), 6);
        assert_eq!(order("C2", Isogeny::Ad), 8);
        assert_eq!(order("A3", Isogeny::Sc), 24);
        assert_eq!(order("G2", Isogeny::Sc), 12);
        assert_eq!(order("B3", Isogeny::Sc), 48);
        assert_eq!(order("D4", Isogeny::Ad), 192);
        assert_eq!(order("A1xA1", Isogeny::Sc), 4);
    }

    #[test]
    fn root_counts() {
        for (l, n) in [("A2", 6), ("G2", 12), ("B3", 18), ("C3", 18), ("D4", 24)] {
            assert_eq!(build_root_datum(l, Isogeny::Sc).unwrap().n_roots(), n);
        }
    }

    #[test]
    fn poincare_small() {
        let rd = build_root_datum("A1", Isogeny::Sc).unwrap();
        assert_eq!(poincare_polynomial(&generate_weyl(&rd).unwrap()), vec![1, 1]);
        let rd = build_root_datum("C2", Isogeny::Sc).unwrap();
        let p = poincare_polynomial(&generate_weyl(&rd).unwrap());
        assert_eq!(p, vec![1, 2, 2, 2, 1]);
    }

    #[test]
    fn explicit_lattice_checks() {
        // SL2 and PGL2 as explicit lattices
        let sl = build_root_datum("A1", Isogeny::Explicit(vec![vec![1]])).unwrap();
        assert!(sl.is_simply_connected());
        let pgl = build_root_datum("A1", Isogeny::Explicit(vec![vec![2]])).unwrap();
        assert!(pgl.is_adjoint());
        assert!(build_root_datum("A1", Isogeny::Explicit(vec![vec![4]])).is_err());
        // SO4-type lattice in A1xA1
        let so4 = build_root_datum("A1xA1", Isogeny::Explicit(vec![vec![1, 1], vec![0, 2]]))
            .unwrap();
        assert_eq!(so4.index_in_weight_lattice(), 2);
    }

    #[test]
    fn unsupported_types() {
        assert!(build_root_datum("E6", Isogeny::Sc).is_err());
        assert!(build_root_datum("Q3", Isogeny::Sc).is_err());
        assert!(build_root_datum("A5xA4", Isogeny::Sc).is_err());
    }
}
