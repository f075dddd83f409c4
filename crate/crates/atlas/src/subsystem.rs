//! Closed root subsystems: simple roots and Cartan type of each component.

use std::collections::BTreeSet;

use crate::rootdata::{CartanType, Family, RootDatum};
use crate::{AtlasError, Result};

#[derive(Clone, Debug)]
pub struct Component {
    pub ctype: CartanType,
    /// Simple roots (global root indices) in Bourbaki order.
    pub simple: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct Subsystem {
    /// All roots, sorted.
    pub roots: Vec<usize>,
    /// Positive roots for the positive system inherited from the ambient one.
    pub positive: Vec<usize>,
    pub components: Vec<Component>,
}

impl Subsystem {
    pub fn rank(&self) -> usize {
        self.components.iter().map(|c| c.ctype.rank).sum()
    }

    pub fn simple(&self) -> Vec<usize> {
        self.components.iter().flat_map(|c| c.simple.clone()).collect()
    }

    pub fn types(&self) -> Vec<CartanType> {
        self.components.iter().map(|c| c.ctype).collect()
    }

    /// Canonical display label such as `A1xA1`, or `T` for the empty system.
    pub fn type_label(&self) -> String {
        type_label(&self.types())
    }

    pub fn contains(&self, r: usize) -> bool {
        self.roots.binary_search(&r).is_ok()
    }
}

pub fn type_label(types: &[CartanType]) -> String {
    if types.is_empty() {
        return "T".to_string();
    }
    let mut t = types.to_vec();
    t.sort();
    t.iter().map(|c| c.to_string()).collect::<Vec<_>>().join("x")
}

/// Classify the subsystem with the given roots (closed under negation).
pub fn classify(rd: &RootDatum, roots: &[usize]) -> Result<Subsystem> {
    let set: BTreeSet<usize> = roots.iter().copied().collect();
    for &r in &set {
        if !set.contains(&rd.neg(r)) {
            return Err(AtlasError::Invariant("subsystem not closed under negation".into()));
        }
    }
    let positive: Vec<usize> = set.iter().copied().filter(|&r| rd.is_positive(r)).collect();
    // simple roots: positive roots that are not a sum of two positive roots
    let mut simple = Vec::new();
    for &r in &positive {
        let mut decomposable = false;
        'outer: for &a in &positive {
            for &b in &positive {
                if a < b {
                    let s: Vec<i64> = rd.roots[a]
                        .iter()
                        .zip(&rd.roots[b])
                        .map(|(x, y)| x + y)
                        .collect();
                    if s == rd.roots[r] {
                        decomposable = true;
                        break 'outer;
                    }
                }
            }
        }
        if !decomposable {
            simple.push(r);
        }
    }
    let c = |i: usize, j: usize| rd.pairing(simple[i], simple[j]);
    let k = simple.len();
    // connected components of the Dynkin graph
    let mut comp = vec![usize::MAX; k];
    let mut comps: Vec<Vec<usize>> = Vec::new();
    for s in 0..k {
        if comp[s] != usize::MAX {
            continue;
        }
        let id = comps.len();
        let mut stack = vec![s];
        comp[s] = id;
        let mut members = vec![];
        while let Some(x) = stack.pop() {
            members.push(x);
            for y in 0..k {
                if comp[y] == usize::MAX && c(x, y) != 0 {
                    comp[y] = id;
                    stack.push(y);
                }
            }
        }
        members.sort_unstable();
        comps.push(members);
    }
    let mut components = Vec::new();
    for m in comps {
        let local: Vec<usize> = m.iter().map(|&i| simple[i]).collect();
        components.push(classify_component(rd, &local)?);
    }
    components.sort_by_key(|c| c.simple.iter().copied().min());
    Ok(Subsystem {
        roots: set.into_iter().collect(),
        positive,
        components,
    })
}

fn neighbours(rd: &RootDatum, s: &[usize], x: usize) -> Vec<usize> {
    s.iter()
        .copied()
        .filter(|&y| y != x && rd.pairing(x, y) != 0)
        .collect()
}

/// Walk a path starting at `start`, avoiding `avoid`.
fn walk(rd: &RootDatum, s: &[usize], start: usize, avoid: &[usize]) -> Vec<usize> {
    let mut path = vec![start];
    let mut prev = usize::MAX;
    let mut cur = start;
    loop {
        let next: Vec<usize> = neighbours(rd, s, cur)
            .into_iter()
            .filter(|&y| y != prev && !avoid.contains(&y) && !path.contains(&y))
            .collect();
        match next.first() {
            Some(&n) if next.len() == 1 => {
                prev = cur;
                cur = n;
                path.push(n);
            }
            _ => return path,
        }
    }
}

fn support(rd: &RootDatum, r: usize) -> Vec<usize> {
    rd.eps_coords(r)
        .unwrap_or_default()
        .iter()
        .enumerate()
        .filter(|(_, &x)| x != 0)
        .map(|(i, _)| i)
        .collect()
}

fn classify_component(rd: &RootDatum, s: &[usize]) -> Result<Component> {
    let n = s.len();
    let prod = |x: usize, y: usize| rd.pairing(x, y) * rd.pairing(y, x);
    let mut triple = None;
    let mut double = None;
    for &x in s {
        for &y in s {
            if x < y {
                match prod(x, y) {
                    3 => triple = Some((x, y)),
                    2 => double = Some((x, y)),
                    _ => {}
                }
            }
        }
    }
    let (family, order) = if let Some((x, y)) = triple {
        // alpha_1 is short: <long, short^vee> = -3
        if rd.pairing(y, x) == -3 {
            (Family::G, vec![x, y])
        } else {
            (Family::G, vec![y, x])
        }
    } else if let Some((x, y)) = double {
        let path = if n == 2 {
            let ambient = rd.factors[rd.root_factor[x]].family;
            // make the last node short for B, long for C
            let x_short = rd.pairing(y, x) == -2;
            let want_short_last = ambient != Family::C;
            if x_short == want_short_last {
                vec![y, x]
            } else {
                vec![x, y]
            }
        } else {
            let far = s
                .iter()
                .copied()
                .find(|&e| e != x && e != y && neighbours(rd, s, e).len() == 1)
                .ok_or_else(|| AtlasError::Invariant("malformed double bond".into()))?;
            walk(rd, s, far, &[])
        };
        let last = path[n - 1];
        let prev = path[n - 2];
        let last_short = rd.pairing(prev, last) == -2;
        (if last_short { Family::B } else { Family::C }, path)
    } else if let Some(&b) = s.iter().find(|&&x| neighbours(rd, s, x).len() == 3) {
        let nb = neighbours(rd, s, b);
        let leaves: Vec<usize> = nb
            .iter()
            .copied()
            .filter(|&y| neighbours(rd, s, y).len() == 1)
            .collect();
        let mut pair = None;
        for i in 0..leaves.len() {
            for j in i + 1..leaves.len() {
                if support(rd, leaves[i]) == support(rd, leaves[j]) {
                    pair = Some((leaves[i], leaves[j]));
                }
            }
        }
        let (l1, l2) = pair.ok_or_else(|| {
            AtlasError::UnsupportedType("D4 subsystem with triality ambiguity".into())
        })?;
        let arm = nb.iter().copied().find(|&y| y != l1 && y != l2).unwrap();
        let mut path = walk(rd, s, arm, &[b]);
        path.reverse();
        path.push(b);
        path.push(l1.min(l2));
        path.push(l1.max(l2));
        (Family::D, path)
    } else {
        let ends: Vec<usize> = s
            .iter()
            .copied()
            .filter(|&x| neighbours(rd, s, x).len() <= 1)
            .collect();
        let start = *ends.iter().min().unwrap();
        (Family::A, walk(rd, s, start, &[]))
    };
    let ctype = CartanType::new(family, n);
    let expected = ctype.cartan()?;
    for i in 0..n {
        for j in 0..n {
            if rd.pairing(order[i], order[j]) != expected[i][j] {
                return Err(AtlasError::Invariant(format!(
                    "subsystem component does not match {ctype}"
                )));
            }
        }
    }
    Ok(Component {
        ctype,
        simple: order,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::{build_root_datum, Isogeny};

    fn all(rd: &RootDatum) -> Vec<usize> {
        (0..rd.n_roots()).collect()
    }

    #[test]
    fn full_systems_classify_as_themselves() {
        for l in ["A3", "B3", "C3", "D4", "D5", "G2", "C2", "B2", "A1xG2"] {
            let rd = build_root_datum(l, Isogeny::Sc).unwrap();
            let s = classify(&rd, &all(&rd)).unwrap();
            let mut expected = crate::rootdata::parse_types(l).unwrap();
            expected.sort();
            let mut got = s.types();
            got.sort();
            assert_eq!(got, expected, "{l}");
            assert_eq!(s.simple().len(), rd.rank);
        }
    }

    #[test]
    fn long_roots_of_g2_form_a2() {
        let rd = build_root_datum("G2", Isogeny::Sc).unwrap();
        // a short coroot pairs to 3 with some root, a long one never does
        let long: Vec<usize> = (0..rd.n_roots())
            .filter(|&r| {
                let s = (0..rd.n_roots()).map(|j| rd.pairing(j, r).abs()).max().unwrap();
                s == 2
            })
            .collect();
        let s = classify(&rd, &long).unwrap();
        assert_eq!(s.type_label(), "A2");
    }

    #[test]
    fn long_roots_of_c2_are_a1xa1() {
        let rd = build_root_datum("C2", Isogeny::Sc).unwrap();
        let long: Vec<usize> = (0..rd.n_roots())
            .filter(|&r| rd.eps_coords(r).unwrap().iter().any(|x| x.abs() == 2))
            .collect();
        assert_eq!(classify(&rd, &long).unwrap().type_label(), "A1xA1");
    }

    #[test]
    fn long_roots_of_b4_form_d4() {
        let rd = build_root_datum("B4", Isogeny::Sc).unwrap();
        let long: Vec<usize> = (0..rd.n_roots())
            .filter(|&r| rd.eps_coords(r).unwrap().iter().filter(|&&x| x != 0).count() == 2)
            .collect();
        let s = classify(&rd, &long).unwrap();
        assert_eq!(s.type_label(), "D4");
    }
}
