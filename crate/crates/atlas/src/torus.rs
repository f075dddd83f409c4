//! Finite-order points of the complex torus `T = X_* ⊗ C^×`, their Weyl
//! stabilizers and centralizers, and the fixed-point sets `T^w`.
//!
//! A point is stored as `c ∈ (Q/Z)^rank` in the basis of `X_*` dual to the
//! chosen basis of `X*`, so the character `a` takes the value
//! `exp(2πi <a, c>)` and the root `a` is trivial on it iff `<a, c> ∈ Z`.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use num_integer::Integer;
use num_traits::Zero;
use serde::Serialize;

use crate::fingrp::FiniteGroup;
use crate::lattice::{self, IMat, QVec, Q};
use crate::rootdata::{CartanType, Family, RootDatum, WeylGroup};
use crate::subsystem::{self, Subsystem};
use crate::{AtlasError, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TorusPoint {
    pub c: QVec,
}

impl fmt::Debug for TorusPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for TorusPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", lattice::fmt_qvec(&self.c))
    }
}

impl Serialize for TorusPoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl TorusPoint {
    /// Reduce lattice coordinates into `[0, 1)`.
    pub fn new(c: QVec) -> Self {
        TorusPoint {
            c: c.into_iter().map(lattice::frac).collect(),
        }
    }

    pub fn identity(rank: usize) -> Self {
        TorusPoint {
            c: vec![Q::zero(); rank],
        }
    }

    /// From coweight coordinates `v_k = <alpha_k, v>`. For a group that is not
    /// adjoint this fixes the point only up to the center; the representative
    /// `B A^-1 v` is used as given.
    pub fn from_coweights(rd: &RootDatum, v: &[Q]) -> Result<Self> {
        if v.len() != rd.rank {
            return Err(AtlasError::Config(format!(
                "expected {} coweight coordinates, got {}",
                rd.rank,
                v.len()
            )));
        }
        Ok(TorusPoint::new(lattice::qmat_vec(&rd.coweight_to_lattice, v)))
    }

    pub fn is_identity(&self) -> bool {
        lattice::is_zero_vec(&self.c)
    }

    pub fn order(&self) -> i64 {
        lattice::lcm_denoms(&self.c)
    }

    /// `<a, c> mod 1` for the root `a`.
    pub fn root_value(&self, rd: &RootDatum, root: usize) -> Q {
        lattice::frac(lattice::dot_q(&rd.roots[root], &self.c))
    }

    pub fn root_trivial(&self, rd: &RootDatum, root: usize) -> bool {
        lattice::dot_q(&rd.roots[root], &self.c).is_integer()
    }

    pub fn mul(&self, o: &TorusPoint) -> TorusPoint {
        TorusPoint::new(self.c.iter().zip(&o.c).map(|(a, b)| a + b).collect())
    }

    pub fn pow(&self, k: i64) -> TorusPoint {
        TorusPoint::new(self.c.iter().map(|a| a * k).collect())
    }

    pub fn act(&self, w: &WeylGroup, el: usize) -> TorusPoint {
        TorusPoint::new(w.act(el, &self.c))
    }
}

/// Lexicographically least point of the orbit under the given Weyl elements.
pub fn orbit_min(w: &WeylGroup, group: &[usize], t: &TorusPoint) -> TorusPoint {
    group
        .iter()
        .map(|&g| t.act(w, g))
        .min()
        .unwrap_or_else(|| t.clone())
}

/// Elements of the subgroup of `T` generated by `gens`.
pub fn subgroup_elements(gens: &[TorusPoint], rank: usize) -> Vec<TorusPoint> {
    let mut seen: BTreeSet<TorusPoint> = BTreeSet::new();
    let id = TorusPoint::identity(rank);
    seen.insert(id.clone());
    let mut queue = vec![id];
    while let Some(x) = queue.pop() {
        for g in gens {
            let y = x.mul(g);
            if seen.insert(y.clone()) {
                queue.push(y);
            }
        }
    }
    seen.into_iter().collect()
}

#[derive(Clone, Debug)]
pub struct PseudoLevi {
    pub generators: Vec<TorusPoint>,
    /// Roots trivial on every generator, sorted.
    pub root_subset: Vec<usize>,
    pub subsystem: Subsystem,
    /// Simultaneous stabilizer `W_A` in W, sorted.
    pub w_a: Vec<usize>,
    /// Weyl group of the identity component, sorted.
    pub w_m0: Vec<usize>,
    /// Elements of `W_A` preserving the positive roots of `M°`: a section of `π₀`.
    pub pi0: Vec<usize>,
    /// For each section element, the image of each simple root of `M°`.
    pub pi0_simple_perm: Vec<Vec<usize>>,
}

impl PseudoLevi {
    pub fn is_connected(&self) -> bool {
        self.pi0.len() == 1
    }

    pub fn type_label(&self) -> String {
        self.subsystem.type_label()
    }

    /// `π₀` as an abstract group (multiplication of section elements).
    pub fn pi0_group(&self, w: &WeylGroup) -> FiniteGroup {
        group_on(w, &self.pi0)
    }

    /// `W_A` as an abstract group; index `i` is the Weyl element `w_a[i]`.
    pub fn w_a_group(&self, w: &WeylGroup) -> FiniteGroup {
        group_on(w, &self.w_a)
    }
}

/// The abstract group on a sorted list of Weyl elements closed under products.
pub fn group_on(w: &WeylGroup, elems: &[usize]) -> FiniteGroup {
    let mut sorted = elems.to_vec();
    sorted.sort_unstable();
    let rows = sorted
        .iter()
        .map(|&a| {
            sorted
                .iter()
                .map(|&b| sorted.binary_search(&w.mul(a, b)).expect("closed") as u32)
                .collect()
        })
        .collect();
    FiniteGroup::from_table(rows).expect("subgroup of W")
}

/// `M = Z_G(A)` for the subgroup `A` generated by `gens`.
pub fn pseudo_levi(rd: &RootDatum, w: &WeylGroup, gens: &[TorusPoint]) -> Result<PseudoLevi> {
    let root_subset: Vec<usize> = (0..rd.n_roots())
        .filter(|&r| gens.iter().all(|t| t.root_trivial(rd, r)))
        .collect();
    let subsystem = subsystem::classify(rd, &root_subset)?;
    let w_a: Vec<usize> = (0..w.order())
        .filter(|&el| gens.iter().all(|t| t.act(w, el) == *t))
        .collect();
    let refl: Vec<usize> = subsystem
        .positive
        .iter()
        .map(|&r| w.reflection(rd, r))
        .collect();
    let w_m0 = w.closure(&refl);
    let pos: HashSet<usize> = subsystem.positive.iter().copied().collect();
    let pi0: Vec<usize> = w_a
        .iter()
        .copied()
        .filter(|&el| {
            subsystem
                .positive
                .iter()
                .all(|&r| pos.contains(&(w.elems[el].perm[r] as usize)))
        })
        .collect();
    if w_a.len() != w_m0.len() * pi0.len() {
        return Err(AtlasError::Invariant(format!(
            "|W_A| = {} but |W^M°| |π₀| = {} * {}",
            w_a.len(),
            w_m0.len(),
            pi0.len()
        )));
    }
    if w_m0.iter().any(|x| w_a.binary_search(x).is_err()) {
        return Err(AtlasError::Invariant("W^M° is not inside W_A".into()));
    }
    let simple = subsystem.simple();
    let simple_set: HashSet<usize> = simple.iter().copied().collect();
    let mut pi0_simple_perm = Vec::new();
    for &el in &pi0 {
        let img: Vec<usize> = simple
            .iter()
            .map(|&r| w.elems[el].perm[r] as usize)
            .collect();
        if img.iter().any(|r| !simple_set.contains(r)) {
            return Err(AtlasError::Invariant("π₀ section does not preserve simple roots".into()));
        }
        pi0_simple_perm.push(img);
    }
    for &a in &pi0 {
        for &b in &pi0 {
            if pi0.binary_search(&w.mul(a, b)).is_err() {
                return Err(AtlasError::Invariant("π₀ section is not multiplicative".into()));
            }
        }
    }
    Ok(PseudoLevi {
        generators: gens.to_vec(),
        root_subset,
        subsystem,
        w_a,
        w_m0,
        pi0,
        pi0_simple_perm,
    })
}

/// `Z_G(t)` for a single point.
pub fn stabilizer(rd: &RootDatum, w: &WeylGroup, t: &TorusPoint) -> Result<PseudoLevi> {
    pseudo_levi(rd, w, std::slice::from_ref(t))
}

#[derive(Clone, Debug)]
pub struct BernsteinData {
    pub h: PseudoLevi,
    /// `W^s`, the simultaneous stabilizer of the generators (sorted W indices).
    pub ws: Vec<usize>,
}

pub fn bernstein_data(rd: &RootDatum, w: &WeylGroup, c_s: &[TorusPoint]) -> Result<BernsteinData> {
    let h = pseudo_levi(rd, w, c_s)?;
    let ws = h.w_a.clone();
    Ok(BernsteinData { h, ws })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedComponent {
    pub w: usize,
    /// A point of the component (lattice coordinates in `[0,1)`).
    pub base: QVec,
    /// Class in `torsion(X_* / (1 - w) X_*)`, one entry per nonzero invariant.
    pub torsion_label: Vec<i64>,
    pub dim: usize,
    /// Integer directions spanning the component's tangent space.
    pub directions: IMat,
}

/// Smith data of `M - 1` for the Weyl element `el`.
pub struct FixedData {
    pub d: Vec<i64>,
    pub v: IMat,
    pub v_inv: IMat,
}

pub fn fixed_data(w: &WeylGroup, el: usize) -> FixedData {
    let m = &w.elems[el].matrix;
    let r = m.len();
    let a: IMat = (0..r)
        .map(|i| (0..r).map(|j| m[i][j] - i64::from(i == j)).collect())
        .collect();
    let (_, d, v) = lattice::smith(&a);
    let v_inv = lattice::inverse_unimodular(&v);
    FixedData { d, v, v_inv }
}

/// Connected components of `T^w`.
pub fn fixed_components(w: &WeylGroup, el: usize) -> Vec<FixedComponent> {
    let fd = fixed_data(w, el);
    let r = fd.d.len();
    let nonzero: Vec<usize> = (0..r).filter(|&i| fd.d[i] != 0).collect();
    let free: Vec<usize> = (0..r).filter(|&i| fd.d[i] == 0).collect();
    let directions: IMat = free
        .iter()
        .map(|&j| (0..r).map(|i| fd.v[i][j]).collect())
        .collect();
    let mut out = Vec::new();
    let total: i64 = nonzero.iter().map(|&i| fd.d[i].abs()).product();
    for idx in 0..total {
        let mut rest = idx;
        let mut label = Vec::with_capacity(nonzero.len());
        let mut y = vec![Q::zero(); r];
        for &i in &nonzero {
            let di = fd.d[i].abs();
            let k = rest % di;
            rest /= di;
            label.push(k);
            y[i] = Q::new(k, di);
        }
        let base = TorusPoint::new(lattice::mat_qvec(&fd.v, &y)).c;
        out.push(FixedComponent {
            w: el,
            base,
            torsion_label: label,
            dim: free.len(),
            directions: directions.clone(),
        });
    }
    out
}

/// Label of the component of `T^w` through `t`, or `None` if `w t != t`.
pub fn component_label(w: &WeylGroup, el: usize, t: &TorusPoint) -> Option<Vec<i64>> {
    let fd = fixed_data(w, el);
    let y = lattice::mat_qvec(&fd.v_inv, &t.c);
    let mut label = vec![];
    for (i, &di) in fd.d.iter().enumerate() {
        if di == 0 {
            continue;
        }
        let x = y[i] * di;
        if !x.is_integer() {
            return None;
        }
        label.push(x.to_integer().rem_euclid(di.abs()));
    }
    Some(label)
}

/// Orbits of `Z_group(w)` on the components of `T^w`; returns representatives.
pub fn component_orbit_reps(
    w: &WeylGroup,
    group: &[usize],
    el: usize,
    comps: &[FixedComponent],
) -> Vec<usize> {
    let cent: Vec<usize> = group
        .iter()
        .copied()
        .filter(|&z| w.mul(z, el) == w.mul(el, z))
        .collect();
    let mut seen = vec![false; comps.len()];
    let mut reps = vec![];
    for i in 0..comps.len() {
        if seen[i] {
            continue;
        }
        reps.push(i);
        let t = TorusPoint::new(comps[i].base.clone());
        for &z in &cent {
            let img = t.act(w, z);
            if let Some(lab) = component_label(w, el, &img) {
                if let Some(j) = comps.iter().position(|c| c.torsion_label == lab) {
                    seen[j] = true;
                }
            }
        }
    }
    reps
}

#[derive(Clone, Debug, Serialize)]
pub struct ConditionReport {
    pub ok: bool,
    pub per_factor: Vec<(String, bool)>,
}

/// Primes excluded by the condition on the residual characteristic, per factor.
pub fn excluded_primes(ct: &CartanType) -> Vec<u64> {
    match ct.family {
        Family::A => (2..=ct.rank as u64 + 1).filter(|&p| is_prime(p)).collect(),
        Family::B | Family::C | Family::D => vec![2],
        Family::F => vec![2, 3],
        Family::G => vec![2, 3, 5],
        Family::E if ct.rank == 6 => vec![2, 3, 5],
        Family::E => vec![2, 3, 5, 7],
    }
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

pub fn check_condition_char(factors: &[CartanType], p: u64) -> ConditionReport {
    let per_factor: Vec<(String, bool)> = factors
        .iter()
        .map(|f| (f.to_string(), !excluded_primes(f).contains(&p)))
        .collect();
    ConditionReport {
        ok: per_factor.iter().all(|x| x.1),
        per_factor,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ConnectednessHint {
    pub connected: bool,
    pub sc_criterion_applies: bool,
}

/// `connected` is computed; the criterion applies when the derived group is
/// simply connected, `p` passes the condition and the prime-to-`p` part of
/// the generated group is cyclic.
pub fn connectedness_hint(
    rd: &RootDatum,
    w: &WeylGroup,
    c_s: &[TorusPoint],
    p: u64,
) -> Result<ConnectednessHint> {
    let h = pseudo_levi(rd, w, c_s)?;
    let connected = h.is_connected();
    let coroots: IMat = (0..rd.n_pos).map(|i| rd.coroots[i].clone()).collect();
    let sc = lattice::saturation_index(&coroots) == 1
        && lattice::rank(&coroots) == rd.rank;
    let cond = check_condition_char(&rd.factors, p).ok;
    let elems = subgroup_elements(c_s, rd.rank);
    let n = elems.len() as i64;
    let mut cyclic = true;
    for l in 2..=n {
        if n % l == 0 && is_prime(l as u64) && l as u64 != p {
            let killed = elems
                .iter()
                .filter(|t| t.pow(l).is_identity())
                .count() as i64;
            if killed > l {
                cyclic = false;
            }
        }
    }
    let applies = sc && cond && cyclic;
    if applies && !connected {
        return Err(AtlasError::Invariant(
            "simply connected criterion applies but the centralizer is disconnected".into(),
        ));
    }
    Ok(ConnectednessHint {
        connected,
        sc_criterion_applies: applies,
    })
}

/// All points with every coordinate in `(1/d)Z/Z` for some `d <= bound`.
pub fn grid_points(rank: usize, bound: i64, cap: usize) -> Result<Vec<TorusPoint>> {
    let mut set: BTreeSet<TorusPoint> = BTreeSet::new();
    for d in 1..=bound {
        let total = (d as usize).checked_pow(rank as u32).unwrap_or(usize::MAX);
        if total > cap {
            return Err(AtlasError::GridTooLarge(total, cap));
        }
        for idx in 0..total {
            let mut rest = idx;
            let c: QVec = (0..rank)
                .map(|_| {
                    let k = (rest % d as usize) as i64;
                    rest /= d as usize;
                    Q::new(k, d)
                })
                .collect();
            set.insert(TorusPoint::new(c));
        }
        if set.len() > cap {
            return Err(AtlasError::GridTooLarge(set.len(), cap));
        }
    }
    Ok(set.into_iter().collect())
}

/// Orbit representatives (lexicographic minima) of the group on the points.
pub fn orbit_reps(w: &WeylGroup, group: &[usize], pts: &[TorusPoint]) -> Vec<TorusPoint> {
    let mut reps: BTreeSet<TorusPoint> = BTreeSet::new();
    for p in pts {
        reps.insert(orbit_min(w, group, p));
    }
    reps.into_iter().collect()
}

/// Least common multiple of the orders of the given points.
pub fn exponent(pts: &[TorusPoint]) -> i64 {
    pts.iter().fold(1, |e, p| e.lcm(&p.order()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::{build_root_datum, generate_weyl, Isogeny};

    fn setup(l: &str, iso: Isogeny) -> (RootDatum, WeylGroup) {
        let rd = build_root_datum(l, iso).unwrap();
        let w = generate_weyl(&rd).unwrap();
        (rd, w)
    }

    #[test]
    fn identity_point_has_full_stabilizer() {
        let (rd, w) = setup("B2", Isogeny::Sc);
        let pl = stabilizer(&rd, &w, &TorusPoint::identity(2)).unwrap();
        assert_eq!(pl.w_a.len(), 8);
        assert!(pl.is_connected());
        assert_eq!(pl.type_label(), "B2");
    }

    #[test]
    fn pgl2_minus_one() {
        let (rd, w) = setup("A1", Isogeny::Ad);
        let t = TorusPoint::from_coweights(&rd, &[Q::new(1, 2)]).unwrap();
        let pl = stabilizer(&rd, &w, &t).unwrap();
        assert_eq!(pl.w_a.len(), 2);
        assert_eq!(pl.w_m0.len(), 1);
        assert_eq!(pl.pi0.len(), 2);
    }

    #[test]
    fn a2_third_roots() {
        let v = [Q::new(2, 3), Q::new(2, 3)];
        let (rd, w) = setup("A2", Isogeny::Sc);
        let t = TorusPoint::from_coweights(&rd, &v).unwrap();
        assert_eq!(stabilizer(&rd, &w, &t).unwrap().w_a.len(), 1);
        let (rd, w) = setup("A2", Isogeny::Ad);
        let t = TorusPoint::from_coweights(&rd, &v).unwrap();
        let pl = stabilizer(&rd, &w, &t).unwrap();
        assert!(pl.root_subset.is_empty());
        assert_eq!(pl.pi0.len(), 3);
    }

    #[test]
    fn g2_order_two_point() {
        let (rd, w) = setup("G2", Isogeny::Sc);
        let t = TorusPoint::from_coweights(&rd, &[Q::new(1, 2), Q::zero()]).unwrap();
        let pl = stabilizer(&rd, &w, &t).unwrap();
        assert_eq!(pl.type_label(), "A1xA1");
        assert!(pl.is_connected());
        assert_eq!(pl.w_a.len(), 4);
    }

    #[test]
    fn fixed_components_examples() {
        let (_, w) = setup("A1", Isogeny::Ad);
        assert_eq!(fixed_components(&w, 0).len(), 1);
        assert_eq!(fixed_components(&w, 0)[0].dim, 1);
        let comps = fixed_components(&w, 1);
        assert_eq!(comps.len(), 2);
        let mut bases: Vec<QVec> = comps.iter().map(|c| c.base.clone()).collect();
        bases.sort();
        assert_eq!(bases, vec![vec![Q::zero()], vec![Q::new(1, 2)]]);
        let (_, w) = setup("C2", Isogeny::Sc);
        let cox = w.mul(w.simple[0], w.simple[1]);
        let m = &w.elems[cox].matrix;
        let det = lattice::det(&vec![
            vec![1 - m[0][0], -m[0][1]],
            vec![-m[1][0], 1 - m[1][1]],
        ]);
        let comps = fixed_components(&w, cox);
        assert_eq!(comps.len() as i64, det.abs());
        assert!(comps.iter().all(|c| c.dim == 0));
    }

    #[test]
    fn condition_examples() {
        let a2 = crate::rootdata::parse_types("A2").unwrap();
        assert!(check_condition_char(&a2, 5).ok);
        let c2 = crate::rootdata::parse_types("C2").unwrap();
        assert!(!check_condition_char(&c2, 2).ok);
        let g2 = crate::rootdata::parse_types("G2").unwrap();
        assert!(check_condition_char(&g2, 7).ok);
    }
}
