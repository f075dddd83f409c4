//! Springer correspondence for connected groups with classical and G2
//! factors, normalized so that the trivial class goes to the trivial
//! representation and the regular class to the sign representation, and
//! its extension to disconnected pseudo-Levi subgroups.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::fingrp::conjugacy_classes;
use crate::rootdata::{CartanType, Family, RootDatum, WeylGroup};
use crate::subsystem::Subsystem;
use crate::torus::{self, PseudoLevi, TorusPoint};
use crate::unipotent::{
    self, factor_ax, factor_center_order, partitions, FactorAx, FactorClass, FactorRho, G2Class,
    UnipotentClass,
};
use crate::{AtlasError, Result};

pub type Bipartition = (Vec<usize>, Vec<usize>);

fn transpose(p: &[usize]) -> Vec<usize> {
    let m = p.first().copied().unwrap_or(0);
    (1..=m).map(|i| p.iter().filter(|&&x| x >= i).count()).collect()
}

fn fmt_part(p: &[usize]) -> String {
    let s: Vec<String> = p.iter().map(|x| x.to_string()).collect();
    format!("[{}]", s.join(","))
}

pub fn bipartitions(n: usize) -> Vec<Bipartition> {
    let mut out = vec![];
    for k in (0..=n).rev() {
        for a in partitions(k) {
            for b in partitions(n - k) {
                out.push((a.clone(), b));
            }
        }
    }
    out
}

/// Labels of `Irr(W)` for a simple type.
pub fn irr_w_labels(ct: CartanType) -> Result<Vec<String>> {
    let n = ct.rank;
    Ok(match ct.family {
        Family::A => partitions(n + 1).iter().map(|p| fmt_part(p)).collect(),
        Family::B | Family::C => bipartitions(n).iter().map(|(a, b)| bip_label(a, b)).collect(),
        Family::D => {
            let mut out = BTreeSet::new();
            for (a, b) in bipartitions(n) {
                if a == b {
                    out.insert(format!("{}+", d_label(&a, &b)));
                    out.insert(format!("{}-", d_label(&a, &b)));
                } else {
                    out.insert(d_label(&a, &b));
                }
            }
            out.into_iter().collect()
        }
        Family::G => ["phi1,0", "phi1,6", "phi'1,3", "phi''1,3", "phi2,1", "phi2,2"]
            .iter()
            .map(|s| s.to_string())
            .collect(),
        _ => return Err(AtlasError::UnsupportedType(format!("Springer table of {ct}"))),
    })
}

fn bip_label(a: &[usize], b: &[usize]) -> String {
    format!("({};{})", fmt_part(a), fmt_part(b))
}

fn d_label(a: &[usize], b: &[usize]) -> String {
    let (x, y) = if a >= b { (a, b) } else { (b, a) };
    format!("{{{};{}}}", fmt_part(x), fmt_part(y))
}

/// Rows of the symbol of a classical partition twisted by the parts in
/// `flip`. The block of values `lambda*_i` belonging to a run of flipped
/// parts is spread outwards (first value down by one, last value up by one); a block
/// of length one changes parity while keeping its entry. Returns `None` if
/// the twisted values collide.
fn symbol(family: Family, parts: &[usize], flip: &[usize]) -> Option<(Vec<usize>, Vec<usize>)> {
    let mut asc: Vec<usize> = parts.iter().rev().copied().collect();
    let want_odd = family != Family::D;
    if (asc.len() % 2 == 1) != want_odd {
        asc.insert(0, 0);
    }
    // one extra pair of zero parts leaves room for a block to move down
    asc.insert(0, 0);
    asc.insert(0, 0);
    let mut vals: Vec<i64> = asc.iter().enumerate().map(|(i, &p)| (p + i) as i64).collect();
    // flipped parts that are adjacent among the twistable parts move as one block
    let parity = if family == Family::C { 0 } else { 1 };
    let mut twistable: Vec<usize> = parts.iter().copied().filter(|p| p % 2 == parity).collect();
    twistable.sort_unstable();
    twistable.dedup();
    let mut runs: Vec<Vec<usize>> = vec![];
    for (j, k) in twistable.iter().enumerate() {
        if !flip.contains(k) {
            continue;
        }
        match runs.last_mut() {
            Some(r) if j > 0 && flip.contains(&twistable[j - 1]) => r.push(*k),
            _ => runs.push(vec![*k]),
        }
    }
    for run in runs {
        let pos: Vec<usize> = (0..asc.len()).filter(|&i| asc[i] > 0 && run.contains(&asc[i])).collect();
        match pos.len() {
            0 => {}
            1 => vals[pos[0]] ^= 1,
            _ => {
                vals[pos[0]] -= 1;
                vals[*pos.last().unwrap()] += 1;
            }
        }
    }
    let mut sorted = vals.clone();
    sorted.sort_unstable();
    if sorted[0] < 0 || sorted.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    let mut top = vec![];
    let mut bottom = vec![];
    for v in sorted {
        let up = match family {
            Family::B => v % 2 == 1,
            _ => v % 2 == 0,
        };
        if up {
            top.push((v / 2) as usize);
        } else {
            bottom.push((v / 2) as usize);
        }
    }
    if top.windows(2).any(|w| w[0] == w[1]) || bottom.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((top, bottom))
}

fn row_partition(row: &[usize]) -> Vec<usize> {
    let mut p: Vec<usize> = row.iter().enumerate().map(|(i, &x)| x - i).filter(|&x| x > 0).collect();
    p.sort_unstable_by(|a, b| b.cmp(a));
    p
}

/// The bipartition of the symbol of a Springer pair before tensoring with
/// the sign character, or `None` if the pair is not geometric.
pub fn symbol_bipartition(family: Family, parts: &[usize], flip: &[usize]) -> Option<Bipartition> {
    let (top, bottom) = symbol(family, parts, flip)?;
    let defect = top.len() as i64 - bottom.len() as i64;
    let want = if family == Family::D { 0 } else { 1 };
    if defect != want {
        return None;
    }
    Some((row_partition(&top), row_partition(&bottom)))
}

/// The `Irr(W)` label of a Springer pair, or `None` if the pair is not geometric.
fn classical_springer(family: Family, parts: &[usize], sign: i8, flip: &[usize]) -> Option<String> {
    let (a, b) = symbol_bipartition(family, parts, flip)?;
    Some(match family {
        Family::D => {
            let (x, y) = (transpose(&a), transpose(&b));
            if x == y {
                format!("{}{}", d_label(&x, &y), if sign >= 0 { "+" } else { "-" })
            } else {
                d_label(&x, &y)
            }
        }
        _ => bip_label(&transpose(&b), &transpose(&a)),
    })
}

fn g2_springer(c: G2Class, rho: &FactorRho) -> Option<&'static str> {
    let r = match rho {
        FactorRho::S3(r) => *r,
        _ => 0,
    };
    match (c, r) {
        (G2Class::Trivial, 0) => Some("phi1,0"),
        (G2Class::A1, 0) => Some("phi'1,3"),
        (G2Class::TildeA1, 0) => Some("phi2,1"),
        (G2Class::G2a1, 0) => Some("phi2,2"),
        (G2Class::G2a1, 1) => Some("phi''1,3"),
        (G2Class::G2, 0) => Some("phi1,6"),
        _ => None,
    }
}

/// The Springer image of `(class, rho)` for one factor.
pub fn factor_springer(fc: &FactorClass, rho: &FactorRho) -> Option<String> {
    match fc {
        FactorClass::G2(c) => g2_springer(*c, rho).map(str::to_string),
        FactorClass::Partition { ctype, parts, sign } => match ctype.family {
            Family::A => rho.is_trivial().then(|| fmt_part(&transpose(parts))),
            Family::C => {
                let flip = match rho {
                    FactorRho::Flip(s) => s.clone(),
                    _ => vec![],
                };
                classical_springer(Family::C, parts, *sign, &flip)
            }
            fam => {
                let flip = match rho {
                    FactorRho::Flip(s) => s.clone(),
                    _ => vec![],
                };
                // characters are taken modulo flipping every odd part
                classical_springer(fam, parts, *sign, &flip).or_else(|| {
                    if flip.is_empty() {
                        return None;
                    }
                    let mut odd: Vec<usize> = parts.iter().copied().filter(|p| p % 2 == 1).collect();
                    odd.dedup();
                    let comp: Vec<usize> = odd.into_iter().filter(|p| !flip.contains(p)).collect();
                    classical_springer(fam, parts, *sign, &comp)
                })
            }
        },
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SpringerDatum {
    pub class: UnipotentClass,
    pub rho: Vec<FactorRho>,
    pub geometric: bool,
    /// `Irr(W^{M°})` label, one factor per component joined by `" x "`.
    pub irrep: Option<String>,
}

/// All pairs `(x, rho)` of the connected group with root subsystem `sub`.
pub fn springer_table(rd: &RootDatum, sub: &Subsystem) -> Result<Vec<SpringerDatum>> {
    let mut out = vec![];
    for cd in unipotent::enumerate_classes(rd, sub)? {
        let ax: Vec<FactorAx> = sub
            .components
            .iter()
            .zip(&cd.class.factors)
            .map(|(c, fc)| factor_ax(fc, factor_center_order(rd, c.ctype, &c.simple)))
            .collect();
        let groups = unipotent::ComponentGroupData {
            factors: ax,
            pi0_stab: 1,
        };
        for rho in groups.irreps() {
            let images: Vec<Option<String>> = cd
                .class
                .factors
                .iter()
                .zip(&rho)
                .map(|(fc, r)| factor_springer(fc, r))
                .collect();
            let geometric = images.iter().all(|x| x.is_some());
            let irrep = geometric.then(|| {
                if images.is_empty() {
                    "triv".to_string()
                } else {
                    images.into_iter().map(|x| x.unwrap()).collect::<Vec<_>>().join(" x ")
                }
            });
            out.push(SpringerDatum {
                class: cd.class.clone(),
                rho,
                geometric,
                irrep,
            });
        }
    }
    Ok(out)
}

/// How a diagram automorphism moves the components of `sub`: for each
/// component `i`, the target component and the induced permutation of
/// simple-root positions.
fn component_map(sub: &Subsystem, img: &[usize]) -> Result<Vec<(usize, Vec<usize>)>> {
    let simple = sub.simple();
    let image_of = |r: usize| img[simple.iter().position(|&s| s == r).unwrap()];
    let mut out = vec![];
    for c in &sub.components {
        let first = image_of(c.simple[0]);
        let j = sub
            .components
            .iter()
            .position(|d| d.simple.contains(&first))
            .ok_or_else(|| AtlasError::Invariant("image of a simple root is not simple".into()))?;
        let target = &sub.components[j];
        let perm: Vec<usize> = c
            .simple
            .iter()
            .map(|&r| target.simple.iter().position(|&s| s == image_of(r)))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| AtlasError::Invariant("component not mapped onto a component".into()))?;
        out.push((j, perm));
    }
    Ok(out)
}

/// Image of a Springer pair under an element of `π₀(M)` given by its
/// action on the simple roots of `M°`.
pub fn act_on_pair(
    sub: &Subsystem,
    img: &[usize],
    class: &UnipotentClass,
    rho: &[FactorRho],
) -> Result<(UnipotentClass, Vec<FactorRho>)> {
    let map = component_map(sub, img)?;
    let mut factors = class.factors.clone();
    let mut rhos = rho.to_vec();
    for (i, (j, perm)) in map.iter().enumerate() {
        let mut fc = class.factors[i].clone();
        let mut r = rho[i].clone();
        let n = perm.len();
        let moved: Vec<usize> = (0..n).filter(|&k| perm[k] != k).collect();
        if let FactorClass::Partition { ctype, sign, .. } = &mut fc {
            match ctype.family {
                Family::D if !moved.is_empty() => {
                    if moved != vec![n - 2, n - 1] {
                        return Err(AtlasError::Invariant("triality is not supported".into()));
                    }
                    *sign = -*sign;
                }
                Family::A if !moved.is_empty() => {
                    if let FactorRho::Cyclic(k, m) = r {
                        r = FactorRho::Cyclic((m - k) % m, m);
                    }
                }
                _ => {}
            }
        }
        factors[*j] = fc;
        rhos[*j] = r;
    }
    Ok((UnipotentClass { factors }, rhos))
}

#[derive(Clone, Debug, Serialize)]
pub struct ExtendedSpringerDatum {
    pub class: UnipotentClass,
    pub rho: Vec<FactorRho>,
    pub irrep: String,
    /// Size of the `π₀(M)`-orbit of `(x, rho)`.
    pub orbit_size: usize,
    /// Order of `π₀(M)_{[x,rho]}`.
    pub stabilizer_order: usize,
    /// Index of `σ ∈ Irr(π₀(M)_{[x,rho]})`, 0 for the trivial character.
    pub sigma: usize,
}

/// Geometric `M`-classes of pairs `(x, rho_1)`, one entry per pair `(orbit, σ)`.
pub fn extended_springer_table(
    rd: &RootDatum,
    w: &WeylGroup,
    m: &PseudoLevi,
) -> Result<Vec<ExtendedSpringerDatum>> {
    let sub = &m.subsystem;
    let table: Vec<SpringerDatum> = springer_table(rd, sub)?
        .into_iter()
        .filter(|d| d.geometric)
        .collect();
    let key = |c: &UnipotentClass, r: &[FactorRho]| (c.clone(), r.to_vec());
    let mut done = vec![false; table.len()];
    let mut out = vec![];
    for i in 0..table.len() {
        if done[i] {
            continue;
        }
        let d = &table[i];
        let mut stab = vec![];
        let mut orbit = BTreeSet::new();
        for (k, &p) in m.pi0.iter().enumerate() {
            let (c2, r2) = act_on_pair(sub, &m.pi0_simple_perm[k], &d.class, &d.rho)?;
            if key(&c2, &r2) == key(&d.class, &d.rho) {
                stab.push(p);
            }
            orbit.insert(key(&c2, &r2));
        }
        for (j, e) in table.iter().enumerate() {
            if orbit.contains(&key(&e.class, &e.rho)) {
                done[j] = true;
            }
        }
        let n_sigma = conjugacy_classes(&torus::group_on(w, &stab)).len();
        for sigma in 0..n_sigma {
            out.push(ExtendedSpringerDatum {
                class: d.class.clone(),
                rho: d.rho.clone(),
                irrep: d.irrep.clone().unwrap_or_default(),
                orbit_size: orbit.len(),
                stabilizer_order: stab.len(),
                sigma,
            });
        }
    }
    Ok(out)
}

/// `|Irr(W^M)|` as the number of conjugacy classes of `W_A`.
pub fn n_irr_w_m(w: &WeylGroup, m: &PseudoLevi) -> usize {
    conjugacy_classes(&m.w_a_group(w)).len()
}

#[derive(Clone, Debug, Serialize)]
pub struct AffineFiber {
    pub t: TorusPoint,
    pub stabilizer_type: String,
    pub stabilizer_order: usize,
    pub pi0_order: usize,
    /// `|Irr(W_t)|`: points of `(T//W)_2` over `W t`.
    pub n_extq2: usize,
    /// Conjugacy classes of `W_t`: points of `T//W` over `W t`.
    pub n_extq1: usize,
    pub params: Vec<ExtendedSpringerDatum>,
}

impl AffineFiber {
    pub fn consistent(&self) -> bool {
        self.n_extq1 == self.n_extq2 && self.n_extq2 == self.params.len()
    }

    /// Position of the spherical parameter `(t, 1, triv)`.
    pub fn spherical(&self) -> Option<usize> {
        spherical_index(&self.params)
    }
}

pub fn spherical_index(params: &[ExtendedSpringerDatum]) -> Option<usize> {
    params
        .iter()
        .position(|p| p.class.is_trivial() && p.rho.iter().all(|r| r.is_trivial()) && p.sigma == 0)
}

/// The parameters over `W t`, with the counts of the two extended quotients.
pub fn affine_springer_fiber(rd: &RootDatum, w: &WeylGroup, t: &TorusPoint) -> Result<AffineFiber> {
    let m = torus::stabilizer(rd, w, t)?;
    let params = extended_springer_table(rd, w, &m)?;
    let n = n_irr_w_m(w, &m);
    let f = AffineFiber {
        t: t.clone(),
        stabilizer_type: m.type_label(),
        stabilizer_order: m.w_a.len(),
        pi0_order: m.pi0.len(),
        n_extq2: n,
        n_extq1: n,
        params,
    };
    if f.params.len() != n {
        return Err(AtlasError::Invariant(format!(
            "fiber over {t}: {} parameters but |Irr(W_t)| = {n}",
            f.params.len()
        )));
    }
    Ok(f)
}

/// `(t, 1, triv)`, computed on the canonical orbit representative.
pub fn spherical_parameter(rd: &RootDatum, w: &WeylGroup, t: &TorusPoint) -> Result<(TorusPoint, ExtendedSpringerDatum)> {
    let all: Vec<usize> = (0..w.order()).collect();
    let rep = torus::orbit_min(w, &all, t);
    let f = affine_springer_fiber(rd, w, &rep)?;
    let i = f
        .spherical()
        .ok_or_else(|| AtlasError::Invariant("no spherical parameter".into()))?;
    Ok((rep, f.params[i].clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::{build_root_datum, generate_weyl, Isogeny};
    use crate::subsystem;

    fn full(label: &str, iso: Isogeny) -> (RootDatum, Subsystem) {
        let rd = build_root_datum(label, iso).unwrap();
        let sub = subsystem::classify(&rd, &(0..rd.n_roots()).collect::<Vec<_>>()).unwrap();
        (rd, sub)
    }

    fn check_bijective(label: &str, iso: Isogeny) {
        let (rd, sub) = full(label, iso);
        let tab = springer_table(&rd, &sub).unwrap();
        let mut got: Vec<String> = tab.iter().filter_map(|d| d.irrep.clone()).collect();
        got.sort();
        let mut want = irr_w_labels(sub.components[0].ctype).unwrap();
        want.sort();
        assert_eq!(got, want, "{label}");
        let triv = tab.iter().find(|d| d.class.is_trivial()).unwrap();
        assert_eq!(triv.irrep.as_deref(), Some(want_trivial(sub.components[0].ctype).as_str()));
    }

    fn want_trivial(ct: CartanType) -> String {
        match ct.family {
            Family::A => fmt_part(&[ct.rank + 1]),
            Family::B | Family::C => bip_label(&[ct.rank], &[]),
            Family::D => d_label(&[ct.rank], &[]),
            _ => "phi1,0".into(),
        }
    }

    #[test]
    fn classical_bijections() {
        for t in ["A1", "A2", "A3", "B2", "B3", "B4", "C2", "C3", "C4", "D4"] {
            check_bijective(t, Isogeny::Sc);
            check_bijective(t, Isogeny::Ad);
        }
        check_bijective("G2", Isogeny::Sc);
    }

    #[test]
    fn geometric_counts() {
        for (t, n) in [("C2", 5), ("G2", 6), ("C3", 10), ("D4", 13), ("A2", 3)] {
            let (rd, sub) = full(t, Isogeny::Sc);
            let tab = springer_table(&rd, &sub).unwrap();
            assert_eq!(tab.iter().filter(|d| d.geometric).count(), n, "{t}");
        }
    }

    #[test]
    fn regular_goes_to_sign() {
        let (rd, sub) = full("C2", Isogeny::Sc);
        let tab = springer_table(&rd, &sub).unwrap();
        let reg = tab
            .iter()
            .find(|d| d.class.to_string() == "C2:[4]" && d.geometric)
            .unwrap();
        assert_eq!(reg.irrep.as_deref(), Some("([];[1,1])"));
    }

    #[test]
    fn pgl2_fiber_at_minus_one() {
        let rd = build_root_datum("A1", Isogeny::Ad).unwrap();
        let w = generate_weyl(&rd).unwrap();
        let t = TorusPoint::new(vec![num_rational::Ratio::new(1, 2)]);
        let f = affine_springer_fiber(&rd, &w, &t).unwrap();
        assert_eq!(f.params.len(), 2);
        assert!(f.params.iter().all(|p| p.class.is_trivial()));
        let one = TorusPoint::identity(1);
        assert_eq!(affine_springer_fiber(&rd, &w, &one).unwrap().params.len(), 2);
    }
}
