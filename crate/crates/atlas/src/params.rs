//! Parameters attached to a principal-series Bernstein component: KLR
//! parameters, affine Springer parameters and Kazhdan–Lusztig triples, and
//! the exact count comparison between `(T//W^s)_2` and KLR classes.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::fingrp::clifford;
use crate::lattice::{self, IMat, Q};
use crate::rootdata::{RootDatum, WeylGroup};
use crate::springer::{self, ExtendedSpringerDatum};
use crate::subsystem::Subsystem;
use crate::torus::{self, PseudoLevi, TorusPoint};
use crate::unipotent::{self, fmt_rho, ClassData, FactorRho, UnipotentClass};
use crate::{AtlasError, Result};

/// `t · h(q^{1/2})` with `q` formal: a finite-order part and an integral
/// cocharacter giving the exponents of `q^{1/2}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FormalPoint {
    pub t: TorusPoint,
    pub h: Vec<i64>,
}

impl fmt::Display for FormalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.h.iter().all(|&x| x == 0) {
            return write!(f, "{}", self.t);
        }
        let e: Vec<String> = self
            .h
            .iter()
            .map(|&x| format!("q^{{{}}}", lattice::fmt_q(&Q::new(x, 2))))
            .collect();
        write!(f, "{}*({})", self.t, e.join(","))
    }
}

impl Serialize for FormalPoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl FormalPoint {
    pub fn compact(t: TorusPoint) -> Self {
        let r = t.c.len();
        FormalPoint { t, h: vec![0; r] }
    }

    /// Exponents of `q` per coordinate.
    pub fn q_exponents(&self) -> Vec<Q> {
        self.h.iter().map(|&x| Q::new(x, 2)).collect()
    }

    pub fn is_bounded(&self) -> bool {
        self.h.iter().all(|&x| x == 0)
    }

    pub fn act(&self, w: &WeylGroup, el: usize) -> FormalPoint {
        let hq: Vec<Q> = self.h.iter().map(|&x| lattice::qi(x)).collect();
        let h = w.act(el, &hq).iter().map(|x| x.to_integer()).collect();
        FormalPoint {
            t: self.t.act(w, el),
            h,
        }
    }

    /// The product with `h'(q^{1/2})`.
    pub fn shift(&self, h: &[i64]) -> FormalPoint {
        FormalPoint {
            t: self.t.clone(),
            h: self.h.iter().zip(h).map(|(a, b)| a + b).collect(),
        }
    }
}

/// Least representative of the orbit under the given Weyl elements.
pub fn formal_orbit_min(w: &WeylGroup, group: &[usize], p: &FormalPoint) -> FormalPoint {
    group.iter().map(|&g| p.act(w, g)).min().unwrap_or_else(|| p.clone())
}

/// `t_q = t · h_x(q^{1/2})`.
pub fn t_q_point(t: &TorusPoint, x: &ClassData) -> FormalPoint {
    FormalPoint {
        t: t.clone(),
        h: x.h.clone(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KlrParameter {
    /// The finite-order part of `Φ(ϖ_F)`.
    pub t: TorusPoint,
    /// Exponents of a real unramified twist `Φ(ϖ_F) = t · t_real(q^{1/2})`.
    pub t_real: Vec<i64>,
    pub x: UnipotentClass,
    /// Associated cocharacter of `x`.
    pub h: Vec<i64>,
    pub rho: Vec<FactorRho>,
    pub sigma: usize,
    pub irrep: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AffineSpringerParam {
    pub t: FormalPoint,
    pub x: UnipotentClass,
    pub h: Vec<i64>,
    pub rho1: (Vec<FactorRho>, usize),
    pub irrep: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KlTriple {
    pub t_q: FormalPoint,
    pub x: UnipotentClass,
    pub h: Vec<i64>,
    pub rho_q: (Vec<FactorRho>, usize),
    pub irrep: String,
}

impl KlrParameter {
    pub fn phi_frobenius(&self) -> FormalPoint {
        FormalPoint {
            t: self.t.clone(),
            h: self.t_real.clone(),
        }
    }

    pub fn to_affine(&self) -> AffineSpringerParam {
        AffineSpringerParam {
            t: self.phi_frobenius(),
            x: self.x.clone(),
            h: self.h.clone(),
            rho1: (self.rho.clone(), self.sigma),
            irrep: self.irrep.clone(),
        }
    }

    pub fn to_kl_triple(&self) -> KlTriple {
        KlTriple {
            t_q: self.phi_frobenius().shift(&self.h),
            x: self.x.clone(),
            h: self.h.clone(),
            rho_q: (self.rho.clone(), self.sigma),
            irrep: self.irrep.clone(),
        }
    }

    pub fn is_tempered(&self) -> bool {
        self.t_real.iter().all(|&x| x == 0)
    }
}

impl AffineSpringerParam {
    pub fn to_klr(&self) -> KlrParameter {
        KlrParameter {
            t: self.t.t.clone(),
            t_real: self.t.h.clone(),
            x: self.x.clone(),
            h: self.h.clone(),
            rho: self.rho1.0.clone(),
            sigma: self.rho1.1,
            irrep: self.irrep.clone(),
        }
    }
}

impl KlTriple {
    /// Recovers `Φ(ϖ_F) = t_q · h_x(q^{-1/2})`.
    pub fn to_klr(&self) -> KlrParameter {
        let back: Vec<i64> = self.h.iter().map(|x| -x).collect();
        let phi = self.t_q.shift(&back);
        KlrParameter {
            t: phi.t,
            t_real: phi.h,
            x: self.x.clone(),
            h: self.h.clone(),
            rho: self.rho_q.0.clone(),
            sigma: self.rho_q.1,
            irrep: self.irrep.clone(),
        }
    }
}

/// The `W^s`-orbit of `t_q`, as its least representative.
pub fn infinitesimal_character(w: &WeylGroup, ws: &[usize], p: &KlrParameter) -> FormalPoint {
    formal_orbit_min(w, ws, &p.to_kl_triple().t_q)
}

/// `Z_G(c_s, t)`.
pub fn centralizer(rd: &RootDatum, w: &WeylGroup, c_s: &[TorusPoint], t: &TorusPoint) -> Result<PseudoLevi> {
    let mut gens = c_s.to_vec();
    gens.push(t.clone());
    torus::pseudo_levi(rd, w, &gens)
}

/// KLR classes with finite-order part `t`, up to `Z_H(t)`.
pub fn klr_parameters(rd: &RootDatum, w: &WeylGroup, c_s: &[TorusPoint], t: &TorusPoint) -> Result<Vec<KlrParameter>> {
    let m = centralizer(rd, w, c_s, t)?;
    let classes = unipotent::enumerate_classes(rd, &m.subsystem)?;
    let h_of: HashMap<UnipotentClass, Vec<i64>> = classes.into_iter().map(|c| (c.class, c.h)).collect();
    let table = springer::extended_springer_table(rd, w, &m)?;
    Ok(table
        .into_iter()
        .map(|d: ExtendedSpringerDatum| KlrParameter {
            t: t.clone(),
            t_real: vec![0; rd.rank],
            h: h_of[&d.class].clone(),
            x: d.class,
            rho: d.rho,
            sigma: d.sigma,
            irrep: d.irrep,
        })
        .collect())
}

#[derive(Clone, Debug, Serialize)]
pub struct FiberEntry {
    /// Index of the character of the stabilizer, 0 for the trivial one.
    pub stabilizer_irrep: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct OrbitRow {
    pub orbit: TorusPoint,
    pub orbit_size: usize,
    pub stabilizer_order: usize,
    pub stabilizer_type: String,
    pub generic: bool,
    pub fiber: Vec<FiberEntry>,
    pub klr: Vec<KlrParameter>,
}

impl OrbitRow {
    pub fn matches(&self) -> bool {
        self.fiber.len() == self.klr.len()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TriangleReport {
    pub ws_order: usize,
    pub h_type: String,
    pub bound: i64,
    pub rows: Vec<OrbitRow>,
    pub extq2_total: usize,
    pub klr_total: usize,
    pub counts_match: bool,
}

/// A point whose stabilizer in `group` is trivial and on which no root of
/// `Z_G(c_s)` is trivial, with coordinates of prime denominator at least 1009.
pub fn generic_point(rd: &RootDatum, w: &WeylGroup, group: &[usize]) -> TorusPoint {
    let primes = (1009i64..).filter(|&p| (2..).take_while(|d| d * d <= p).all(|d| p % d != 0));
    for p in primes {
        for mult in 1..p {
            let c: Vec<Q> = (0..rd.rank)
                .map(|i| Q::new((mult * (i as i64 * 7 + 1) * (i as i64 + 3)) % p, p))
                .collect();
            let t = TorusPoint::new(c);
            let free = group.iter().all(|&g| g == 0 || t.act(w, g) != t);
            let regular = (0..rd.n_roots()).all(|r| !t.root_trivial(rd, r));
            if free && regular {
                return t;
            }
        }
    }
    unreachable!()
}

/// Compare `(T//W^s)_2` with KLR classes over every `W^s`-orbit of the
/// grid of points of order dividing some `d <= bound`, plus one generic orbit.
pub fn enumerate_triangle(
    rd: &RootDatum,
    w: &WeylGroup,
    c_s: &[TorusPoint],
    bound: i64,
    cap: usize,
) -> Result<TriangleReport> {
    let bd = torus::bernstein_data(rd, w, c_s)?;
    let ws = bd.ws.clone();
    let gamma = torus::group_on(w, &ws);
    let grid = torus::grid_points(rd.rank, bound, cap)?;
    let index: HashMap<TorusPoint, usize> = grid.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
    let x_action: Vec<Vec<usize>> = ws
        .iter()
        .map(|&g| grid.iter().map(|p| index[&p.act(w, g)]).collect())
        .collect();
    let eq = clifford::extended_quotient_2(&gamma, &x_action)?;
    let mut rows = vec![];
    for o in &eq.orbits {
        let t = torus::orbit_min(w, &ws, &grid[o.rep]);
        let m = centralizer(rd, w, c_s, &t)?;
        let klr = klr_parameters(rd, w, c_s, &t)?;
        rows.push(OrbitRow {
            orbit: t,
            orbit_size: o.orbit.len(),
            stabilizer_order: o.stabilizer.len(),
            stabilizer_type: m.type_label(),
            generic: false,
            fiber: (0..o.n_irr).map(|k| FiberEntry { stabilizer_irrep: k }).collect(),
            klr,
        });
    }
    rows.sort_by(|a, b| a.orbit.cmp(&b.orbit));
    let g = generic_point(rd, w, &ws);
    let klr = klr_parameters(rd, w, c_s, &g)?;
    rows.push(OrbitRow {
        orbit: torus::orbit_min(w, &ws, &g),
        orbit_size: ws.len(),
        stabilizer_order: 1,
        stabilizer_type: "T".into(),
        generic: true,
        fiber: vec![FiberEntry { stabilizer_irrep: 0 }],
        klr,
    });
    let extq2_total = rows.iter().map(|r| r.fiber.len()).sum();
    let klr_total = rows.iter().map(|r| r.klr.len()).sum();
    let counts_match = rows.iter().all(|r| r.matches()) && extq2_total == klr_total;
    Ok(TriangleReport {
        ws_order: ws.len(),
        h_type: bd.h.type_label(),
        bound,
        rows,
        extq2_total,
        klr_total,
        counts_match,
    })
}

/// `Φ` is not contained in a proper Levi subgroup: the Bala–Carter Levi of
/// `x` in `Z_G(c_s, t)°` has full semisimple rank.
pub fn is_essentially_discrete(
    rd: &RootDatum,
    w: &WeylGroup,
    c_s: &[TorusPoint],
    p: &KlrParameter,
) -> Result<bool> {
    if !p.is_tempered() {
        return Ok(false);
    }
    let m = centralizer(rd, w, c_s, &p.t)?;
    let cd = unipotent::class_data(rd, &m.subsystem, p.x.clone())?;
    let levi = unipotent::bala_carter_levi(rd, &m.subsystem, &cd)?;
    let rows: IMat = levi.iter().map(|&r| rd.roots[r].clone()).collect();
    let all: IMat = rd.roots.clone();
    Ok(lattice::rank(&rows) == lattice::rank(&all))
}

#[derive(Clone, Debug, Serialize)]
pub struct ResidualCoset {
    /// Dimension of `Z_T(im γ_x)°`.
    pub dim: usize,
    /// Integral directions spanning its cocharacter lattice.
    pub directions: IMat,
    /// The translate `h_x(q^{1/2})`.
    pub shift: FormalPoint,
}

/// Integer basis of `{v ∈ X_* : <a, v> = 0 for the given roots}`.
pub fn kernel_directions(rd: &RootDatum, roots: &[usize]) -> IMat {
    let r = rd.rank;
    let mut a: IMat = if roots.is_empty() {
        vec![]
    } else {
        let rows: IMat = roots.iter().map(|&i| rd.roots[i].clone()).collect();
        lattice::hermite_rows(&rows)
            .into_iter()
            .filter(|row| row.iter().any(|&x| x != 0))
            .collect()
    };
    while a.len() < r {
        a.push(vec![0; r]);
    }
    let (_, d, v) = lattice::smith(&a);
    (0..r)
        .filter(|&j| d[j] == 0)
        .map(|j| (0..r).map(|i| v[i][j]).collect())
        .collect()
}

/// `Z_T(im γ_x)° · h_x(q^{1/2})` for a class of the connected group `sub`.
pub fn residual_coset(rd: &RootDatum, sub: &Subsystem, x: &ClassData) -> Result<ResidualCoset> {
    let levi = unipotent::bala_carter_levi(rd, sub, x)?;
    let directions = kernel_directions(rd, &levi);
    Ok(ResidualCoset {
        dim: directions.len(),
        directions,
        shift: FormalPoint {
            t: TorusPoint::identity(rd.rank),
            h: x.h.clone(),
        },
    })
}

pub fn describe(p: &KlrParameter) -> String {
    format!("t={} x={} rho={} sigma={}", p.phi_frobenius(), p.x, fmt_rho(&p.rho), p.sigma)
}

pub fn check_round_trip(p: &KlrParameter) -> Result<()> {
    if p.to_affine().to_klr() != *p || p.to_kl_triple().to_klr() != *p {
        return Err(AtlasError::Invariant(format!("round trip failed for {}", describe(p))));
    }
    Ok(())
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
    fn pgl2_unramified_bound_two() {
        let (rd, w) = setup("A1", Isogeny::Ad);
        let rep = enumerate_triangle(&rd, &w, &[], 2, 10_000).unwrap();
        let counts: Vec<usize> = rep.rows.iter().map(|r| r.fiber.len()).collect();
        assert_eq!(counts, vec![2, 2, 1]);
        assert!(rep.counts_match);
    }

    #[test]
    fn a1_regular_kl_triple() {
        let (rd, w) = setup("A1", Isogeny::Sc);
        let one = TorusPoint::identity(1);
        let ps = klr_parameters(&rd, &w, &[], &one).unwrap();
        assert_eq!(ps.len(), 2);
        let st = ps.iter().find(|p| !p.x.is_trivial()).unwrap();
        assert_eq!(st.to_kl_triple().t_q.h, rd.coroots[0]);
        for p in &ps {
            check_round_trip(p).unwrap();
            assert!(p.is_tempered());
        }
        assert!(is_essentially_discrete(&rd, &w, &[], st).unwrap());
        let sph = ps.iter().find(|p| p.x.is_trivial()).unwrap();
        assert!(!is_essentially_discrete(&rd, &w, &[], sph).unwrap());
    }

    #[test]
    fn unbounded_point_is_not_tempered() {
        let (rd, _) = setup("A1", Isogeny::Ad);
        let p = KlrParameter {
            t: TorusPoint::identity(1),
            t_real: rd.coroots[0].clone(),
            x: UnipotentClass { factors: vec![] },
            h: vec![0],
            rho: vec![],
            sigma: 0,
            irrep: "triv".into(),
        };
        assert!(!p.is_tempered());
    }

    #[test]
    fn residual_coset_dimensions() {
        let (rd, _) = setup("C2", Isogeny::Sc);
        let sub = crate::subsystem::classify(&rd, &(0..8).collect::<Vec<_>>()).unwrap();
        for x in unipotent::enumerate_classes(&rd, &sub).unwrap() {
            let rc = residual_coset(&rd, &sub, &x).unwrap();
            let levi = unipotent::bala_carter_levi(&rd, &sub, &x).unwrap();
            let rows: IMat = levi.iter().map(|&r| rd.roots[r].clone()).collect();
            assert_eq!(rc.dim, 2 - lattice::rank(&rows));
            for d in &rc.directions {
                for &r in &levi {
                    assert_eq!(lattice::dot(&rd.roots[r], d), 0);
                }
            }
        }
    }
}
