//! Unipotent classes of connected reductive groups with classical or G2
//! factors: partition labels, weighted Dynkin diagrams, orbit dimensions,
//! closure order, component groups, saturation and Bala–Carter Levis.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_traits::Zero;
use serde::Serialize;

use crate::lattice::{self, IMat, QVec, Q};
use crate::rootdata::{build_root_datum, CartanType, Family, Isogeny, RootDatum};
use crate::subsystem::{self, Subsystem};
use crate::{AtlasError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum G2Class {
    Trivial,
    A1,
    TildeA1,
    G2a1,
    G2,
}

impl G2Class {
    pub const ALL: [G2Class; 5] = [
        G2Class::Trivial,
        G2Class::A1,
        G2Class::TildeA1,
        G2Class::G2a1,
        G2Class::G2,
    ];

    /// Labels on (short alpha_1, long alpha_2).
    pub fn labels(&self) -> Vec<i64> {
        match self {
            G2Class::Trivial => vec![0, 0],
            G2Class::A1 => vec![0, 1],
            G2Class::TildeA1 => vec![1, 0],
            G2Class::G2a1 => vec![0, 2],
            G2Class::G2 => vec![2, 2],
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            G2Class::Trivial => "1",
            G2Class::A1 => "A1",
            G2Class::TildeA1 => "~A1",
            G2Class::G2a1 => "G2(a1)",
            G2Class::G2 => "G2",
        }
    }
}

/// A unipotent class of one simple factor.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum FactorClass {
    /// Parts in decreasing order; `sign` is `±1` for very even classes in type D, else 0.
    Partition {
        ctype: CartanType,
        parts: Vec<usize>,
        sign: i8,
    },
    G2(G2Class),
}

impl fmt::Display for FactorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FactorClass::Partition { ctype, parts, sign } => {
                let p: Vec<String> = parts.iter().map(|x| x.to_string()).collect();
                let s = match sign {
                    1 => "+",
                    -1 => "-",
                    _ => "",
                };
                write!(f, "{ctype}:[{}]{s}", p.join(","))
            }
            FactorClass::G2(c) => write!(f, "G2:{}", c.name()),
        }
    }
}

impl FactorClass {
    pub fn ctype(&self) -> CartanType {
        match self {
            FactorClass::Partition { ctype, .. } => *ctype,
            FactorClass::G2(_) => CartanType::new(Family::G, 2),
        }
    }

    pub fn is_trivial(&self) -> bool {
        match self {
            FactorClass::Partition { parts, .. } => parts.iter().all(|&p| p == 1),
            FactorClass::G2(c) => *c == G2Class::Trivial,
        }
    }
}

/// A unipotent class of a connected group, one factor class per simple component.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct UnipotentClass {
    pub factors: Vec<FactorClass>,
}

impl fmt::Display for UnipotentClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        let s: Vec<String> = self.factors.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", s.join(" x "))
    }
}

impl UnipotentClass {
    pub fn is_trivial(&self) -> bool {
        self.factors.iter().all(|f| f.is_trivial())
    }
}

pub fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if n == 0 {
            out.push(cur.clone());
            return;
        }
        for k in (1..=max.min(n)).rev() {
            cur.push(k);
            go(n - k, k, cur, out);
            cur.pop();
        }
    }
    let mut out = vec![];
    go(n, n, &mut vec![], &mut out);
    out
}

fn multiplicity(parts: &[usize], k: usize) -> usize {
    parts.iter().filter(|&&p| p == k).count()
}

/// Every part of the given parity occurs with even multiplicity.
fn parity_rule(parts: &[usize], parity: usize) -> bool {
    parts
        .iter()
        .filter(|&&p| p % 2 == parity)
        .all(|&p| multiplicity(parts, p).is_multiple_of(2))
}

pub fn is_very_even(parts: &[usize]) -> bool {
    parts.iter().all(|&p| p % 2 == 0) && parity_rule(parts, 0)
}

/// Unipotent classes of a simple group of the given type.
pub fn factor_classes(ct: CartanType) -> Result<Vec<FactorClass>> {
    let n = ct.rank;
    let mk = |parts: Vec<usize>, sign: i8| FactorClass::Partition {
        ctype: ct,
        parts,
        sign,
    };
    Ok(match ct.family {
        Family::A => partitions(n + 1).into_iter().map(|p| mk(p, 0)).collect(),
        Family::B => partitions(2 * n + 1)
            .into_iter()
            .filter(|p| parity_rule(p, 0))
            .map(|p| mk(p, 0))
            .collect(),
        Family::C => partitions(2 * n)
            .into_iter()
            .filter(|p| parity_rule(p, 1))
            .map(|p| mk(p, 0))
            .collect(),
        Family::D => {
            let mut out = vec![];
            for p in partitions(2 * n).into_iter().filter(|p| parity_rule(p, 0)) {
                if is_very_even(&p) {
                    out.push(mk(p.clone(), 1));
                    out.push(mk(p, -1));
                } else {
                    out.push(mk(p, 0));
                }
            }
            out
        }
        Family::G => G2Class::ALL.iter().map(|&c| FactorClass::G2(c)).collect(),
        _ => {
            return Err(AtlasError::UnsupportedType(format!(
                "unipotent classes of {ct}"
            )))
        }
    })
}

/// Sorted (decreasing) eigenvalues of `h` on the natural representation.
fn sl2_weights(parts: &[usize]) -> Vec<i64> {
    let mut w: Vec<i64> = parts
        .iter()
        .flat_map(|&p| (0..p).map(move |i| p as i64 - 1 - 2 * i as i64))
        .collect();
    w.sort_unstable_by(|a, b| b.cmp(a));
    w
}

/// Weighted Dynkin diagram in Bourbaki numbering.
pub fn factor_labels(fc: &FactorClass) -> Vec<i64> {
    match fc {
        FactorClass::G2(c) => c.labels(),
        FactorClass::Partition { ctype, parts, sign } => {
            let n = ctype.rank;
            let w = sl2_weights(parts);
            let h: Vec<i64> = match ctype.family {
                Family::A => w,
                _ => w[..n].to_vec(),
            };
            let mut labels: Vec<i64> = (0..n.min(h.len() - 1)).map(|i| h[i] - h[i + 1]).collect();
            match ctype.family {
                Family::A => {}
                Family::B => labels.push(h[n - 1]),
                Family::C => labels.push(2 * h[n - 1]),
                Family::D => {
                    labels.truncate(n - 1);
                    labels.push(h[n - 2] + h[n - 1]);
                    if *sign == -1 {
                        labels.swap(n - 2, n - 1);
                    }
                }
                _ => unreachable!(),
            }
            labels
        }
    }
}

fn abstract_roots(ct: CartanType) -> Vec<Vec<i64>> {
    static CACHE: OnceLock<Mutex<HashMap<CartanType, Vec<Vec<i64>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(r) = cache.lock().unwrap().get(&ct) {
        return r.clone();
    }
    let rd = build_root_datum(&ct.to_string(), Isogeny::Sc).expect("supported type");
    let pos: Vec<Vec<i64>> = rd.root_coords[..rd.n_pos].to_vec();
    cache.lock().unwrap().insert(ct, pos.clone());
    pos
}

/// Counts of positive roots with value 0, 1 and 2 under the labels.
fn grading(ct: CartanType, labels: &[i64]) -> (usize, usize, usize) {
    let mut c = (0, 0, 0);
    for r in abstract_roots(ct) {
        match lattice::dot(&r, labels) {
            0 => c.0 += 1,
            1 => c.1 += 1,
            2 => c.2 += 1,
            _ => {}
        }
    }
    c
}

pub fn factor_dim(fc: &FactorClass) -> usize {
    let ct = fc.ctype();
    let (n0, n1, _) = grading(ct, &factor_labels(fc));
    ct.n_roots() - 2 * n0 - n1
}

/// Distinguished: `dim g_0 = dim g_2` for the semisimple factor.
pub fn factor_distinguished(fc: &FactorClass) -> bool {
    let ct = fc.ctype();
    let (n0, _, n2) = grading(ct, &factor_labels(fc));
    ct.rank + 2 * n0 == n2
}

fn dominance(a: &[usize], b: &[usize]) -> bool {
    let (mut sa, mut sb) = (0, 0);
    for i in 0..a.len().max(b.len()) {
        sa += a.get(i).copied().unwrap_or(0);
        sb += b.get(i).copied().unwrap_or(0);
        if sa > sb {
            return false;
        }
    }
    true
}

fn factor_cmp(a: &FactorClass, b: &FactorClass) -> Option<Ordering> {
    match (a, b) {
        (FactorClass::G2(x), FactorClass::G2(y)) => Some(x.cmp(y)),
        (
            FactorClass::Partition {
                parts: pa, sign: sa, ..
            },
            FactorClass::Partition {
                parts: pb, sign: sb, ..
            },
        ) => {
            if pa == pb {
                return if sa == sb { Some(Ordering::Equal) } else { None };
            }
            match (dominance(pa, pb), dominance(pb, pa)) {
                (true, false) => Some(Ordering::Less),
                (false, true) => Some(Ordering::Greater),
                _ => None,
            }
        }
        _ => None,
    }
}

/// Closure order, componentwise on factors; `None` means incomparable.
pub fn closure_order(a: &UnipotentClass, b: &UnipotentClass) -> Option<Ordering> {
    if a.factors.len() != b.factors.len() {
        return None;
    }
    let mut le = true;
    let mut ge = true;
    for (x, y) in a.factors.iter().zip(&b.factors) {
        match factor_cmp(x, y)? {
            Ordering::Less => ge = false,
            Ordering::Greater => le = false,
            Ordering::Equal => {}
        }
    }
    match (le, ge) {
        (true, true) => Some(Ordering::Equal),
        (true, false) => Some(Ordering::Less),
        (false, true) => Some(Ordering::Greater),
        _ => None,
    }
}

/// A unipotent class of `M°` together with its derived data.
#[derive(Clone, Debug)]
pub struct ClassData {
    pub class: UnipotentClass,
    /// Weighted Dynkin labels per component.
    pub labels: Vec<Vec<i64>>,
    /// The cocharacter `h` in lattice coordinates of `X_*`.
    pub h: Vec<i64>,
    pub dim_orbit: usize,
    /// `dim B^x = (#roots - dim O) / 2`.
    pub d_x: usize,
}

/// `h = sum_j c_j beta_j^vee` with `<beta_i, h> = labels_i` on the given simple roots.
pub fn cocharacter(rd: &RootDatum, simple: &[usize], labels: &[i64]) -> Result<Vec<i64>> {
    let k = simple.len();
    let mut h = vec![Q::zero(); rd.rank];
    if k > 0 {
        let c: IMat = (0..k)
            .map(|i| (0..k).map(|j| rd.pairing(simple[i], simple[j])).collect())
            .collect();
        let cinv = lattice::inverse_q(&c).expect("Cartan matrix invertible");
        for j in 0..k {
            let cj = (0..k).fold(Q::zero(), |acc, i| acc + cinv[j][i] * labels[i]);
            for (x, &y) in h.iter_mut().zip(&rd.coroots[simple[j]]) {
                *x += cj * y;
            }
        }
    }
    if h.iter().any(|x| !x.is_integer()) {
        return Err(AtlasError::Invariant("associated cocharacter is not integral".into()));
    }
    Ok(h.iter().map(|x| x.to_integer()).collect())
}

/// All unipotent classes of the connected group with root subsystem `sub`.
pub fn enumerate_classes(rd: &RootDatum, sub: &Subsystem) -> Result<Vec<ClassData>> {
    let mut per: Vec<Vec<FactorClass>> = vec![];
    for c in &sub.components {
        per.push(factor_classes(c.ctype)?);
    }
    let mut out = vec![];
    let mut idx = vec![0usize; per.len()];
    loop {
        let factors: Vec<FactorClass> = idx.iter().enumerate().map(|(i, &j)| per[i][j].clone()).collect();
        out.push(class_data(rd, sub, UnipotentClass { factors })?);
        let mut i = 0;
        loop {
            if i == per.len() {
                return Ok(out);
            }
            idx[i] += 1;
            if idx[i] < per[i].len() {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
    }
}

pub fn class_data(rd: &RootDatum, sub: &Subsystem, class: UnipotentClass) -> Result<ClassData> {
    let labels: Vec<Vec<i64>> = class.factors.iter().map(factor_labels).collect();
    let mut h = vec![0i64; rd.rank];
    for (c, l) in sub.components.iter().zip(&labels) {
        let hc = cocharacter(rd, &c.simple, l)?;
        for (x, y) in h.iter_mut().zip(hc) {
            *x += y;
        }
    }
    let dim_orbit: usize = class.factors.iter().map(factor_dim).sum();
    // independent recount on the actual roots of the subsystem
    let mut n0 = 0;
    let mut n1 = 0;
    for &r in &sub.positive {
        match lattice::dot(&rd.roots[r], &h) {
            0 => n0 += 1,
            1 => n1 += 1,
            v if v < 0 => {
                return Err(AtlasError::Invariant("cocharacter is not dominant".into()))
            }
            _ => {}
        }
    }
    if 2 * sub.positive.len() - 2 * n0 - n1 != dim_orbit {
        return Err(AtlasError::Invariant("orbit dimension mismatch".into()));
    }
    let d_x = (2 * sub.positive.len() - dim_orbit) / 2;
    Ok(ClassData {
        class,
        labels,
        h,
        dim_orbit,
        d_x,
    })
}

/// Conjugate `h` (rational, lattice coordinates) into the dominant chamber of `sub`.
pub fn make_dominant(rd: &RootDatum, sub: &Subsystem, h: &[Q]) -> QVec {
    let mut h = h.to_vec();
    let simple = sub.simple();
    loop {
        let bad = simple
            .iter()
            .copied()
            .find(|&s| lattice::dot_q(&rd.roots[s], &h) < Q::zero());
        match bad {
            None => return h,
            Some(s) => {
                let v = lattice::dot_q(&rd.roots[s], &h);
                for (x, &c) in h.iter_mut().zip(&rd.coroots[s]) {
                    *x -= v * c;
                }
            }
        }
    }
}

/// The class of `sub` whose associated cocharacter is conjugate to `h`.
pub fn class_of_h(rd: &RootDatum, sub: &Subsystem, h: &[i64]) -> Result<UnipotentClass> {
    let hq: QVec = h.iter().map(|&x| lattice::qi(x)).collect();
    let hd = make_dominant(rd, sub, &hq);
    let mut factors = vec![];
    for c in &sub.components {
        let labels: Vec<i64> = c
            .simple
            .iter()
            .map(|&s| lattice::dot_q(&rd.roots[s], &hd).to_integer())
            .collect();
        let fc = factor_classes(c.ctype)?
            .into_iter()
            .find(|f| factor_labels(f) == labels)
            .ok_or_else(|| {
                AtlasError::Invariant(format!("no class of {} with labels {labels:?}", c.ctype))
            })?;
        factors.push(fc);
    }
    Ok(UnipotentClass { factors })
}

/// Bala–Carter Levi of a class of `sub`: the roots of a minimal Levi
/// subsystem containing the class as a distinguished class.
pub fn bala_carter_levi(rd: &RootDatum, sub: &Subsystem, x: &ClassData) -> Result<Vec<usize>> {
    let simple = sub.simple();
    let k = simple.len();
    let mut masks: Vec<u32> = (0..1u32 << k).collect();
    masks.sort_by_key(|m| m.count_ones());
    for m in masks {
        let j: Vec<usize> = (0..k).filter(|i| m >> i & 1 == 1).map(|i| simple[i]).collect();
        let roots = levi_roots(rd, sub, &j);
        let l = subsystem::classify(rd, &roots)?;
        for y in enumerate_classes(rd, &l)? {
            if !y.class.factors.iter().all(factor_distinguished) {
                continue;
            }
            if class_of_h(rd, sub, &y.h)? == x.class {
                return Ok(roots);
            }
        }
    }
    Err(AtlasError::Invariant("no Bala–Carter Levi found".into()))
}

/// Roots of `sub` in the span of the given simple roots.
pub fn levi_roots(rd: &RootDatum, sub: &Subsystem, j: &[usize]) -> Vec<usize> {
    if j.is_empty() {
        return vec![];
    }
    let rows: IMat = j.iter().map(|&s| rd.roots[s].clone()).collect();
    let r = lattice::rank(&rows);
    sub.roots
        .iter()
        .copied()
        .filter(|&a| {
            let mut m = rows.clone();
            m.push(rd.roots[a].clone());
            lattice::rank(&m) == r
        })
        .collect()
}

/// Component group `A_x` of one factor.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum FactorAx {
    Trivial,
    Cyclic(usize),
    /// `(Z/2)^k` on the listed parts; with `modulo_all` the characters are
    /// taken modulo flipping every part (the special orthogonal case).
    Elem2 { parts: Vec<usize>, modulo_all: bool },
    S3,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum FactorRho {
    Triv,
    /// Character `k` of `Z/n`.
    Cyclic(usize, usize),
    /// Sign flipped on the listed parts.
    Flip(Vec<usize>),
    /// 0 trivial, 1 reflection, 2 sign.
    S3(u8),
}

impl fmt::Display for FactorRho {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FactorRho::Triv | FactorRho::Cyclic(0, _) => write!(f, "triv"),
            FactorRho::Cyclic(k, n) => write!(f, "chi{k}/{n}"),
            FactorRho::Flip(p) if p.is_empty() => write!(f, "triv"),
            FactorRho::Flip(p) => {
                let s: Vec<String> = p.iter().map(|x| x.to_string()).collect();
                write!(f, "eps[{}]", s.join(","))
            }
            FactorRho::S3(0) => write!(f, "triv"),
            FactorRho::S3(1) => write!(f, "refl"),
            FactorRho::S3(_) => write!(f, "sign"),
        }
    }
}

impl FactorRho {
    pub fn is_trivial(&self) -> bool {
        match self {
            FactorRho::Triv | FactorRho::S3(0) => true,
            FactorRho::Cyclic(k, _) => *k == 0,
            FactorRho::Flip(p) => p.is_empty(),
            FactorRho::S3(_) => false,
        }
    }
}

pub fn fmt_rho(rho: &[FactorRho]) -> String {
    if rho.is_empty() {
        return "triv".into();
    }
    rho.iter().map(|r| r.to_string()).collect::<Vec<_>>().join(" x ")
}

impl FactorAx {
    pub fn order(&self) -> usize {
        match self {
            FactorAx::Trivial => 1,
            FactorAx::Cyclic(n) => *n,
            FactorAx::Elem2 { parts, modulo_all } => {
                let k = parts.len() as u32 - u32::from(*modulo_all && !parts.is_empty());
                1 << k
            }
            FactorAx::S3 => 6,
        }
    }

    pub fn irreps(&self) -> Vec<FactorRho> {
        match self {
            FactorAx::Trivial => vec![FactorRho::Triv],
            FactorAx::Cyclic(n) => (0..*n).map(|k| FactorRho::Cyclic(k, *n)).collect(),
            FactorAx::S3 => vec![FactorRho::S3(0), FactorRho::S3(1), FactorRho::S3(2)],
            FactorAx::Elem2 { parts, modulo_all } => {
                let k = parts.len();
                let mut out = vec![];
                for m in 0..1u32 << k {
                    // canonical representative: never flip the largest part
                    if *modulo_all && k > 0 && m >> (k - 1) & 1 == 1 {
                        continue;
                    }
                    let s: Vec<usize> = (0..k).filter(|i| m >> i & 1 == 1).map(|i| parts[i]).collect();
                    out.push(FactorRho::Flip(s));
                }
                out.sort_by_key(|r| match r {
                    FactorRho::Flip(s) => (s.len(), s.clone()),
                    _ => (0, vec![]),
                });
                out
            }
        }
    }
}

/// Order of the center of the factor with the given simple roots:
/// `|Z(F_sc)|` divided by the index of the coroot lattice in its saturation.
pub fn factor_center_order(rd: &RootDatum, ct: CartanType, simple: &[usize]) -> usize {
    let rows: IMat = simple.iter().map(|&s| rd.coroots[s].clone()).collect();
    let pi1 = lattice::saturation_index(&rows) as usize;
    let zsc = match ct.family {
        Family::A => ct.rank + 1,
        Family::B | Family::C => 2,
        Family::D => 4,
        _ => 1,
    };
    zsc / pi1
}

/// `A_x` for one factor. Type A depends on the center of the factor; B and D
/// are computed in the special orthogonal group and C in the symplectic group.
pub fn factor_ax(fc: &FactorClass, center: usize) -> FactorAx {
    match fc {
        FactorClass::G2(G2Class::G2a1) => FactorAx::S3,
        FactorClass::G2(_) => FactorAx::Trivial,
        FactorClass::Partition { ctype, parts, .. } => {
            let mut distinct: Vec<usize> = parts.clone();
            distinct.dedup();
            distinct.sort_unstable();
            match ctype.family {
                Family::A => {
                    let g = parts.iter().fold(0, |g, &p| num_integer::gcd(g, p));
                    let n = num_integer::gcd(g, center);
                    if n == 1 {
                        FactorAx::Trivial
                    } else {
                        FactorAx::Cyclic(n)
                    }
                }
                Family::C => {
                    let ev: Vec<usize> = distinct.into_iter().filter(|p| p % 2 == 0).collect();
                    if ev.is_empty() {
                        FactorAx::Trivial
                    } else {
                        FactorAx::Elem2 {
                            parts: ev,
                            modulo_all: false,
                        }
                    }
                }
                _ => {
                    let od: Vec<usize> = distinct.into_iter().filter(|p| p % 2 == 1).collect();
                    if od.len() <= 1 {
                        FactorAx::Trivial
                    } else {
                        FactorAx::Elem2 {
                            parts: od,
                            modulo_all: true,
                        }
                    }
                }
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct ComponentGroupData {
    pub factors: Vec<FactorAx>,
    /// `|π₀(M)_{[x]}|`, the stabilizer of the class in `π₀(M)`.
    pub pi0_stab: usize,
}

impl ComponentGroupData {
    pub fn order(&self) -> usize {
        self.factors.iter().map(|f| f.order()).product()
    }

    /// `|π₀(Z_M(x))| = |A_x| |π₀(M)_{[x]}|`.
    pub fn extended_order(&self) -> usize {
        self.order() * self.pi0_stab
    }

    pub fn irreps(&self) -> Vec<Vec<FactorRho>> {
        let mut out: Vec<Vec<FactorRho>> = vec![vec![]];
        for f in &self.factors {
            let mut next = vec![];
            for prefix in &out {
                for r in f.irreps() {
                    let mut p = prefix.clone();
                    p.push(r);
                    next.push(p);
                }
            }
            out = next;
        }
        out
    }
}

pub fn component_group(rd: &RootDatum, sub: &Subsystem, class: &UnipotentClass) -> Vec<FactorAx> {
    sub.components
        .iter()
        .zip(&class.factors)
        .map(|(c, fc)| factor_ax(fc, factor_center_order(rd, c.ctype, &c.simple)))
        .collect()
}
