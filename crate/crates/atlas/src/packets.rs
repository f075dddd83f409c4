//! Unipotent labels on the components of `T^s//W^s`, correcting
//! cocharacters, the maps `θ_z` and the resulting partition into L-packets.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::fingrp::ConjugacyClasses;
use crate::lattice::{self, Q, QVec};
use crate::params::{self, FormalPoint, KlrParameter};
use crate::rootdata::{RootDatum, WeylGroup};
use crate::subsystem::Subsystem;
use crate::torus::{self, FixedComponent, PseudoLevi, TorusPoint};
use crate::unipotent::{self, UnipotentClass};
use crate::{AtlasError, Result};

pub use crate::params::{is_essentially_discrete, residual_coset as residual_points, ResidualCoset};

pub fn is_tempered(p: &KlrParameter) -> bool {
    p.is_tempered()
}

#[derive(Clone, Debug)]
pub struct LabelledComponent {
    pub id: usize,
    /// Weyl element, a representative of its `W^s`-class.
    pub w: usize,
    pub component: FixedComponent,
    /// Class of `H°` attached to the component.
    pub label: UnipotentClass,
    /// The same class as seen in `Z_H(t)°` for generic `t` on the component.
    pub local_label: UnipotentClass,
    /// Correcting cocharacter.
    pub h_c: Vec<i64>,
    pub generic: TorusPoint,
    pub local_type: String,
    /// More than one label survived every filter.
    pub ambiguous: bool,
}

impl LabelledComponent {
    pub fn dim(&self) -> usize {
        self.component.dim
    }
}

/// `z ↦ W^s · t h_c(z)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaValue {
    pub base: TorusPoint,
    pub shift: Vec<i64>,
}

impl ThetaValue {
    /// Value at `z = q^{k/2}` as an orbit representative.
    pub fn at_half_power(&self, w: &WeylGroup, ws: &[usize], k: i64) -> FormalPoint {
        let p = FormalPoint {
            t: self.base.clone(),
            h: self.shift.iter().map(|x| x * k).collect(),
        };
        params::formal_orbit_min(w, ws, &p)
    }

    pub fn at_one(&self, w: &WeylGroup, ws: &[usize]) -> FormalPoint {
        self.at_half_power(w, ws, 0)
    }

    pub fn at_sqrt_q(&self, w: &WeylGroup, ws: &[usize]) -> FormalPoint {
        self.at_half_power(w, ws, 1)
    }
}

pub fn theta(w: &WeylGroup, c: &LabelledComponent, t: &TorusPoint) -> Result<ThetaValue> {
    match torus::component_label(w, c.w, t) {
        Some(l) if l == c.component.torsion_label => Ok(ThetaValue {
            base: t.clone(),
            shift: c.h_c.clone(),
        }),
        _ => Err(AtlasError::NotOnComponent),
    }
}

/// Components of `T^w` for the class representatives `w` of `W^s`, one per
/// orbit of the centralizer, with the data needed to locate any point.
struct Atlas {
    ws: Vec<usize>,
    classes: ConjugacyClasses,
    /// Per class: the components of `T^rep`.
    comps: Vec<Vec<FixedComponent>>,
    /// Per class and component: (global id of its orbit representative, an
    /// element of the centralizer carrying it there).
    canon: Vec<Vec<(usize, usize)>>,
    list: Vec<(usize, usize)>,
}

impl Atlas {
    fn new(w: &WeylGroup, ws: &[usize]) -> Atlas {
        let classes = torus::group_on(w, ws).classes();
        let mut comps = vec![];
        let mut canon = vec![];
        let mut list = vec![];
        for &r in &classes.reps {
            let el = ws[r as usize];
            let cs = torus::fixed_components(w, el);
            let cent: Vec<usize> = ws
                .iter()
                .copied()
                .filter(|&z| w.mul(z, el) == w.mul(el, z))
                .collect();
            let mut can = vec![(usize::MAX, 0); cs.len()];
            for i in 0..cs.len() {
                if can[i].0 != usize::MAX {
                    continue;
                }
                let id = list.len();
                list.push((comps.len(), i));
                let t = TorusPoint::new(cs[i].base.clone());
                for &z in &cent {
                    let lab = torus::component_label(w, el, &t.act(w, z)).expect("centralizer preserves T^w");
                    let j = cs.iter().position(|c| c.torsion_label == lab).expect("label exists");
                    if can[j].0 == usize::MAX {
                        // z maps component i to j, so z^-1 maps j to i
                        can[j] = (id, w.inv(z));
                    }
                }
            }
            comps.push(cs);
            canon.push(can);
        }
        Atlas {
            ws: ws.to_vec(),
            classes,
            comps,
            canon,
            list,
        }
    }

    fn component(&self, id: usize) -> &FixedComponent {
        let (k, i) = self.list[id];
        &self.comps[k][i]
    }

    /// For a point `(w', t)` with `w' t = t`: the component it lies on, up to
    /// `W^s`, and `u` with `u w' u^-1` the representative and `u t` on it.
    fn locate(&self, w: &WeylGroup, wp: usize, t: &TorusPoint) -> Result<(usize, usize)> {
        let i = self
            .ws
            .binary_search(&wp)
            .map_err(|_| AtlasError::Invariant("element outside W^s".into()))?;
        let k = self.classes.class_of[i];
        let x = self.ws[self.classes.conjugator[i] as usize];
        let v = w.inv(x);
        let rep = self.ws[self.classes.reps[k] as usize];
        let t1 = t.act(w, v);
        let lab = torus::component_label(w, rep, &t1).ok_or(AtlasError::NotOnComponent)?;
        let j = self.comps[k]
            .iter()
            .position(|c| c.torsion_label == lab)
            .ok_or(AtlasError::NotOnComponent)?;
        let (id, z) = self.canon[k][j];
        Ok((id, w.mul(z, v)))
    }
}

fn act_h(w: &WeylGroup, el: usize, h: &[i64]) -> Vec<i64> {
    let hq: QVec = h.iter().map(|&x| lattice::qi(x)).collect();
    w.act(el, &hq).iter().map(|x| x.to_integer()).collect()
}

/// A point of the component on which the pointwise stabilizer in `W^s` and
/// the set of trivial roots are as small as on the whole component.
fn generic_on(rd: &RootDatum, w: &WeylGroup, ws: &[usize], c: &FixedComponent) -> TorusPoint {
    let base = TorusPoint::new(c.base.clone());
    let dirs: Vec<QVec> = c
        .directions
        .iter()
        .map(|d| d.iter().map(|&x| lattice::qi(x)).collect())
        .collect();
    let fixer: Vec<usize> = ws
        .iter()
        .copied()
        .filter(|&v| base.act(w, v) == base && dirs.iter().all(|d| w.act(v, d) == *d))
        .collect();
    let trivial: Vec<usize> = (0..rd.n_roots())
        .filter(|&r| base.root_trivial(rd, r) && c.directions.iter().all(|d| lattice::dot(&rd.roots[r], d) == 0))
        .collect();
    if dirs.is_empty() {
        return base;
    }
    let primes = (1009i64..).filter(|&p| (2..).take_while(|d| d * d <= p).all(|d| p % d != 0));
    for p in primes {
        for mult in 1..p {
            let mut c = base.c.clone();
            for (k, d) in dirs.iter().enumerate() {
                let a = Q::new((mult * (k as i64 * 5 + 1) * (k as i64 + 2)) % p, p);
                for (x, y) in c.iter_mut().zip(d) {
                    *x += a * y;
                }
            }
            let t = TorusPoint::new(c);
            let stab = ws.iter().filter(|&&v| t.act(w, v) == t).count();
            let triv = (0..rd.n_roots()).filter(|&r| t.root_trivial(rd, r)).count();
            if stab == fixer.len() && triv == trivial.len() {
                return t;
            }
        }
    }
    unreachable!()
}

/// Class representatives of `Stab_{W^s}(t)`, as Weyl elements.
fn stab_class_reps(w: &WeylGroup, m: &PseudoLevi) -> Vec<usize> {
    let cc = torus::group_on(w, &m.w_a).classes();
    cc.reps.iter().map(|&r| m.w_a[r as usize]).collect()
}

/// The least class in the `π₀(M)`-orbit of the class with cocharacter `h`.
fn orbit_class(rd: &RootDatum, w: &WeylGroup, m: &PseudoLevi, h: &[i64]) -> Result<UnipotentClass> {
    let mut best: Option<UnipotentClass> = None;
    for &g in &m.pi0 {
        let c = unipotent::class_of_h(rd, &m.subsystem, &act_h(w, g, h))?;
        if best.as_ref().is_none_or(|b| c < *b) {
            best = Some(c);
        }
    }
    Ok(best.expect("identity in the section"))
}

fn klr_orbit_classes(rd: &RootDatum, w: &WeylGroup, m: &PseudoLevi, klr: &[KlrParameter]) -> Result<Vec<UnipotentClass>> {
    let v: Result<Vec<_>> = klr.iter().map(|p| orbit_class(rd, w, m, &p.h)).collect();
    Ok(multiset(v?))
}

fn multiset(mut v: Vec<UnipotentClass>) -> Vec<UnipotentClass> {
    v.sort();
    v
}

fn remove_one(k: &mut Vec<UnipotentClass>, x: &UnipotentClass) -> bool {
    match k.iter().position(|y| y == x) {
        Some(i) => {
            k.remove(i);
            true
        }
        None => false,
    }
}

#[derive(Clone, Debug)]
pub struct Labelling {
    pub ws: Vec<usize>,
    pub h: PseudoLevi,
    pub components: Vec<LabelledComponent>,
    pub warnings: Vec<String>,
    atlas_list: Vec<(usize, usize)>,
}

/// Label every component of `T^s//W^s`. At a generic point `t` of a
/// component the points over `W^s t` must carry, as a multiset, the
/// unipotent classes of the KLR parameters with finite part `t`; components
/// are treated by decreasing dimension, so only the component itself (and
/// others of its dimension) is unknown. Remaining ties are broken by
/// feasibility, then by dimension matching with `Z_T(im γ_x)°`, then by the
/// closure order, with a warning.
pub fn label_components(rd: &RootDatum, w: &WeylGroup, c_s: &[TorusPoint]) -> Result<Labelling> {
    let bd = torus::bernstein_data(rd, w, c_s)?;
    let ws = bd.ws.clone();
    let atlas = Atlas::new(w, &ws);
    let n = atlas.list.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&id| (std::cmp::Reverse(atlas.component(id).dim), id));
    let mut labels: Vec<Option<LabelledComponent>> = vec![None; n];
    let mut warnings = vec![];
    let h_classes = unipotent::enumerate_classes(rd, &bd.h.subsystem)?;
    for &id in &order {
        let comp = atlas.component(id).clone();
        let t = generic_on(rd, w, &ws, &comp);
        let m = params::centralizer(rd, w, c_s, &t)?;
        let mut k = klr_orbit_classes(rd, w, &m, &params::klr_parameters(rd, w, c_s, &t)?)?;
        let mut own = vec![];
        for wp in stab_class_reps(w, &m) {
            let (cid, u) = atlas.locate(w, wp, &t)?;
            if let Some(lc) = &labels[cid] {
                let x = orbit_class(rd, w, &m, &act_h(w, w.inv(u), &lc.h_c))?;
                if !remove_one(&mut k, &x) {
                    return Err(AtlasError::Invariant(format!("no KLR class {x} left at {t} for component {cid}")));
                }
            } else if cid == id {
                own.push(u);
            }
        }
        if own.is_empty() {
            return Err(AtlasError::Invariant(format!("component {id} does not meet its own generic point")));
        }
        let mut cands: Vec<unipotent::ClassData> = vec![];
        for x in unipotent::enumerate_classes(rd, &m.subsystem)? {
            if orbit_class(rd, w, &m, &x.h)? != x.class {
                continue;
            }
            let mut rest = k.clone();
            let mut ok = true;
            for &u in &own {
                let y = orbit_class(rd, w, &m, &act_h(w, w.inv(u), &x.h))?;
                ok &= remove_one(&mut rest, &y);
            }
            if ok {
                cands.push(x);
            }
        }
        if cands.is_empty() {
            return Err(AtlasError::Invariant(format!("no consistent label for component {id}")));
        }
        let feasible: Vec<_> = cands
            .iter()
            .filter(|x| unipotent::class_of_h(rd, &m.subsystem, &act_h(w, comp.w, &x.h)).ok() == Some(x.class.clone()))
            .cloned()
            .collect();
        if !feasible.is_empty() {
            cands = feasible;
        }
        if cands.len() > 1 {
            let mut matching = vec![];
            for x in &cands {
                let hx = unipotent::class_of_h(rd, &bd.h.subsystem, &x.h)?;
                let cd = h_classes.iter().find(|c| c.class == hx).expect("class of H");
                if params::residual_coset(rd, &bd.h.subsystem, cd)?.dim == comp.dim {
                    matching.push(x.clone());
                }
            }
            if !matching.is_empty() {
                cands = matching;
            }
        }
        let ambiguous = cands.len() > 1;
        cands.sort_by(|a, b| a.dim_orbit.cmp(&b.dim_orbit).then(a.class.cmp(&b.class)));
        let x = cands.swap_remove(0);
        let label = unipotent::class_of_h(rd, &bd.h.subsystem, &x.h)?;
        if ambiguous {
            warnings.push(format!("component {id}: several labels possible, chose {label}"));
        }
        labels[id] = Some(LabelledComponent {
            id,
            w: comp.w,
            component: comp,
            label,
            local_label: x.class,
            h_c: x.h,
            generic: t,
            local_type: m.type_label(),
            ambiguous,
        });
    }
    let components: Vec<LabelledComponent> = labels.into_iter().map(|l| l.expect("labelled")).collect();
    let lab = Labelling {
        ws,
        h: bd.h,
        components,
        warnings,
        atlas_list: atlas.list.clone(),
    };
    for c in &lab.components {
        if !check_point(rd, w, c_s, &lab, &atlas, &c.generic)? {
            return Err(AtlasError::Invariant(format!("labels inconsistent at the generic point of component {}", c.id)));
        }
    }
    Ok(lab)
}

/// A point of `T^s//W^s` over a grid orbit, with everything attached to it.
#[derive(Clone, Debug, Serialize)]
pub struct PacketPoint {
    pub id: usize,
    pub w: usize,
    pub t: TorusPoint,
    pub component: usize,
    pub label: UnipotentClass,
    /// Correcting cocharacter transported to `(w, t)`.
    pub h: Vec<i64>,
    /// The matching class of `Z_H(t)°`, least in its `π₀`-orbit.
    pub x: UnipotentClass,
    pub theta_one: FormalPoint,
    pub theta_sqrt_q: FormalPoint,
    pub infinitesimal_character: FormalPoint,
}

/// Equal labels and equal `θ_z` for every `z`, i.e. a `v ∈ W^s` with
/// `v t_1 = t_2` and `v h_1 = h_2`.
pub fn same_l_packet(w: &WeylGroup, ws: &[usize], a: &PacketPoint, b: &PacketPoint) -> bool {
    a.label == b.label
        && ws.iter().any(|&v| a.t.act(w, v) == b.t && act_h(w, v, &a.h) == b.h)
}

fn points_over(
    rd: &RootDatum,
    w: &WeylGroup,
    c_s: &[TorusPoint],
    lab: &Labelling,
    atlas: &Atlas,
    t: &TorusPoint,
) -> Result<(Vec<PacketPoint>, Vec<KlrParameter>)> {
    let m = params::centralizer(rd, w, c_s, t)?;
    let klr = params::klr_parameters(rd, w, c_s, t)?;
    let mut out = vec![];
    for wp in stab_class_reps(w, &m) {
        let (cid, u) = atlas.locate(w, wp, t)?;
        let c = &lab.components[cid];
        let h = act_h(w, w.inv(u), &c.h_c);
        let x = orbit_class(rd, w, &m, &h)?;
        let th = ThetaValue {
            base: t.clone(),
            shift: h.clone(),
        };
        let inf = match klr.iter().find(|p| orbit_class(rd, w, &m, &p.h).ok() == Some(x.clone())) {
            Some(p) => params::infinitesimal_character(w, &lab.ws, p),
            None => return Err(AtlasError::Invariant(format!("no KLR parameter with class {x} at {t}"))),
        };
        out.push(PacketPoint {
            id: 0,
            w: wp,
            t: t.clone(),
            component: cid,
            label: c.label.clone(),
            theta_one: th.at_one(w, &lab.ws),
            theta_sqrt_q: th.at_sqrt_q(w, &lab.ws),
            h,
            x,
            infinitesimal_character: inf,
        });
    }
    Ok((out, klr))
}

fn check_point(
    rd: &RootDatum,
    w: &WeylGroup,
    c_s: &[TorusPoint],
    lab: &Labelling,
    atlas: &Atlas,
    t: &TorusPoint,
) -> Result<bool> {
    let (pts, klr) = match points_over(rd, w, c_s, lab, atlas, t) {
        Ok(v) => v,
        Err(AtlasError::Invariant(_)) => return Ok(false),
        Err(e) => return Err(e),
    };
    let m = params::centralizer(rd, w, c_s, t)?;
    let a = multiset(pts.into_iter().map(|p| p.x).collect());
    let b = klr_orbit_classes(rd, w, &m, &klr)?;
    Ok(a == b)
}

#[derive(Clone, Debug, Serialize)]
pub struct ComponentRow {
    pub id: usize,
    pub w: usize,
    pub base: TorusPoint,
    pub dim: usize,
    pub label: String,
    pub local_label: String,
    pub h_c: Vec<i64>,
    pub theta_at_sqrtq: FormalPoint,
    pub ambiguous: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct PacketReport {
    pub ws_order: usize,
    pub h_type: String,
    pub bound: i64,
    pub components: Vec<ComponentRow>,
    pub points: Vec<PacketPoint>,
    /// Point ids, grouped into L-packets.
    pub packets: Vec<Vec<usize>>,
    /// Over every grid orbit the point classes agree with the KLR classes.
    pub labels_consistent: bool,
    /// `θ_1 = b(t)` and `θ_{√q}` is the infinitesimal character, at every point.
    pub theta_consistent: bool,
    pub warnings: Vec<String>,
}

/// Labels, points over the grid of the given bound, and the L-packets among them.
pub fn packet_report(rd: &RootDatum, w: &WeylGroup, c_s: &[TorusPoint], bound: i64, cap: usize) -> Result<PacketReport> {
    let lab = label_components(rd, w, c_s)?;
    let atlas = Atlas::new(w, &lab.ws);
    debug_assert_eq!(atlas.list, lab.atlas_list);
    let grid = torus::grid_points(rd.rank, bound, cap)?;
    let reps = torus::orbit_reps(w, &lab.ws, &grid);
    let mut points = vec![];
    let mut labels_consistent = true;
    for t in &reps {
        labels_consistent &= check_point(rd, w, c_s, &lab, &atlas, t)?;
        let (pts, _) = points_over(rd, w, c_s, &lab, &atlas, t)?;
        points.extend(pts);
    }
    for (i, p) in points.iter_mut().enumerate() {
        p.id = i;
    }
    let theta_consistent = points.iter().all(|p| {
        p.theta_one == params::FormalPoint::compact(torus::orbit_min(w, &lab.ws, &p.t))
            && p.theta_sqrt_q == p.infinitesimal_character
    });
    let mut groups: BTreeMap<(UnipotentClass, FormalPoint), Vec<usize>> = BTreeMap::new();
    for p in &points {
        groups.entry((p.label.clone(), p.theta_sqrt_q.clone())).or_default().push(p.id);
    }
    let packets: Vec<Vec<usize>> = groups.into_values().collect();
    let components = lab
        .components
        .iter()
        .map(|c| ComponentRow {
            id: c.id,
            w: c.w,
            base: TorusPoint::new(c.component.base.clone()),
            dim: c.dim(),
            label: c.label.to_string(),
            local_label: c.local_label.to_string(),
            h_c: c.h_c.clone(),
            theta_at_sqrtq: ThetaValue {
                base: TorusPoint::new(c.component.base.clone()),
                shift: c.h_c.clone(),
            }
            .at_sqrt_q(w, &lab.ws),
            ambiguous: c.ambiguous,
        })
        .collect();
    Ok(PacketReport {
        ws_order: lab.ws.len(),
        h_type: lab.h.type_label(),
        bound,
        components,
        points,
        packets,
        labels_consistent,
        theta_consistent,
        warnings: lab.warnings.clone(),
    })
}

/// Number of components of `Z_T(im γ_x)° h_x(q^{1/2})` is one; its dimension.
pub fn residual_dims(rd: &RootDatum, sub: &Subsystem) -> Result<HashMap<UnipotentClass, usize>> {
    let mut out = HashMap::new();
    for x in unipotent::enumerate_classes(rd, sub)? {
        out.insert(x.class.clone(), params::residual_coset(rd, sub, &x)?.dim);
    }
    Ok(out)
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
    fn pgl2_labels_and_packet() {
        let (rd, w) = setup("A1", Isogeny::Ad);
        let c_s = vec![TorusPoint::identity(1)];
        let rep = packet_report(&rd, &w, &c_s, 2, 1000).unwrap();
        assert_eq!(rep.components.len(), 3);
        let mut labels: Vec<String> = rep.components.iter().map(|c| c.label.clone()).collect();
        labels.sort();
        assert_eq!(labels, vec!["A1:[1,1]", "A1:[1,1]", "A1:[2]"]);
        assert!(rep.labels_consistent && rep.theta_consistent);
        let minus = TorusPoint::new(vec![Q::new(1, 2)]);
        let over: Vec<usize> = rep.points.iter().filter(|p| p.t == minus).map(|p| p.id).collect();
        assert_eq!(over.len(), 2);
        assert!(rep.packets.contains(&over));
        let one = TorusPoint::identity(1);
        let at_one: Vec<&PacketPoint> = rep.points.iter().filter(|p| p.t == one).collect();
        assert_eq!(at_one.len(), 2);
        assert!(!same_l_packet(&w, &[0, 1], at_one[0], at_one[1]));
        let st = at_one.iter().find(|p| !p.label.is_trivial()).unwrap();
        let cor: Vec<i64> = rd.coroots[0].iter().map(|x| x.abs()).collect();
        assert_eq!(st.theta_sqrt_q.h.iter().map(|x| x.abs()).collect::<Vec<_>>(), cor);
    }

    #[test]
    fn same_packet_is_an_equivalence() {
        let (rd, w) = setup("B2", Isogeny::Ad);
        let c_s = vec![TorusPoint::identity(2)];
        let rep = packet_report(&rd, &w, &c_s, 2, 1000).unwrap();
        let ws: Vec<usize> = (0..w.order()).collect();
        let pts = &rep.points;
        for a in pts {
            assert!(same_l_packet(&w, &ws, a, a));
            for b in pts {
                let ab = same_l_packet(&w, &ws, a, b);
                assert_eq!(ab, same_l_packet(&w, &ws, b, a));
                if ab {
                    for c in pts {
                        if same_l_packet(&w, &ws, b, c) {
                            assert!(same_l_packet(&w, &ws, a, c));
                        }
                    }
                }
            }
        }
        assert!(rep.labels_consistent && rep.theta_consistent, "{:?}", rep.warnings);
    }

    #[test]
    fn theta_rejects_points_off_the_component() {
        let (rd, w) = setup("A1", Isogeny::Ad);
        let lab = label_components(&rd, &w, &[TorusPoint::identity(1)]).unwrap();
        let c = lab.components.iter().find(|c| c.dim() == 0).unwrap();
        let off = TorusPoint::new(vec![Q::new(1, 3)]);
        assert!(matches!(theta(&w, c, &off), Err(AtlasError::NotOnComponent)));
    }
}
