//! Semidirect products, extended quotients of finite Γ-sets, and the
//! character-level Clifford comparison for `N ⋊ Γ`.

use std::collections::HashSet;

use serde::Serialize;

use super::chartab::{character_table, CharacterTable};
use super::cyclotomic::Cyc;
use super::FiniteGroup;
use crate::lattice::{self, Q};
use crate::{AtlasError, Result};

/// Check that `action[γ]` is an automorphism of `n` and that `γ -> action[γ]`
/// is a homomorphism.
pub fn check_action(n: &FiniteGroup, gamma: &FiniteGroup, action: &[Vec<u32>]) -> Result<()> {
    let nn = n.order() as u32;
    if action.len() != gamma.order() {
        return Err(AtlasError::BadAction("one automorphism per element of Γ".into()));
    }
    for (g, phi) in action.iter().enumerate() {
        if phi.len() != nn as usize {
            return Err(AtlasError::BadAction(format!("φ_{g} has wrong length")));
        }
        let mut seen = vec![false; nn as usize];
        for &x in phi {
            if x >= nn || seen[x as usize] {
                return Err(AtlasError::BadAction(format!("φ_{g} is not a bijection")));
            }
            seen[x as usize] = true;
        }
        for a in 0..nn {
            for b in 0..nn {
                if phi[n.mul(a, b) as usize] != n.mul(phi[a as usize], phi[b as usize]) {
                    return Err(AtlasError::BadAction(format!("φ_{g} is not multiplicative")));
                }
            }
        }
    }
    for g in 0..gamma.order() as u32 {
        for h in 0..gamma.order() as u32 {
            let gh = gamma.mul(g, h) as usize;
            for a in 0..nn as usize {
                if action[gh][a] != action[g as usize][action[h as usize][a] as usize] {
                    return Err(AtlasError::BadAction("γ -> φ_γ is not a homomorphism".into()));
                }
            }
        }
    }
    Ok(())
}

/// `N ⋊ Γ` with `(a, γ)` at index `a + |N| γ` and
/// `(a, γ)(b, δ) = (a φ_γ(b), γδ)`.
pub fn semidirect_product(
    n: &FiniteGroup,
    gamma: &FiniteGroup,
    action: &[Vec<u32>],
) -> Result<FiniteGroup> {
    check_action(n, gamma, action)?;
    let (nn, ng) = (n.order(), gamma.order());
    let total = nn * ng;
    if total > super::MAX_GROUP_ORDER {
        return Err(AtlasError::GroupTooLarge(total, super::MAX_GROUP_ORDER));
    }
    let rows = (0..total)
        .map(|x| {
            let (a, g) = ((x % nn) as u32, (x / nn) as u32);
            (0..total)
                .map(|y| {
                    let (b, h) = ((y % nn) as u32, (y / nn) as u32);
                    let c = n.mul(a, action[g as usize][b as usize]);
                    (c as usize + nn * gamma.mul(g, h) as usize) as u32
                })
                .collect()
        })
        .collect();
    FiniteGroup::from_table(rows)
}

/// Check that `x_action[γ]` defines a left action of Γ on `0..m`.
pub fn check_set_action(gamma: &FiniteGroup, x_action: &[Vec<usize>]) -> Result<()> {
    if x_action.len() != gamma.order() {
        return Err(AtlasError::BadAction("one permutation per element of Γ".into()));
    }
    let m = x_action[0].len();
    if x_action[0].iter().enumerate().any(|(i, &x)| i != x) {
        return Err(AtlasError::BadAction("identity acts nontrivially".into()));
    }
    for g in 0..gamma.order() as u32 {
        for h in 0..gamma.order() as u32 {
            let gh = gamma.mul(g, h) as usize;
            for x in 0..m {
                if x_action[gh][x] != x_action[g as usize][x_action[h as usize][x]] {
                    return Err(AtlasError::BadAction("not an action".into()));
                }
            }
        }
    }
    Ok(())
}

#[derive(Clone, Debug, Serialize)]
pub struct OrbitData {
    pub rep: usize,
    pub orbit: Vec<usize>,
    /// `transporter[i] · rep = orbit[i]`.
    pub transporter: Vec<u32>,
    /// Stabilizer of `rep`, sorted.
    pub stabilizer: Vec<u32>,
    /// `|Irr(Γ_rep)|`, read off the character table.
    pub n_irr: usize,
}

/// `(X//Γ)_2`: pairs `(x, τ)` with `τ ∈ Irr(Γ_x)`, up to Γ.
#[derive(Clone, Debug, Serialize)]
pub struct ExtendedQuotientFinite {
    pub orbits: Vec<OrbitData>,
    /// Points as (orbit index, irrep index of the stabilizer); irrep 0 is trivial.
    pub points: Vec<(usize, usize)>,
    orbit_of: Vec<usize>,
}

impl ExtendedQuotientFinite {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Fiber of the projection to `X/Γ` over the orbit of `x`.
    pub fn fiber(&self, x: usize) -> Vec<usize> {
        let o = self.orbit_of[x];
        (0..self.points.len())
            .filter(|&i| self.points[i].0 == o)
            .collect()
    }

    /// The point `(x, triv_x)`.
    pub fn canonical(&self, x: usize) -> usize {
        let o = self.orbit_of[x];
        self.points.iter().position(|&(a, t)| a == o && t == 0).unwrap()
    }

    pub fn orbit_of(&self, x: usize) -> usize {
        self.orbit_of[x]
    }
}

pub fn orbits(gamma: &FiniteGroup, x_action: &[Vec<usize>]) -> Vec<OrbitData> {
    let m = x_action[0].len();
    let mut done = vec![false; m];
    let mut out = Vec::new();
    for x in 0..m {
        if done[x] {
            continue;
        }
        let mut orbit = vec![];
        let mut transporter = vec![];
        let mut stabilizer = vec![];
        let mut pos = vec![usize::MAX; m];
        for g in 0..gamma.order() as u32 {
            let y = x_action[g as usize][x];
            if y == x {
                stabilizer.push(g);
            }
            if pos[y] == usize::MAX {
                pos[y] = orbit.len();
                orbit.push(y);
                transporter.push(g);
                done[y] = true;
            }
        }
        out.push(OrbitData {
            rep: x,
            orbit,
            transporter,
            stabilizer,
            n_irr: 0,
        });
    }
    out
}

pub fn extended_quotient_2(
    gamma: &FiniteGroup,
    x_action: &[Vec<usize>],
) -> Result<ExtendedQuotientFinite> {
    check_set_action(gamma, x_action)?;
    let mut orbs = orbits(gamma, x_action);
    let m = x_action[0].len();
    let mut orbit_of = vec![0; m];
    let mut points = Vec::new();
    for (i, o) in orbs.iter_mut().enumerate() {
        for &y in &o.orbit {
            orbit_of[y] = i;
        }
        let (stab, _) = gamma.subgroup(&o.stabilizer)?;
        o.n_irr = character_table(&stab)?.n_irr();
        for t in 0..o.n_irr {
            points.push((i, t));
        }
    }
    Ok(ExtendedQuotientFinite {
        orbits: orbs,
        points,
        orbit_of,
    })
}

/// `|X//Γ|` by brute force: Γ-orbits on `{(x, g) : g x = x}` under
/// `γ(x, g) = (γx, γgγ^-1)`, grouped by the orbit of `x`.
pub fn extended_quotient_fibers(gamma: &FiniteGroup, x_action: &[Vec<usize>]) -> Vec<usize> {
    let orbs = orbits(gamma, x_action);
    let mut out = Vec::new();
    for o in &orbs {
        let pairs: Vec<(usize, u32)> = o
            .orbit
            .iter()
            .flat_map(|&y| {
                (0..gamma.order() as u32)
                    .filter(move |&g| x_action[g as usize][y] == y)
                    .map(move |g| (y, g))
            })
            .collect();
        let mut seen: HashSet<(usize, u32)> = HashSet::new();
        let mut count = 0;
        for &(y, g) in &pairs {
            if seen.contains(&(y, g)) {
                continue;
            }
            count += 1;
            for c in 0..gamma.order() as u32 {
                seen.insert((x_action[c as usize][y], gamma.conj(c, g)));
            }
        }
        out.push(count);
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct CliffordReport {
    pub irr_semidirect: usize,
    pub extended_quotient_count: usize,
    pub cocycle_trivial_everywhere: bool,
    pub n_abelian: bool,
    /// Per orbit on Irr(N): (representative, |Irr(Γ_χ)|, #irreducibles of N⋊Γ over it).
    pub orbits: Vec<(usize, usize, usize)>,
}

/// Action of Γ on the rows of the character table of `n`:
/// `(γχ)(a) = χ(φ_γ^-1(a))`.
pub fn action_on_irr(
    gamma: &FiniteGroup,
    action: &[Vec<u32>],
    tn: &CharacterTable,
) -> Result<Vec<Vec<usize>>> {
    let k = tn.n_irr();
    let mut out = Vec::with_capacity(gamma.order());
    for g in 0..gamma.order() as u32 {
        let phi_inv = &action[gamma.inv(g) as usize];
        let mut perm = Vec::with_capacity(k);
        for chi in &tn.chars {
            let moved: Vec<&Cyc> = tn
                .classes
                .reps
                .iter()
                .map(|&r| &chi[tn.classes.class_of[phi_inv[r as usize] as usize]])
                .collect();
            let idx = tn
                .chars
                .iter()
                .position(|c| c.iter().zip(&moved).all(|(a, b)| a == *b))
                .ok_or_else(|| AtlasError::BadAction("twisted character is not irreducible".into()))?;
            perm.push(idx);
        }
        out.push(perm);
    }
    Ok(out)
}

pub fn clifford_count(
    n: &FiniteGroup,
    gamma: &FiniteGroup,
    action: &[Vec<u32>],
) -> Result<CliffordReport> {
    let g = semidirect_product(n, gamma, action)?;
    let tn = character_table(n)?;
    let tg = character_table(&g)?;
    let on_irr = action_on_irr(gamma, action, &tn)?;
    let eq = extended_quotient_2(gamma, &on_irr)?;
    let e = tg.exponent;
    let mut orbit_rows = Vec::new();
    let mut covered = 0;
    let mut flag = true;
    for o in &eq.orbits {
        let chi: Vec<Cyc> = tn.chars[o.rep].iter().map(|c| c.lift(e)).collect();
        let mut over = 0;
        for psi in &tg.chars {
            // <Res psi, chi>_N over the classes of N; N sits at indices 0..|N|
            let mut s = Cyc::zero(e);
            for (j, &r) in tn.classes.reps.iter().enumerate() {
                let h = lattice::qi(tn.classes.size(j) as i64);
                let v = &psi[tg.classes.class_of[r as usize]];
                s = s.add(&v.mul(&chi[j].conj()).scale(h));
            }
            let ip = s.scale(Q::new(1, n.order() as i64));
            if !ip.is_zero() {
                over += 1;
            }
        }
        covered += over;
        if over != o.n_irr {
            flag = false;
        }
        orbit_rows.push((o.rep, o.n_irr, over));
    }
    if covered != tg.n_irr() {
        return Err(AtlasError::Invariant(
            "irreducibles of N⋊Γ do not partition over Γ-orbits".into(),
        ));
    }
    Ok(CliffordReport {
        irr_semidirect: tg.n_irr(),
        extended_quotient_count: eq.len(),
        cocycle_trivial_everywhere: flag,
        n_abelian: n.is_abelian(),
        orbits: orbit_rows,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct OrbitPsi {
    pub rep: usize,
    /// Class representatives of `Γ_rep` (as elements of Γ), in tie-break order.
    pub class_reps: Vec<u32>,
    /// `psi[i]` is the irrep (in degree-then-lexicographic order) assigned to class `i`.
    pub psi: Vec<usize>,
    pub degrees: Vec<i64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CIrrSystem {
    pub orbits: Vec<OrbitPsi>,
    /// Number of bijections `c(Γ_x) -> Irr(Γ_x)` with `[1] -> triv`, multiplied over orbits.
    pub admissible_choices: u128,
    pub equivariant: bool,
    pub epsilon_bijective: bool,
}

/// Deterministic c-Irr system: on each orbit representative pair classes and
/// irreducibles in their tie-break orders, then transport along the orbit.
pub fn c_irr_system(gamma: &FiniteGroup, x_action: &[Vec<usize>]) -> Result<CIrrSystem> {
    check_set_action(gamma, x_action)?;
    let orbs = orbits(gamma, x_action);
    let mut out = Vec::new();
    let mut admissible: u128 = 1;
    let mut equivariant = true;
    let mut bijective = true;
    let fibers_c = extended_quotient_fibers(gamma, x_action);
    for (oi, o) in orbs.iter().enumerate() {
        let (sx, embx) = gamma.subgroup(&o.stabilizer)?;
        let tx = character_table(&sx)?;
        let k = tx.n_irr();
        let psi: Vec<usize> = (0..k).collect();
        if tx.classes.len() != k || fibers_c[oi] != k {
            bijective = false;
        }
        admissible = admissible.saturating_mul((1..k as u128).product::<u128>().max(1));
        // transport to every other point of the orbit and check the result
        for (idx, &y) in o.orbit.iter().enumerate().skip(1) {
            let gam = o.transporter[idx];
            let stab_y: Vec<u32> = (0..gamma.order() as u32)
                .filter(|&g| x_action[g as usize][y] == y)
                .collect();
            let (sy, emby) = gamma.subgroup(&stab_y)?;
            let ty = character_table(&sy)?;
            let to_x = |h: u32| -> u32 {
                let g = gamma.conj(gamma.inv(gam), emby[h as usize]);
                embx.binary_search(&g).expect("conjugate lies in Γ_x") as u32
            };
            let mut image = HashSet::new();
            for c in 0..ty.classes.len() {
                let cx = tx.classes.class_of[to_x(ty.classes.reps[c]) as usize];
                let chi = &tx.chars[psi[cx]];
                let moved: Vec<&Cyc> = ty
                    .classes
                    .reps
                    .iter()
                    .map(|&h| &chi[tx.classes.class_of[to_x(h) as usize]])
                    .collect();
                match ty
                    .chars
                    .iter()
                    .position(|row| row.iter().zip(&moved).all(|(a, b)| a == *b))
                {
                    Some(t) => {
                        image.insert(t);
                    }
                    None => equivariant = false,
                }
                // a second transporter γ s with s in Γ_x must give the same answer
                for &s in &o.stabilizer {
                    let alt = gamma.mul(gam, s);
                    let hx = gamma.conj(gamma.inv(alt), emby[ty.classes.reps[c] as usize]);
                    let cx2 = tx.classes.class_of[embx.binary_search(&hx).unwrap()];
                    if cx2 != cx {
                        equivariant = false;
                    }
                }
            }
            if image.len() != ty.n_irr() {
                bijective = false;
            }
        }
        out.push(OrbitPsi {
            rep: o.rep,
            class_reps: tx.classes.reps.iter().map(|&r| embx[r as usize]).collect(),
            psi,
            degrees: tx.degrees(),
        });
    }
    Ok(CIrrSystem {
        orbits: out,
        admissible_choices: admissible,
        equivariant,
        epsilon_bijective: bijective,
    })
}
