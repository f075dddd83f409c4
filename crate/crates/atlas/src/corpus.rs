//! Built-in (root datum, character datum) pairs used by the test suites.

use crate::lattice::Q;
use crate::rootdata::{self, Isogeny, RootDatum, WeylGroup};
use crate::torus::TorusPoint;
use crate::Result;

#[derive(Clone, Debug)]
pub struct Datum {
    pub name: String,
    pub label: &'static str,
    pub isogeny: Isogeny,
    /// Generators of `c_s` in fundamental-coweight coordinates.
    pub generators: Vec<Vec<Q>>,
}

pub struct Built {
    pub rd: RootDatum,
    pub w: WeylGroup,
    pub c_s: Vec<TorusPoint>,
}

impl Datum {
    pub fn build(&self) -> Result<Built> {
        let rd = rootdata::build_root_datum(self.label, self.isogeny.clone())?;
        let w = rootdata::generate_weyl(&rd)?;
        let mut c_s = vec![];
        for g in &self.generators {
            c_s.push(TorusPoint::from_coweights(&rd, g)?);
        }
        if c_s.is_empty() {
            c_s.push(TorusPoint::identity(rd.rank));
        }
        Ok(Built { rd, w, c_s })
    }
}

fn d(label: &'static str, isogeny: Isogeny, gens: &[&[(i64, i64)]]) -> Datum {
    let generators: Vec<Vec<Q>> = gens
        .iter()
        .map(|g| g.iter().map(|&(a, b)| Q::new(a, b)).collect())
        .collect();
    let tag = match isogeny {
        Isogeny::Sc => "sc",
        Isogeny::Ad => "ad",
        Isogeny::Explicit(_) => "lattice",
    };
    let gtxt: Vec<String> = generators
        .iter()
        .map(|g| {
            let c: Vec<String> = g.iter().map(crate::lattice::fmt_q).collect();
            format!("({})", c.join(","))
        })
        .collect();
    let name = if gtxt.is_empty() {
        format!("{label} {tag}, unramified")
    } else {
        format!("{label} {tag}, c_s = {}", gtxt.join(" "))
    };
    Datum {
        name,
        label,
        isogeny,
        generators,
    }
}

pub fn bernstein_corpus() -> Vec<Datum> {
    use Isogeny::{Ad, Sc};
    let third: &[(i64, i64)] = &[(2, 3), (2, 3)];
    vec![
        d("A1", Ad, &[]),
        d("A1", Sc, &[]),
        d("A1", Ad, &[&[(1, 2)]]),
        d("A1", Sc, &[&[(1, 2)]]),
        d("A1", Ad, &[&[(1, 3)]]),
        d("A2", Sc, &[]),
        d("A2", Ad, &[]),
        d("A2", Sc, &[third]),
        d("A2", Ad, &[third]),
        d("A2", Sc, &[&[(1, 2), (0, 1)]]),
        d("B2", Sc, &[]),
        d("B2", Ad, &[]),
        d("C2", Sc, &[&[(1, 2), (0, 1)]]),
        d("B2", Ad, &[&[(1, 2), (0, 1)]]),
        d("C2", Ad, &[&[(0, 1), (1, 2)]]),
        d("G2", Sc, &[]),
        d("G2", Sc, &[&[(1, 2), (0, 1)]]),
        d("G2", Sc, &[&[(0, 1), (1, 3)]]),
        d("A1xA1", Ad, &[]),
        d("A1xA1", Sc, &[&[(1, 2), (1, 2)]]),
        d("A3", Sc, &[]),
        d("A3", Ad, &[&[(1, 2), (0, 1), (1, 2)]]),
        d("B3", Sc, &[]),
        d("C3", Ad, &[]),
        d("B3", Ad, &[&[(1, 2), (0, 1), (0, 1)]]),
    ]
}

/// `PGL_2` with the trivial character: the dual side of the unramified
/// principal series of `SL_2`.
pub fn pgl2() -> Datum {
    d("A1", Isogeny::Ad, &[])
}

/// `c_s` generated by `diag(ζ, ζ², 1)`, `ζ³ = 1`, on the given side.
pub fn a2_cube_root(isogeny: Isogeny) -> Datum {
    d("A2", isogeny, &[&[(2, 3), (2, 3)]])
}

/// The order-two character datum of `G_2`.
pub fn g2_quadratic() -> Datum {
    d("G2", Isogeny::Sc, &[&[(1, 2), (0, 1)]])
}
