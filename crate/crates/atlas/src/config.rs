//! Job files: a root datum, a character datum and run options, in TOML.
//!
//! ```toml
//! type = "A2"
//! isogeny = "ad"            # "sc", "ad" or "explicit"
//! # lattice = [[1, 0], [0, 1]]   rows of X* in fundamental-weight coordinates
//!
//! [character]
//! generators = [["2/3", "2/3"]]   # fundamental-coweight coordinates
//! # lattice_generators = [...]    # coordinates in the cocharacter lattice
//!
//! [run]
//! bound = 3
//! p = 5
//! ```

use std::path::Path;

use serde::Deserialize;

use crate::lattice::{IMat, Q};
use crate::rootdata::{self, Isogeny, RootDatum, WeylGroup};
use crate::torus::TorusPoint;
use crate::{AtlasError, Result};

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
enum Num {
    Int(i64),
    Str(String),
}

impl Num {
    fn to_q(&self) -> Result<Q> {
        match self {
            Num::Int(n) => Ok(Q::from_integer(*n)),
            Num::Str(s) => parse_q(s),
        }
    }
}

pub fn parse_q(s: &str) -> Result<Q> {
    let bad = || AtlasError::Config(format!("not a rational number: {s:?}"));
    let s = s.trim();
    match s.split_once('/') {
        Some((a, b)) => {
            let a: i64 = a.trim().parse().map_err(|_| bad())?;
            let b: i64 = b.trim().parse().map_err(|_| bad())?;
            if b == 0 {
                return Err(bad());
            }
            Ok(Q::new(a, b))
        }
        None => Ok(Q::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Raw {
    #[serde(rename = "type")]
    ty: String,
    #[serde(default)]
    isogeny: Option<String>,
    #[serde(default)]
    lattice: Option<IMat>,
    #[serde(default)]
    character: Option<RawCharacter>,
    #[serde(default)]
    run: RunOptions,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCharacter {
    #[serde(default)]
    generators: Vec<Vec<Num>>,
    #[serde(default)]
    lattice_generators: Vec<Vec<Num>>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunOptions {
    pub bound: Option<i64>,
    pub p: Option<u64>,
    pub q: Option<u64>,
    pub cap: Option<usize>,
}

pub struct JobConfig {
    pub label: String,
    pub rd: RootDatum,
    pub w: WeylGroup,
    /// Generators of the finite subgroup of `T` encoding the character.
    pub c_s: Vec<TorusPoint>,
    pub run: RunOptions,
}

pub const DEFAULT_BOUND: i64 = 3;
pub const DEFAULT_CAP: usize = 200_000;

impl JobConfig {
    pub fn bound(&self) -> i64 {
        self.run.bound.unwrap_or(DEFAULT_BOUND)
    }

    pub fn cap(&self) -> usize {
        self.run.cap.unwrap_or(DEFAULT_CAP)
    }

    /// The residue characteristic, given directly or through `q`.
    pub fn p(&self) -> Option<u64> {
        self.run.p.or_else(|| self.run.q.and_then(prime_of))
    }
}

/// `p` when `q` is a power of the prime `p`.
pub fn prime_of(q: u64) -> Option<u64> {
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut r = q;
    while r.is_multiple_of(p) {
        r /= p;
    }
    (r == 1).then_some(p)
}

pub fn parse(text: &str) -> Result<JobConfig> {
    let raw: Raw = toml::from_str(text).map_err(|e| AtlasError::Config(e.to_string()))?;
    let isogeny = match (raw.isogeny.as_deref(), raw.lattice) {
        (Some("sc") | None, None) => Isogeny::Sc,
        (Some("ad"), None) => Isogeny::Ad,
        (Some("explicit") | None, Some(l)) => Isogeny::Explicit(l),
        (Some(other), None) => return Err(AtlasError::Config(format!("unknown isogeny {other:?}"))),
        (Some(other), Some(_)) => {
            return Err(AtlasError::Config(format!("isogeny {other:?} given together with a lattice")))
        }
    };
    let rd = rootdata::build_root_datum(&raw.ty, isogeny)?;
    let w = rootdata::generate_weyl(&rd)?;
    let mut c_s = vec![];
    if let Some(ch) = raw.character {
        for g in &ch.generators {
            let v = coords(g, rd.rank)?;
            c_s.push(TorusPoint::from_coweights(&rd, &v)?);
        }
        for g in &ch.lattice_generators {
            c_s.push(TorusPoint::new(coords(g, rd.rank)?));
        }
    }
    if c_s.is_empty() {
        c_s.push(TorusPoint::identity(rd.rank));
    }
    if let Some(b) = raw.run.bound {
        if b < 1 {
            return Err(AtlasError::Config("bound must be positive".into()));
        }
    }
    Ok(JobConfig {
        label: raw.ty,
        rd,
        w,
        c_s,
        run: raw.run,
    })
}

fn coords(g: &[Num], rank: usize) -> Result<Vec<Q>> {
    if g.len() != rank {
        return Err(AtlasError::Config(format!("generator has {} coordinates, rank is {rank}", g.len())));
    }
    g.iter().map(Num::to_q).collect()
}

pub fn load(path: &Path) -> Result<JobConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| AtlasError::Config(format!("{}: {e}", path.display())))?;
    parse(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_rationals_and_defaults() {
        let c = parse("type = \"A2\"\nisogeny = \"ad\"\n[character]\ngenerators = [[\"2/3\", \"2/3\"]]\n").unwrap();
        assert_eq!(c.c_s.len(), 1);
        assert_eq!(c.bound(), DEFAULT_BOUND);
        assert_eq!(c.c_s[0].order(), 3);
    }

    #[test]
    fn reports_line_of_a_syntax_error() {
        let e = parse("type = \"A2\"\nisogeny = \n").err().unwrap();
        assert!(matches!(e, AtlasError::Config(ref m) if m.contains("line 2")), "{e}");
    }

    #[test]
    fn rejects_wrong_arity_and_unknown_keys() {
        assert!(parse("type = \"A2\"\n[character]\ngenerators = [[\"1/2\"]]\n").is_err());
        assert!(parse("type = \"A2\"\ncolour = 3\n").is_err());
    }

    #[test]
    fn prime_of_prime_powers() {
        assert_eq!(prime_of(9), Some(3));
        assert_eq!(prime_of(12), None);
        assert_eq!(prime_of(2), Some(2));
    }
}
