//! Command-line front end. Every command renders to a string so output can
//! be compared byte for byte.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::config::{self, JobConfig};
use crate::lattice::fmt_qvec;
use crate::params;
use crate::springer;
use crate::torus::{self, PseudoLevi};
use crate::unipotent::fmt_rho;
use crate::{packets, AtlasError, Result};

#[derive(Debug, Parser)]
#[command(name = "atlas", version, about = "Parameters of principal-series Bernstein components")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// H = Z_G(c_s), its component group and W^s
    Bernstein(Opts),
    /// Compare (T^s//W^s)_2 with KLR parameters over a grid of torus points
    Triangle(Opts),
    /// Extended Springer correspondence for H
    Springer(Opts),
    /// Labelled components of T^s//W^s and L-packets over a grid
    Packets(Opts),
}

#[derive(Debug, Args)]
pub struct Opts {
    #[arg(long)]
    pub config: PathBuf,
    /// Denominator bound of the torus grid.
    #[arg(long)]
    pub bound: Option<i64>,
    /// Size of the residue field; fixes p when --p is absent.
    #[arg(long)]
    pub q: Option<u64>,
    /// Residue characteristic.
    #[arg(long)]
    pub p: Option<u64>,
    #[arg(long, conflicts_with = "csv")]
    pub json: bool,
    #[arg(long)]
    pub csv: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Csv,
}

impl Opts {
    fn format(&self) -> Format {
        if self.json {
            Format::Json
        } else if self.csv {
            Format::Csv
        } else {
            Format::Text
        }
    }

    fn job(&self) -> Result<JobConfig> {
        let mut job = config::load(&self.config)?;
        if self.bound.is_some() {
            job.run.bound = self.bound;
        }
        if self.p.is_some() {
            job.run.p = self.p;
        }
        if self.q.is_some() {
            job.run.q = self.q;
        }
        if job.bound() < 1 {
            return Err(AtlasError::Config("bound must be positive".into()));
        }
        Ok(job)
    }
}

/// Process exit code for an error.
pub fn exit_code(e: &AtlasError) -> i32 {
    match e {
        AtlasError::Invariant(_) | AtlasError::BadAction(_) | AtlasError::NotOnComponent => 2,
        _ => 3,
    }
}

/// Rendered output and whether every checked identity held.
pub struct Outcome {
    pub text: String,
    pub ok: bool,
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Bernstein(o) => bernstein(&o.job()?, o.format()),
        Command::Triangle(o) => triangle(&o.job()?, o.format()),
        Command::Springer(o) => springer_cmd(&o.job()?, o.format()),
        Command::Packets(o) => packets_cmd(&o.job()?, o.format()),
    }
}

fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn csv_text(header: &[&str], rows: Vec<Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(vec![]);
    w.write_record(header).expect("in memory");
    for r in rows {
        w.write_record(&r).expect("in memory");
    }
    String::from_utf8(w.into_inner().expect("in memory")).expect("utf8")
}

fn or_one(s: String) -> String {
    if s.is_empty() {
        "1".into()
    } else {
        s
    }
}

/// A short name for `W^s`.
fn ws_structure(job: &JobConfig, h: &PseudoLevi) -> String {
    let pi = h.pi0.len();
    let base = if h.w_m0.len() == 1 {
        String::new()
    } else {
        format!("W({})", h.type_label())
    };
    if pi == 1 {
        return or_one(base);
    }
    let g = h.pi0_group(&job.w);
    let tail = if g.exponent() == pi {
        format!("Z/{pi}")
    } else if g.is_abelian() {
        format!("abelian of order {pi}")
    } else {
        format!("non-abelian of order {pi}")
    };
    if base.is_empty() {
        tail
    } else {
        format!("{base} x| {tail}")
    }
}

#[derive(Serialize)]
struct BernsteinOut {
    group: String,
    c_s: Vec<String>,
    h_type: String,
    h_equals_g: bool,
    connected: bool,
    pi0_order: usize,
    ws_order: usize,
    ws_structure: String,
    p: Option<u64>,
    condition_ok: Option<bool>,
    excluded_primes: Vec<(String, Vec<u64>)>,
    sc_criterion_applies: Option<bool>,
}

fn bernstein(job: &JobConfig, fmt: Format) -> Result<Outcome> {
    let bd = torus::bernstein_data(&job.rd, &job.w, &job.c_s)?;
    let h = &bd.h;
    let p = job.p();
    let h_types = h.subsystem.types();
    let cond = p.map(|p| torus::check_condition_char(&h_types, p));
    let hint = match p {
        Some(p) => Some(torus::connectedness_hint(&job.rd, &job.w, &job.c_s, p)?),
        None => None,
    };
    let out = BernsteinOut {
        group: job.rd.label(),
        c_s: job.c_s.iter().map(|t| t.to_string()).collect(),
        h_type: or_one(h.type_label()),
        h_equals_g: h.subsystem.roots.len() == job.rd.n_roots(),
        connected: h.is_connected(),
        pi0_order: h.pi0.len(),
        ws_order: bd.ws.len(),
        ws_structure: ws_structure(job, h),
        p,
        condition_ok: cond.as_ref().map(|c| c.ok),
        excluded_primes: h_types.iter().map(|f| (f.to_string(), torus::excluded_primes(f))).collect(),
        sc_criterion_applies: hint.map(|h| h.sc_criterion_applies),
    };
    let text = match fmt {
        Format::Json => json(&out),
        Format::Csv => csv_text(
            &["key", "value"],
            vec![
                vec!["group".into(), out.group.clone()],
                vec!["h_type".into(), out.h_type.clone()],
                vec!["h_equals_g".into(), out.h_equals_g.to_string()],
                vec!["connected".into(), out.connected.to_string()],
                vec!["pi0_order".into(), out.pi0_order.to_string()],
                vec!["ws_order".into(), out.ws_order.to_string()],
                vec!["ws_structure".into(), out.ws_structure.clone()],
                vec!["condition_ok".into(), out.condition_ok.map(|b| b.to_string()).unwrap_or_default()],
            ],
        ),
        Format::Text => {
            let mut s = String::new();
            writeln!(s, "G: {}", out.group).unwrap();
            writeln!(s, "c_s generators (cocharacter coordinates): {}", out.c_s.join(" ")).unwrap();
            if out.h_equals_g {
                writeln!(s, "H = G").unwrap();
            }
            let conn = if out.connected { "connected" } else { "disconnected" };
            writeln!(s, "H: {}, {conn}", out.h_type).unwrap();
            writeln!(s, "pi0(H): order {}", out.pi0_order).unwrap();
            writeln!(s, "W^s = {} (order {})", out.ws_structure, out.ws_order).unwrap();
            match (p, &cond) {
                (Some(p), Some(c)) => {
                    let v = if c.ok { "satisfied" } else { "fails" };
                    writeln!(s, "condition on p = {p}: {v}").unwrap();
                }
                _ => writeln!(s, "condition on p: not checked (no p given)").unwrap(),
            }
            for (f, ex) in &out.excluded_primes {
                let l: Vec<String> = ex.iter().map(|p| p.to_string()).collect();
                writeln!(s, "  {f}: excluded p in {{{}}}", l.join(",")).unwrap();
            }
            s
        }
    };
    Ok(Outcome { text, ok: true })
}

fn triangle(job: &JobConfig, fmt: Format) -> Result<Outcome> {
    let rep = params::enumerate_triangle(&job.rd, &job.w, &job.c_s, job.bound(), job.cap())?;
    let text = match fmt {
        Format::Json => json(&rep),
        Format::Csv => csv_text(
            &["orbit", "orbit_size", "stabilizer_order", "stabilizer_type", "generic", "extq2", "klr", "match"],
            rep.rows
                .iter()
                .map(|r| {
                    vec![
                        r.orbit.to_string(),
                        r.orbit_size.to_string(),
                        r.stabilizer_order.to_string(),
                        or_one(r.stabilizer_type.clone()),
                        r.generic.to_string(),
                        r.fiber.len().to_string(),
                        r.klr.len().to_string(),
                        r.matches().to_string(),
                    ]
                })
                .collect(),
        ),
        Format::Text => {
            let mut s = String::new();
            writeln!(s, "H: {}  |W^s| = {}  bound = {}", or_one(rep.h_type.clone()), rep.ws_order, rep.bound).unwrap();
            writeln!(s, "{:<28} {:>5} {:>5} {:<12} {:>6} {:>4}  match", "orbit", "size", "stab", "Z_H(t)", "extq2", "klr").unwrap();
            for r in &rep.rows {
                let name = if r.generic { format!("{} (generic)", r.orbit) } else { r.orbit.to_string() };
                writeln!(
                    s,
                    "{:<28} {:>5} {:>5} {:<12} {:>6} {:>4}  {}",
                    name,
                    r.orbit_size,
                    r.stabilizer_order,
                    or_one(r.stabilizer_type.clone()),
                    r.fiber.len(),
                    r.klr.len(),
                    r.matches()
                )
                .unwrap();
            }
            writeln!(s, "total: extq2 = {}, klr = {}, match = {}", rep.extq2_total, rep.klr_total, rep.counts_match).unwrap();
            s
        }
    };
    Ok(Outcome {
        text,
        ok: rep.counts_match,
    })
}

#[derive(Serialize)]
struct SpringerRow {
    class: String,
    rho: String,
    sigma: usize,
    orbit_size: usize,
    irrep: String,
}

#[derive(Serialize)]
struct SpringerOut {
    h_type: String,
    rows: Vec<SpringerRow>,
    irr_w_h: usize,
    matches: bool,
}

fn springer_cmd(job: &JobConfig, fmt: Format) -> Result<Outcome> {
    let bd = torus::bernstein_data(&job.rd, &job.w, &job.c_s)?;
    let table = springer::extended_springer_table(&job.rd, &job.w, &bd.h)?;
    let n = springer::n_irr_w_m(&job.w, &bd.h);
    let rows: Vec<SpringerRow> = table
        .iter()
        .map(|d| SpringerRow {
            class: d.class.to_string(),
            rho: or_one(fmt_rho(&d.rho)),
            sigma: d.sigma,
            orbit_size: d.orbit_size,
            irrep: d.irrep.clone(),
        })
        .collect();
    let out = SpringerOut {
        h_type: or_one(bd.h.type_label()),
        matches: rows.len() == n,
        rows,
        irr_w_h: n,
    };
    let text = match fmt {
        Format::Json => json(&out),
        Format::Csv => csv_text(
            &["class", "rho", "sigma", "orbit_size", "irrep"],
            out.rows
                .iter()
                .map(|r| vec![r.class.clone(), r.rho.clone(), r.sigma.to_string(), r.orbit_size.to_string(), r.irrep.clone()])
                .collect(),
        ),
        Format::Text => {
            let mut s = String::new();
            writeln!(s, "H: {}", out.h_type).unwrap();
            writeln!(s, "{:<24} {:<16} {:>5} {:>5}  irrep", "class", "rho", "sigma", "orbit").unwrap();
            for r in &out.rows {
                writeln!(s, "{:<24} {:<16} {:>5} {:>5}  {}", r.class, r.rho, r.sigma, r.orbit_size, r.irrep).unwrap();
            }
            writeln!(s, "pairs = {}, |Irr W_H| = {}, match = {}", out.rows.len(), out.irr_w_h, out.matches).unwrap();
            s
        }
    };
    Ok(Outcome { text, ok: out.matches })
}

fn packets_cmd(job: &JobConfig, fmt: Format) -> Result<Outcome> {
    let rep = packets::packet_report(&job.rd, &job.w, &job.c_s, job.bound(), job.cap())?;
    let ok = rep.labels_consistent && rep.theta_consistent;
    let text = match fmt {
        Format::Json => json(&rep),
        Format::Csv => csv_text(
            &["point", "w", "t", "component", "label", "x", "theta_sqrt_q", "packet"],
            rep.points
                .iter()
                .map(|p| {
                    let k = rep.packets.iter().position(|g| g.contains(&p.id)).expect("partition");
                    vec![
                        p.id.to_string(),
                        p.w.to_string(),
                        p.t.to_string(),
                        p.component.to_string(),
                        p.label.to_string(),
                        p.x.to_string(),
                        p.theta_sqrt_q.to_string(),
                        k.to_string(),
                    ]
                })
                .collect(),
        ),
        Format::Text => {
            let mut s = String::new();
            writeln!(s, "H: {}  |W^s| = {}  bound = {}", or_one(rep.h_type.clone()), rep.ws_order, rep.bound).unwrap();
            writeln!(s, "components:").unwrap();
            for c in &rep.components {
                let mark = if c.ambiguous { "  (ambiguous)" } else { "" };
                writeln!(
                    s,
                    "  c{:<3} w={:<4} dim {} base {:<20} label {:<20} h_c ({}){mark}",
                    c.id,
                    c.w,
                    c.dim,
                    fmt_qvec(&c.base.c),
                    c.label,
                    c.h_c.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
                )
                .unwrap();
            }
            writeln!(s, "points:").unwrap();
            for p in &rep.points {
                writeln!(
                    s,
                    "  p{:<4} [w={}, t={}] on c{} label {} theta(sqrt q) = {}",
                    p.id, p.w, p.t, p.component, p.label, p.theta_sqrt_q
                )
                .unwrap();
            }
            writeln!(s, "L-packets with more than one point:").unwrap();
            for g in rep.packets.iter().filter(|g| g.len() > 1) {
                let ids: Vec<String> = g.iter().map(|i| format!("p{i}")).collect();
                writeln!(s, "  {{{}}}", ids.join(", ")).unwrap();
            }
            writeln!(
                s,
                "packets = {}, labels consistent = {}, theta consistent = {}",
                rep.packets.len(),
                rep.labels_consistent,
                rep.theta_consistent
            )
            .unwrap();
            for w in &rep.warnings {
                writeln!(s, "warning: {w}").unwrap();
            }
            s
        }
    };
    Ok(Outcome { text, ok })
}
