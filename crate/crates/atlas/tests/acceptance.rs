//! Acceptance suite: one PASS/FAIL line per criterion.

mod common;

use std::time::{Duration, Instant};

use atlas::corpus::{self, bernstein_corpus};
use atlas::fingrp::clifford::{self, c_irr_system, clifford_count, extended_quotient_2};
use atlas::fingrp::{chartab::character_table, corpus as groups, FiniteGroup};
use atlas::packets::{self, same_l_packet};
use atlas::params;
use atlas::rootdata::{build_root_datum, generate_weyl, CartanType, Isogeny};
use atlas::springer;
use atlas::subsystem;
use atlas::torus::{self, TorusPoint};
use atlas::Q;

use common::*;

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn e<T: std::fmt::Display>(x: T) -> String {
    x.to_string()
}

fn timed(limit: Duration, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let r = f()?;
    let took = start.elapsed();
    check(took < limit, format!("took {took:?}, limit {limit:?}"))?;
    Ok(format!("{r} [{took:.2?}]"))
}

fn cube_root_sides() -> Outcome {
    let mut orders = vec![];
    for iso in [Isogeny::Sc, Isogeny::Ad] {
        let b = corpus::a2_cube_root(iso).build().map_err(e)?;
        let bd = torus::bernstein_data(&b.rd, &b.w, &b.c_s).map_err(e)?;
        let g = torus::group_on(&b.w, &bd.ws);
        check(bd.ws.len() == 1 || g.exponent() == bd.ws.len(), "W^s is not cyclic")?;
        orders.push(bd.ws.len());
    }
    check(orders == [1, 3], format!("|W^s| = {orders:?}"))?;
    Ok("sc: W^s = 1, ad: W^s = Z/3".into())
}

fn g2_quadratic() -> Outcome {
    let b = corpus::g2_quadratic().build().map_err(e)?;
    let bd = torus::bernstein_data(&b.rd, &b.w, &b.c_s).map_err(e)?;
    let ty = bd.h.type_label();
    check(ty == "A1xA1", format!("H has type {ty}"))?;
    check(bd.h.is_connected(), "H is disconnected")?;
    Ok("H of type A1xA1, connected".into())
}

fn pgl2_packet() -> Outcome {
    let b = corpus::pgl2().build().map_err(e)?;
    let rep = packets::packet_report(&b.rd, &b.w, &b.c_s, 2, 1000).map_err(e)?;
    let minus = TorusPoint::new(vec![Q::new(1, 2)]);
    let fiber: Vec<_> = rep.points.iter().filter(|p| p.t == minus).collect();
    check(fiber.len() == 2, format!("{} points over -1", fiber.len()))?;
    check(same_l_packet(&b.w, &[0, 1], fiber[0], fiber[1]), "not one L-packet")?;
    let ids: Vec<usize> = fiber.iter().map(|p| p.id).collect();
    check(rep.packets.contains(&ids), "packet partition disagrees")?;
    let tri = params::enumerate_triangle(&b.rd, &b.w, &b.c_s, 2, 1000).map_err(e)?;
    let row = tri.rows.iter().find(|r| r.orbit == minus).ok_or("no row for -1")?;
    check(row.fiber.len() == 2 && row.matches(), "triangle fiber over -1")?;
    Ok("2 points over t = -1, one L-packet".into())
}

fn condition_table() -> Outcome {
    let golden: &[(&str, &[u64])] = &[
        ("A1", &[2]),
        ("A2", &[2, 3]),
        ("A3", &[2, 3]),
        ("A4", &[2, 3, 5]),
        ("A5", &[2, 3, 5]),
        ("A6", &[2, 3, 5, 7]),
        ("A7", &[2, 3, 5, 7]),
        ("A8", &[2, 3, 5, 7]),
        ("A9", &[2, 3, 5, 7]),
        ("A10", &[2, 3, 5, 7, 11]),
        ("A11", &[2, 3, 5, 7, 11]),
        ("B2", &[2]),
        ("B5", &[2]),
        ("C3", &[2]),
        ("C8", &[2]),
        ("D4", &[2]),
        ("D7", &[2]),
        ("F4", &[2, 3]),
        ("G2", &[2, 3, 5]),
        ("E6", &[2, 3, 5]),
        ("E7", &[2, 3, 5, 7]),
        ("E8", &[2, 3, 5, 7]),
    ];
    let mut n = 0;
    for &(t, ex) in golden {
        let ct = CartanType::parse(t).map_err(e)?;
        for p in [2u64, 3, 5, 7, 11] {
            let got = torus::check_condition_char(&[ct], p).ok;
            check(got != ex.contains(&p), format!("{t}, p = {p}"))?;
            n += 1;
        }
    }
    // reducible: union over factors
    let f = [CartanType::parse("A1").unwrap(), CartanType::parse("G2").unwrap()];
    for p in [2u64, 3, 5, 7, 11] {
        check(torus::check_condition_char(&f, p).ok == (p > 5), format!("A1xG2, p = {p}"))?;
        n += 1;
    }
    Ok(format!("{n} (type, p) verdicts agree with the table"))
}

fn counting_identities() -> Outcome {
    let types = ["A1", "A2", "A3", "A4", "B2", "B3", "B4", "C3", "C4", "D4", "G2"];
    let mut levis = 0;
    for t in types {
        for iso in [Isogeny::Sc, Isogeny::Ad] {
            let rd = build_root_datum(t, iso).map_err(e)?;
            let w = generate_weyl(&rd).map_err(e)?;
            let all: Vec<usize> = (0..w.order()).collect();
            let wg = torus::group_on(&w, &all);
            let full = subsystem::classify(&rd, &all_roots(rd.n_roots())).map_err(e)?;
            let table = springer::springer_table(&rd, &full).map_err(e)?;
            let geometric = table.iter().filter(|d| d.geometric).count();
            let irr_w = brute_class_count(&wg);
            check(geometric == irr_w, format!("{t}: {geometric} pairs, |Irr W| = {irr_w}"))?;
            let grid = torus::grid_points(rd.rank, 4, 1_000_000).map_err(e)?;
            for p in torus::orbit_reps(&w, &all, &grid) {
                let f = springer::affine_springer_fiber(&rd, &w, &p).map_err(e)?;
                let m = torus::stabilizer(&rd, &w, &p).map_err(e)?;
                let stab: Vec<u32> = m.w_a.iter().map(|&x| x as u32).collect();
                let want = brute_subgroup_classes(&wg, &stab);
                check(f.params.len() == want, format!("{t} at {p}: {} against {want}", f.params.len()))?;
                levis += 1;
            }
        }
    }
    Ok(format!("{} root data, {levis} pseudo-Levis, zero failures", types.len() * 2))
}

fn all_roots(n: usize) -> Vec<usize> {
    (0..n).collect()
}

fn triangle_corpus() -> Outcome {
    let data = bernstein_corpus();
    check(data.len() >= 20, "corpus too small")?;
    let mut rows = 0;
    for d in &data {
        let b = d.build().map_err(e)?;
        let rep = params::enumerate_triangle(&b.rd, &b.w, &b.c_s, 4, 1_000_000).map_err(e)?;
        check(rep.counts_match, format!("mismatch for {}", d.name))?;
        rows += rep.rows.len();
    }
    Ok(format!("{} pairs, {rows} orbits, zero mismatches", data.len()))
}

fn clifford_corpus() -> Outcome {
    let mut n = 0;
    let mut natural = 0;
    for entry in groups::corpus() {
        let g = clifford::semidirect_product(&entry.n, &entry.gamma, &entry.action).map_err(e)?;
        check(g.order() <= 200, format!("{} too large", entry.name))?;
        let rep = clifford_count(&entry.n, &entry.gamma, &entry.action).map_err(e)?;
        let oracle = brute_class_count(&g);
        check(
            rep.irr_semidirect == oracle && rep.extended_quotient_count == oracle,
            format!("{}: {} / {} / {oracle}", entry.name, rep.irr_semidirect, rep.extended_quotient_count),
        )?;
        if rep.n_abelian {
            check(rep.cocycle_trivial_everywhere, format!("{}: abelian N not natural", entry.name))?;
            natural += 1;
        }
        n += 1;
    }
    Ok(format!("{n} groups agree, {natural} with abelian N flagged natural"))
}

fn theta_consistency() -> Outcome {
    let mut comps = 0;
    let mut points = 0;
    for d in bernstein_corpus() {
        let b = d.build().map_err(e)?;
        let bd = torus::bernstein_data(&b.rd, &b.w, &b.c_s).map_err(e)?;
        let bound = if b.rd.rank <= 2 { 4 } else { 2 };
        let rep = packets::packet_report(&b.rd, &b.w, &b.c_s, bound, 1_000_000).map_err(e)?;
        check(rep.labels_consistent, format!("{}: labels", d.name))?;
        for p in &rep.points {
            let b_t = params::FormalPoint::compact(torus::orbit_min(&b.w, &bd.ws, &p.t));
            check(p.theta_one == b_t, format!("{}: theta_1 at p{}", d.name, p.id))?;
            check(
                p.theta_sqrt_q == p.infinitesimal_character,
                format!("{}: theta_sqrt_q at p{}", d.name, p.id),
            )?;
        }
        let lab = packets::label_components(&b.rd, &b.w, &b.c_s).map_err(e)?;
        for c in &lab.components {
            let th = packets::theta(&b.w, c, &c.generic).map_err(e)?;
            let klr = params::klr_parameters(&b.rd, &b.w, &b.c_s, &c.generic).map_err(e)?;
            let want = klr.iter().find(|k| k.x == c.local_label).ok_or("no KLR parameter for the label")?;
            check(
                th.at_sqrt_q(&b.w, &bd.ws) == params::infinitesimal_character(&b.w, &bd.ws, want),
                format!("{}: component {}", d.name, c.id),
            )?;
        }
        comps += lab.components.len();
        points += rep.points.len();
    }
    Ok(format!("{comps} components, {points} points"))
}

fn fiber_equality() -> Outcome {
    let mut actions: Vec<(String, FiniteGroup, Vec<Vec<usize>>)> = vec![];
    for entry in groups::corpus() {
        let tn = character_table(&entry.n).map_err(e)?;
        let on_irr = clifford::action_on_irr(&entry.gamma, &entry.action, &tn).map_err(e)?;
        actions.push((format!("{} on Irr N", entry.name), entry.gamma, on_irr));
    }
    for (name, g) in small_groups() {
        let n = g.order() as u32;
        actions.push((format!("{name} by conjugation"), g.clone(), conjugation_action(&g)));
        for a in 0..n {
            let x = coset_action(&g, &[a]);
            actions.push((format!("{name} on cosets of <{a}>"), g.clone(), x));
        }
    }
    for d in bernstein_corpus().into_iter().take(20) {
        let b = d.build().map_err(e)?;
        let bd = torus::bernstein_data(&b.rd, &b.w, &b.c_s).map_err(e)?;
        let grid = torus::grid_points(b.rd.rank, 3, 100_000).map_err(e)?;
        let idx: std::collections::HashMap<TorusPoint, usize> =
            grid.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let x: Vec<Vec<usize>> = bd
            .ws
            .iter()
            .map(|&g| grid.iter().map(|p| idx[&p.act(&b.w, g)]).collect())
            .collect();
        actions.push((format!("W^s of {} on T[<=3]", d.name), torus::group_on(&b.w, &bd.ws), x));
    }
    let mut orbits = 0;
    for (name, g, x) in &actions {
        let eq = extended_quotient_2(g, x).map_err(e)?;
        let first = clifford::extended_quotient_fibers(g, x);
        for (i, o) in eq.orbits.iter().enumerate() {
            let oracle = brute_subgroup_classes(g, &o.stabilizer);
            check(first[i] == oracle && o.n_irr == oracle, format!("{name}, orbit of {}", o.rep))?;
            orbits += 1;
        }
        let sys = c_irr_system(g, x).map_err(e)?;
        check(sys.epsilon_bijective && sys.equivariant, format!("{name}: epsilon"))?;
    }
    Ok(format!("{} actions, {orbits} orbits; every epsilon bijective and equivariant", actions.len()))
}

type Criterion = (&'static str, Box<dyn Fn() -> Outcome>);

fn main() {
    let criteria: Vec<Criterion> = vec![
        ("cube-root datum on SL3 / PGL3", Box::new(|| timed(Duration::from_secs(1), cube_root_sides))),
        ("G2 order-two datum", Box::new(|| timed(Duration::from_secs(1), g2_quadratic))),
        ("PGL2 packet over -1", Box::new(|| timed(Duration::from_secs(1), pgl2_packet))),
        ("residual characteristic table", Box::new(condition_table)),
        ("counting identities", Box::new(|| timed(Duration::from_secs(60), counting_identities))),
        ("triangle cardinalities", Box::new(triangle_corpus)),
        ("Clifford corpus", Box::new(clifford_corpus)),
        ("theta consistency", Box::new(theta_consistency)),
        ("fiber equality and epsilon", Box::new(fiber_equality)),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(msg) => println!("PASS {}: {name}: {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL {}: {name}: {msg}", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
