//! Rational unipotent classes over a prime field, found by brute force, are
//! counted by the conjugacy classes of `A_x` (split groups, good primes).

use std::collections::{BTreeMap, HashSet, VecDeque};

use atlas::rootdata::{build_root_datum, Isogeny};
use atlas::subsystem;
use atlas::unipotent::{self, FactorClass};

type M = Vec<i64>;

fn mul(a: &M, b: &M, n: usize, p: i64) -> M {
    let mut c = vec![0; n * n];
    for i in 0..n {
        for k in 0..n {
            let x = a[i * n + k];
            if x == 0 {
                continue;
            }
            for j in 0..n {
                c[i * n + j] = (c[i * n + j] + x * b[k * n + j]) % p;
            }
        }
    }
    c
}

fn ident(n: usize) -> M {
    (0..n * n).map(|i| i64::from(i / n == i % n)).collect()
}

fn elem(n: usize, i: usize, j: usize, v: i64, p: i64) -> M {
    let mut m = ident(n);
    m[i * n + j] = (m[i * n + j] + v).rem_euclid(p);
    m
}

fn inv_mod(a: i64, p: i64) -> i64 {
    (1..p).find(|x| a * x % p == 1).unwrap()
}

fn rank(a: &M, n: usize, p: i64) -> usize {
    let mut m = a.clone();
    let mut r = 0;
    for c in 0..n {
        let Some(piv) = (r..n).find(|&i| m[i * n + c] % p != 0) else { continue };
        for j in 0..n {
            m.swap(r * n + j, piv * n + j);
        }
        let iv = inv_mod(m[r * n + c].rem_euclid(p), p);
        for i in 0..n {
            if i != r && m[i * n + c] != 0 {
                let f = m[i * n + c] * iv % p;
                for j in 0..n {
                    m[i * n + j] = (m[i * n + j] - f * m[r * n + j]).rem_euclid(p);
                }
            }
        }
        r += 1;
    }
    r
}

/// Jordan type of a unipotent matrix, from the ranks of powers of `u - 1`.
fn jordan_type(u: &M, n: usize, p: i64) -> Vec<usize> {
    let mut nil = u.clone();
    for i in 0..n {
        nil[i * n + i] = (nil[i * n + i] - 1).rem_euclid(p);
    }
    let mut ranks = vec![n];
    let mut pw = ident(n);
    for _ in 0..n {
        pw = mul(&pw, &nil, n, p);
        ranks.push(rank(&pw, n, p));
    }
    // at_least[k] = number of blocks of size >= k
    let at_least: Vec<usize> = (1..=n).map(|k| ranks[k - 1] - ranks[k]).collect();
    let mut parts = vec![];
    for k in (1..=n).rev() {
        let exact = at_least[k - 1] - at_least.get(k).copied().unwrap_or(0);
        parts.extend(std::iter::repeat_n(k, exact));
    }
    parts
}

fn closure(gens: &[M], n: usize, p: i64) -> Vec<M> {
    let mut seen: HashSet<M> = HashSet::new();
    let mut q = VecDeque::new();
    seen.insert(ident(n));
    q.push_back(ident(n));
    while let Some(x) = q.pop_front() {
        for g in gens {
            let y = mul(&x, g, n, p);
            if seen.insert(y.clone()) {
                q.push_back(y);
            }
        }
    }
    seen.into_iter().collect()
}

/// Orbit of `u` under conjugation by the group generated by `gens` (given
/// with their inverses).
fn conj_orbit(u: &M, gens: &[(M, M)], n: usize, p: i64) -> HashSet<M> {
    let mut seen: HashSet<M> = HashSet::new();
    let mut q = VecDeque::new();
    seen.insert(u.clone());
    q.push_back(u.clone());
    while let Some(x) = q.pop_front() {
        for (g, gi) in gens {
            let y = mul(&mul(g, &x, n, p), gi, n, p);
            if seen.insert(y.clone()) {
                q.push_back(y);
            }
        }
    }
    seen
}

fn with_inverses(gens: Vec<M>, n: usize, p: i64) -> Vec<(M, M)> {
    gens.into_iter()
        .map(|g| {
            let mut x = g.clone();
            loop {
                let y = mul(&x, &g, n, p);
                if y == ident(n) {
                    return (g, x);
                }
                x = y;
            }
        })
        .collect()
}

fn expected_counts(label: &str, iso: Isogeny) -> BTreeMap<Vec<usize>, usize> {
    let rd = build_root_datum(label, iso).unwrap();
    let all: Vec<usize> = (0..rd.n_roots()).collect();
    let sub = subsystem::classify(&rd, &all).unwrap();
    let mut out = BTreeMap::new();
    for cd in unipotent::enumerate_classes(&rd, &sub).unwrap() {
        let ax = unipotent::component_group(&rd, &sub, &cd.class);
        let k: usize = ax.iter().map(|a| a.irreps().len()).product();
        let FactorClass::Partition { parts, .. } = &cd.class.factors[0] else { panic!() };
        out.insert(parts.clone(), k);
    }
    out
}

#[test]
fn sp4_over_f3() {
    let (n, p) = (4, 3);
    // symplectic form [[0, I], [-I, 0]]
    let gens = vec![
        elem(n, 0, 2, 1, p),
        elem(n, 1, 3, 1, p),
        elem(n, 2, 0, 1, p),
        elem(n, 3, 1, 1, p),
        mul(&elem(n, 0, 1, 1, p), &elem(n, 3, 2, -1, p), n, p),
        mul(&elem(n, 1, 0, 1, p), &elem(n, 2, 3, -1, p), n, p),
    ];
    let group = closure(&gens, n, p);
    assert_eq!(group.len(), 51840);
    let gi = with_inverses(gens, n, p);
    let mut unip: Vec<M> = group
        .into_iter()
        .filter(|g| {
            let mut nil = g.clone();
            for i in 0..n {
                nil[i * n + i] = (nil[i * n + i] - 1).rem_euclid(p);
            }
            let sq = mul(&nil, &nil, n, p);
            mul(&sq, &sq, n, p).iter().all(|&x| x == 0)
        })
        .collect();
    unip.sort();
    assert_eq!(unip.len(), 3usize.pow(8));
    let mut done: HashSet<M> = HashSet::new();
    let mut counts: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    for u in &unip {
        if done.contains(u) {
            continue;
        }
        let orb = conj_orbit(u, &gi, n, p);
        *counts.entry(jordan_type(u, n, p)).or_default() += 1;
        done.extend(orb);
    }
    assert_eq!(counts, expected_counts("C2", Isogeny::Sc));
    let by: Vec<usize> = counts.values().copied().collect();
    assert_eq!(by.iter().sum::<usize>(), 7);
}

fn regular_classes(n: usize, p: i64, extra: Vec<M>) -> usize {
    let mut sl = vec![];
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sl.push(elem(n, i, j, 1, p));
            }
        }
    }
    let u0: M = (0..n * n)
        .map(|k| {
            let (i, j) = (k / n, k % n);
            i64::from(i == j || j == i + 1)
        })
        .collect();
    let mut gl = sl.clone();
    gl.extend(extra);
    let small = conj_orbit(&u0, &with_inverses(sl, n, p), n, p).len();
    let big = conj_orbit(&u0, &with_inverses(gl, n, p), n, p).len();
    assert_eq!(big % small, 0);
    big / small
}

#[test]
fn regular_unipotents_of_sl3_and_pgl3_over_f7() {
    let p = 7;
    let mut diag = ident(3);
    diag[0] = 3;
    let sl_count = regular_classes(3, p, vec![diag]);
    let sc = expected_counts("A2", Isogeny::Sc);
    let ad = expected_counts("A2", Isogeny::Ad);
    assert_eq!(sl_count, sc[&vec![3]]);
    assert_eq!(sl_count, 3);
    // conjugation by PGL3 is conjugation by GL3
    assert_eq!(ad[&vec![3]], 1);
}

#[test]
fn regular_unipotents_of_sl2_over_f5() {
    let p = 5;
    let mut diag = ident(2);
    diag[0] = 2;
    assert_eq!(regular_classes(2, p, vec![diag]), 2);
    assert_eq!(expected_counts("A1", Isogeny::Sc)[&vec![2]], 2);
    assert_eq!(expected_counts("A1", Isogeny::Ad)[&vec![2]], 1);
}
