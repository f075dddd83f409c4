//! Small semidirect products `N ⋊ Γ` (orders up to 200) used to exercise
//! the Clifford comparison.

use super::FiniteGroup;

pub struct CorpusEntry {
    pub name: String,
    pub n: FiniteGroup,
    pub gamma: FiniteGroup,
    /// `action[γ][a] = φ_γ(a)`.
    pub action: Vec<Vec<u32>>,
}

pub const Q8_TABLE: &str = include_str!("../../data/groups/q8.tbl");

pub fn q8() -> FiniteGroup {
    FiniteGroup::parse_table(Q8_TABLE).expect("bundled Q8 table")
}

/// `(Z/p)^k` with `sum_i a_i p^i` at index `(a_0, ..., a_{k-1})`.
pub fn elementary_abelian(p: usize, k: usize) -> FiniteGroup {
    let n = p.pow(k as u32);
    let rows = (0..n)
        .map(|a| (0..n).map(|b| add_digits(a, b, p, k) as u32).collect())
        .collect();
    FiniteGroup::from_table(rows).unwrap()
}

fn digits(mut a: usize, p: usize, k: usize) -> Vec<usize> {
    (0..k)
        .map(|_| {
            let d = a % p;
            a /= p;
            d
        })
        .collect()
}

fn undigits(d: &[usize], p: usize) -> usize {
    d.iter().rev().fold(0, |acc, &x| acc * p + x)
}

fn add_digits(a: usize, b: usize, p: usize, k: usize) -> usize {
    let s: Vec<usize> = digits(a, p, k)
        .iter()
        .zip(digits(b, p, k))
        .map(|(x, y)| (x + y) % p)
        .collect();
    undigits(&s, p)
}

/// Permutation of `(Z/p)^k` induced by the matrix `m` on column vectors.
fn matrix_perm(m: &[Vec<i64>], p: usize, k: usize) -> Vec<u32> {
    (0..p.pow(k as u32))
        .map(|a| {
            let v = digits(a, p, k);
            let w: Vec<usize> = m
                .iter()
                .map(|row| {
                    let s: i64 = row.iter().zip(&v).map(|(x, &y)| x * y as i64).sum();
                    s.rem_euclid(p as i64) as usize
                })
                .collect();
            undigits(&w, p) as u32
        })
        .collect()
}

/// Γ generated by automorphisms given as permutations of N's elements.
fn acting_group(auts: &[Vec<u32>]) -> (FiniteGroup, Vec<Vec<u32>>) {
    let g = FiniteGroup::from_perms(auts).unwrap();
    let action = g.perms.clone().unwrap();
    (g, action)
}

fn linear(name: &str, p: usize, k: usize, mats: &[Vec<Vec<i64>>]) -> CorpusEntry {
    let perms: Vec<Vec<u32>> = mats.iter().map(|m| matrix_perm(m, p, k)).collect();
    let (gamma, action) = acting_group(&perms);
    CorpusEntry {
        name: name.to_string(),
        n: elementary_abelian(p, k),
        gamma,
        action,
    }
}

/// Automorphism of a permutation group given by conjugation with `tau`.
fn conj_aut(n: &FiniteGroup, tau: &[u32]) -> Vec<u32> {
    let elems = n.perms.as_ref().expect("permutation group");
    let m = tau.len();
    let mut tinv = vec![0u32; m];
    for (i, &t) in tau.iter().enumerate() {
        tinv[t as usize] = i as u32;
    }
    elems
        .iter()
        .map(|g| {
            let c: Vec<u32> = (0..m).map(|x| tau[g[tinv[x] as usize] as usize]).collect();
            elems.iter().position(|e| *e == c).expect("tau normalizes N") as u32
        })
        .collect()
}

fn by_conjugation(name: &str, gens: &[Vec<u32>], tau: &[u32]) -> CorpusEntry {
    let n = FiniteGroup::from_perms(gens).unwrap();
    let (gamma, action) = acting_group(&[conj_aut(&n, tau)]);
    CorpusEntry {
        name: name.to_string(),
        n,
        gamma,
        action,
    }
}

fn trivial_action(name: &str, n: FiniteGroup, gamma: FiniteGroup) -> CorpusEntry {
    let id: Vec<u32> = (0..n.order() as u32).collect();
    let action = vec![id; gamma.order()];
    CorpusEntry {
        name: name.to_string(),
        n,
        gamma,
        action,
    }
}

/// The built-in corpus. Every entry has `|Irr(N ⋊ Γ)| = |(Irr N//Γ)_2|`.
pub fn corpus() -> Vec<CorpusEntry> {
    let mut out = Vec::new();
    for n in 3..=16usize {
        let units: Vec<usize> = (2..n).filter(|&u| num_integer::gcd(u, n) == 1).collect();
        let perms: Vec<Vec<u32>> = units
            .iter()
            .map(|&u| (0..n).map(|a| ((a * u) % n) as u32).collect())
            .collect();
        let (gamma, action) = acting_group(&perms);
        out.push(CorpusEntry {
            name: format!("Z/{n} x| (Z/{n})^*"),
            n: FiniteGroup::cyclic(n),
            gamma,
            action,
        });
    }
    out.push(linear("(Z/2)^2 x| Z/3", 2, 2, &[vec![vec![0, 1], vec![1, 1]]]));
    out.push(linear(
        "(Z/2)^2 x| GL2(F2)",
        2,
        2,
        &[vec![vec![0, 1], vec![1, 0]], vec![vec![1, 1], vec![0, 1]]],
    ));
    out.push(linear("(Z/3)^2 x| Z/4", 3, 2, &[vec![vec![0, -1], vec![1, 0]]]));
    out.push(linear(
        "(Z/3)^2 x| Q8",
        3,
        2,
        &[vec![vec![0, -1], vec![1, 0]], vec![vec![1, 1], vec![1, -1]]],
    ));
    out.push(linear("(Z/5)^2 x| Z/3", 5, 2, &[vec![vec![0, -1], vec![1, -1]]]));
    out.push(linear("(Z/5)^2 x| Z/4", 5, 2, &[vec![vec![2, 0], vec![0, 3]]]));
    let singer = vec![vec![0, 0, 1], vec![1, 0, 1], vec![0, 1, 0]];
    let frob = vec![vec![1, 0, 0], vec![0, 0, 1], vec![0, 1, 1]];
    out.push(linear("(Z/2)^3 x| Z/7", 2, 3, std::slice::from_ref(&singer)));
    out.push(linear("(Z/2)^3 x| F21", 2, 3, &[singer, frob]));

    let (gamma, action) = acting_group(&[vec![0, 1, 4, 5, 6, 7, 2, 3]]);
    out.push(CorpusEntry {
        name: "Q8 x| Z/3".into(),
        n: q8(),
        gamma,
        action,
    });
    out.push(by_conjugation(
        "S3 x| Z/2",
        &[vec![1, 2, 0], vec![1, 0, 2]],
        &[1, 0, 2],
    ));
    let r8: Vec<u32> = (0..8).map(|i| (i + 1) % 8).collect();
    let r8sq: Vec<u32> = (0..8).map(|i| (i + 2) % 8).collect();
    let refl: Vec<u32> = (0..8).map(|i| (8 - i) % 8).collect();
    out.push(by_conjugation("D8 x| Z/4", &[r8sq, refl], &r8));
    out.push(by_conjugation(
        "A4 x| Z/2",
        &[vec![1, 2, 0, 3], vec![0, 2, 3, 1]],
        &[1, 0, 2, 3],
    ));
    out.push(by_conjugation(
        "A5 x| Z/2",
        &[vec![1, 2, 0, 3, 4], vec![0, 1, 3, 4, 2]],
        &[1, 0, 2, 3, 4],
    ));
    out.push(trivial_action("Z/3 x Z/2", FiniteGroup::cyclic(3), FiniteGroup::cyclic(2)));
    out.push(trivial_action(
        "S3 x Z/3",
        FiniteGroup::from_perms(&[vec![1, 2, 0], vec![1, 0, 2]]).unwrap(),
        FiniteGroup::cyclic(3),
    ));
    out.push(trivial_action("Q8 x Z/2", q8(), FiniteGroup::cyclic(2)));
    out
}

/// `Q8 ⋊ Inn(Q8)`: the projective obstruction is nontrivial over the
/// two-dimensional character, so the counts differ (17 against 20).
pub fn twisted_example() -> CorpusEntry {
    let (gamma, action) = acting_group(&[
        vec![0, 1, 2, 3, 5, 4, 7, 6],
        vec![0, 1, 3, 2, 4, 5, 7, 6],
    ]);
    CorpusEntry {
        name: "Q8 x| Inn(Q8)".into(),
        n: q8(),
        gamma,
        action,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders_within_bound() {
        for e in corpus() {
            let total = e.n.order() * e.gamma.order();
            assert!(total <= 200, "{}: {total}", e.name);
        }
    }

    #[test]
    fn q8_table_is_quaternion() {
        let g = q8();
        assert_eq!(g.order(), 8);
        assert!(!g.is_abelian());
        // exactly one involution
        assert_eq!((1..8).filter(|&a| g.elem_order(a) == 2).count(), 1);
    }
}
