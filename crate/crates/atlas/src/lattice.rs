//! Integer and rational matrix helpers: Smith and Hermite normal forms,
//! exact inverses, and a few vector utilities shared by the other modules.

use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{One, Signed, Zero};

pub type Q = Rational64;
pub type IMat = Vec<Vec<i64>>;
pub type QVec = Vec<Q>;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(n, d)
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(n)
}

pub fn identity(n: usize) -> IMat {
    (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect()
}

pub fn transpose(a: &IMat) -> IMat {
    if a.is_empty() {
        return vec![];
    }
    let (m, n) = (a.len(), a[0].len());
    (0..n).map(|j| (0..m).map(|i| a[i][j]).collect()).collect()
}

pub fn mat_mul(a: &IMat, b: &IMat) -> IMat {
    let m = a.len();
    let k = b.len();
    let n = if k == 0 { 0 } else { b[0].len() };
    let mut c = vec![vec![0i64; n]; m];
    for i in 0..m {
        for l in 0..k {
            let x = a[i][l];
            if x == 0 {
                continue;
            }
            for j in 0..n {
                c[i][j] += x * b[l][j];
            }
        }
    }
    c
}

pub fn mat_vec(a: &IMat, v: &[i64]) -> Vec<i64> {
    a.iter()
        .map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum())
        .collect()
}

pub fn mat_qvec(a: &IMat, v: &[Q]) -> QVec {
    a.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .fold(Q::zero(), |acc, (x, y)| acc + *y * *x)
        })
        .collect()
}

pub fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn dot_q(a: &[i64], v: &[Q]) -> Q {
    a.iter()
        .zip(v)
        .fold(Q::zero(), |acc, (x, y)| acc + *y * *x)
}

/// Reduce a rational into [0, 1).
pub fn frac(x: Q) -> Q {
    x - x.floor()
}

pub fn is_integral(x: &Q) -> bool {
    x.is_integer()
}

pub fn lcm_denoms(v: &[Q]) -> i64 {
    v.iter().fold(1i64, |acc, x| acc.lcm(x.denom()))
}

/// Exact inverse of a square integer matrix over Q. `None` when singular.
pub fn inverse_q(a: &IMat) -> Option<Vec<QVec>> {
    let n = a.len();
    let mut m: Vec<QVec> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r: QVec = row.iter().map(|&x| qi(x)).collect();
            r.extend((0..n).map(|j| if i == j { Q::one() } else { Q::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, piv);
        let p = m[col][col];
        for x in m[col].iter_mut() {
            *x /= p;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col];
                let prow = m[col].clone();
                for (x, y) in m[r].iter_mut().zip(prow) {
                    *x -= f * y;
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn qmat_mul(a: &[QVec], b: &[QVec]) -> Vec<QVec> {
    let n = if b.is_empty() { 0 } else { b[0].len() };
    a.iter()
        .map(|row| {
            (0..n)
                .map(|j| {
                    row.iter()
                        .zip(b)
                        .fold(Q::zero(), |acc, (x, brow)| acc + *x * brow[j])
                })
                .collect()
        })
        .collect()
}

pub fn qmat_vec(a: &[QVec], v: &[Q]) -> QVec {
    a.iter()
        .map(|row| row.iter().zip(v).fold(Q::zero(), |acc, (x, y)| acc + *x * *y))
        .collect()
}

/// Inverse of a unimodular integer matrix.
pub fn inverse_unimodular(a: &IMat) -> IMat {
    let inv = inverse_q(a).expect("unimodular matrix must be invertible");
    inv.iter()
        .map(|row| {
            row.iter()
                .map(|x| {
                    assert!(x.is_integer(), "matrix is not unimodular");
                    x.to_integer()
                })
                .collect()
        })
        .collect()
}

pub fn det(a: &IMat) -> i64 {
    let n = a.len();
    if n == 0 {
        return 1;
    }
    let mut m: Vec<QVec> = a.iter().map(|r| r.iter().map(|&x| qi(x)).collect()).collect();
    let mut d = Q::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return 0;
        };
        if piv != col {
            m.swap(col, piv);
            d = -d;
        }
        let p = m[col][col];
        d *= p;
        for r in col + 1..n {
            if !m[r][col].is_zero() {
                let f = m[r][col] / p;
                let prow = m[col].clone();
                for (x, y) in m[r].iter_mut().zip(prow) {
                    *x -= f * y;
                }
            }
        }
    }
    d.to_integer()
}

/// Smith normal form: returns `(u, d, v)` with `u * a * v = diag(d)`,
/// `u`, `v` unimodular and `d[i] | d[i+1]` for the nonzero entries.
/// `d` has length `min(rows, cols)`.
pub fn smith(a: &IMat) -> (IMat, Vec<i64>, IMat) {
    let m = a.len();
    let n = if m == 0 { 0 } else { a[0].len() };
    let mut s = a.clone();
    let mut u = identity(m);
    let mut v = identity(n);
    let k = m.min(n);
    for t in 0..k {
        loop {
            // smallest nonzero entry of the lower-right block
            let mut best: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    if s[i][j] != 0
                        && best.is_none_or(|(bi, bj)| s[i][j].abs() < s[bi][bj].abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else { break };
            s.swap(t, pi);
            u.swap(t, pi);
            for row in s.iter_mut() {
                row.swap(t, pj);
            }
            for row in v.iter_mut() {
                row.swap(t, pj);
            }
            let p = s[t][t];
            let mut clean = true;
            for i in t + 1..m {
                let f = Integer::div_floor(&s[i][t], &p);
                if f != 0 {
                    for j in 0..n {
                        s[i][j] -= f * s[t][j];
                    }
                    for j in 0..m {
                        u[i][j] -= f * u[t][j];
                    }
                }
                if s[i][t] != 0 {
                    clean = false;
                }
            }
            for j in t + 1..n {
                let f = Integer::div_floor(&s[t][j], &p);
                if f != 0 {
                    for i in 0..m {
                        s[i][j] -= f * s[i][t];
                    }
                    for i in 0..n {
                        v[i][j] -= f * v[i][t];
                    }
                }
                if s[t][j] != 0 {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // divisibility of the remaining block
            let mut bad = None;
            'outer: for i in t + 1..m {
                for j in t + 1..n {
                    if s[i][j] % p != 0 {
                        bad = Some(i);
                        break 'outer;
                    }
                }
            }
            match bad {
                Some(i) => {
                    for j in 0..n {
                        s[t][j] += s[i][j];
                    }
                    for j in 0..m {
                        u[t][j] += u[i][j];
                    }
                }
                None => break,
            }
        }
        if s[t][t] < 0 {
            for j in 0..n {
                s[t][j] = -s[t][j];
            }
            for j in 0..m {
                u[t][j] = -u[t][j];
            }
        }
    }
    let d = (0..k).map(|i| s[i][i]).collect();
    (u, d, v)
}

/// Row-style Hermite normal form of the lattice spanned by `rows`.
/// Returns only the nonzero rows: upper echelon, positive pivots,
/// entries above each pivot reduced into `[0, pivot)`.
pub fn hermite_rows(rows: &IMat) -> IMat {
    let mut a: IMat = rows.clone();
    if a.is_empty() {
        return a;
    }
    let n = a[0].len();
    let mut r = 0;
    for col in 0..n {
        if r >= a.len() {
            break;
        }
        loop {
            let piv = (r..a.len())
                .filter(|&i| a[i][col] != 0)
                .min_by_key(|&i| a[i][col].abs());
            let Some(pi) = piv else { break };
            a.swap(r, pi);
            let p = a[r][col];
            let mut done = true;
            for i in r + 1..a.len() {
                let f = Integer::div_floor(&a[i][col], &p);
                if f != 0 {
                    for j in 0..n {
                        a[i][j] -= f * a[r][j];
                    }
                }
                if a[i][col] != 0 {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if a[r][col] == 0 {
            continue;
        }
        if a[r][col] < 0 {
            for x in a[r].iter_mut() {
                *x = -*x;
            }
        }
        let p = a[r][col];
        for i in 0..r {
            let f = Integer::div_floor(&a[i][col], &p);
            if f != 0 {
                for j in 0..n {
                    a[i][j] -= f * a[r][j];
                }
            }
        }
        r += 1;
    }
    a.truncate(r);
    a.retain(|row| row.iter().any(|&x| x != 0));
    a
}

/// Index of the lattice spanned by `rows` inside its saturation
/// (product of the nonzero Smith invariants).
pub fn saturation_index(rows: &IMat) -> i64 {
    if rows.is_empty() {
        return 1;
    }
    let (_, d, _) = smith(rows);
    d.iter().filter(|&&x| x != 0).product()
}

pub fn rank(rows: &IMat) -> usize {
    hermite_rows(rows).len()
}

pub fn fmt_q(x: &Q) -> String {
    if x.is_integer() {
        format!("{}", x.numer())
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn fmt_qvec(v: &[Q]) -> String {
    let parts: Vec<String> = v.iter().map(fmt_q).collect();
    format!("({})", parts.join(","))
}

pub fn is_zero_vec(v: &[Q]) -> bool {
    v.iter().all(|x| x.is_zero())
}

pub fn abs_q(x: Q) -> Q {
    x.abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn check_snf(a: IMat) {
        let (u, d, v) = smith(&a);
        let prod = mat_mul(&mat_mul(&u, &a), &v);
        for (i, row) in prod.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                if i == j {
                    assert_eq!(x, d[i]);
                } else {
                    assert_eq!(x, 0);
                }
            }
        }
        assert_eq!(det(&u).abs(), 1);
        assert_eq!(det(&v).abs(), 1);
        let nz: Vec<i64> = d.iter().copied().filter(|&x| x != 0).collect();
        for w in nz.windows(2) {
            assert_eq!(w[1] % w[0], 0);
        }
    }

    #[test]
    fn snf_small() {
        check_snf(vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
        check_snf(vec![vec![2]]);
        check_snf(vec![vec![0, 0], vec![0, 0]]);
        check_snf(vec![vec![1, 2], vec![3, 4], vec![5, 6]]);
    }

    #[test]
    fn snf_invariants_known() {
        let (_, d, _) = smith(&vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
        assert_eq!(d, vec![2, 6, 12]);
    }

    #[test]
    fn hnf_basis() {
        let h = hermite_rows(&vec![vec![2, 0], vec![0, 2], vec![1, 1]]);
        assert_eq!(h, vec![vec![1, 1], vec![0, 2]]);
    }

    #[test]
    fn inverse_roundtrip() {
        let a = vec![vec![2, -1], vec![-1, 2]];
        let inv = inverse_q(&a).unwrap();
        assert_eq!(inv[0][0], q(2, 3));
        assert_eq!(det(&a), 3);
    }

    proptest! {
        #[test]
        fn snf_random(entries in proptest::collection::vec(-6i64..6, 9)) {
            let a = vec![entries[0..3].to_vec(), entries[3..6].to_vec(), entries[6..9].to_vec()];
            check_snf(a.clone());
            let (_, d, _) = smith(&a);
            prop_assert_eq!(d.iter().product::<i64>().abs(), det(&a).abs());
        }
    }
}
