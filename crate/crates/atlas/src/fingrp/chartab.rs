//! Character tables by Dixon's method: split the class-sum algebra over a
//! prime field, then lift the modular values to cyclotomic integers.

use num_traits::{One, Zero};

use super::cyclotomic::Cyc;
use super::{conjugacy_classes, ConjugacyClasses, FiniteGroup};
use crate::lattice::{self, Q};
use crate::{AtlasError, Result};

#[derive(Clone, Debug)]
pub struct CharacterTable {
    pub classes: ConjugacyClasses,
    pub group_order: usize,
    /// Values live in `Q(zeta_exponent)`.
    pub exponent: usize,
    /// `chars[i][j]`: value of the i-th irreducible on class j. Row 0 is trivial.
    pub chars: Vec<Vec<Cyc>>,
}

impl CharacterTable {
    pub fn n_irr(&self) -> usize {
        self.chars.len()
    }

    pub fn degrees(&self) -> Vec<i64> {
        self.chars
            .iter()
            .map(|r| r[0].to_rational().unwrap().to_integer())
            .collect()
    }

    /// `<a, b> = |G|^-1 sum_g a(g) conj(b(g))`.
    pub fn inner_product(&self, a: &[Cyc], b: &[Cyc]) -> Cyc {
        let mut s = Cyc::zero(self.exponent);
        for j in 0..self.classes.len() {
            let h = lattice::qi(self.classes.size(j) as i64);
            s = s.add(&a[j].mul(&b[j].conj()).scale(h));
        }
        s.scale(Q::new(1, self.group_order as i64))
    }

    pub fn value(&self, chi: usize, g: u32) -> &Cyc {
        &self.chars[chi][self.classes.class_of[g as usize]]
    }

    /// Exact check of the row orthogonality relations and of `sum deg^2 = |G|`.
    pub fn verify(&self) -> Result<()> {
        let k = self.n_irr();
        if k != self.classes.len() {
            return Err(AtlasError::Invariant("rows != classes".into()));
        }
        for a in 0..k {
            for b in a..k {
                let ip = self.inner_product(&self.chars[a], &self.chars[b]);
                let want = if a == b { Q::one() } else { Q::zero() };
                if ip.to_rational() != Some(want) {
                    return Err(AtlasError::Invariant(format!(
                        "orthogonality fails for characters {a}, {b}"
                    )));
                }
            }
        }
        let s: i64 = self.degrees().iter().map(|d| d * d).sum();
        if s as usize != self.group_order {
            return Err(AtlasError::Invariant("sum of squared degrees".into()));
        }
        Ok(())
    }
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

fn mpow(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

fn minv(a: u64, p: u64) -> u64 {
    mpow(a, p - 2, p)
}

fn primitive_root(p: u64) -> u64 {
    let mut m = p - 1;
    let mut primes = vec![];
    let mut d = 2;
    while d * d <= m {
        if m.is_multiple_of(d) {
            primes.push(d);
            while m.is_multiple_of(d) {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        primes.push(m);
    }
    (2..p)
        .find(|&g| primes.iter().all(|&q| mpow(g, (p - 1) / q, p) != 1))
        .unwrap()
}

type Mat = Vec<Vec<u64>>;

/// Row-reduce `[b | y]` and return `x` with `b x = y` (b has full column rank).
fn solve(b: &Mat, y: &Mat, p: u64) -> Mat {
    let rows = b.len();
    let d = b[0].len();
    let w = y[0].len();
    let mut a: Mat = (0..rows)
        .map(|i| b[i].iter().chain(&y[i]).copied().collect())
        .collect();
    for c in 0..d {
        let r = c;
        let piv = (r..rows).find(|&i| a[i][c] != 0).expect("full column rank");
        a.swap(r, piv);
        let inv = minv(a[r][c], p);
        for x in a[r].iter_mut() {
            *x = *x * inv % p;
        }
        for i in 0..rows {
            if i != r && a[i][c] != 0 {
                let f = a[i][c];
                for cc in 0..d + w {
                    a[i][cc] = (a[i][cc] + p * p - f * a[r][cc]) % p;
                }
            }
        }
    }
    (0..d).map(|i| a[i][d..].to_vec()).collect()
}

/// Basis of the null space of a square matrix, as column vectors.
fn nullspace(m: &Mat, p: u64) -> Vec<Vec<u64>> {
    let n = m.len();
    let mut a = m.clone();
    let mut pivots = vec![];
    let mut r = 0;
    for c in 0..n {
        let Some(piv) = (r..n).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(r, piv);
        let inv = minv(a[r][c], p);
        for x in a[r].iter_mut() {
            *x = *x * inv % p;
        }
        for i in 0..n {
            if i != r && a[i][c] != 0 {
                let f = a[i][c];
                for cc in 0..n {
                    a[i][cc] = (a[i][cc] + p * p - f * a[r][cc]) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![0u64; n];
            v[f] = 1;
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = (p - a[i][f]) % p;
            }
            v
        })
        .collect()
}

/// Characteristic polynomial (lowest degree first) by Faddeev-LeVerrier.
fn charpoly(a: &Mat, p: u64) -> Vec<u64> {
    let n = a.len();
    let mut c = vec![0u64; n + 1];
    c[n] = 1;
    let mut m = vec![vec![0u64; n]; n];
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I
        let mut nm = vec![vec![0u64; n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut s = 0u64;
                for l in 0..n {
                    s = (s + a[i][l] * m[l][j]) % p;
                }
                nm[i][j] = s;
            }
            nm[i][i] = (nm[i][i] + c[n - k + 1]) % p;
        }
        m = nm;
        let mut tr = 0u64;
        for i in 0..n {
            for l in 0..n {
                tr = (tr + a[i][l] * m[l][i]) % p;
            }
        }
        c[n - k] = (p - tr * minv(k as u64 % p, p) % p) % p;
    }
    c
}

pub fn character_table(g: &FiniteGroup) -> Result<CharacterTable> {
    let classes = conjugacy_classes(g);
    let n = g.order();
    let k = classes.len();
    let e = g.exponent();
    let mut p = e as u64 + 1;
    while !(is_prime(p) && p * p > 4 * n as u64) {
        p += e as u64;
    }
    let z = mpow(primitive_root(p), (p - 1) / e as u64, p);

    // class matrices: cm[j][a][l] = #{x in C_j : x^-1 g_l in C_a}
    let mut cm = vec![vec![vec![0u64; k]; k]; k];
    for l in 0..k {
        let gl = classes.reps[l];
        for (j, members) in classes.members.iter().enumerate() {
            for &x in members {
                let a = classes.class_of[g.mul(g.inv(x), gl) as usize];
                cm[j][a][l] += 1;
            }
        }
    }
    for m in cm.iter_mut() {
        for r in m.iter_mut() {
            for x in r.iter_mut() {
                *x %= p;
            }
        }
    }

    // split F_p^k into common eigenlines
    let mut spaces: Vec<Mat> = vec![(0..k)
        .map(|i| (0..k).map(|j| u64::from(i == j)).collect())
        .collect()];
    for m in cm.iter().skip(1) {
        if spaces.iter().all(|b| b[0].len() == 1) {
            break;
        }
        let mut next = Vec::new();
        for b in spaces {
            let d = b[0].len();
            if d == 1 {
                next.push(b);
                continue;
            }
            let mb: Mat = (0..k)
                .map(|i| {
                    (0..d)
                        .map(|c| (0..k).fold(0, |s, l| (s + m[i][l] * b[l][c]) % p))
                        .collect()
                })
                .collect();
            let r = solve(&b, &mb, p);
            let cp = charpoly(&r, p);
            let mut total = 0;
            for lam in 0..p {
                let v = cp.iter().rev().fold(0u64, |acc, &c| (acc * lam + c) % p);
                if v != 0 {
                    continue;
                }
                let mut shifted = r.clone();
                for (i, row) in shifted.iter_mut().enumerate() {
                    row[i] = (row[i] + p - lam) % p;
                }
                let ns = nullspace(&shifted, p);
                total += ns.len();
                let nb: Mat = (0..k)
                    .map(|i| {
                        ns.iter()
                            .map(|v| (0..d).fold(0, |s, c| (s + b[i][c] * v[c]) % p))
                            .collect()
                    })
                    .collect();
                next.push(nb);
            }
            if total != d {
                return Err(AtlasError::Invariant("class algebra is not split".into()));
            }
        }
        spaces = next;
    }
    if spaces.len() != k {
        return Err(AtlasError::Invariant("eigenspace splitting incomplete".into()));
    }

    let sizes: Vec<u64> = (0..k).map(|j| classes.size(j) as u64).collect();
    let maxdeg = (n as f64).sqrt() as u64 + 1;
    let mut chars = Vec::with_capacity(k);
    for b in &spaces {
        let inv0 = minv(b[0][0], p);
        let w: Vec<u64> = (0..k).map(|i| b[i][0] * inv0 % p).collect();
        let s = (0..k).fold(0u64, |acc, j| {
            (acc + w[j] * w[classes.inverse[j]] % p * minv(sizes[j] % p, p)) % p
        });
        let d2 = (n as u64 % p) * minv(s, p) % p;
        let d = (1..=maxdeg)
            .find(|&d| d * d % p == d2)
            .ok_or_else(|| AtlasError::Invariant("no admissible degree".into()))?;
        let modular: Vec<u64> = (0..k)
            .map(|j| w[j] * d % p * minv(sizes[j] % p, p) % p)
            .collect();
        let mut row = Vec::with_capacity(k);
        for j in 0..k {
            let o = classes.orders[j];
            let zo = mpow(z, (e / o) as u64, p);
            let zoinv = minv(zo, p);
            let powcls: Vec<usize> = (0..o)
                .map(|m| classes.class_of[g.pow(classes.reps[j], m) as usize])
                .collect();
            let oinv = minv(o as u64 % p, p);
            let mut val = Cyc::zero(e);
            let mut tot = 0;
            for kk in 0..o {
                let mut acc = 0u64;
                for (m, &c) in powcls.iter().enumerate() {
                    acc = (acc + modular[c] * mpow(zoinv, (m * kk) as u64, p)) % p;
                }
                let mult = acc * oinv % p;
                if mult > d {
                    return Err(AtlasError::Invariant("eigenvalue multiplicity out of range".into()));
                }
                tot += mult;
                if mult > 0 {
                    val = val.add(
                        &Cyc::root(e, (kk * (e / o)) as i64).scale(lattice::qi(mult as i64)),
                    );
                }
            }
            if tot != d {
                return Err(AtlasError::Invariant("multiplicities do not sum to the degree".into()));
            }
            row.push(val);
        }
        chars.push(row);
    }
    let one = Cyc::rational(e, Q::one());
    chars.sort_by(|a, b| {
        let ta = a.iter().all(|x| *x == one);
        let tb = b.iter().all(|x| *x == one);
        tb.cmp(&ta)
            .then_with(|| a[0].cmp(&b[0]))
            .then_with(|| a.cmp(b))
    });
    let t = CharacterTable {
        classes,
        group_order: n,
        exponent: e,
        chars,
    };
    Ok(t)
}
