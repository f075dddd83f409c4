//! Exact arithmetic in cyclotomic fields `Q(zeta_n)`, with elements stored
//! in the power basis `1, zeta, ..., zeta^{phi(n)-1}`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::{One, Zero};

use crate::lattice::{self, Q};

/// Integer polynomial coefficients of `Phi_n`, lowest degree first.
pub fn cyclotomic_poly(n: usize) -> Vec<i64> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Vec<i64>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(p) = cache.lock().unwrap().get(&n) {
        return p.clone();
    }
    // x^n - 1 divided by Phi_d for proper divisors d
    let mut p = vec![0i64; n + 1];
    p[0] = -1;
    p[n] = 1;
    for d in 1..n {
        if n.is_multiple_of(d) {
            p = poly_div_exact(&p, &cyclotomic_poly(d));
        }
    }
    cache.lock().unwrap().insert(n, p.clone());
    p
}

fn poly_div_exact(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lead = *b.last().unwrap();
    let mut q = vec![0i64; a.len() - db];
    for i in (0..q.len()).rev() {
        let c = r[i + db] / lead;
        q[i] = c;
        for j in 0..=db {
            r[i + j] -= c * b[j];
        }
    }
    debug_assert!(r.iter().all(|&x| x == 0));
    q
}

struct Field {
    n: usize,
    phi: usize,
    /// Reduced coordinates of `zeta^k` for `k` in `0..n`.
    powers: Vec<Vec<i64>>,
}

fn field(n: usize) -> Arc<Field> {
    static FIELDS: OnceLock<Mutex<HashMap<usize, Arc<Field>>>> = OnceLock::new();
    let fields = FIELDS.get_or_init(Default::default);
    if let Some(f) = fields.lock().unwrap().get(&n) {
        return f.clone();
    }
    let p = cyclotomic_poly(n);
    let phi = p.len() - 1;
    let mut powers = Vec::with_capacity(n);
    let mut cur = vec![0i64; phi];
    cur[0] = 1;
    for _ in 0..n {
        powers.push(cur.clone());
        // multiply by x and reduce with the monic Phi_n
        let top = cur[phi - 1];
        for i in (1..phi).rev() {
            cur[i] = cur[i - 1];
        }
        cur[0] = 0;
        for i in 0..phi {
            cur[i] -= top * p[i];
        }
    }
    let f = Arc::new(Field { n, phi, powers });
    fields.lock().unwrap().insert(n, f.clone());
    f
}

/// An element of `Q(zeta_n)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cyc {
    n: usize,
    coeffs: Vec<Q>,
}

impl Cyc {
    pub fn zero(n: usize) -> Self {
        Cyc {
            n,
            coeffs: vec![Q::zero(); field(n).phi],
        }
    }

    pub fn rational(n: usize, x: Q) -> Self {
        let mut c = Cyc::zero(n);
        c.coeffs[0] = x;
        c
    }

    /// `zeta_n^k`.
    pub fn root(n: usize, k: i64) -> Self {
        let f = field(n);
        let k = k.rem_euclid(n as i64) as usize;
        Cyc {
            n,
            coeffs: f.powers[k].iter().map(|&x| lattice::qi(x)).collect(),
        }
    }

    pub fn conductor_bound(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn to_rational(&self) -> Option<Q> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(self.coeffs[0])
        } else {
            None
        }
    }

    pub fn add(&self, o: &Cyc) -> Cyc {
        assert_eq!(self.n, o.n, "mixed cyclotomic fields");
        Cyc {
            n: self.n,
            coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, o: &Cyc) -> Cyc {
        self.add(&o.scale(-Q::one()))
    }

    pub fn scale(&self, s: Q) -> Cyc {
        Cyc {
            n: self.n,
            coeffs: self.coeffs.iter().map(|a| a * s).collect(),
        }
    }

    pub fn mul(&self, o: &Cyc) -> Cyc {
        assert_eq!(self.n, o.n, "mixed cyclotomic fields");
        let f = field(self.n);
        let mut out = vec![Q::zero(); f.phi];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let ab = a * b;
                for (k, &x) in f.powers[(i + j) % f.n].iter().enumerate() {
                    if x != 0 {
                        out[k] += ab * x;
                    }
                }
            }
        }
        Cyc {
            n: self.n,
            coeffs: out,
        }
    }

    /// Complex conjugation, `zeta -> zeta^{-1}`.
    pub fn conj(&self) -> Cyc {
        self.galois(-1)
    }

    /// The automorphism `zeta -> zeta^k` for `k` prime to `n`.
    pub fn galois(&self, k: i64) -> Cyc {
        let mut out = Cyc::zero(self.n);
        for (i, a) in self.coeffs.iter().enumerate() {
            if !a.is_zero() {
                out = out.add(&Cyc::root(self.n, k * i as i64).scale(*a));
            }
        }
        out
    }

    /// Re-express in `Q(zeta_m)` for a multiple `m` of `n`.
    pub fn lift(&self, m: usize) -> Cyc {
        assert!(m.is_multiple_of(self.n), "lift target must be a multiple");
        let step = (m / self.n) as i64;
        let mut out = Cyc::zero(m);
        for (i, a) in self.coeffs.iter().enumerate() {
            if !a.is_zero() {
                out = out.add(&Cyc::root(m, step * i as i64).scale(*a));
            }
        }
        out
    }

    /// Approximate complex value, for display only.
    pub fn approx(&self) -> (f64, f64) {
        let mut re = 0.0;
        let mut im = 0.0;
        for (i, a) in self.coeffs.iter().enumerate() {
            let t = 2.0 * std::f64::consts::PI * i as f64 / self.n as f64;
            let x = *a.numer() as f64 / *a.denom() as f64;
            re += x * t.cos();
            im += x * t.sin();
        }
        (re, im)
    }
}

impl fmt::Debug for Cyc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Cyc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(r) = self.to_rational() {
            return write!(f, "{}", lattice::fmt_q(&r));
        }
        let mut terms = Vec::new();
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let c = lattice::fmt_q(a);
            terms.push(match i {
                0 => c,
                _ => format!("{c}*E({})^{i}", self.n),
            });
        }
        write!(f, "{}", terms.join(" + "))
    }
}
