//! Elements of the cyclotomic field Q(ζ_M) in the power basis 1, ζ, …, ζ^{φ(M)-1}.
//!
//! An element is stored as an integer vector over a positive common
//! denominator. Since Φ_M is monic with integer coefficients, products of
//! integer vectors reduce to integer vectors and the denominator only needs
//! one gcd pass per operation.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::modp::{find_primes, ModPrime};

/// Per-order tables shared by every value of that order.
#[derive(Debug)]
pub(crate) struct CycloCtx {
    pub m: u32,
    pub phi: usize,
    /// x^k mod Φ_M for k in 0..2φ-1.
    reduce: Vec<Vec<i64>>,
    /// ζ^k for k in 0..M, reduced.
    pub zeta_pows: Vec<Cyc>,
    modp: OnceLock<Vec<ModPrime>>,
}

fn registry() -> &'static RwLock<HashMap<u32, Arc<CycloCtx>>> {
    static REG: OnceLock<RwLock<HashMap<u32, Arc<CycloCtx>>>> = OnceLock::new();
    REG.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Cached context for order `m` (m ≥ 1).
pub(crate) fn ctx(m: u32) -> Arc<CycloCtx> {
    assert!(m >= 1, "cyclotomic order must be positive");
    if let Some(c) = registry().read().expect("cyclotomic registry poisoned").get(&m) {
        return c.clone();
    }
    let built = Arc::new(CycloCtx::build(m));
    registry()
        .write()
        .expect("cyclotomic registry poisoned")
        .entry(m)
        .or_insert(built)
        .clone()
}

fn mobius(mut n: u32) -> i32 {
    let mut result = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

fn poly_mul_i(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = vec![0i64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

// Exact division by a monic integer polynomial.
fn poly_div_monic_i(a: &[i64], b: &[i64]) -> Vec<i64> {
    let db = b.len() - 1;
    let mut rem = a.to_vec();
    let mut quot = vec![0i64; a.len() - db];
    for k in (0..quot.len()).rev() {
        let c = rem[k + db];
        quot[k] = c;
        if c != 0 {
            for (j, &y) in b.iter().enumerate() {
                rem[k + j] -= c * y;
            }
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    quot
}

/// The M-th cyclotomic polynomial via Φ_M = ∏_{d | M} (x^d − 1)^{μ(M/d)}.
pub fn cyclotomic_polynomial(m: u32) -> Vec<i64> {
    let divisors: Vec<u32> = (1..=m).filter(|d| m % d == 0).collect();
    let binom = |d: u32| {
        let mut v = vec![0i64; d as usize + 1];
        v[0] = -1;
        v[d as usize] = 1;
        v
    };
    let mut p = vec![1i64];
    for &d in &divisors {
        if mobius(m / d) == 1 {
            p = poly_mul_i(&p, &binom(d));
        }
    }
    for &d in &divisors {
        if mobius(m / d) == -1 {
            p = poly_div_monic_i(&p, &binom(d));
        }
    }
    p
}

pub fn euler_phi(m: u32) -> usize {
    (1..=m).filter(|k| k.gcd(&m) == 1).count()
}

impl CycloCtx {
    fn build(m: u32) -> Self {
        let minpoly = cyclotomic_polynomial(m);
        let phi = minpoly.len() - 1;
        let mut reduce = Vec::with_capacity(2 * phi);
        let mut cur = vec![0i64; phi];
        cur[0] = 1;
        for _ in 0..(2 * phi).max(1) {
            reduce.push(cur.clone());
            cur = Self::times_x(&minpoly, &cur);
        }
        let mut zeta_pows = Vec::with_capacity(m as usize);
        let mut cur = vec![0i64; phi];
        cur[0] = 1;
        for _ in 0..m {
            zeta_pows.push(Cyc {
                c: cur.iter().map(|&x| BigInt::from(x)).collect(),
                d: BigInt::one(),
            });
            cur = Self::times_x(&minpoly, &cur);
        }
        CycloCtx {
            m,
            phi,
            reduce,
            zeta_pows,
            modp: OnceLock::new(),
        }
    }

    /// Primes p ≡ 1 (mod M) for modular gcd computations.
    pub(crate) fn primes(&self) -> &[ModPrime] {
        self.modp.get_or_init(|| find_primes(self.m, 12))
    }

    fn times_x(minpoly: &[i64], v: &[i64]) -> Vec<i64> {
        let phi = v.len();
        let top = v[phi - 1];
        let mut out = vec![0i64; phi];
        for i in (1..phi).rev() {
            out[i] = v[i - 1];
        }
        for (i, o) in out.iter_mut().enumerate() {
            *o -= top * minpoly[i];
        }
        out
    }

    /// Reduces an integer vector of length up to 2φ−1 modulo Φ_M.
    fn reduce_vec(&self, v: Vec<BigInt>) -> Vec<BigInt> {
        if v.len() <= self.phi {
            let mut v = v;
            v.resize(self.phi, BigInt::zero());
            return v;
        }
        let mut out: Vec<BigInt> = v[..self.phi].to_vec();
        for (k, x) in v.iter().enumerate().skip(self.phi) {
            if x.is_zero() {
                continue;
            }
            for (o, &t) in out.iter_mut().zip(&self.reduce[k]) {
                if t != 0 {
                    *o += x * t;
                }
            }
        }
        out
    }
}

/// An element of Q(ζ_M): `c / d` with `c` the power-basis vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) struct Cyc {
    pub c: Vec<BigInt>,
    pub d: BigInt,
}

impl Cyc {
    pub fn zero(ctx: &CycloCtx) -> Self {
        Cyc {
            c: vec![BigInt::zero(); ctx.phi],
            d: BigInt::one(),
        }
    }

    pub fn from_rational(ctx: &CycloCtx, r: &BigRational) -> Self {
        let mut c = vec![BigInt::zero(); ctx.phi];
        c[0] = r.numer().clone();
        let mut out = Cyc {
            c,
            d: r.denom().clone(),
        };
        out.normalize();
        out
    }

    pub fn one(ctx: &CycloCtx) -> Self {
        Self::from_rational(ctx, &BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.d.is_one() && self.c[0].is_one() && self.c[1..].iter().all(Zero::is_zero)
    }

    /// Some(r) if the value is rational.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.c[1..].iter().all(Zero::is_zero) {
            Some(BigRational::new(self.c[0].clone(), self.d.clone()))
        } else {
            None
        }
    }

    fn normalize(&mut self) {
        if self.d.is_negative() {
            self.d = -self.d.clone();
            for x in &mut self.c {
                *x = -x.clone();
            }
        }
        if self.is_zero() {
            self.d = BigInt::one();
            return;
        }
        let mut g = self.d.clone();
        for x in &self.c {
            if g.is_one() {
                break;
            }
            if !x.is_zero() {
                g = g.gcd(x);
            }
        }
        if !g.is_one() {
            for x in &mut self.c {
                *x /= &g;
            }
            self.d /= &g;
        }
    }

    pub fn add(&self, o: &Cyc) -> Cyc {
        let mut out = if self.d == o.d {
            Cyc {
                c: self.c.iter().zip(&o.c).map(|(a, b)| a + b).collect(),
                d: self.d.clone(),
            }
        } else {
            Cyc {
                c: self
                    .c
                    .iter()
                    .zip(&o.c)
                    .map(|(a, b)| a * &o.d + b * &self.d)
                    .collect(),
                d: &self.d * &o.d,
            }
        };
        out.normalize();
        out
    }

    pub fn neg(&self) -> Cyc {
        Cyc {
            c: self.c.iter().map(|x| -x).collect(),
            d: self.d.clone(),
        }
    }

    pub fn sub(&self, o: &Cyc) -> Cyc {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Cyc, ctx: &CycloCtx) -> Cyc {
        if ctx.phi == 1 {
            let mut out = Cyc {
                c: vec![&self.c[0] * &o.c[0]],
                d: &self.d * &o.d,
            };
            out.normalize();
            return out;
        }
        let mut prod = vec![BigInt::zero(); 2 * ctx.phi - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        let mut out = Cyc {
            c: ctx.reduce_vec(prod),
            d: &self.d * &o.d,
        };
        out.normalize();
        out
    }

    /// Multiplicative inverse: solves the φ×φ integer system for multiplication
    /// by `self` with fraction-free (Bareiss) elimination, which keeps
    /// intermediate entries bounded by minors instead of letting rational
    /// Euclid coefficients explode. Caller guarantees `self` is nonzero.
    pub fn inv(&self, ctx: &CycloCtx) -> Cyc {
        if let Some(r) = self.as_rational() {
            return Cyc::from_rational(ctx, &r.recip());
        }
        let n = ctx.phi;
        // row i, column j: coefficient of ζ^i in c·ζ^j; last column is d·e_0
        let mut a = vec![vec![BigInt::zero(); n + 1]; n];
        for j in 0..n {
            let mut prod = vec![BigInt::zero(); 2 * n - 1];
            for (i, x) in self.c.iter().enumerate() {
                if !x.is_zero() {
                    for (k, z) in ctx.zeta_pows[j].c.iter().enumerate() {
                        if !z.is_zero() {
                            prod[i + k] += x * z;
                        }
                    }
                }
            }
            for (i, v) in ctx.reduce_vec(prod).into_iter().enumerate() {
                a[i][j] = v;
            }
        }
        a[0][n] = self.d.clone();
        let mut prev = BigInt::one();
        for k in 0..n {
            let p = (k..n).find(|&r| !a[r][k].is_zero()).expect("nonzero element is invertible");
            a.swap(k, p);
            for i in k + 1..n {
                for j in k + 1..=n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
                a[i][k] = BigInt::zero();
            }
            prev = a[k][k].clone();
        }
        let mut x = vec![BigRational::zero(); n];
        for i in (0..n).rev() {
            let mut acc = BigRational::from_integer(a[i][n].clone());
            for j in i + 1..n {
                if !a[i][j].is_zero() {
                    acc -= &x[j] * BigRational::from_integer(a[i][j].clone());
                }
            }
            x[i] = acc / BigRational::from_integer(a[i][i].clone());
        }
        Cyc::from_exact(ctx, x)
    }

    pub(crate) fn from_exact(ctx: &CycloCtx, v: Vec<BigRational>) -> Cyc {
        let mut den = BigInt::one();
        for x in &v {
            den = den.lcm(x.denom());
        }
        let mut c = vec![BigInt::zero(); ctx.phi];
        for (i, x) in v.iter().enumerate() {
            c[i] = x.numer() * (&den / x.denom());
        }
        let mut out = Cyc { c, d: den };
        out.normalize();
        out
    }

    /// Image of this element of Q(ζ_m) inside Q(ζ_M) where m | M.
    pub fn lift(&self, from: &CycloCtx, to: &CycloCtx) -> Cyc {
        if from.m == to.m {
            return self.clone();
        }
        let step = (to.m / from.m) as usize;
        let mut acc = vec![BigInt::zero(); to.phi];
        for (i, x) in self.c.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let z = &to.zeta_pows[(i * step) % to.m as usize];
            for (a, b) in acc.iter_mut().zip(&z.c) {
                if !b.is_zero() {
                    *a += x * b;
                }
            }
        }
        let mut out = Cyc {
            c: acc,
            d: self.d.clone(),
        };
        out.normalize();
        out
    }

    /// Some((sign, k)) if the value is sign·ζ^k with 0 ≤ k < M.
    pub fn as_signed_root(&self, ctx: &CycloCtx) -> Option<(i8, u32)> {
        if !self.d.is_one() {
            return None;
        }
        let nz: Vec<usize> = (0..self.c.len()).filter(|&i| !self.c[i].is_zero()).collect();
        if nz.len() == 1 {
            let x = &self.c[nz[0]];
            if x.is_one() {
                return Some((1, nz[0] as u32));
            }
            if (-x).is_one() {
                return Some((-1, nz[0] as u32));
            }
            return None;
        }
        if nz.is_empty() {
            return None;
        }
        let neg = self.neg();
        for k in ctx.phi..ctx.m as usize {
            let z = &ctx.zeta_pows[k];
            if z.c == self.c {
                return Some((1, k as u32));
            }
            if z.c == neg.c {
                return Some((-1, k as u32));
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(cyclotomic_polynomial(2), vec![1, 1]);
        assert_eq!(cyclotomic_polynomial(3), vec![1, 1, 1]);
        assert_eq!(cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_polynomial(8), vec![1, 0, 0, 0, 1]);
        assert_eq!(cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
        // Φ_105 is the first with a coefficient of absolute value 2.
        assert!(cyclotomic_polynomial(105).iter().any(|&c| c == -2));
    }

    #[test]
    fn degree_is_phi() {
        for m in 1..60 {
            assert_eq!(cyclotomic_polynomial(m).len() - 1, euler_phi(m), "m = {m}");
        }
    }

    #[test]
    fn inverse_roundtrip() {
        let c = ctx(7);
        let mut a = Cyc::zero(&c);
        a.c[0] = BigInt::from(2);
        a.c[1] = BigInt::from(-3);
        a.c[4] = BigInt::from(5);
        let inv = a.inv(&c);
        assert!(a.mul(&inv, &c).is_one());
    }

    #[test]
    fn signed_roots_found() {
        let c = ctx(5);
        for k in 0..5u32 {
            assert_eq!(c.zeta_pows[k as usize].as_signed_root(&c), Some((1, k)));
            assert_eq!(c.zeta_pows[k as usize].neg().as_signed_root(&c), Some((-1, k)));
        }
    }
}
