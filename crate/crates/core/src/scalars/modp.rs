//! Images of Q(ζ_M)[q] in F_p[q] for primes p ≡ 1 (mod M).
//!
//! Used to certify that a polynomial gcd is trivial without running the
//! Euclidean algorithm over the cyclotomic field: if the images of a and b
//! (with nonvanishing leading coefficients) are coprime mod p, so are a and b.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::cyclotomic::{Cyc, CycloCtx};
use super::poly::{self, Poly};

#[derive(Clone, Copy, Debug)]
pub(crate) struct ModPrime {
    pub p: u64,
    /// A primitive M-th root of unity mod p, the image of ζ_M.
    pub omega: u64,
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    r
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for b in BASES {
        if n % b == 0 {
            return n == b;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'outer: for b in BASES {
        let mut x = pow_mod(b, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = vec![];
    let mut f = 2;
    while f * f <= n {
        if n % f == 0 {
            out.push(f);
            while n % f == 0 {
                n /= f;
            }
        }
        f += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// `count` primes p ≡ 1 (mod m) above 2^40, each with a primitive m-th root of unity.
pub(crate) fn find_primes(m: u32, count: usize) -> Vec<ModPrime> {
    let m = m as u64;
    let ell = prime_factors(m);
    let mut out = vec![];
    let mut k = (1u64 << 40) / m + 1;
    while out.len() < count {
        let p = k * m + 1;
        k += 1;
        if !is_prime(p) {
            continue;
        }
        let qf = prime_factors(p - 1);
        // a generator of F_p^*, then ω = g^{(p-1)/m}
        let g = (2..)
            .find(|&g| qf.iter().all(|&f| pow_mod(g, (p - 1) / f, p) != 1))
            .expect("F_p^* is cyclic");
        let omega = pow_mod(g, (p - 1) / m, p);
        debug_assert!(ell.iter().all(|&l| pow_mod(omega, m / l, p) != 1));
        out.push(ModPrime { p, omega });
    }
    out
}

fn big_mod(x: &BigInt, p: u64) -> u64 {
    let r = x % BigInt::from(p);
    let r = if r.sign() == num_bigint::Sign::Minus { r + BigInt::from(p) } else { r };
    r.to_u64().expect("reduced below p")
}

/// Image of a cyclotomic number with ζ ↦ x, or None if its denominator vanishes mod p.
fn cyc_image(c: &Cyc, p: u64, x: u64) -> Option<u64> {
    let d = big_mod(&c.d, p);
    if d == 0 {
        return None;
    }
    let mut acc = 0u64;
    let mut w = 1u64;
    for v in &c.c {
        acc = (acc + mul_mod(big_mod(v, p), w, p)) % p;
        w = mul_mod(w, x, p);
    }
    Some(mul_mod(acc, pow_mod(d, p - 2, p), p))
}

fn image(a: &[Cyc], p: u64, x: u64) -> Option<Vec<u64>> {
    a.iter().map(|c| cyc_image(c, p, x)).collect()
}

fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn gcd_degree_mod(a: Vec<u64>, b: Vec<u64>, p: u64) -> usize {
    gcd_mod(a, b, p).len().saturating_sub(1)
}

/// Monic gcd in F_p[x].
fn gcd_mod(mut a: Vec<u64>, mut b: Vec<u64>, p: u64) -> Vec<u64> {
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        // a ← a mod b
        let inv = pow_mod(*b.last().expect("nonzero"), p - 2, p);
        while a.len() >= b.len() {
            let f = mul_mod(*a.last().expect("nonzero"), inv, p);
            let shift = a.len() - b.len();
            for (i, &bi) in b.iter().enumerate() {
                let t = mul_mod(f, bi, p);
                a[shift + i] = (a[shift + i] + p - t) % p;
            }
            trim(&mut a);
            if a.is_empty() {
                break;
            }
        }
        std::mem::swap(&mut a, &mut b);
    }
    if let Some(&lead) = a.last() {
        let inv = pow_mod(lead, p - 2, p);
        for x in &mut a {
            *x = mul_mod(*x, inv, p);
        }
    }
    a
}

/// True if some good prime shows gcd(a, b) = 1 over Q(ζ_M).
pub(crate) fn coprime(ctx: &CycloCtx, a: &[Cyc], b: &[Cyc]) -> bool {
    for &mp in &ctx.primes()[..2] {
        let (Some(ia), Some(ib)) = (image(a, mp.p, mp.omega), image(b, mp.p, mp.omega)) else {
            continue;
        };
        // Leading coefficients must survive so the image degrees are exact.
        if ia.last() == Some(&0) || ib.last() == Some(&0) {
            continue;
        }
        if gcd_degree_mod(ia, ib, mp.p) == 0 {
            return true;
        }
    }
    false
}

/// Inverse of the Vandermonde matrix V[k][j] = x_k^j mod p.
fn vandermonde_inverse(xs: &[u64], p: u64) -> Vec<Vec<u64>> {
    let n = xs.len();
    let mut m: Vec<Vec<u64>> = xs
        .iter()
        .enumerate()
        .map(|(k, &x)| {
            let mut row = Vec::with_capacity(2 * n);
            let mut w = 1u64;
            for _ in 0..n {
                row.push(w);
                w = mul_mod(w, x, p);
            }
            row.extend((0..n).map(|j| u64::from(j == k)));
            row
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| m[r][col] != 0).expect("distinct nodes");
        m.swap(col, piv);
        let inv = pow_mod(m[col][col], p - 2, p);
        for x in &mut m[col] {
            *x = mul_mod(*x, inv, p);
        }
        for r in 0..n {
            if r != col && m[r][col] != 0 {
                let f = m[r][col];
                for c in 0..2 * n {
                    let t = mul_mod(f, m[col][c], p);
                    m[r][c] = (m[r][c] + p - t) % p;
                }
            }
        }
    }
    m.into_iter().map(|row| row[n..].to_vec()).collect()
}

/// r/s ≡ u (mod n) with |r|, |s| below sqrt(n/2).
fn rational_reconstruction(u: &BigInt, n: &BigInt) -> Option<BigRational> {
    let bound = (n / 2u32).sqrt();
    let (mut r0, mut r1) = (n.clone(), u.mod_floor(n));
    let (mut s0, mut s1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let s2 = &s0 - &q * &s1;
        (r0, r1, s0, s1) = (r1, r2, s1, s2);
    }
    if s1.is_zero() || s1.abs() > bound {
        return None;
    }
    Some(BigRational::new(r1, s1))
}

/// Monic gcd of two nonzero polynomials by images under every embedding of
/// Q(ζ_M) into F_p, CRT over several primes, and a final exact division check.
/// None if the primes run out first.
pub(crate) fn gcd(ctx: &CycloCtx, a: &Poly, b: &Poly) -> Option<Poly> {
    let m = ctx.m as u64;
    let units: Vec<u64> = (1..=m).filter(|k| k.gcd(&m) == 1).collect();
    debug_assert_eq!(units.len(), ctx.phi);
    let mut best: Option<usize> = None;
    // CRT state: one residue per (coefficient, basis index).
    let mut acc: Vec<Vec<BigInt>> = vec![];
    let mut modulus = BigInt::one();
    for mp in ctx.primes() {
        let p = mp.p;
        let xs: Vec<u64> = units.iter().map(|&k| pow_mod(mp.omega, k, p)).collect();
        let mut gs = Vec::with_capacity(xs.len());
        for &x in &xs {
            let (Some(ia), Some(ib)) = (image(a, p, x), image(b, p, x)) else {
                break;
            };
            if ia.last() == Some(&0) || ib.last() == Some(&0) {
                break;
            }
            gs.push(gcd_mod(ia, ib, p));
        }
        if gs.len() != xs.len() {
            continue;
        }
        let deg = gs[0].len() - 1;
        if gs.iter().any(|g| g.len() != deg + 1) {
            continue;
        }
        match best {
            Some(d) if deg > d => continue,
            Some(d) if deg == d => {}
            _ => {
                best = Some(deg);
                acc = vec![vec![BigInt::zero(); ctx.phi]; deg];
                modulus = BigInt::one();
            }
        }
        if deg == 0 {
            return Some(poly::constant(Cyc::one(ctx)));
        }
        let vinv = vandermonde_inverse(&xs, p);
        let pb = BigInt::from(p);
        let minv = big_mod(&modulus, p);
        let minv = pow_mod(minv, p - 2, p);
        for (i, row) in acc.iter_mut().enumerate() {
            for (j, slot) in row.iter_mut().enumerate() {
                let mut r = 0u64;
                for (k, g) in gs.iter().enumerate() {
                    r = (r + mul_mod(vinv[j][k], g[i], p)) % p;
                }
                let cur = big_mod(slot, p);
                let t = mul_mod((r + p - cur) % p, minv, p);
                *slot += &modulus * BigInt::from(t);
            }
        }
        modulus *= &pb;
        let coeffs: Option<Vec<Cyc>> = acc
            .iter()
            .map(|row| {
                let v: Option<Vec<BigRational>> =
                    row.iter().map(|u| rational_reconstruction(u, &modulus)).collect();
                v.map(|v| Cyc::from_exact(ctx, v))
            })
            .collect();
        let Some(mut g) = coeffs else { continue };
        g.push(Cyc::one(ctx));
        if poly::divrem(ctx, a, &g).1.is_empty() && poly::divrem(ctx, b, &g).1.is_empty() {
            return Some(g);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes_have_primitive_roots() {
        for m in [1u32, 2, 3, 4, 12, 60, 97] {
            for mp in find_primes(m, 2) {
                assert!(is_prime(mp.p));
                assert_eq!((mp.p - 1) % m as u64, 0);
                assert_eq!(pow_mod(mp.omega, m as u64, mp.p), 1);
                for l in prime_factors(m as u64) {
                    assert_ne!(pow_mod(mp.omega, m as u64 / l, mp.p), 1);
                }
            }
        }
    }

    #[test]
    fn gcd_degree_small() {
        let p = 101;
        // (x-1)(x-2) and (x-1)(x-3)
        let a = vec![2, p - 3, 1];
        let b = vec![3, p - 4, 1];
        assert_eq!(gcd_degree_mod(a, b, p), 1);
        assert_eq!(gcd_degree_mod(vec![1, 1], vec![2, 1], p), 0);
    }

    #[test]
    fn modular_gcd_matches_known_factor() {
        use crate::scalars::cyclotomic::ctx;
        let c = ctx(12);
        let z = |k: usize| c.zeta_pows[k % 12].clone();
        let rat = |n: i64, d: i64| Cyc::from_rational(&c, &BigRational::new(n.into(), d.into()));
        let lin = |root: Cyc| vec![root.neg(), Cyc::one(&c)];
        let common = poly::mul(&c, &lin(z(1)), &lin(rat(-1, 2)));
        let a = poly::mul(&c, &common, &vec![rat(3, 1), z(5), Cyc::one(&c)]);
        let b = poly::mul(&c, &common, &lin(z(2).mul(&rat(7, 1), &c)));
        let g = gcd(&c, &a, &b).expect("enough primes");
        assert_eq!(g, common);
        let coprime_pair = gcd(&c, &lin(z(1)), &lin(z(2))).unwrap();
        assert_eq!(coprime_pair.len(), 1);
    }
}
