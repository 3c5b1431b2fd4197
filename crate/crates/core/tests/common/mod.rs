//! Random corpora shared by the integration tests.
#![allow(dead_code)]

use nichols::braiding::BraidingMatrix;
use nichols::scalars::euler_phi;
use nichols::{Order, Scalar};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn z(n: u32, k: i64) -> Scalar {
    Scalar::root_of_unity(n, k)
}

pub fn one() -> Scalar {
    Scalar::one()
}

/// A rank-θ matrix of powers of ζ_n, n ≤ `max_order`, with q_ii ≠ 1.
pub fn random_torsion(rng: &mut ChaCha8Rng, theta: usize, max_order: u32) -> BraidingMatrix {
    loop {
        let n = rng.gen_range(2..=max_order);
        let rows = (0..theta)
            .map(|_| (0..theta).map(|_| z(n, rng.gen_range(0..n as i64))).collect())
            .collect();
        if let Ok(m) = BraidingMatrix::new(rows) {
            return m;
        }
    }
}

/// Rank two, with q̃_12 ≠ 1 in half the draws at least.
pub fn random_rank2(rng: &mut ChaCha8Rng, max_order: u32) -> BraidingMatrix {
    loop {
        let m = random_torsion(rng, 2, max_order);
        if !(m.get(0, 1) * m.get(1, 0)).is_one() || rng.gen_bool(0.2) {
            return m;
        }
    }
}

/// A primitive n-th root of unity chosen at random.
pub fn primitive(rng: &mut ChaCha8Rng, n: u32) -> Scalar {
    loop {
        let k = rng.gen_range(1..=n as i64);
        if num_integer::gcd(k, n as i64) == 1 {
            return z(n, k);
        }
    }
}

/// Every primitive n-th root of unity.
pub fn primitives(n: u32) -> Vec<Scalar> {
    let out: Vec<Scalar> = (1..=n as i64)
        .filter(|&k| num_integer::gcd(k, n as i64) == 1)
        .map(|k| z(n, k))
        .collect();
    assert_eq!(out.len() as u64, euler_phi(n) as u64);
    out
}

pub fn order(s: &Scalar) -> Option<u64> {
    match s.order_of() {
        Ok(Order::Finite(n)) => Some(n),
        _ => None,
    }
}

/// (n)_a computed as a plain geometric sum.
pub fn qn(n: u64, a: &Scalar) -> Scalar {
    (0..n).map(|i| a.powu(i)).sum()
}
