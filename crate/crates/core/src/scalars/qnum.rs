//! q-numbers, q-factorials, Gaussian binomials and the products μ_k.

use super::Scalar;
use crate::error::{Error, Result};

/// (n)_a = 1 + a + … + a^{n-1}.
pub fn q_int(n: u64, a: &Scalar) -> Scalar {
    let mut acc = Scalar::zero();
    let mut p = Scalar::one();
    for _ in 0..n {
        acc = &acc + &p;
        p = &p * a;
    }
    acc
}

/// (n)_a! = (1)_a (2)_a ⋯ (n)_a.
pub fn q_factorial(n: u64, a: &Scalar) -> Scalar {
    let mut acc = Scalar::one();
    let mut qi = Scalar::zero();
    let mut p = Scalar::one();
    for _ in 0..n {
        qi = &qi + &p;
        p = &p * a;
        acc = &acc * &qi;
    }
    acc
}

/// Gaussian binomial [k choose i]_a.
///
/// Computed by the q-Pascal rule [k,i] = [k-1,i-1] + a^i [k-1,i], which
/// never divides and so stays valid at roots of unity where the factorial
/// quotient would be 0/0.
pub fn q_binomial(k: u64, i: u64, a: &Scalar) -> Result<Scalar> {
    if i > k {
        return Err(Error::OutOfRange(format!("q_binomial needs i <= k (k = {k}, i = {i})")));
    }
    let i = i.min(k - i) as usize;
    let powers: Vec<Scalar> = (0..=i as u64).map(|j| a.powu(j)).collect();
    // row[j] = [n choose j] for the current n
    let mut row = vec![Scalar::zero(); i + 1];
    row[0] = Scalar::one();
    for n in 1..=k as usize {
        for j in (1..=i.min(n)).rev() {
            row[j] = &row[j - 1] + &powers[j] * &row[j];
        }
    }
    Ok(row[i].clone())
}

/// μ_k = ∏_{i=0}^{k-1} (1 − q11^i · qt12).
pub fn mu(k: u64, q11: &Scalar, qt12: &Scalar) -> Scalar {
    let mut acc = Scalar::one();
    let mut p = Scalar::one();
    for _ in 0..k {
        acc = &acc * (Scalar::one() - &p * qt12);
        p = &p * q11;
    }
    acc
}
