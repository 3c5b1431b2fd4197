//! Scalar criteria for braidings of rank two and the verification suites.

mod suites;

use serde::Serialize;

use crate::braiding::BraidingMatrix;
use crate::error::{Error, Result};
use crate::scalars::{mu, q_factorial, q_int, Order, Scalar};

pub use suites::{verify_suite, verify_suite_seeded, SuiteLine, SuiteReport, DEFAULT_SEED, SUITE_NAMES};

/// A rank-two braiding with the derived quantities used by the criteria.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rank2Params {
    pub q11: Scalar,
    pub q12: Scalar,
    pub q21: Scalar,
    pub q22: Scalar,
}

/// Which branch of the w_1 criterion applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum W1Branch {
    /// q22 = −1.
    Q22MinusOne,
    /// q̃12 q22 = 1.
    QtQ22One,
    /// q11 q̃12² q22 = −1.
    P1Relation,
}

impl Rank2Params {
    pub fn new(q11: Scalar, q12: Scalar, q21: Scalar, q22: Scalar) -> Result<Rank2Params> {
        for s in [&q11, &q12, &q21, &q22] {
            if s.is_zero() {
                return Err(Error::ZeroInput);
            }
        }
        Ok(Rank2Params { q11, q12, q21, q22 })
    }

    /// Diagram form: q12 = q̃12 and q21 = 1.
    pub fn from_diagram(q11: Scalar, qt12: Scalar, q22: Scalar) -> Result<Rank2Params> {
        Rank2Params::new(q11, qt12, Scalar::one(), q22)
    }

    pub fn from_matrix(m: &BraidingMatrix) -> Result<Rank2Params> {
        if m.theta() != 2 {
            return Err(Error::RankMismatch(m.theta()));
        }
        Rank2Params::new(m.get(0, 0).clone(), m.get(0, 1).clone(), m.get(1, 0).clone(), m.get(1, 1).clone())
    }

    /// The same braiding with the vertices swapped.
    pub fn swapped(&self) -> Rank2Params {
        Rank2Params {
            q11: self.q22.clone(),
            q12: self.q21.clone(),
            q21: self.q12.clone(),
            q22: self.q11.clone(),
        }
    }

    /// Fails with `TrivialDiagonal` when q11 or q22 is 1.
    pub fn to_matrix(&self) -> Result<BraidingMatrix> {
        BraidingMatrix::new(vec![
            vec![self.q11.clone(), self.q12.clone()],
            vec![self.q21.clone(), self.q22.clone()],
        ])
    }

    pub fn qt(&self) -> Scalar {
        &self.q12 * &self.q21
    }

    /// β_m = mα_1 + α_2.
    pub fn beta(m: u64) -> [i64; 2] {
        [m as i64, 1]
    }

    /// p_m = q11^{m²} q̃12^m q22.
    pub fn p(&self, m: u64) -> Scalar {
        self.q11.powu(m * m) * self.qt().powu(m) * &self.q22
    }

    /// y_k ≠ 0, i.e. (k)!_{q11} μ_k ≠ 0.
    pub fn y_nonzero(&self, k: u64) -> bool {
        !(q_factorial(k, &self.q11) * mu(k, &self.q11, &self.qt())).is_zero()
    }

    /// ord p_n, or an error when p_n is not a root of unity.
    pub fn p_order(&self, n: u64) -> Result<u64> {
        let p = self.p(n);
        match p.order_of()? {
            Order::Finite(k) => Ok(k),
            _ => Err(Error::OrderUndefined(format!("p_{n} = {p} is not a root of unity"))),
        }
    }

    /// d_t = 1 − q^{t+1} q11^{2n} q̃12 + q^t (1 − q11^n q̃12)(n+1)_{q11} / (t)_q with q = p_n.
    pub fn d_t(&self, n: u64, t: u64) -> Result<Scalar> {
        if n == 0 {
            return Err(Error::OutOfRange("d_t needs n ≥ 1".into()));
        }
        let big_n = self.p_order(n)?;
        if big_n < 2 {
            return Err(Error::OrderUndefined(format!("p_{n} = 1 has order 1")));
        }
        if t == 0 || t >= big_n {
            return Err(Error::OutOfRange(format!("t = {t} outside 1..={}", big_n - 1)));
        }
        let q = self.p(n);
        let qt = self.qt();
        let a = self.q11.powu(n);
        let tq = q_int(t, &q);
        if tq.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let first = Scalar::one() - q.powu(t + 1) * a.powu(2) * &qt;
        let second = q.powu(t) * (Scalar::one() - &a * &qt) * q_int(n + 1, &self.q11);
        Ok(first + second.checked_div(&tq)?)
    }

    /// The displayed product whose vanishing decides w_m ∈ k·y_{m+1}².
    /// (m+2)!/(m)! is taken as (m+1)(m+2) so the value stays defined when (m)! = 0.
    pub fn wm_condition(&self, m: u64) -> Result<Scalar> {
        if self.q11.is_zero() {
            return Err(Error::DenominatorVanishes("q11 = 0".into()));
        }
        let pm = self.p(m);
        let pm1 = self.p(m + 1);
        let den = (Scalar::one() + &self.q11) * (Scalar::one() + &pm1);
        if den.is_zero() {
            return Err(Error::DenominatorVanishes("(1 + q11)(1 + p_{m+1}) = 0".into()));
        }
        let qt = self.qt();
        let ratio = pm1.checked_div(&self.q11)?;
        // (m+1)(m+2)/(2) in q11: the even factor absorbs (1 + q11) exactly.
        let sq = self.q11.powu(2);
        let (even, odd) = if m % 2 == 1 { (m + 1, m + 2) } else { (m + 2, m + 1) };
        let num = pm
            * q_int(even / 2, &sq)
            * q_int(odd, &self.q11)
            * (Scalar::one() - self.q11.powu(m) * &qt)
            * (Scalar::one() - self.q11.powu(m + 1) * &qt);
        let frac = num.checked_div(&(Scalar::one() + &pm1))?;
        Ok((Scalar::one() - &ratio) * (Scalar::one() + &ratio + frac))
    }

    /// w̃_0 = 0, valid when y_2 ≠ 0 and p_1 ≠ −1.
    pub fn w0_vanishes(&self) -> Result<bool> {
        let minus_one = -Scalar::one();
        if !self.y_nonzero(2) {
            return Err(Error::HypothesisViolated("y_2 = 0".into()));
        }
        if self.p(1) == minus_one {
            return Err(Error::HypothesisViolated("p_1 = -1".into()));
        }
        let qt = self.qt();
        let v = (&qt * &self.q22 - Scalar::one())
            * (&self.q22 + Scalar::one())
            * (&self.q11 * qt.powu(2) * &self.q22 + Scalar::one());
        Ok(v.is_zero())
    }

    /// w̃_1 = 0 in the given branch, valid when y_3 ≠ 0 and p_2 ≠ −1.
    pub fn w1_vanishes(&self, branch: W1Branch) -> Result<bool> {
        let one = Scalar::one();
        let minus_one = -Scalar::one();
        if !self.y_nonzero(3) {
            return Err(Error::HypothesisViolated("y_3 = 0".into()));
        }
        if self.p(2) == minus_one {
            return Err(Error::HypothesisViolated("p_2 = -1".into()));
        }
        let qt = self.qt();
        let q11 = &self.q11;
        let a = &one - q11.powu(3) * &qt;
        let v = match branch {
            W1Branch::Q22MinusOne => {
                if self.q22 != minus_one {
                    return Err(Error::HypothesisViolated("q22 != -1".into()));
                }
                a * (q11.powu(3) * qt.powu(2) + &one) * q_int(3, &-(q11 * &qt))
            }
            W1Branch::QtQ22One => {
                if !(&qt * &self.q22).is_one() {
                    return Err(Error::HypothesisViolated("qt12 q22 != 1".into()));
                }
                a * (q11.powu(2) + &one) * q_int(3, &-(q11.powu(2) * &qt))
            }
            W1Branch::P1Relation => {
                if q11 * qt.powu(2) * &self.q22 != minus_one {
                    return Err(Error::HypothesisViolated("q11 qt12^2 q22 != -1".into()));
                }
                a * (q11.powu(2) + &one)
            }
        };
        Ok(v.is_zero())
    }

    /// q11^{l(l+1)} q̃12^{l+1} q22, equal to 1 when y_{l+1} y_l is a multiple of y_l y_{l+1}.
    pub fn yy1_value(&self, l: u64) -> Scalar {
        self.q11.powu(l * (l + 1)) * self.qt().powu(l + 1) * &self.q22
    }

    /// Root information read off p_n for n ≥ 1.
    pub fn root_criteria(&self, n: u64) -> Result<RootCriteria> {
        if n == 0 {
            return Err(Error::OutOfRange("root criteria need n ≥ 1".into()));
        }
        let p_n = self.p(n);
        let order = self.p_order(n)?;
        let y_next_nonzero = self.y_nonzero(n + 1);
        let qt_nontrivial = !self.qt().is_one();
        let mut d = vec![];
        if order >= 2 {
            for t in 1..order.saturating_sub(1) {
                d.push(self.d_t(n, t)?);
            }
        }
        let power_root = if order >= 2 && y_next_nonzero && d.iter().all(|x| !x.is_zero()) {
            Some(order)
        } else {
            None
        };
        let minus_one = -Scalar::one();
        let double_root = p_n == minus_one && y_next_nonzero;
        Ok(RootCriteria {
            n,
            order,
            y_next_nonzero,
            power_root,
            double_root,
            gk_infinite: qt_nontrivial && (power_root.is_some() || double_root),
            yy1: self.yy1_value(n).is_one(),
            yy2: p_n == minus_one,
            d,
            p_n,
        })
    }
}

/// Both sides of Σ_{l=0}^{t} q^l (l+1)_q ⋯ (l+r)_q = (t+1)_q ⋯ (t+r+1)_q / (r+1)_q.
pub fn sumprod(q: &Scalar, r: u64, t: u64) -> Result<(Scalar, Scalar)> {
    let den = q_int(r + 1, q);
    if den.is_zero() {
        return Err(Error::DenominatorVanishes("(r+1)_q = 0".into()));
    }
    let rising = |from: u64, len: u64| (from..from + len).map(|k| q_int(k, q)).product::<Scalar>();
    let lhs = (0..=t).map(|l| q.powu(l) * rising(l + 1, r)).sum::<Scalar>();
    let rhs = rising(t + 1, r + 1).checked_div(&den)?;
    Ok((lhs, rhs))
}

/// What p_n says about roots along the ray of β_n.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootCriteria {
    pub n: u64,
    pub p_n: Scalar,
    /// N = ord p_n.
    pub order: u64,
    /// d_t for t = 1..=N−2.
    pub d: Vec<Scalar>,
    pub y_next_nonzero: bool,
    /// Some(N) when y_n^N ≠ 0, so Nβ_n is a root with q = p_n^{N²} = 1.
    pub power_root: Option<u64>,
    /// p_n = −1 and y_{n+1} ≠ 0, so 2β_n is a root with q = 1.
    pub double_root: bool,
    /// A root of weight one exists and q̃12 ≠ 1.
    pub gk_infinite: bool,
    pub yy1: bool,
    pub yy2: bool,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: u32, k: i64) -> Scalar {
        Scalar::root_of_unity(n, k)
    }

    #[test]
    fn p_matches_bicharacter() {
        let m = BraidingMatrix::new(vec![
            vec![z(7, 2), Scalar::q_pow(3)],
            vec![z(7, 5) * Scalar::q(), Scalar::q_pow(-1)],
        ])
        .unwrap();
        let p = Rank2Params::from_matrix(&m).unwrap();
        for k in 0..=10u64 {
            let b = Rank2Params::beta(k);
            assert_eq!(p.p(k), m.bq(&b, &b).unwrap());
        }
    }

    #[test]
    fn d_t_g8_family() {
        let r = z(8, 1);
        let p = Rank2Params::from_diagram(r.clone(), r.pow(-3).unwrap(), r.clone()).unwrap();
        assert_eq!(p.p(1), r.powu(7));
        assert_eq!(p.p_order(1).unwrap(), 8);
        for t in 1..=6 {
            assert!(!p.d_t(1, t).unwrap().is_zero(), "t = {t}");
        }
    }

    #[test]
    fn d_t_errors() {
        let q = Scalar::q();
        let p = Rank2Params::from_diagram(q.clone(), q.inv().unwrap(), q.clone()).unwrap();
        assert!(matches!(p.d_t(1, 1), Err(Error::OrderUndefined(_))));
        let w = z(3, 1);
        let p = Rank2Params::from_diagram(w.clone(), w.clone(), w.powu(2)).unwrap();
        assert!(matches!(p.d_t(1, 5), Err(Error::OutOfRange(_))));
    }

    #[test]
    fn w0_branches() {
        let q = Scalar::q();
        let p = Rank2Params::from_diagram(q.clone(), q.pow(-3).unwrap(), -Scalar::one()).unwrap();
        assert!(p.w0_vanishes().unwrap());
        let p = Rank2Params::from_diagram(q.clone(), q.pow(-3).unwrap(), q.powu(3)).unwrap();
        assert!(p.w0_vanishes().unwrap());
        let p = Rank2Params::from_diagram(q.clone(), q.pow(-3).unwrap(), q.powu(2)).unwrap();
        assert!(!p.w0_vanishes().unwrap());
        let w = z(2, 1);
        let p = Rank2Params::from_diagram(w, q.clone(), q).unwrap();
        assert!(matches!(p.w0_vanishes(), Err(Error::HypothesisViolated(_))));
    }

    #[test]
    fn crucial_family_double_root() {
        // q11 = p ∈ G'_6, q̃ = q22 = p⁴: p_1 = p⁹ = −1 and y_2 ≠ 0.
        let p6 = z(6, 1);
        let p = Rank2Params::from_diagram(p6.clone(), p6.powu(4), p6.powu(4)).unwrap();
        let rc = p.root_criteria(1).unwrap();
        assert_eq!(rc.p_n, -Scalar::one());
        assert!(rc.double_root);
        assert!(rc.gk_infinite);
    }

    #[test]
    fn w1_hypotheses() {
        let q = Scalar::q();
        let p = Rank2Params::from_diagram(q.clone(), q.pow(-3).unwrap(), q.powu(2)).unwrap();
        assert!(matches!(
            p.w1_vanishes(W1Branch::Q22MinusOne),
            Err(Error::HypothesisViolated(_))
        ));
        let p = Rank2Params::from_diagram(q.clone(), q.pow(-3).unwrap(), -Scalar::one()).unwrap();
        assert!(p.w1_vanishes(W1Branch::Q22MinusOne).unwrap());
    }

    #[test]
    fn sumprod_small_cases() {
        let q = z(5, 2);
        for r in 0..=3 {
            for t in 0..=6 {
                let (a, b) = sumprod(&q, r, t).unwrap();
                assert_eq!(a, b, "r={r} t={t}");
            }
        }
        let generic = Scalar::q();
        let (a, b) = sumprod(&generic, 2, 3).unwrap();
        assert_eq!(a, b);
        assert!(sumprod(&z(3, 1), 2, 0).is_err());
    }
}
