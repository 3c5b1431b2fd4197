//! Rank-two decision: enumeration plus scalar shortcuts checked at every
//! visited matrix.

use std::fmt;

use super::{enumerate_with, Caps, GroupoidReport, InfiniteReason, Verdict};
use crate::braiding::BraidingMatrix;
use crate::cartan::{cartan_entry_from, CartanEntry};
use crate::error::{Error, Result};
use crate::rank2::Rank2Params;
use crate::scalars::{q_int, Order, Scalar};

/// A rank-two criterion that forces infinite GK dimension. Vertex numbers
/// are 1-based and name the vertex playing the role of x_1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Shortcut {
    /// q̃ ≠ 1, (2)_{q11}(1 − q11 q̃) ≠ 0, (2)_{q22}(1 − q̃ q22) ≠ 0, q11 q̃² q22 ≠ −1.
    GenericW0,
    /// Both Cartan entries are ≤ −3.
    LargeCartanEntries { c12: i64, c21: i64 },
    /// A torsion vertex joined to a generic vertex outside the allowed shapes.
    SemigenericShape { vertex: usize },
    /// p_n = 1 for a root β_n.
    RootWeightOne { vertex: usize, n: u64 },
    /// p_m = −1 and y_{m+1} ≠ 0, so 2β_m is a root of weight one.
    DoubleRoot { vertex: usize, m: u64 },
    /// y_n^N ≠ 0 with N = ord p_n, so Nβ_n is a root of weight one.
    PowerRoot { vertex: usize, n: u64, multiple: u64 },
}

impl Shortcut {
    pub fn tag(&self) -> &'static str {
        match self {
            Shortcut::GenericW0 => "generic-w0",
            Shortcut::LargeCartanEntries { .. } => "cartan-entries-below-minus-two",
            Shortcut::SemigenericShape { .. } => "semigeneric-shape",
            Shortcut::RootWeightOne { .. } => "root-weight-one",
            Shortcut::DoubleRoot { .. } => "double-root",
            Shortcut::PowerRoot { .. } => "power-root",
        }
    }
}

impl fmt::Display for Shortcut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Shortcut::GenericW0 => f.write_str("w̃_0 is a nonzero primitive element"),
            Shortcut::LargeCartanEntries { c12, c21 } => {
                write!(f, "Cartan entries {c12} and {c21} are both at most -3")
            }
            Shortcut::SemigenericShape { vertex } => {
                write!(f, "torsion vertex {vertex} is joined to a generic vertex in a forbidden way")
            }
            Shortcut::RootWeightOne { vertex, n } => {
                write!(f, "p_{n} = 1 at vertex {vertex}")
            }
            Shortcut::DoubleRoot { vertex, m } => {
                write!(f, "2β_{m} is a root of weight one at vertex {vertex}")
            }
            Shortcut::PowerRoot { vertex, n, multiple } => {
                write!(f, "{multiple}β_{n} is a root of weight one at vertex {vertex}")
            }
        }
    }
}

#[derive(Clone, Debug)]
pub enum Rank2Decision {
    FiniteRootSystem(GroupoidReport),
    InfiniteGK {
        reason: InfiniteReason,
        report: GroupoidReport,
    },
}

impl Rank2Decision {
    pub fn report(&self) -> &GroupoidReport {
        match self {
            Rank2Decision::FiniteRootSystem(r) => r,
            Rank2Decision::InfiniteGK { report, .. } => report,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Rank2Decision::FiniteRootSystem(_))
    }
}

fn is_generic(s: &Scalar) -> bool {
    !matches!(s.order_of(), Ok(Order::Finite(_)))
}

fn oriented(p: &Rank2Params, vertex: usize, c12: i64) -> Option<Shortcut> {
    let minus_one = -Scalar::one();
    let top = (-c12) as u64;
    for n in 1..=top {
        let pn = p.p(n);
        if pn.is_one() {
            return Some(Shortcut::RootWeightOne { vertex, n });
        }
        // y_{n+1} ≠ 0 iff n + 1 ≤ −c12 here.
        if n == top {
            break;
        }
        if pn == minus_one {
            return Some(Shortcut::DoubleRoot { vertex, m: n });
        }
        if let Ok(rc) = p.root_criteria(n) {
            if let Some(multiple) = rc.power_root {
                return Some(Shortcut::PowerRoot { vertex, n, multiple });
            }
        }
    }
    None
}

fn semigeneric(q_ii: &Scalar, q_jj: &Scalar, qt: &Scalar, vertex: usize) -> Option<Shortcut> {
    let Ok(Order::Finite(n)) = q_ii.order_of() else {
        return None;
    };
    if !is_generic(q_jj) {
        return None;
    }
    let inv = q_jj.inv().ok()?;
    let ok = match n {
        2 => *qt == inv || *qt == inv.powu(2),
        3 => *qt == inv,
        _ => false,
    };
    (!ok).then_some(Shortcut::SemigenericShape { vertex })
}

/// All rank-two shortcuts at one matrix.
pub(crate) fn shortcuts(m: &BraidingMatrix, n_max: u64) -> Option<Shortcut> {
    let p = Rank2Params::from_matrix(m).ok()?;
    let qt = p.qt();
    if qt.is_one() {
        return None;
    }
    let one = Scalar::one();
    let minus_one = -Scalar::one();
    let (q11, q22) = (&p.q11, &p.q22);
    if !(q_int(2, q11) * (&one - q11 * &qt)).is_zero()
        && !(q_int(2, q22) * (&one - &qt * q22)).is_zero()
        && q11 * qt.powu(2) * q22 != minus_one
    {
        return Some(Shortcut::GenericW0);
    }
    let entry = |a: &Scalar| match cartan_entry_from(a, &qt, n_max) {
        Ok(CartanEntry::Value(v)) => Some(v),
        _ => None,
    };
    let (c12, c21) = (entry(q11)?, entry(q22)?);
    if c12 <= -3 && c21 <= -3 {
        return Some(Shortcut::LargeCartanEntries { c12, c21 });
    }
    semigeneric(q11, q22, &qt, 1)
        .or_else(|| semigeneric(q22, q11, &qt, 2))
        .or_else(|| oriented(&p, 1, c12))
        .or_else(|| oriented(&p.swapped(), 2, c21))
}

/// Decide finiteness of the root system of a rank-two braiding.
pub fn decide_rank2(m: &BraidingMatrix, caps: &Caps) -> Result<Rank2Decision> {
    if m.theta() != 2 {
        return Err(Error::RankMismatch(m.theta()));
    }
    let n_max = caps.n_max;
    let report = enumerate_with(m, caps, &mut |x| shortcuts(x, n_max).map(InfiniteReason::Shortcut))?;
    match report.verdict.clone() {
        Verdict::FiniteSystem => Ok(Rank2Decision::FiniteRootSystem(report)),
        Verdict::InfiniteDetected(reason) => Ok(Rank2Decision::InfiniteGK { reason, report }),
        Verdict::CapExceeded(msg) => Err(Error::CapExceeded(msg)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupoid::enumerate;

    fn z(n: u32, k: i64) -> Scalar {
        Scalar::root_of_unity(n, k)
    }

    #[test]
    fn semigeneric_zeta3_is_finite() {
        let q = Scalar::q();
        let m = BraidingMatrix::rank2(z(3, 1), q.inv().unwrap(), q).unwrap();
        assert!(decide_rank2(&m, &Caps::default()).unwrap().is_finite());
    }

    #[test]
    fn large_entries_generic() {
        // Indefinite Cartan type: plain enumeration only runs into caps.
        let q = Scalar::q();
        let m = BraidingMatrix::rank2(q.clone(), q.pow(-3).unwrap(), q).unwrap();
        let d = decide_rank2(&m, &Caps::default()).unwrap();
        assert!(!d.is_finite());
    }

    #[test]
    fn decoupled_is_finite() {
        let m = BraidingMatrix::rank2(z(5, 1), Scalar::one(), Scalar::q()).unwrap();
        match decide_rank2(&m, &Caps::default()).unwrap() {
            Rank2Decision::FiniteRootSystem(r) => {
                let roots: Vec<_> = r.seed_roots().iter().map(|x| x.root.clone()).collect();
                assert_eq!(roots, vec![vec![0, 1], vec![1, 0]]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn rank_mismatch() {
        let m = BraidingMatrix::new(vec![vec![z(3, 1)]]).unwrap();
        assert_eq!(decide_rank2(&m, &Caps::default()).unwrap_err(), Error::RankMismatch(1));
    }

    #[test]
    fn agrees_with_plain_enumeration_on_small_torsion() {
        let caps = Caps::default();
        for n in [2u32, 3, 4, 5, 6, 8, 12] {
            for a in 1..n as i64 {
                for b in 0..n as i64 {
                    for c in 1..n as i64 {
                        let m = BraidingMatrix::rank2(z(n, a), z(n, b), z(n, c)).unwrap();
                        let plain = enumerate(&m, &caps).unwrap();
                        let Ok(d) = decide_rank2(&m, &caps) else { continue };
                        match plain.verdict {
                            Verdict::FiniteSystem => {
                                assert!(d.is_finite(), "{m:?}: {:?}", d.report().verdict)
                            }
                            Verdict::InfiniteDetected(_) => assert!(!d.is_finite(), "{m:?}"),
                            Verdict::CapExceeded(_) => {}
                        }
                    }
                }
            }
        }
    }
}
