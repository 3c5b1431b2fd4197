//! Generalized Cartan matrices attached to braiding matrices.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::braiding::BraidingMatrix;
use crate::error::{Error, Result};
use crate::scalars::{Order, Scalar, Unit};

/// Search cap for (n+1)_{q_ii}(1 − q_ii^n q̃_ij) = 0 when q_ii has infinite
/// order and the entries are not monomials.
pub const DEFAULT_N_MAX: u64 = 100;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CartanEntry {
    Value(i64),
    /// No admissible n. `exact` is false when the verdict only holds up to
    /// the search cap.
    NotReflectable { exact: bool },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
pub enum GcmClass {
    Finite,
    Affine,
    Indefinite,
    NotApplicable,
}

/// c_ij together with reflectability and the finite/affine/indefinite type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CartanData {
    /// Row i is only meaningful when `reflectable[i]`; other rows hold 0
    /// off the diagonal.
    pub c: Vec<Vec<i64>>,
    pub reflectable: Vec<bool>,
    /// True for vertices whose NotReflectable verdict is only up to the cap.
    pub bounded: Vec<bool>,
    pub gcm_class: GcmClass,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CartanType {
    CartanType(Vec<Vec<i64>>),
    NotCartan,
}

/// Smallest n ≥ 0 with a^n · t = 1 for units, exactly.
pub fn unit_solve_power(a: Unit, t: Unit) -> Option<u64> {
    let l = num_integer::lcm(a.n, t.n);
    let a = a.widen(l);
    let t = t.widen(l);
    if a.e == 0 {
        if t.e != 0 {
            return None;
        }
        let ord = (l / num_integer::gcd(l, a.k)) as u64;
        (0..ord).find(|&n| (a.k as u64 * n + t.k as u64) % l as u64 == 0)
    } else {
        if t.e % a.e != 0 {
            return None;
        }
        let n = -t.e / a.e;
        if n < 0 {
            return None;
        }
        let k = (a.k as i128 * n as i128 + t.k as i128).rem_euclid(l as i128);
        (k == 0).then_some(n as u64)
    }
}

/// Smallest n ≥ 0 with a^n · t = 1, or None. The bool is true when the
/// answer is exact (finite order, or both values monomial).
pub(crate) fn solve_power(a: &Scalar, t: &Scalar, cap: u64) -> Result<(Option<u64>, bool)> {
    if let (Some(ua), Some(ut)) = (a.as_unit(), t.as_unit()) {
        return Ok((unit_solve_power(ua, ut), true));
    }
    let (limit, exact) = match a.order_of()? {
        Order::Finite(n) => (n - 1, true),
        _ => (cap, false),
    };
    let mut p = t.clone();
    for n in 0..=limit {
        if p.is_one() {
            return Ok((Some(n), true));
        }
        p = &p * a;
    }
    Ok((None, exact))
}

/// c_ij = −min{n ≥ 0 : (n+1)_{q_ii}(1 − q_ii^n q̃_ij) = 0}.
pub fn cartan_entry(m: &BraidingMatrix, i: usize, j: usize, n_max: u64) -> Result<CartanEntry> {
    let t = m.qtilde(i, j)?;
    let a = m.get(i, i);
    cartan_entry_from(a, &t, n_max)
}

pub(crate) fn cartan_entry_from(a: &Scalar, t: &Scalar, n_max: u64) -> Result<CartanEntry> {
    if t.is_one() {
        return Ok(CartanEntry::Value(0));
    }
    match a.order_of()? {
        Order::Finite(1) => Ok(CartanEntry::NotReflectable { exact: true }),
        Order::Finite(n) => {
            let (found, _) = solve_power(a, t, n_max)?;
            let v = found.map_or(n - 1, |f| f.min(n - 1));
            Ok(CartanEntry::Value(-(v as i64)))
        }
        _ => match solve_power(a, t, n_max)? {
            (Some(v), _) => Ok(CartanEntry::Value(-(v as i64))),
            (None, exact) => Ok(CartanEntry::NotReflectable { exact }),
        },
    }
}

/// Cartan data for all vertices with search cap `n_max`.
pub fn cartan_data(m: &BraidingMatrix, n_max: u64) -> Result<CartanData> {
    let n = m.theta();
    let mut c = vec![vec![0i64; n]; n];
    let mut reflectable = vec![true; n];
    let mut bounded = vec![false; n];
    for i in 0..n {
        c[i][i] = 2;
        for j in 0..n {
            if i == j {
                continue;
            }
            match cartan_entry(m, i, j, n_max)? {
                CartanEntry::Value(v) => c[i][j] = v,
                CartanEntry::NotReflectable { exact } => {
                    reflectable[i] = false;
                    bounded[i] |= !exact;
                }
            }
        }
        if !reflectable[i] {
            for (j, x) in c[i].iter_mut().enumerate() {
                *x = if i == j { 2 } else { 0 };
            }
        }
    }
    let gcm_class = if reflectable.iter().all(|&r| r) {
        classify_gcm(&c).unwrap_or(GcmClass::NotApplicable)
    } else {
        GcmClass::NotApplicable
    };
    Ok(CartanData {
        c,
        reflectable,
        bounded,
        gcm_class,
    })
}

/// The exponents a_ij ≤ 0 with q̃_ij = q_ii^{a_ij}, chosen in
/// (−ord q_ii, 0] when q_ii has finite order.
pub fn cartan_type_exponents(m: &BraidingMatrix) -> CartanType {
    let n = m.theta();
    let mut a = vec![vec![0i64; n]; n];
    for i in 0..n {
        a[i][i] = 2;
        let qii = m.get(i, i);
        for j in 0..n {
            if i == j {
                continue;
            }
            let t = m.get(i, j) * m.get(j, i);
            // q̃_ij = q_ii^{-n}  ⇔  q_ii^n · q̃_ij = 1
            match solve_power(qii, &t, DEFAULT_N_MAX) {
                Ok((Some(v), _)) => a[i][j] = -(v as i64),
                _ => return CartanType::NotCartan,
            }
        }
    }
    CartanType::CartanType(a)
}

fn rat(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

fn det(mut m: Vec<Vec<BigRational>>) -> BigRational {
    let n = m.len();
    let mut d = BigRational::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return BigRational::zero();
        };
        if p != col {
            m.swap(p, col);
            d = -d;
        }
        let piv = m[col][col].clone();
        d *= &piv;
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let f = &m[r][col] / &piv;
            for k in col..n {
                let v = &m[col][k] * &f;
                m[r][k] -= v;
            }
        }
    }
    d
}

fn rank(mut m: Vec<Vec<BigRational>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for col in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(p, r);
        let piv = m[r][col].clone();
        for i in r + 1..rows {
            if m[i][col].is_zero() {
                continue;
            }
            let f = &m[i][col] / &piv;
            for k in col..cols {
                let v = &m[r][k] * &f;
                m[i][k] -= v;
            }
        }
        r += 1;
    }
    r
}

/// Finite / affine / indefinite type of an indecomposable symmetrizable GCM.
pub fn classify_gcm(a: &[Vec<i64>]) -> Result<GcmClass> {
    let n = a.len();
    if n == 0 || a.iter().any(|r| r.len() != n) {
        return Err(Error::InvalidCartan("matrix must be square and nonempty".into()));
    }
    for i in 0..n {
        if a[i][i] != 2 {
            return Err(Error::InvalidCartan(format!("diagonal entry {} is not 2", i + 1)));
        }
        for j in 0..n {
            if i != j && (a[i][j] > 0 || (a[i][j] == 0) != (a[j][i] == 0)) {
                return Err(Error::InvalidCartan(format!(
                    "entries ({0},{1}) and ({1},{0}) violate the sign pattern",
                    i + 1,
                    j + 1
                )));
            }
        }
    }
    // Symmetrizer d with d_i a_ij = d_j a_ji, d_0 = 1.
    let mut d: Vec<Option<BigRational>> = vec![None; n];
    d[0] = Some(BigRational::one());
    let mut stack = vec![0usize];
    let mut seen = 1;
    while let Some(i) = stack.pop() {
        for j in 0..n {
            if i == j || a[i][j] == 0 || d[j].is_some() {
                continue;
            }
            let di = d[i].clone().unwrap();
            d[j] = Some(di * rat(a[i][j]) / rat(a[j][i]));
            seen += 1;
            stack.push(j);
        }
    }
    if seen < n {
        return Err(Error::Decomposable);
    }
    let d: Vec<BigRational> = d.into_iter().map(Option::unwrap).collect();
    for i in 0..n {
        for j in 0..n {
            if &d[i] * rat(a[i][j]) != &d[j] * rat(a[j][i]) {
                return Err(Error::NotSymmetrizable);
            }
        }
    }
    let b: Vec<Vec<BigRational>> = (0..n)
        .map(|i| (0..n).map(|j| &d[i] * rat(a[i][j])).collect())
        .collect();
    let leading_positive = (1..=n).all(|k| {
        let sub = b[..k].iter().map(|r| r[..k].to_vec()).collect();
        det(sub).is_positive()
    });
    if leading_positive {
        return Ok(GcmClass::Finite);
    }
    let psd = (1u32..(1u32 << n)).all(|mask| {
        let idx: Vec<usize> = (0..n).filter(|&i| mask & (1 << i) != 0).collect();
        let sub = idx
            .iter()
            .map(|&i| idx.iter().map(|&j| b[i][j].clone()).collect())
            .collect();
        !det(sub).is_negative()
    });
    if psd && n - rank(b) == 1 {
        Ok(GcmClass::Affine)
    } else {
        Ok(GcmClass::Indefinite)
    }
}
