//! Vanishing in the Nichols algebra and graded dimensions.
//!
//! A homogeneous x of positive degree is zero in B(V) iff every ∂_i(x) is,
//! so x = 0 iff all full chains of skew derivations kill it. Torsion
//! matrices run on exact i128 vectors over Z[ζ_M]; anything else (or an
//! overflow) falls back to `Scalar` coefficients.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use super::{check_rank, word_degree, FreeElement};
use crate::braiding::BraidingMatrix;
use crate::error::{Error, Result};
use crate::scalars::{cyclotomic_polynomial, Scalar};

/// Default bound on the total degree handed to the oracle.
pub const DEFAULT_MAX_DEGREE: usize = 12;

type Elem<C> = HashMap<Vec<u8>, C>;

trait Coeffs {
    type C: Clone;
    type U: Clone;
    fn unit_one(&self) -> Self::U;
    /// u · q_{ij}.
    fn times_q(&self, u: &Self::U, i: usize, j: usize) -> Self::U;
    /// None on overflow.
    fn scaled(&self, c: &Self::C, u: &Self::U) -> Option<Self::C>;
    fn add_to(&self, acc: &mut Self::C, c: &Self::C) -> Option<()>;
    fn is_zero(&self, c: &Self::C) -> bool;
}

struct Generic<'a> {
    m: &'a BraidingMatrix,
}

impl Coeffs for Generic<'_> {
    type C = Scalar;
    type U = Scalar;
    fn unit_one(&self) -> Scalar {
        Scalar::one()
    }
    fn times_q(&self, u: &Scalar, i: usize, j: usize) -> Scalar {
        u * self.m.get(i, j)
    }
    fn scaled(&self, c: &Scalar, u: &Scalar) -> Option<Scalar> {
        Some(c * u)
    }
    fn add_to(&self, acc: &mut Scalar, c: &Scalar) -> Option<()> {
        *acc = &*acc + c;
        Some(())
    }
    fn is_zero(&self, c: &Scalar) -> bool {
        c.is_zero()
    }
}

/// Q(ζ_M) in the power basis with integer coordinates; q_ij = ζ_M^{e_ij}.
#[derive(Clone, Debug)]
struct Torsion {
    m: u32,
    phi: usize,
    exps: Vec<Vec<usize>>,
    /// x^k reduced mod Φ_M, for k < φ + M.
    rows: Vec<Vec<i64>>,
}

impl Torsion {
    fn new(mat: &BraidingMatrix) -> Option<Torsion> {
        let theta = mat.theta();
        let mut units = vec![];
        for i in 0..theta {
            for j in 0..theta {
                let u = mat.get(i, j).as_unit()?;
                if u.e != 0 {
                    return None;
                }
                units.push(u);
            }
        }
        let m = units.iter().fold(1u32, |a, u| a.lcm(&u.n));
        Torsion::with_order(m, theta, &units)
    }

    fn with_order(m: u32, theta: usize, units: &[crate::Unit]) -> Option<Torsion> {
        if m > 2000 {
            return None;
        }
        let minpoly = cyclotomic_polynomial(m);
        let phi = minpoly.len() - 1;
        let mut rows = Vec::with_capacity(phi + m as usize);
        let mut cur = vec![0i64; phi];
        cur[0] = 1;
        for _ in 0..phi + m as usize {
            rows.push(cur.clone());
            // multiply by x and reduce the x^φ term
            let top = cur[phi - 1];
            let mut next = vec![0i64; phi];
            next[1..phi].copy_from_slice(&cur[..phi - 1]);
            for (k, c) in minpoly[..phi].iter().enumerate() {
                next[k] = next[k].checked_sub(top.checked_mul(*c)?)?;
            }
            cur = next;
        }
        let exps = (0..theta)
            .map(|i| {
                (0..theta)
                    .map(|j| {
                        let u = units[i * theta + j];
                        (u.k * (m / u.n)) as usize % m as usize
                    })
                    .collect()
            })
            .collect();
        Some(Torsion { m, phi, exps, rows })
    }

    /// Lifts to a field containing all coefficient orders.
    fn widened(&self, order: u32, mat: &BraidingMatrix) -> Option<Torsion> {
        if order == self.m {
            return Some(self.clone());
        }
        let theta = mat.theta();
        let mut units = vec![];
        for i in 0..theta {
            for j in 0..theta {
                units.push(mat.get(i, j).as_unit()?);
            }
        }
        Torsion::with_order(order, theta, &units)
    }

    /// Integer coordinates of x after clearing one common denominator.
    fn convert(&self, x: &FreeElement) -> Option<Elem<Vec<i128>>> {
        let mut coords = vec![];
        let mut den = BigInt::from(1);
        for (w, c) in x.terms() {
            let (v, d) = c.constant_coords(self.m)?;
            den = den.lcm(&d);
            coords.push((w, v, d));
        }
        let mut out = HashMap::new();
        for (w, v, d) in coords {
            let f = &den / &d;
            let v: Option<Vec<i128>> = v.iter().map(|a| (a * &f).to_i128()).collect();
            out.insert(w.iter().map(|&l| l as u8).collect(), v?);
        }
        Some(out)
    }

    fn to_scalar(&self, c: &[i128]) -> Scalar {
        Scalar::from_coords(self.m, c.iter().map(|&a| BigInt::from(a)).collect(), BigInt::from(1))
    }
}

impl Coeffs for Torsion {
    type C = Vec<i128>;
    /// Exponent of ζ_M.
    type U = usize;
    fn unit_one(&self) -> usize {
        0
    }
    fn times_q(&self, u: &usize, i: usize, j: usize) -> usize {
        (u + self.exps[i][j]) % self.m as usize
    }
    fn scaled(&self, c: &Vec<i128>, u: &usize) -> Option<Vec<i128>> {
        if *u == 0 {
            return Some(c.clone());
        }
        let mut out = vec![0i128; self.phi];
        for (j, &cj) in c.iter().enumerate() {
            if cj == 0 {
                continue;
            }
            for (o, &r) in out.iter_mut().zip(&self.rows[j + u]) {
                if r != 0 {
                    *o = o.checked_add(cj.checked_mul(r as i128)?)?;
                }
            }
        }
        Some(out)
    }
    fn add_to(&self, acc: &mut Vec<i128>, c: &Vec<i128>) -> Option<()> {
        for (a, b) in acc.iter_mut().zip(c) {
            *a = a.checked_add(*b)?;
        }
        Some(())
    }
    fn is_zero(&self, c: &Vec<i128>) -> bool {
        c.iter().all(|&a| a == 0)
    }
}

fn derive<E: Coeffs>(eng: &E, i: usize, x: &Elem<E::C>) -> Option<Elem<E::C>> {
    let mut out: Elem<E::C> = HashMap::new();
    for (w, c) in x {
        let mut suffix = eng.unit_one();
        for p in (0..w.len()).rev() {
            let l = w[p] as usize;
            if l == i {
                let mut rest = w.clone();
                rest.remove(p);
                let v = eng.scaled(c, &suffix)?;
                match out.get_mut(&rest) {
                    Some(acc) => eng.add_to(acc, &v)?,
                    None => {
                        out.insert(rest, v);
                    }
                }
            }
            suffix = eng.times_q(&suffix, i, l);
        }
    }
    out.retain(|_, c| !eng.is_zero(c));
    Some(out)
}

/// Depth-first over derivation chains; stops at the first nonzero leaf.
fn vanishes<E: Coeffs>(eng: &E, x: &Elem<E::C>, deg: &mut [usize]) -> Option<bool> {
    if x.is_empty() {
        return Some(true);
    }
    if deg.iter().sum::<usize>() <= 1 {
        return Some(false);
    }
    for i in 0..deg.len() {
        if deg[i] == 0 {
            continue;
        }
        let y = derive(eng, i, x)?;
        deg[i] -= 1;
        let r = vanishes(eng, &y, deg);
        deg[i] += 1;
        if !r? {
            return Some(false);
        }
    }
    Some(true)
}

/// Every full derivation chain of x, keyed by the letters in order of
/// application.
fn leaves<E: Coeffs>(eng: &E, x: &Elem<E::C>, deg: &mut [usize], path: &mut Vec<u8>, out: &mut Vec<(Vec<u8>, E::C)>) -> Option<()> {
    if x.is_empty() {
        return Some(());
    }
    if deg.iter().all(|&d| d == 0) {
        if let Some(c) = x.get(&Vec::new()) {
            out.push((path.clone(), c.clone()));
        }
        return Some(());
    }
    for i in 0..deg.len() {
        if deg[i] == 0 {
            continue;
        }
        let y = derive(eng, i, x)?;
        deg[i] -= 1;
        path.push(i as u8);
        let r = leaves(eng, &y, deg, path, out);
        path.pop();
        deg[i] += 1;
        r?;
    }
    Some(())
}

fn to_generic(x: &FreeElement) -> Elem<Scalar> {
    x.terms()
        .map(|(w, c)| (w.iter().map(|&l| l as u8).collect(), c.clone()))
        .collect()
}

/// All words with the given letter counts, in lexicographic order.
fn words_of_degree(deg: &[usize]) -> Vec<Vec<usize>> {
    fn rec(deg: &mut [usize], cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if deg.iter().all(|&d| d == 0) {
            out.push(cur.clone());
            return;
        }
        for i in 0..deg.len() {
            if deg[i] > 0 {
                deg[i] -= 1;
                cur.push(i);
                rec(deg, cur, out);
                cur.pop();
                deg[i] += 1;
            }
        }
    }
    let mut out = vec![];
    rec(&mut deg.to_vec(), &mut vec![], &mut out);
    out
}

/// Rank of a dense matrix over Q(ζ)(q).
fn rank(mut rows: Vec<Vec<Scalar>>) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for col in 0..ncols {
        let Some(piv) = (r..rows.len()).find(|&k| !rows[k][col].is_zero()) else {
            continue;
        };
        rows.swap(r, piv);
        let inv = rows[r][col].inv().expect("pivot is nonzero");
        let pivot_row: Vec<Scalar> = rows[r].iter().map(|v| v * &inv).collect();
        for row in rows.iter_mut().skip(r + 1) {
            if row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (v, p) in row.iter_mut().zip(&pivot_row).skip(col) {
                if !p.is_zero() {
                    *v = &*v - &(&f * p);
                }
            }
        }
        rows[r] = pivot_row;
        r += 1;
    }
    r
}

/// Decides vanishing and computes graded dimensions for one matrix.
#[derive(Clone, Debug)]
pub struct NicholsOracle {
    matrix: BraidingMatrix,
    max_degree: usize,
    torsion: Option<Torsion>,
}

impl NicholsOracle {
    pub fn new(matrix: &BraidingMatrix) -> NicholsOracle {
        NicholsOracle {
            torsion: Torsion::new(matrix),
            matrix: matrix.clone(),
            max_degree: DEFAULT_MAX_DEGREE,
        }
    }

    pub fn with_max_degree(mut self, max_degree: usize) -> NicholsOracle {
        self.max_degree = max_degree;
        self
    }

    pub fn matrix(&self) -> &BraidingMatrix {
        &self.matrix
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    /// True when all entries are roots of unity and the exact integer
    /// engine is used.
    pub fn is_torsion(&self) -> bool {
        self.torsion.is_some()
    }

    fn check_degree(&self, total: usize) -> Result<()> {
        if total > self.max_degree {
            return Err(Error::DegreeTooLarge {
                degree: total,
                max: self.max_degree,
            });
        }
        Ok(())
    }

    fn torsion_for(&self, x: &FreeElement) -> Option<(Torsion, Elem<Vec<i128>>)> {
        let t = self.torsion.as_ref()?;
        let order = t.m.lcm(&x.cyclotomic_order());
        let t = t.widened(order, &self.matrix)?;
        let ex = t.convert(x)?;
        Some((t, ex))
    }

    /// Whether x lies in the defining ideal of B(V). Inhomogeneous input is
    /// split into homogeneous components, each of which must vanish.
    pub fn is_zero(&self, x: &FreeElement) -> Result<bool> {
        check_rank(&self.matrix, x)?;
        let comps = x.components();
        for deg in comps.keys() {
            self.check_degree(deg.iter().sum())?;
        }
        for (deg, c) in comps {
            let mut d = deg.clone();
            let fast = self.torsion_for(&c).and_then(|(t, ex)| vanishes(&t, &ex, &mut d));
            let zero = match fast {
                Some(z) => z,
                None => vanishes(&Generic { m: &self.matrix }, &to_generic(&c), &mut deg.clone())
                    .expect("scalar arithmetic does not overflow"),
            };
            if !zero {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Values of all full derivation chains on a homogeneous element, keyed
    /// by the letters (0-based) in order of application.
    pub fn derivation_values(&self, x: &FreeElement) -> Result<Vec<(Vec<usize>, Scalar)>> {
        check_rank(&self.matrix, x)?;
        if x.is_zero() {
            return Ok(vec![]);
        }
        let deg = x.degree().ok_or(Error::InhomogeneousInput)?;
        self.check_degree(deg.iter().sum())?;
        let key = |p: Vec<u8>| p.into_iter().map(usize::from).collect::<Vec<_>>();
        if let Some((t, ex)) = self.torsion_for(x) {
            let mut out = vec![];
            if leaves(&t, &ex, &mut deg.clone(), &mut vec![], &mut out).is_some() {
                return Ok(out.into_iter().map(|(p, c)| (key(p), t.to_scalar(&c))).collect());
            }
        }
        let mut out = vec![];
        leaves(&Generic { m: &self.matrix }, &to_generic(x), &mut deg.clone(), &mut vec![], &mut out)
            .expect("scalar arithmetic does not overflow");
        Ok(out.into_iter().map(|(p, c)| (key(p), c)).collect())
    }

    /// dim B^α(V): the rank of the pairing between words of degree α and
    /// derivation chains.
    pub fn graded_dim(&self, degree: &[usize]) -> Result<usize> {
        if degree.len() != self.matrix.theta() {
            return Err(Error::OutOfRange(format!(
                "degree vectors must have length {}",
                self.matrix.theta()
            )));
        }
        let total: usize = degree.iter().sum();
        self.check_degree(total)?;
        if total <= 1 {
            return Ok(1);
        }
        let words = words_of_degree(degree);
        let index: HashMap<Vec<usize>, usize> = words.iter().cloned().enumerate().map(|(k, w)| (w, k)).collect();
        let theta = self.matrix.theta();
        let mut rows = vec![];
        for w in &words {
            debug_assert_eq!(&word_degree(theta, w), degree);
            let x = FreeElement::word(theta, w.clone(), Scalar::one())?;
            let mut row = vec![Scalar::zero(); words.len()];
            for (path, v) in self.derivation_values(&x)? {
                row[index[&path]] = v;
            }
            rows.push(row);
        }
        Ok(rank(rows))
    }
}

/// [`NicholsOracle::is_zero`] with the default degree bound.
pub fn is_zero_in_nichols(m: &BraidingMatrix, x: &FreeElement) -> Result<bool> {
    NicholsOracle::new(m).is_zero(x)
}

/// [`NicholsOracle::graded_dim`] with the default degree bound.
pub fn graded_dim(m: &BraidingMatrix, degree: &[usize]) -> Result<usize> {
    NicholsOracle::new(m).graded_dim(degree)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn torsion_rows_reduce() {
        let m = BraidingMatrix::rank2(Scalar::root_of_unity(3, 1), Scalar::root_of_unity(3, 2), Scalar::root_of_unity(3, 1)).unwrap();
        let t = Torsion::new(&m).unwrap();
        assert_eq!(t.m, 3);
        // ζ² = −1 − ζ
        assert_eq!(t.rows[2], vec![-1, -1]);
        assert_eq!(t.rows[3], vec![1, 0]);
    }

    #[test]
    fn words_enumerated() {
        assert_eq!(words_of_degree(&[2, 1]).len(), 3);
        assert_eq!(words_of_degree(&[3, 3]).len(), 20);
    }

    #[test]
    fn generic_matrix_uses_scalars() {
        let q = Scalar::q();
        let m = BraidingMatrix::rank2(q.clone(), q.inv().unwrap(), q).unwrap();
        assert!(!NicholsOracle::new(&m).is_torsion());
    }

    #[test]
    fn torsion_and_generic_agree_on_values() {
        let z = |k| Scalar::root_of_unity(12, k);
        let m = BraidingMatrix::new(vec![vec![z(5), z(2)], vec![z(7), z(11)]]).unwrap();
        let o = NicholsOracle::new(&m);
        assert!(o.is_torsion());
        let x = FreeElement::word(2, vec![0, 1, 0, 1, 1], z(1)).unwrap();
        let fast = o.derivation_values(&x).unwrap();
        let mut slow = vec![];
        leaves(&Generic { m: &m }, &to_generic(&x), &mut [2, 3], &mut vec![], &mut slow).unwrap();
        let slow: Vec<(Vec<usize>, Scalar)> =
            slow.into_iter().map(|(p, c)| (p.into_iter().map(usize::from).collect(), c)).collect();
        assert_eq!(fast, slow);
    }
}
