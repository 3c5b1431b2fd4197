//! The tensor algebra T(V) of a braided vector space of diagonal type:
//! sparse noncommutative polynomials, skew derivations, the braided
//! coproduct and the rank-two elements y_k, w_m, w̃_m and Y(t).
//!
//! Letters are 0-based internally; `x1` is letter 0.

mod oracle;

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::braiding::BraidingMatrix;
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::scalars::{common_order, q_factorial, q_int, Order, Scalar};

pub use oracle::{graded_dim, is_zero_in_nichols, NicholsOracle, DEFAULT_MAX_DEGREE};

pub type Word = Vec<usize>;

/// Letter-count vector of a word.
pub fn word_degree(theta: usize, w: &[usize]) -> Vec<usize> {
    let mut d = vec![0; theta];
    for &l in w {
        d[l] += 1;
    }
    d
}

fn as_i64(d: &[usize]) -> Vec<i64> {
    d.iter().map(|&x| x as i64).collect()
}

/// An element of T(V): a finite sum of words with nonzero coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeElement {
    theta: usize,
    terms: BTreeMap<Word, Scalar>,
}

impl FreeElement {
    pub fn zero(theta: usize) -> FreeElement {
        FreeElement {
            theta,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(theta: usize) -> FreeElement {
        FreeElement::scalar(theta, Scalar::one())
    }

    pub fn scalar(theta: usize, c: Scalar) -> FreeElement {
        let mut out = FreeElement::zero(theta);
        out.add_term(vec![], c);
        out
    }

    /// The generator x_{i+1}.
    pub fn generator(theta: usize, i: usize) -> Result<FreeElement> {
        FreeElement::word(theta, vec![i], Scalar::one())
    }

    pub fn word(theta: usize, w: Word, c: Scalar) -> Result<FreeElement> {
        if let Some(&bad) = w.iter().find(|&&l| l >= theta) {
            return Err(Error::IndexOutOfRange { index: bad, theta });
        }
        let mut out = FreeElement::zero(theta);
        out.add_term(w, c);
        Ok(out)
    }

    pub fn theta(&self) -> usize {
        self.theta
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of words with nonzero coefficient.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, w: &[usize]) -> Scalar {
        self.terms.get(w).cloned().unwrap_or_else(Scalar::zero)
    }

    pub(crate) fn add_term(&mut self, w: Word, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&w) {
            Some(v) => {
                *v = &*v + &c;
                if v.is_zero() {
                    self.terms.remove(&w);
                }
            }
            None => {
                self.terms.insert(w, c);
            }
        }
    }

    fn check_theta(&self, o: &FreeElement) {
        assert_eq!(self.theta, o.theta, "elements of different ranks");
    }

    pub fn add(&self, o: &FreeElement) -> FreeElement {
        self.check_theta(o);
        let mut out = self.clone();
        for (w, c) in &o.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, o: &FreeElement) -> FreeElement {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> FreeElement {
        self.scale(&-Scalar::one())
    }

    pub fn scale(&self, c: &Scalar) -> FreeElement {
        if c.is_zero() {
            return FreeElement::zero(self.theta);
        }
        FreeElement {
            theta: self.theta,
            terms: self.terms.iter().map(|(w, v)| (w.clone(), v * c)).collect(),
        }
    }

    /// Concatenation product.
    pub fn mul(&self, o: &FreeElement) -> FreeElement {
        self.check_theta(o);
        let mut out = FreeElement::zero(self.theta);
        for (u, a) in &self.terms {
            for (w, b) in &o.terms {
                let mut uw = u.clone();
                uw.extend_from_slice(w);
                out.add_term(uw, a * b);
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> FreeElement {
        let mut acc = FreeElement::one(self.theta);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// The common degree of all words; None for zero or inhomogeneous elements.
    pub fn degree(&self) -> Option<Vec<usize>> {
        let mut it = self.terms.keys().map(|w| word_degree(self.theta, w));
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.degree().is_some()
    }

    /// Largest word length.
    pub fn total_degree(&self) -> usize {
        self.terms.keys().map(Vec::len).max().unwrap_or(0)
    }

    /// Homogeneous components by degree.
    pub fn components(&self) -> BTreeMap<Vec<usize>, FreeElement> {
        let mut out: BTreeMap<Vec<usize>, FreeElement> = BTreeMap::new();
        for (w, c) in &self.terms {
            out.entry(word_degree(self.theta, w))
                .or_insert_with(|| FreeElement::zero(self.theta))
                .terms
                .insert(w.clone(), c.clone());
        }
        out
    }

    /// lcm of the cyclotomic orders of the coefficients.
    pub fn cyclotomic_order(&self) -> u32 {
        common_order(self.terms.values())
    }
}

fn fmt_word(w: &[usize]) -> String {
    let mut parts = vec![];
    let mut i = 0;
    while i < w.len() {
        let mut j = i;
        while j < w.len() && w[j] == w[i] {
            j += 1;
        }
        if j - i == 1 {
            parts.push(format!("x{}", w[i] + 1));
        } else {
            parts.push(format!("x{}^{}", w[i] + 1, j - i));
        }
        i = j;
    }
    parts.join(" ")
}

/// Terms in word order; `z` is ζ_M for M the lcm of the coefficient orders,
/// so the output re-parses with the element language.
impl fmt::Display for FreeElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let m = self.cyclotomic_order();
        for (k, (w, c)) in self.terms.iter().enumerate() {
            let c = c.lift_to(m).expect("order divides the lcm");
            let mut s = c.to_string();
            let neg = s.starts_with('-') && c.as_monomial().is_some();
            if neg {
                s.remove(0);
            }
            if k == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            let compound = c.as_monomial().is_none();
            if w.is_empty() {
                if compound {
                    write!(f, "({s})")?;
                } else {
                    f.write_str(&s)?;
                }
            } else if s == "1" {
                f.write_str(&fmt_word(w))?;
            } else if compound {
                write!(f, "({s})*{}", fmt_word(w))?;
            } else {
                write!(f, "{s}*{}", fmt_word(w))?;
            }
        }
        Ok(())
    }
}

macro_rules! element_op {
    ($tr:ident, $f:ident) => {
        impl std::ops::$tr<&FreeElement> for &FreeElement {
            type Output = FreeElement;
            fn $f(self, o: &FreeElement) -> FreeElement {
                FreeElement::$f(self, o)
            }
        }
        impl std::ops::$tr<FreeElement> for FreeElement {
            type Output = FreeElement;
            fn $f(self, o: FreeElement) -> FreeElement {
                FreeElement::$f(&self, &o)
            }
        }
    };
}
element_op!(Add, add);
element_op!(Sub, sub);
element_op!(Mul, mul);

impl std::ops::Neg for FreeElement {
    type Output = FreeElement;
    fn neg(self) -> FreeElement {
        FreeElement::neg(&self)
    }
}

/// An element of T(V) ⊗ T(V).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorElement {
    theta: usize,
    terms: BTreeMap<(Word, Word), Scalar>,
}

impl TensorElement {
    pub fn zero(theta: usize) -> TensorElement {
        TensorElement {
            theta,
            terms: BTreeMap::new(),
        }
    }

    pub fn theta(&self) -> usize {
        self.theta
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(Word, Word), &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, left: &[usize], right: &[usize]) -> Scalar {
        self.terms
            .get(&(left.to_vec(), right.to_vec()))
            .cloned()
            .unwrap_or_else(Scalar::zero)
    }

    pub(crate) fn add_term(&mut self, l: Word, r: Word, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let key = (l, r);
        match self.terms.get_mut(&key) {
            Some(v) => {
                *v = &*v + &c;
                if v.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, c);
            }
        }
    }

    /// Σ c · r over the terms `left ⊗ r`.
    pub fn right_factor(&self, left: &[usize]) -> FreeElement {
        let mut out = FreeElement::zero(self.theta);
        for ((l, r), c) in &self.terms {
            if l == left {
                out.add_term(r.clone(), c.clone());
            }
        }
        out
    }

    /// Σ c · l over the terms `l ⊗ right`.
    pub fn left_factor(&self, right: &[usize]) -> FreeElement {
        let mut out = FreeElement::zero(self.theta);
        for ((l, r), c) in &self.terms {
            if r == right {
                out.add_term(l.clone(), c.clone());
            }
        }
        out
    }

    /// The terms whose left factor has the given degree.
    pub fn with_left_degree(&self, deg: &[usize]) -> TensorElement {
        TensorElement {
            theta: self.theta,
            terms: self
                .terms
                .iter()
                .filter(|((l, _), _)| word_degree(self.theta, l) == deg)
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect(),
        }
    }
}

impl fmt::Display for TensorElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let m = common_order(self.terms.values());
        for (k, ((l, r), c)) in self.terms.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            let side = |w: &[usize]| if w.is_empty() { "1".to_string() } else { fmt_word(w) };
            let c = c.lift_to(m).expect("order divides the lcm");
            write!(f, "({c})*{} ⊗ {}", side(l), side(r))?;
        }
        Ok(())
    }
}

fn check_rank(m: &BraidingMatrix, x: &FreeElement) -> Result<()> {
    if m.theta() != x.theta {
        return Err(Error::InvalidMatrix(format!(
            "element has rank {} but the matrix has rank {}",
            x.theta,
            m.theta()
        )));
    }
    Ok(())
}

/// The skew derivation ∂_i (0-based i) with ∂_i(x_j) = δ_ij and
/// ∂_i(xy) = x ∂_i(y) + ∂_i(x) (α_i · y).
pub fn derivation(m: &BraidingMatrix, i: usize, x: &FreeElement) -> Result<FreeElement> {
    check_rank(m, x)?;
    if i >= m.theta() {
        return Err(Error::IndexOutOfRange {
            index: i,
            theta: m.theta(),
        });
    }
    let mut out = FreeElement::zero(x.theta);
    for (w, c) in &x.terms {
        // Deleting position p picks up q_{i, w_r} for every later letter.
        let mut suffix = Scalar::one();
        for p in (0..w.len()).rev() {
            if w[p] == i {
                let mut rest = w.clone();
                rest.remove(p);
                out.add_term(rest, c * &suffix);
            }
            suffix = suffix * m.get(i, w[p]);
        }
    }
    Ok(out)
}

/// Braided adjoint x_i · x − q_{α_i, β} x · x_i for homogeneous x of degree β.
pub fn ad(m: &BraidingMatrix, i: usize, x: &FreeElement) -> Result<FreeElement> {
    check_rank(m, x)?;
    if i >= m.theta() {
        return Err(Error::IndexOutOfRange {
            index: i,
            theta: m.theta(),
        });
    }
    if x.is_zero() {
        return Ok(x.clone());
    }
    let beta = x.degree().ok_or(Error::InhomogeneousInput)?;
    let mut alpha = vec![0i64; m.theta()];
    alpha[i] = 1;
    let c = m.bq(&alpha, &as_i64(&beta))?;
    let xi = FreeElement::generator(m.theta(), i)?;
    Ok(xi.mul(x).sub(&x.mul(&xi).scale(&c)))
}

/// ad_c x_1 applied to a homogeneous element.
pub fn ad_x1(m: &BraidingMatrix, x: &FreeElement) -> Result<FreeElement> {
    ad(m, 0, x)
}

/// The braided coproduct Δ: T(V) → T(V) ⊗ T(V) with primitive generators
/// and (a ⊗ b)(c ⊗ d) = q_{deg b, deg c} ac ⊗ bd. Exponential in word length.
pub fn coproduct(m: &BraidingMatrix, x: &FreeElement) -> Result<TensorElement> {
    check_rank(m, x)?;
    let theta = m.theta();
    let mut out = TensorElement::zero(theta);
    let mut cache: HashMap<Vec<i64>, Scalar> = HashMap::new();
    for (w, c) in &x.terms {
        let n = w.len();
        if n >= 63 {
            return Err(Error::DegreeTooLarge { degree: n, max: 62 });
        }
        for mask in 0u64..(1u64 << n) {
            // Letters in the mask go left; a right letter before a left
            // letter braids past it.
            let mut counts = vec![0i64; theta * theta];
            let mut right_seen = vec![0i64; theta];
            let (mut l, mut r) = (vec![], vec![]);
            for (p, &letter) in w.iter().enumerate() {
                if mask >> p & 1 == 1 {
                    for (a, &k) in right_seen.iter().enumerate() {
                        counts[a * theta + letter] += k;
                    }
                    l.push(letter);
                } else {
                    right_seen[letter] += 1;
                    r.push(letter);
                }
            }
            let coeff = match cache.get(&counts) {
                Some(v) => v.clone(),
                None => {
                    let mut v = Scalar::one();
                    for (idx, &k) in counts.iter().enumerate() {
                        if k != 0 {
                            v = v * m.get(idx / theta, idx % theta).pow(k)?;
                        }
                    }
                    cache.insert(counts, v.clone());
                    v
                }
            };
            out.add_term(l, r, c * &coeff);
        }
    }
    Ok(out)
}

/// Named rank-two elements.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Special {
    /// y_k = (ad_c x_1)^k x_2.
    Y(u64),
    /// w_m = y_{m+2} y_m − q_{β_{m+2}, β_m} y_m y_{m+2}.
    W(u64),
    /// w̃_m = w_m − c · y_{m+1}², defined when p_{m+1} ≠ −1.
    WTilde(u64),
    /// Y(t) for q = p_n of order N.
    BigY { t: u64, n: u64, order: u64 },
}

impl fmt::Display for Special {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Special::Y(k) => write!(f, "y({k})"),
            Special::W(m) => write!(f, "w({m})"),
            Special::WTilde(m) => write!(f, "wtilde({m})"),
            Special::BigY { t, n, order } => write!(f, "Y({t},{n},{order})"),
        }
    }
}

/// Named elements and products are refused beyond 2^20 words.
pub const MAX_TERMS_LOG2: u64 = 20;

fn size_guard(log2_terms: u64, what: &dyn fmt::Display) -> Result<()> {
    if log2_terms > MAX_TERMS_LOG2 {
        return Err(Error::OutOfRange(format!(
            "{what} would have more than 2^{MAX_TERMS_LOG2} words"
        )));
    }
    Ok(())
}

/// Products and powers of parsed elements are also refused beyond 2^22 letters in total.
pub const MAX_LETTERS_LOG2: u64 = 22;

fn letters_guard(log2_terms: u64, word_len: usize, what: &dyn fmt::Display) -> Result<()> {
    size_guard(log2_terms, what)?;
    if log2_terms + log2_ceil(word_len) > MAX_LETTERS_LOG2 {
        return Err(Error::OutOfRange(format!(
            "{what} would have more than 2^{MAX_LETTERS_LOG2} letters"
        )));
    }
    Ok(())
}

fn beta(m: u64) -> [i64; 2] {
    [m as i64, 1]
}

fn y_element(m: &BraidingMatrix, k: u64) -> Result<FreeElement> {
    let mut y = FreeElement::generator(2, 1)?;
    for _ in 0..k {
        y = ad_x1(m, &y)?;
    }
    Ok(y)
}

fn w_element(m: &BraidingMatrix, k: u64) -> Result<FreeElement> {
    let a = y_element(m, k + 2)?;
    let b = y_element(m, k)?;
    let c = m.bq(&beta(k + 2), &beta(k))?;
    Ok(a.mul(&b).sub(&b.mul(&a).scale(&c)))
}

/// Builds a named element of T(V) for a rank-two matrix.
pub fn build_special(m: &BraidingMatrix, which: Special) -> Result<FreeElement> {
    if m.theta() != 2 {
        return Err(Error::RankMismatch(m.theta()));
    }
    // log2 of the word count: y_k has 2^k words.
    let bits = match which {
        Special::Y(k) => k,
        Special::W(k) | Special::WTilde(k) => k.saturating_mul(2).saturating_add(3),
        Special::BigY { t, n, .. } => n.saturating_mul(t).saturating_add(n + 1),
    };
    size_guard(bits, &which)?;
    match which {
        Special::Y(k) => y_element(m, k),
        Special::W(k) => w_element(m, k),
        Special::WTilde(k) => {
            let p = m.bq(&beta(k + 1), &beta(k + 1))?;
            let den = Scalar::one() + &p;
            if den.is_zero() {
                return Err(Error::DenominatorVanishes("1 + p_{m+1} = 0".into()));
            }
            let q11 = m.get(0, 0);
            let qt = m.get(0, 1) * m.get(1, 0);
            let c = m.bq(&beta(k + 1), &beta(k))?
                * q_int(k + 2, q11)
                * (Scalar::one() - q11.powu(k + 1) * qt);
            let y = y_element(m, k + 1)?;
            Ok(w_element(m, k)?.sub(&y.mul(&y).scale(&c.checked_div(&den)?)))
        }
        Special::BigY { t, n, order } => {
            if order < 2 {
                return Err(Error::OutOfRange("Y needs an order N ≥ 2".into()));
            }
            if t + 1 > order {
                return Err(Error::OutOfRange(format!("Y(t) needs t ≤ N − 1, got t = {t}, N = {order}")));
            }
            let q = m.bq(&beta(n), &beta(n))?;
            if q.order_of()? != Order::Finite(order) {
                return Err(Error::OutOfRange(format!("p_{n} is not a primitive root of unity of order {order}")));
            }
            let c = (m.get(0, 0).powu(n) * m.get(0, 1)).inv()?;
            let yn = y_element(m, n)?;
            let yn1 = y_element(m, n + 1)?;
            let mut out = FreeElement::zero(2);
            for j in 0..=t {
                let coeff = c.pow(j as i64)?
                    * q_factorial(order - t - 1 + j, &q).checked_div(&q_factorial(j, &q))?;
                let term = yn.pow((t - j) as u32).mul(&yn1).mul(&yn.pow(j as u32));
                out = out.add(&term.scale(&coeff));
            }
            Ok(out)
        }
    }
}

impl Expr {
    /// Evaluates to an element of T(V); the root symbol is ζ_order.
    pub fn eval_element(&self, m: &BraidingMatrix, order: u32) -> Result<FreeElement> {
        let theta = m.theta();
        if self.is_scalar() {
            return Ok(FreeElement::scalar(theta, self.eval_scalar(order)?));
        }
        let idx = |v: i64| {
            u64::try_from(v).map_err(|_| Error::OutOfRange(format!("negative index {v}")))
        };
        Ok(match self {
            Expr::Gen(i) => FreeElement::generator(theta, *i)?,
            Expr::Call(name, args) => {
                let which = match (name.as_str(), args.as_slice()) {
                    ("y", [k]) => Special::Y(idx(*k)?),
                    ("w", [k]) => Special::W(idx(*k)?),
                    ("wtilde", [k]) => Special::WTilde(idx(*k)?),
                    ("Y", [t, n, nn]) => Special::BigY {
                        t: idx(*t)?,
                        n: idx(*n)?,
                        order: idx(*nn)?,
                    },
                    _ => {
                        return Err(Error::OutOfRange(format!(
                            "`{name}` takes {} argument(s), got {}",
                            if name == "Y" { 3 } else { 1 },
                            args.len()
                        )))
                    }
                };
                build_special(m, which)?
            }
            Expr::Add(a, b) => a.eval_element(m, order)?.add(&b.eval_element(m, order)?),
            Expr::Sub(a, b) => a.eval_element(m, order)?.sub(&b.eval_element(m, order)?),
            Expr::Mul(a, b) => {
                let (a, b) = (a.eval_element(m, order)?, b.eval_element(m, order)?);
                let len = a.total_degree() + b.total_degree();
                letters_guard(log2_ceil(a.len()) + log2_ceil(b.len()), len, &"a product")?;
                a.mul(&b)
            }
            Expr::Div(a, b) => {
                if !b.is_scalar() {
                    return Err(Error::OutOfRange("only division by scalars is supported".into()));
                }
                let d = b.eval_scalar(order)?.inv()?;
                a.eval_element(m, order)?.scale(&d)
            }
            Expr::Neg(a) => a.eval_element(m, order)?.neg(),
            Expr::Pow(a, e) => {
                let e = u32::try_from(*e)
                    .ok()
                    .ok_or_else(|| Error::OutOfRange(format!("element powers must be nonnegative, got {e}")))?;
                let a = a.eval_element(m, order)?;
                if a.len() > 1 || a.total_degree() > 0 {
                    let len = a.total_degree().saturating_mul(e as usize);
                    if len > 1024 {
                        return Err(Error::OutOfRange("a power longer than 1024 letters".into()));
                    }
                    letters_guard(log2_ceil(a.len()).saturating_mul(u64::from(e)), len, &"a power")?;
                }
                a.pow(e)
            }
            Expr::Num(_) | Expr::Root | Expr::Q => unreachable!("scalar handled above"),
        })
    }
}

fn log2_ceil(n: usize) -> u64 {
    (usize::BITS - n.saturating_sub(1).leading_zeros()) as u64
}

/// Parses and evaluates an element expression such as `y(3)^2 - 2*x1 x2`.
pub fn parse_element(text: &str, m: &BraidingMatrix, order: u32) -> Result<FreeElement> {
    if order == 0 {
        return Err(Error::OutOfRange("cyclotomic order must be positive".into()));
    }
    crate::expr::parse_expr(text, 'z', "element expression")?.eval_element(m, order)
}
