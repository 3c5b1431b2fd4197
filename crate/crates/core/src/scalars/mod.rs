//! Exact arithmetic in Q(ζ_M)(q).
//!
//! A [`Scalar`] is a reduced fraction of polynomials in the transcendental
//! parameter `q` whose coefficients live in the cyclotomic field Q(ζ_M).
//! Values of different orders combine by lifting both sides to the lcm.

mod cyclotomic;
mod literal;
mod modp;
mod poly;
mod qnum;

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use cyclotomic::{ctx, Cyc, CycloCtx};
use poly::Poly;

pub use cyclotomic::{cyclotomic_polynomial, euler_phi};
pub use literal::parse_literal;
pub use qnum::{mu, q_binomial, q_factorial, q_int};

/// Largest q-degree a parsed scalar may reach.
pub const MAX_PARSED_Q_DEGREE: u64 = 1 << 14;
/// Bit budget for one coefficient of a power evaluated from parsed input.
pub const MAX_PARSED_BITS: u64 = 1 << 16;
/// Bit budget for a whole power evaluated from parsed input.
pub const MAX_PARSED_TOTAL_BITS: u64 = 1 << 24;
/// Bound on coefficient bits times φ(M) for a parsed divisor; inversion cost grows with both.
pub const MAX_PARSED_DIVISOR_BITS: u64 = 1 << 14;

/// Multiplicative order of a nonzero scalar.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Order {
    Finite(u64),
    /// The value depends on q, which is treated as transcendental.
    Infinite,
    /// A constant that is not a root of unity (for instance 2).
    NotRootOfUnity,
}

impl Order {
    pub fn is_finite(self) -> bool {
        matches!(self, Order::Finite(_))
    }
}

/// ζ_n^k · q^e, the values braiding matrices are usually built from.
///
/// Units are closed under products and integer powers, so reflections of a
/// matrix with unit entries can be carried out on exponents alone.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Unit {
    pub n: u32,
    pub k: u32,
    pub e: i64,
}

impl Unit {
    pub fn new(n: u32, k: i64, e: i64) -> Unit {
        assert!(n >= 1);
        Unit {
            n,
            k: k.rem_euclid(n as i64) as u32,
            e,
        }
    }

    /// Re-expresses the unit with modulus `m`, a multiple of `self.n`.
    pub fn widen(self, m: u32) -> Unit {
        debug_assert_eq!(m % self.n, 0);
        Unit {
            n: m,
            k: self.k * (m / self.n),
            e: self.e,
        }
    }

    pub fn mul(self, o: Unit) -> Unit {
        debug_assert_eq!(self.n, o.n);
        Unit::new(self.n, self.k as i64 + o.k as i64, self.e + o.e)
    }

    pub fn pow(self, p: i64) -> Unit {
        let k = (self.k as i128 * p as i128).rem_euclid(self.n as i128) as i64;
        Unit::new(self.n, k, self.e * p)
    }

    pub fn inv(self) -> Unit {
        self.pow(-1)
    }

    pub fn is_one(self) -> bool {
        self.k == 0 && self.e == 0
    }

    pub fn order(self) -> Order {
        if self.e != 0 {
            Order::Infinite
        } else {
            Order::Finite((self.n / self.n.gcd(&self.k)) as u64)
        }
    }

    pub fn to_scalar(self) -> Scalar {
        Scalar::root_of_unity(self.n, self.k as i64) * Scalar::q_pow(self.e)
    }
}

/// An element of Q(ζ_M)(q) in canonical form.
#[derive(Clone)]
pub struct Scalar {
    ctx: Arc<CycloCtx>,
    num: Poly,
    den: Poly,
}

impl Scalar {
    fn from_parts(ctx: Arc<CycloCtx>, num: Poly, den: Poly) -> Scalar {
        debug_assert!(!den.is_empty());
        if num.is_empty() {
            let one = Cyc::one(&ctx);
            return Scalar {
                ctx,
                num: vec![],
                den: vec![one],
            };
        }
        if den.len() == 1 {
            if den[0].is_one() {
                return Scalar { ctx, num, den };
            }
            let inv = den[0].inv(&ctx);
            let num = poly::scale(&ctx, &num, &inv);
            let one = Cyc::one(&ctx);
            return Scalar {
                ctx,
                num,
                den: vec![one],
            };
        }
        let (num, den) = if poly::is_monomial(&den) || poly::is_monomial(&num) {
            let k = poly::valuation(&num).min(poly::valuation(&den));
            (poly::shift_down(&num, k), poly::shift_down(&den, k))
        } else {
            let g = poly::gcd(&ctx, &num, &den);
            if g.len() == 1 {
                (num, den)
            } else {
                (poly::divrem(&ctx, &num, &g).0, poly::divrem(&ctx, &den, &g).0)
            }
        };
        Scalar::monic_den(ctx, num, den)
    }

    /// Scales a coprime pair so the denominator is monic.
    fn monic_den(ctx: Arc<CycloCtx>, num: Poly, den: Poly) -> Scalar {
        if num.is_empty() {
            return Scalar::from_parts(ctx, num, den);
        }
        let lead = den.last().unwrap();
        if lead.is_one() {
            return Scalar { ctx, num, den };
        }
        let inv = lead.inv(&ctx);
        let num = poly::scale(&ctx, &num, &inv);
        let den = poly::scale(&ctx, &den, &inv);
        Scalar { ctx, num, den }
    }

    fn constant_cyc(ctx: Arc<CycloCtx>, c: Cyc) -> Scalar {
        let one = Cyc::one(&ctx);
        Scalar {
            num: poly::constant(c),
            den: vec![one],
            ctx,
        }
    }

    pub fn zero() -> Scalar {
        Scalar::from_int(0)
    }

    pub fn one() -> Scalar {
        Scalar::from_int(1)
    }

    pub fn from_int(n: i64) -> Scalar {
        Scalar::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_ratio(n: i64, d: i64) -> Scalar {
        assert!(d != 0, "zero denominator");
        Scalar::from_rational(BigRational::new(n.into(), d.into()))
    }

    pub fn from_rational(r: BigRational) -> Scalar {
        let c = ctx(1);
        let v = Cyc::from_rational(&c, &r);
        Scalar::constant_cyc(c, v)
    }

    /// The transcendental parameter q.
    pub fn q() -> Scalar {
        Scalar::q_pow(1)
    }

    /// q^e for any integer e.
    pub fn q_pow(e: i64) -> Scalar {
        let c = ctx(1);
        let one = Cyc::one(&c);
        if e >= 0 {
            let num = poly::monomial(&c, one.clone(), e as usize);
            Scalar {
                ctx: c,
                num,
                den: vec![one],
            }
        } else {
            let den = poly::monomial(&c, one.clone(), (-e) as usize);
            Scalar {
                ctx: c,
                num: vec![one],
                den,
            }
        }
    }

    /// ζ_n^k, a constant of cyclotomic order n.
    pub fn root_of_unity(n: u32, k: i64) -> Scalar {
        assert!(n >= 1, "root_of_unity needs N >= 1");
        let c = ctx(n);
        let k = k.rem_euclid(n as i64) as usize;
        let v = c.zeta_pows[k].clone();
        Scalar::constant_cyc(c, v)
    }

    /// c · ζ_m^k · q^e.
    pub fn monomial(c: BigRational, m: u32, k: i64, e: i64) -> Scalar {
        Scalar::from_rational(c) * Scalar::root_of_unity(m, k) * Scalar::q_pow(e)
    }

    /// Degree in q of the larger of numerator and denominator.
    pub fn q_degree(&self) -> usize {
        self.num.len().max(self.den.len()).saturating_sub(1)
    }

    /// Bits in the largest q-coefficient, used to bound values built from input.
    pub fn coeff_bits(&self) -> u64 {
        self.num
            .iter()
            .chain(&self.den)
            .map(|c| c.c.iter().map(|x| x.bits()).max().unwrap_or(0) + c.d.bits())
            .max()
            .unwrap_or(0)
    }

    /// Number of nonzero q-coefficients in numerator and denominator.
    pub fn q_terms(&self) -> usize {
        self.num.iter().chain(&self.den).filter(|c| !c.is_zero()).count()
    }

    /// The cyclotomic order M this value is currently expressed over.
    pub fn cyclotomic_order(&self) -> u32 {
        self.ctx.m
    }

    /// The same value expressed over Q(ζ_m); `m` must be a multiple of the
    /// current order.
    pub fn lift_to(&self, m: u32) -> Result<Scalar> {
        if m == 0 || m % self.ctx.m != 0 {
            return Err(Error::OutOfRange(format!(
                "cannot express a value of cyclotomic order {} over order {}",
                self.ctx.m, m
            )));
        }
        Ok(self.lifted(m))
    }

    /// Power-basis numerators and denominator over Q(ζ_m) of a constant
    /// whose order divides m.
    pub(crate) fn constant_coords(&self, m: u32) -> Option<(Vec<BigInt>, BigInt)> {
        if !self.is_constant() || m % self.ctx.m != 0 {
            return None;
        }
        let v = self.lifted(m);
        match v.num.first() {
            None => Some((vec![BigInt::zero(); v.ctx.phi], BigInt::one())),
            Some(c) => Some((c.c.clone(), c.d.clone())),
        }
    }

    /// Inverse of [`Scalar::constant_coords`].
    pub(crate) fn from_coords(m: u32, c: Vec<BigInt>, d: BigInt) -> Scalar {
        let ctx = ctx(m);
        debug_assert_eq!(c.len(), ctx.phi);
        let v: Vec<BigRational> = c.into_iter().map(|x| BigRational::new(x, d.clone())).collect();
        let cyc = Cyc::from_exact(&ctx, v);
        if cyc.is_zero() {
            return Scalar::zero();
        }
        Scalar::constant_cyc(ctx, cyc)
    }

    fn lifted(&self, m: u32) -> Scalar {
        if m == self.ctx.m {
            return self.clone();
        }
        let to = ctx(m);
        Scalar {
            num: poly::lift(&self.num, &self.ctx, &to),
            den: poly::lift(&self.den, &self.ctx, &to),
            ctx: to,
        }
    }

    fn common(&self, o: &Scalar) -> (Scalar, Scalar) {
        if self.ctx.m == o.ctx.m {
            return (self.clone(), o.clone());
        }
        let m = self.ctx.m.lcm(&o.ctx.m);
        (self.lifted(m), o.lifted(m))
    }

    /// Returns the canonical form; values are always kept canonical, so this
    /// is a structural re-normalization used to check idempotence.
    pub fn normalize(&self) -> Scalar {
        Scalar::from_parts(self.ctx.clone(), self.num.clone(), self.den.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.num.len() == 1 && self.den.len() == 1 && self.num[0].is_one()
    }

    /// True if the value does not depend on q.
    pub fn is_constant(&self) -> bool {
        self.num.len() <= 1 && self.den.len() == 1
    }

    /// Some(r) if the value is a rational number.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.is_zero() {
            return Some(BigRational::zero());
        }
        if self.is_constant() {
            self.num[0].as_rational()
        } else {
            None
        }
    }

    fn is_den_one(&self) -> bool {
        self.den.len() == 1
    }

    pub fn add(&self, o: &Scalar) -> Scalar {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let (a, b) = self.common(o);
        let c = a.ctx.clone();
        if a.is_den_one() && b.is_den_one() {
            let num = poly::add(&a.num, &b.num);
            return Scalar::from_parts(c, num, a.den);
        }
        if a.den == b.den {
            let num = poly::add(&a.num, &b.num);
            return Scalar::from_parts(c, num, a.den);
        }
        // Both inputs are reduced, so only g = gcd(b, d) can cancel.
        let (bd, dd, g) = cancel(&c, &a.den, &b.den);
        let num = poly::add(&poly::mul(&c, &a.num, &dd), &poly::mul(&c, &b.num, &bd));
        if num.is_empty() {
            return Scalar::zero();
        }
        if g.len() == 1 {
            let den = poly::mul(&c, &a.den, &dd);
            return Scalar::monic_den(c, num, den);
        }
        let (num, gg, _) = cancel(&c, &num, &g);
        let den = poly::mul(&c, &poly::mul(&c, &bd, &dd), &gg);
        Scalar::monic_den(c, num, den)
    }

    pub fn neg(&self) -> Scalar {
        Scalar {
            ctx: self.ctx.clone(),
            num: poly::neg(&self.num),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, o: &Scalar) -> Scalar {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Scalar) -> Scalar {
        if self.is_zero() || o.is_zero() {
            return Scalar::zero();
        }
        let (a, b) = self.common(o);
        let c = a.ctx.clone();
        if a.is_den_one() && b.is_den_one() {
            let num = poly::mul(&c, &a.num, &b.num);
            return Scalar {
                ctx: c,
                num,
                den: a.den,
            };
        }
        let (an, bdn, _) = cancel(&c, &a.num, &b.den);
        let (bn, adn, _) = cancel(&c, &b.num, &a.den);
        let num = poly::mul(&c, &an, &bn);
        let den = poly::mul(&c, &adn, &bdn);
        Scalar::monic_den(c, num, den)
    }

    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Scalar::from_parts(
            self.ctx.clone(),
            self.den.clone(),
            self.num.clone(),
        ))
    }

    pub fn checked_div(&self, o: &Scalar) -> Result<Scalar> {
        Ok(self.mul(&o.inv()?))
    }

    /// Nonnegative integer power.
    pub fn powu(&self, mut n: u64) -> Scalar {
        let mut base = self.clone();
        let mut acc = Scalar::one();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Integer power; negative exponents need a nonzero base.
    pub fn pow(&self, e: i64) -> Result<Scalar> {
        if e >= 0 {
            Ok(self.powu(e as u64))
        } else {
            Ok(self.inv()?.powu(e.unsigned_abs()))
        }
    }

    /// Multiplicative order. `Infinite` means the value depends on q.
    pub fn order_of(&self) -> Result<Order> {
        if self.is_zero() {
            return Err(Error::ZeroInput);
        }
        if !self.is_constant() {
            return Ok(Order::Infinite);
        }
        let m = self.ctx.m as u64;
        Ok(match self.num[0].as_signed_root(&self.ctx) {
            None => Order::NotRootOfUnity,
            Some((sign, k)) => {
                let n = m / m.gcd(&(k as u64));
                if sign > 0 {
                    Order::Finite(n)
                } else if m % 2 == 0 {
                    let k2 = (k as u64 + m / 2) % m;
                    Order::Finite(m / m.gcd(&k2))
                } else {
                    Order::Finite(2 * n)
                }
            }
        })
    }

    /// Some(u) if the value is ζ_n^k · q^e.
    pub fn as_unit(&self) -> Option<Unit> {
        if self.is_zero() || !poly::is_monomial(&self.num) || !poly::is_monomial(&self.den) {
            return None;
        }
        let a = poly::valuation(&self.num) as i64;
        let b = poly::valuation(&self.den) as i64;
        let m = self.ctx.m;
        let (sign, k) = self.num[a as usize].as_signed_root(&self.ctx)?;
        Some(if sign > 0 {
            Unit::new(m, k as i64, a - b)
        } else if m % 2 == 0 {
            Unit::new(m, k as i64 + m as i64 / 2, a - b)
        } else {
            Unit::new(2 * m, m as i64 + 2 * k as i64, a - b)
        })
    }

    /// Some((c, k, e)) if the value is c · ζ_M^k · q^e with 0 ≤ k < φ(M).
    pub fn as_monomial(&self) -> Option<(BigRational, u32, i64)> {
        if self.is_zero() || !poly::is_monomial(&self.num) || !poly::is_monomial(&self.den) {
            return None;
        }
        let a = poly::valuation(&self.num);
        let b = poly::valuation(&self.den);
        let c = &self.num[a];
        let nz: Vec<usize> = (0..c.c.len()).filter(|&i| !c.c[i].is_zero()).collect();
        if nz.len() != 1 {
            return None;
        }
        let coeff = BigRational::new(c.c[nz[0]].clone(), c.d.clone());
        Some((coeff, nz[0] as u32, a as i64 - b as i64))
    }

    /// Substitutes q := value (a constant), returning None when the
    /// denominator vanishes there.
    pub fn eval_q(&self, value: &Scalar) -> Option<Scalar> {
        let eval = |p: &Poly| {
            let mut acc = Scalar::zero();
            for c in p.iter().rev() {
                acc = acc.mul(value).add(&Scalar::constant_cyc(self.ctx.clone(), c.clone()));
            }
            acc
        };
        let d = eval(&self.den);
        if d.is_zero() {
            return None;
        }
        eval(&self.num).checked_div(&d).ok()
    }

    fn fmt_cyc(c: &Cyc) -> Vec<(BigRational, u32)> {
        c.c.iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(|(i, x)| (BigRational::new(x.clone(), c.d.clone()), i as u32))
            .collect()
    }

    fn fmt_poly(p: &Poly) -> String {
        let mut terms: Vec<(BigRational, u32, i64)> = vec![];
        for (j, c) in p.iter().enumerate() {
            for (r, i) in Scalar::fmt_cyc(c) {
                terms.push((r, i, j as i64));
            }
        }
        join_terms(&terms)
    }
}

fn fmt_term(c: &BigRational, k: u32, e: i64) -> String {
    let mut parts: Vec<String> = vec![];
    let abs = c.abs();
    let sign = if c.is_negative() { "-" } else { "" };
    if !abs.is_one() || (k == 0 && e == 0) {
        parts.push(abs.to_string());
    }
    match k {
        0 => {}
        1 => parts.push("z".into()),
        _ => parts.push(format!("z^{k}")),
    }
    match e {
        0 => {}
        1 => parts.push("q".into()),
        _ => parts.push(format!("q^{e}")),
    }
    format!("{sign}{}", parts.join("*"))
}

fn join_terms(terms: &[(BigRational, u32, i64)]) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    let mut s = String::new();
    for (idx, (c, k, e)) in terms.iter().enumerate() {
        if idx == 0 {
            s.push_str(&fmt_term(c, *k, *e));
        } else if c.is_negative() {
            s.push_str(" - ");
            s.push_str(&fmt_term(&-c, *k, *e));
        } else {
            s.push_str(" + ");
            s.push_str(&fmt_term(c, *k, *e));
        }
    }
    s
}

/// Literal form with `z` standing for ζ_M, M the value's cyclotomic order.
/// Monomials print in the scalar literal grammar (`-3/2*z^5*q^2`); other
/// values print as `(num)/(den)` sums that the expression parser accepts.
impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some((c, k, e)) = self.as_monomial() {
            return f.write_str(&fmt_term(&c, k, e));
        }
        if self.is_zero() {
            return f.write_str("0");
        }
        let num = Scalar::fmt_poly(&self.num);
        if self.is_den_one() {
            return f.write_str(&num);
        }
        write!(f, "({})/({})", num, Scalar::fmt_poly(&self.den))
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Scalar[M={}]({})", self.ctx.m, self)
    }
}

impl PartialEq for Scalar {
    fn eq(&self, o: &Scalar) -> bool {
        if self.ctx.m == o.ctx.m {
            return self.num == o.num && self.den == o.den;
        }
        let (a, b) = self.common(o);
        a.num == b.num && a.den == b.den
    }
}

impl Eq for Scalar {}

/// Structural key of a scalar at a fixed cyclotomic order. Two keys built
/// from values of the same order are equal iff the values are.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ScalarKey {
    m: u32,
    num: Vec<(Vec<BigInt>, BigInt)>,
    den: Vec<(Vec<BigInt>, BigInt)>,
}

impl Scalar {
    pub fn key_at(&self, m: u32) -> Result<ScalarKey> {
        let s = self.lift_to(m)?;
        let conv = |p: &Poly| p.iter().map(|c| (c.c.clone(), c.d.clone())).collect();
        Ok(ScalarKey {
            m,
            num: conv(&s.num),
            den: conv(&s.den),
        })
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $inner:ident) => {
        impl std::ops::$tr<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, o: &Scalar) -> Scalar {
                Scalar::$inner(self, o)
            }
        }
        impl std::ops::$tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, o: Scalar) -> Scalar {
                Scalar::$inner(&self, &o)
            }
        }
        impl std::ops::$tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, o: &Scalar) -> Scalar {
                Scalar::$inner(&self, o)
            }
        }
        impl std::ops::$tr<Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, o: Scalar) -> Scalar {
                Scalar::$inner(self, &o)
            }
        }
    };
}

binop!(Add, add, add);
binop!(Sub, sub, sub);
binop!(Mul, mul, mul);

fn div_or_panic(a: &Scalar, b: &Scalar) -> Scalar {
    a.checked_div(b).expect("scalar division by zero")
}

// `/` panics on a zero divisor like integer division; use `checked_div` to
// get an error instead.
binop!(Div, div, div_or_panic_method);

impl Scalar {
    fn div_or_panic_method(&self, o: &Scalar) -> Scalar {
        div_or_panic(self, o)
    }
}

impl std::ops::Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::neg(&self)
    }
}

impl std::ops::Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::neg(self)
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Scalar {
        Scalar::from_int(n)
    }
}

impl std::iter::Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |a, b| a + b)
    }
}

impl std::iter::Product for Scalar {
    fn product<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::one(), |a, b| a * b)
    }
}

/// (a/g, b/g, g) with g = gcd(a, b).
fn cancel(ctx: &CycloCtx, a: &Poly, b: &Poly) -> (Poly, Poly, Poly) {
    if a.len() == 1 || b.len() == 1 {
        return (a.clone(), b.clone(), poly::constant(Cyc::one(ctx)));
    }
    let g = poly::gcd(ctx, a, b);
    if g.len() == 1 {
        return (a.clone(), b.clone(), g);
    }
    (poly::divrem(ctx, a, &g).0, poly::divrem(ctx, b, &g).0, g)
}

/// lcm of the cyclotomic orders of a collection of scalars.
pub fn common_order<'a>(xs: impl IntoIterator<Item = &'a Scalar>) -> u32 {
    xs.into_iter()
        .fold(1u32, |acc, s| acc.lcm(&s.cyclotomic_order()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: u32, k: i64) -> Scalar {
        Scalar::root_of_unity(n, k)
    }

    #[test]
    fn roots_of_unity_basics() {
        assert!(z(1, 0).is_one());
        assert_eq!(z(2, 1), Scalar::from_int(-1));
        let w = z(3, 1);
        assert!((&w * &w + &w + Scalar::one()).is_zero());
    }

    #[test]
    fn spec_arithmetic_examples() {
        assert_eq!(z(3, 1) + z(3, 2), Scalar::from_int(-1));
        let q = Scalar::q();
        assert!((&q * &q.inv().unwrap()).is_one());
        let lhs = (Scalar::one() - q.powu(2)) / (Scalar::one() - &q);
        assert_eq!(lhs, Scalar::one() + &q);
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert_eq!(Scalar::one().checked_div(&Scalar::zero()), Err(Error::DivisionByZero));
        assert_eq!(Scalar::zero().pow(-1), Err(Error::DivisionByZero));
    }

    #[test]
    fn orders() {
        assert_eq!(z(8, 3).order_of(), Ok(Order::Finite(8)));
        assert_eq!(Scalar::q().order_of(), Ok(Order::Infinite));
        assert_eq!((-z(3, 1)).order_of(), Ok(Order::Finite(6)));
        assert_eq!(Scalar::from_int(2).order_of(), Ok(Order::NotRootOfUnity));
        assert_eq!(Scalar::from_int(-1).order_of(), Ok(Order::Finite(2)));
        assert_eq!(Scalar::one().order_of(), Ok(Order::Finite(1)));
        assert_eq!(Scalar::zero().order_of(), Err(Error::ZeroInput));
        // 1 + ζ_6 has absolute value √3.
        assert_eq!((Scalar::one() + z(6, 1)).order_of(), Ok(Order::NotRootOfUnity));
        // −ζ_5 is a primitive 10th root.
        assert_eq!((-z(5, 2)).order_of(), Ok(Order::Finite(10)));
    }

    #[test]
    fn mixed_orders_widen() {
        let a = z(4, 1) * z(6, 1);
        assert_eq!(a.cyclotomic_order(), 12);
        assert_eq!(a, z(12, 5));
        assert_eq!(z(4, 2), z(2, 1));
        assert_ne!(z(12, 5), z(12, 7));
    }

    #[test]
    fn units_detected() {
        let a = -(z(5, 2) * Scalar::q_pow(-3));
        let u = a.as_unit().unwrap();
        assert_eq!(u.to_scalar(), a);
        assert_eq!(u.order(), Order::Infinite);
        assert!((Scalar::one() + Scalar::q()).as_unit().is_none());
        assert!(Scalar::from_int(2).as_unit().is_none());
        let b = z(8, 6);
        assert_eq!(b.as_unit().unwrap().to_scalar(), b);
    }

    #[test]
    fn display_forms() {
        assert_eq!(Scalar::from_ratio(-3, 2).to_string(), "-3/2");
        assert_eq!(z(8, 1).to_string(), "z");
        assert_eq!(Scalar::q_pow(-2).to_string(), "q^-2");
        let m = Scalar::monomial(BigRational::new((-3).into(), 2.into()), 8, 3, 2);
        assert_eq!(m.to_string(), "-3/2*z^3*q^2");
        assert_eq!((Scalar::one() + Scalar::q()).to_string(), "1 + q");
        assert_eq!(
            (Scalar::one() / (Scalar::one() - Scalar::q())).to_string(),
            "(-1)/(-1 + q)"
        );
    }

    #[test]
    fn canonical_fraction_cancels_common_factor() {
        let q = Scalar::q();
        let w = z(3, 1);
        let num = (&q - &w) * (&q + Scalar::from_int(2));
        let den = (&q - &w) * (&q * &q + Scalar::one());
        let r = num / den;
        let expect = (&q + Scalar::from_int(2)) / (&q * &q + Scalar::one());
        assert_eq!(r, expect);
        assert_eq!(r.normalize(), r);
    }

    #[test]
    fn eval_q_substitutes() {
        let q = Scalar::q();
        let f = (Scalar::one() - q.powu(2)) / (Scalar::one() + &q);
        assert_eq!(f.eval_q(&z(5, 1)), Some(Scalar::one() - z(5, 1)));
        let g = Scalar::one() / (Scalar::one() + &q);
        assert_eq!(g.eval_q(&Scalar::from_int(-1)), None);
    }
}
