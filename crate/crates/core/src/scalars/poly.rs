//! Dense univariate polynomials in q over Q(ζ_M), low degree first, no
//! trailing zero coefficients (the zero polynomial is empty).

use super::cyclotomic::{Cyc, CycloCtx};

pub(crate) type Poly = Vec<Cyc>;

pub(crate) fn trim(p: &mut Poly) {
    while p.last().is_some_and(Cyc::is_zero) {
        p.pop();
    }
}

pub(crate) fn constant(c: Cyc) -> Poly {
    if c.is_zero() {
        vec![]
    } else {
        vec![c]
    }
}

/// q^e · c
pub(crate) fn monomial(ctx: &CycloCtx, c: Cyc, e: usize) -> Poly {
    if c.is_zero() {
        return vec![];
    }
    let mut p = vec![Cyc::zero(ctx); e];
    p.push(c);
    p
}

pub(crate) fn add(a: &Poly, b: &Poly) -> Poly {
    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let mut out = long.clone();
    for (o, x) in out.iter_mut().zip(short) {
        *o = o.add(x);
    }
    trim(&mut out);
    out
}

pub(crate) fn neg(a: &Poly) -> Poly {
    a.iter().map(Cyc::neg).collect()
}

pub(crate) fn mul(ctx: &CycloCtx, a: &Poly, b: &Poly) -> Poly {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![Cyc::zero(ctx); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] = out[i + j].add(&x.mul(y, ctx));
            }
        }
    }
    trim(&mut out);
    out
}

pub(crate) fn scale(ctx: &CycloCtx, a: &Poly, c: &Cyc) -> Poly {
    let mut out: Poly = a.iter().map(|x| x.mul(c, ctx)).collect();
    trim(&mut out);
    out
}

/// Lowest index with a nonzero coefficient.
pub(crate) fn valuation(a: &Poly) -> usize {
    a.iter().position(|c| !c.is_zero()).unwrap_or(0)
}

pub(crate) fn is_monomial(a: &Poly) -> bool {
    a.iter().filter(|c| !c.is_zero()).count() == 1
}

pub(crate) fn shift_down(a: &Poly, k: usize) -> Poly {
    a[k..].to_vec()
}

/// Quotient and remainder; `b` must be nonzero.
pub(crate) fn divrem(ctx: &CycloCtx, a: &Poly, b: &Poly) -> (Poly, Poly) {
    let db = b.len() - 1;
    if a.len() < b.len() {
        return (vec![], a.clone());
    }
    let lead_inv = b[db].inv(ctx);
    let mut rem = a.clone();
    let mut quot = vec![Cyc::zero(ctx); a.len() - db];
    for k in (0..quot.len()).rev() {
        let c = rem[k + db].mul(&lead_inv, ctx);
        if c.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                rem[k + j] = rem[k + j].sub(&c.mul(y, ctx));
            }
        }
        quot[k] = c;
    }
    trim(&mut rem);
    trim(&mut quot);
    (quot, rem)
}

pub(crate) fn make_monic(ctx: &CycloCtx, a: &Poly) -> Poly {
    let inv = a.last().expect("nonzero polynomial").inv(ctx);
    scale(ctx, a, &inv)
}

/// Monic gcd; both inputs nonzero.
pub(crate) fn gcd(ctx: &CycloCtx, a: &Poly, b: &Poly) -> Poly {
    if is_monomial(a) || is_monomial(b) {
        let k = valuation(a).min(valuation(b));
        return monomial(ctx, Cyc::one(ctx), k);
    }
    let k = valuation(a).min(valuation(b));
    let (a, b) = (shift_down(a, valuation(a)), shift_down(b, valuation(b)));
    if super::modp::coprime(ctx, &a, &b) {
        return monomial(ctx, Cyc::one(ctx), k);
    }
    let g = match super::modp::gcd(ctx, &a, &b) {
        Some(g) => g,
        None => euclid(ctx, a, b),
    };
    if k == 0 {
        g
    } else {
        mul(ctx, &g, &monomial(ctx, Cyc::one(ctx), k))
    }
}

fn euclid(ctx: &CycloCtx, a: Poly, b: Poly) -> Poly {
    let mut x = a;
    let mut y = b;
    while !y.is_empty() {
        let (_, r) = divrem(ctx, &x, &y);
        x = y;
        y = if r.is_empty() { r } else { make_monic(ctx, &r) };
    }
    make_monic(ctx, &x)
}

pub(crate) fn lift(a: &Poly, from: &CycloCtx, to: &CycloCtx) -> Poly {
    a.iter().map(|c| c.lift(from, to)).collect()
}
