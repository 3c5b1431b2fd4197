//! A small expression language shared by matrix files, the element oracle
//! and the verification tables.
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/')? unary)*        juxtaposition multiplies
//! unary := ('-' | '+') unary | power
//! power := atom ('^' int)?
//! atom  := number | root | 'q' | 'x'digits | name '(' int (',' int)* ')' | '(' expr ')'
//! ```
//!
//! `root` is `z` by default (ζ_M for the declared order M); names are `y`,
//! `w`, `wtilde` and `Y`. Every scalar literal is also a valid expression.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::scalars::{
    euler_phi, Scalar, MAX_PARSED_BITS, MAX_PARSED_DIVISOR_BITS, MAX_PARSED_Q_DEGREE, MAX_PARSED_TOTAL_BITS,
};

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(BigRational),
    Root,
    Q,
    /// Generator x_i, stored 0-based.
    Gen(usize),
    Call(String, Vec<i64>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, i64),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Root,
    Q,
    Gen(usize),
    Name(String),
    Op(u8),
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
    root: u8,
    context: &'a str,
}

fn parse_err(context: &str, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        context: context.into(),
        line: 1,
        column,
        message: message.into(),
    }
}

impl<'a> Lexer<'a> {
    fn tokens(mut self) -> Result<Vec<(Tok, usize)>> {
        let mut out = vec![];
        while self.pos < self.src.len() {
            let c = self.src[self.pos];
            let col = self.pos + 1;
            if c.is_ascii_whitespace() {
                self.pos += 1;
            } else if c.is_ascii_digit() {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                out.push((Tok::Num(text.parse().unwrap()), col));
            } else if b"+-*/^(),".contains(&c) {
                out.push((Tok::Op(c), col));
                self.pos += 1;
            } else if self.src[self.pos..].starts_with(b"wtilde") {
                out.push((Tok::Name("wtilde".into()), col));
                self.pos += 6;
            } else if c == b'x' {
                self.pos += 1;
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let idx: usize = std::str::from_utf8(&self.src[start..self.pos])
                    .unwrap()
                    .parse()
                    .map_err(|_| parse_err(self.context, col, "expected a generator index after `x`"))?;
                if idx == 0 {
                    return Err(parse_err(self.context, col, "generators are numbered from 1"));
                }
                out.push((Tok::Gen(idx - 1), col));
            } else if c == self.root {
                out.push((Tok::Root, col));
                self.pos += 1;
            } else if c == b'q' {
                out.push((Tok::Q, col));
                self.pos += 1;
            } else if c == b'y' || c == b'w' || c == b'Y' {
                out.push((Tok::Name(char::from(c).to_string()), col));
                self.pos += 1;
            } else {
                return Err(parse_err(
                    self.context,
                    col,
                    format!("unexpected character `{}`", char::from(c)),
                ));
            }
        }
        Ok(out)
    }
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end_col: usize,
    context: &'a str,
    depth: usize,
}

const MAX_DEPTH: usize = 200;
const MAX_TOKENS: usize = 4096;

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |t| t.1)
    }

    fn err(&self, message: impl Into<String>) -> Error {
        parse_err(self.context, self.col(), message)
    }

    fn eat(&mut self, op: u8) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat(b'+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat(b'-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat(b'*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat(b'/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else if matches!(
                self.peek(),
                Some(Tok::Root | Tok::Q | Tok::Gen(_) | Tok::Name(_) | Tok::Op(b'('))
            ) {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.power()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn descend(&mut self) -> Result<()> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(self.err("expression nested too deeply"));
        }
        Ok(())
    }

    fn unary(&mut self) -> Result<Expr> {
        self.descend()?;
        let out = self.unary_inner();
        self.depth -= 1;
        out
    }

    fn unary_inner(&mut self) -> Result<Expr> {
        if self.eat(b'-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        if self.eat(b'+') {
            return self.unary();
        }
        self.power()
    }

    fn int(&mut self) -> Result<i64> {
        let neg = if self.eat(b'-') {
            true
        } else {
            self.eat(b'+');
            false
        };
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                let v: i64 = n.try_into().map_err(|_| self.err("integer out of range"))?;
                self.pos += 1;
                Ok(if neg { -v } else { v })
            }
            _ => Err(self.err("expected an integer")),
        }
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.eat(b'^') {
            let e = if self.eat(b'(') {
                let e = self.int()?;
                if !self.eat(b')') {
                    return Err(self.err("expected `)`"));
                }
                e
            } else {
                self.int()?
            };
            return Ok(Expr::Pow(Box::new(base), e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        let tok = self.peek().cloned().ok_or_else(|| self.err("unexpected end of input"))?;
        self.pos += 1;
        match tok {
            Tok::Num(n) => Ok(Expr::Num(BigRational::from_integer(n))),
            Tok::Root => Ok(Expr::Root),
            Tok::Q => Ok(Expr::Q),
            Tok::Gen(i) => Ok(Expr::Gen(i)),
            Tok::Name(name) => {
                if !self.eat(b'(') {
                    return Err(self.err(format!("expected `(` after `{name}`")));
                }
                let mut args = vec![self.int()?];
                while self.eat(b',') {
                    args.push(self.int()?);
                }
                if !self.eat(b')') {
                    return Err(self.err("expected `)`"));
                }
                Ok(Expr::Call(name, args))
            }
            Tok::Op(b'(') => {
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.err("expected `)`"));
                }
                Ok(e)
            }
            Tok::Op(c) => {
                self.pos -= 1;
                Err(self.err(format!("unexpected `{}`", char::from(c))))
            }
        }
    }
}

/// Parses `text`; `root` is the symbol used for the root of unity.
pub fn parse_expr(text: &str, root: char, context: &str) -> Result<Expr> {
    let toks = Lexer {
        src: text.as_bytes(),
        pos: 0,
        root: root as u8,
        context,
    }
    .tokens()?;
    if toks.len() > MAX_TOKENS {
        return Err(parse_err(context, 1, format!("expression longer than {MAX_TOKENS} tokens")));
    }
    let mut p = Parser {
        toks,
        pos: 0,
        end_col: text.len() + 1,
        context,
        depth: 0,
    };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(e)
}

impl Expr {
    /// Evaluates to a scalar with the root symbol read as ζ_m.
    pub fn eval_scalar(&self, m: u32) -> Result<Scalar> {
        Ok(match self {
            Expr::Num(r) => Scalar::from_rational(r.clone()),
            Expr::Root => Scalar::root_of_unity(m, 1),
            Expr::Q => Scalar::q(),
            Expr::Gen(_) | Expr::Call(..) => {
                return Err(Error::OutOfRange(
                    "algebra generators are not allowed in a scalar".into(),
                ))
            }
            Expr::Add(a, b) => a.eval_scalar(m)? + b.eval_scalar(m)?,
            Expr::Sub(a, b) => a.eval_scalar(m)? - b.eval_scalar(m)?,
            Expr::Mul(a, b) => a.eval_scalar(m)? * b.eval_scalar(m)?,
            Expr::Div(a, b) => {
                let b = b.eval_scalar(m)?;
                let phi = euler_phi(b.cyclotomic_order()) as u64;
                if b.coeff_bits().saturating_mul(phi) > MAX_PARSED_DIVISOR_BITS {
                    return Err(Error::OutOfRange("divisor coefficients are too large".into()));
                }
                a.eval_scalar(m)?.checked_div(&b)?
            }
            Expr::Neg(a) => -a.eval_scalar(m)?,
            Expr::Pow(a, e) => {
                let a = a.eval_scalar(m)?;
                let e_abs = e.unsigned_abs();
                let degree = (a.q_degree() as u64).saturating_mul(e_abs);
                // ±ζ^k q^e stays a unit under powers
                let bits = match a.as_unit() {
                    Some(_) => 0,
                    None => a.coeff_bits().saturating_mul(e_abs),
                };
                // a power of a monomial stays a monomial
                let terms = if a.q_terms() <= 2 { 1 } else { degree + 1 };
                if degree > MAX_PARSED_Q_DEGREE
                    || bits > MAX_PARSED_BITS
                    || bits.saturating_mul(terms) > MAX_PARSED_TOTAL_BITS
                {
                    return Err(Error::OutOfRange(format!("scalar power ^{e} is too large")));
                }
                a.pow(*e)?
            }
        })
    }

    /// True if no generators or named elements occur.
    pub fn is_scalar(&self) -> bool {
        match self {
            Expr::Num(_) | Expr::Root | Expr::Q => true,
            Expr::Gen(_) | Expr::Call(..) => false,
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.is_scalar() && b.is_scalar()
            }
            Expr::Neg(a) | Expr::Pow(a, _) => a.is_scalar(),
        }
    }
}

/// Parses and evaluates a scalar expression over Q(ζ_m)(q).
pub fn parse_scalar(text: &str, m: u32, root: char) -> Result<Scalar> {
    if m == 0 {
        return Err(Error::OutOfRange("cyclotomic order must be positive".into()));
    }
    parse_expr(text, root, "scalar expression")?.eval_scalar(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::parse_literal;

    #[test]
    fn literals_are_expressions() {
        for s in ["-3/2*z^5*q^2", "z", "2q", "zq", "q^-1", "-z^3", "3/2z", "7"] {
            assert_eq!(
                parse_scalar(s, 8, 'z').unwrap(),
                parse_literal(s, 8).unwrap(),
                "{s}"
            );
        }
    }

    #[test]
    fn precedence_and_powers() {
        let r = |k| Scalar::root_of_unity(24, k);
        let v = parse_scalar("(1 - r^(15*1))", 24, 'r');
        assert!(v.is_err());
        let v = parse_scalar("-r^15*(1+r^2)(1+r^17)", 24, 'r').unwrap();
        let expect = -(r(15) * (Scalar::one() + r(2)) * (Scalar::one() + r(17)));
        assert_eq!(v, expect);
        assert_eq!(parse_scalar("2^-2", 1, 'z').unwrap(), Scalar::from_ratio(1, 4));
        assert_eq!(parse_scalar("-2^2", 1, 'z').unwrap(), Scalar::from_int(-4));
    }

    #[test]
    fn errors_carry_columns() {
        match parse_scalar("1 + )", 4, 'z').unwrap_err() {
            Error::Parse { column, .. } => assert_eq!(column, 5),
            e => panic!("{e:?}"),
        }
        assert_eq!(parse_scalar("1/(z-z)", 4, 'z'), Err(Error::DivisionByZero));
        assert!(parse_scalar("x1", 4, 'z').is_err());
    }

    #[test]
    fn oversized_powers_are_rejected() {
        assert!(matches!(parse_scalar("q^100000", 1, 'z'), Err(Error::OutOfRange(_))));
        assert!(matches!(parse_scalar("(2^4096)^4096", 1, 'z'), Err(Error::OutOfRange(_))));
        assert!(matches!(parse_scalar("(1+2q)^16000", 1, 'z'), Err(Error::OutOfRange(_))));
        assert!(parse_scalar("(1+q)^100", 3, 'z').is_ok());
        assert!(matches!(parse_scalar("1/(z + 3^1000)", 33, 'z'), Err(Error::OutOfRange(_))));
        assert!(parse_scalar("q^-16000", 3, 'z').is_ok());
        assert!(parse_scalar("z^999", 997, 'z').is_ok());
        assert!(matches!(parse_literal("3*q^23571712279", 43), Err(Error::Parse { .. })));
    }

    #[test]
    fn element_syntax_parses() {
        let e = parse_expr("y(3)^2 - 2*x1 x2 + wtilde(0) + Y(1,1,3)", 'z', "element").unwrap();
        assert!(!e.is_scalar());
    }
}
