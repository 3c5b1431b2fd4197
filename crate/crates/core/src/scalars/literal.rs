//! Strict monomial literals: `['-'] [rational] ['*'] ['z' ['^' int]] ['*'] ['q' ['^' int]]`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::Scalar;
use crate::error::{Error, Result};

struct Cursor<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<u8> {
        self.s.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|c| c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn err(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            context: "scalar literal".into(),
            line: 1,
            column: self.pos + 1,
            message: message.into(),
        }
    }

    fn digits(&mut self) -> Option<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return None;
        }
        std::str::from_utf8(&self.s[start..self.pos]).ok()?.parse().ok()
    }

    fn exponent(&mut self) -> Result<i64> {
        self.skip_ws();
        let neg = if self.eat(b'-') {
            true
        } else {
            self.eat(b'+');
            false
        };
        let d = self.digits().ok_or_else(|| self.err("expected an integer exponent"))?;
        let v: i64 = d
            .try_into()
            .map_err(|_| self.err("exponent out of range"))?;
        Ok(if neg { -v } else { v })
    }
}

/// Parses a monomial literal with `z` = ζ_M where `cyclotomic_order` = M.
pub fn parse_literal(text: &str, cyclotomic_order: u32) -> Result<Scalar> {
    if cyclotomic_order == 0 {
        return Err(Error::OutOfRange("cyclotomic order must be positive".into()));
    }
    let mut c = Cursor {
        s: text.as_bytes(),
        pos: 0,
    };
    let neg = c.eat(b'-');
    let mut coeff = BigRational::one();
    let mut seen_any = false;
    if let Some(n) = c.digits() {
        let d = if c.eat(b'/') {
            let d = c.digits().ok_or_else(|| c.err("expected a denominator"))?;
            if d.is_zero() {
                return Err(c.err("zero denominator"));
            }
            d
        } else {
            BigInt::one()
        };
        coeff = BigRational::new(n, d);
        seen_any = true;
    }
    let mut zexp = 0i64;
    let mut qexp = 0i64;
    let star_then = |c: &mut Cursor, seen: bool, letter: u8| -> Result<bool> {
        let save = c.pos;
        if seen && c.eat(b'*') {
            if c.eat(letter) {
                return Ok(true);
            }
            c.pos = save;
            return Ok(false);
        }
        Ok(c.eat(letter))
    };
    if star_then(&mut c, seen_any, b'z')? {
        seen_any = true;
        if c.eat(b'^') {
            zexp = c.exponent()?;
        } else {
            zexp = 1;
        }
    }
    if star_then(&mut c, seen_any, b'q')? {
        seen_any = true;
        if c.eat(b'^') {
            qexp = c.exponent()?;
            if qexp.unsigned_abs() > super::MAX_PARSED_Q_DEGREE {
                return Err(c.err(format!("q exponent beyond ±{}", super::MAX_PARSED_Q_DEGREE)));
            }
        } else {
            qexp = 1;
        }
    }
    c.skip_ws();
    if c.pos != c.s.len() {
        return Err(c.err(format!(
            "unexpected character `{}`",
            char::from(c.s[c.pos])
        )));
    }
    if !seen_any {
        return Err(c.err("empty literal"));
    }
    if neg {
        coeff = -coeff;
    }
    let m = cyclotomic_order as i64;
    Ok(Scalar::monomial(coeff, cyclotomic_order, zexp.rem_euclid(m), qexp))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepted_forms() {
        let z8 = |k| Scalar::root_of_unity(8, k);
        let q = Scalar::q();
        let lit = |s| parse_literal(s, 8).unwrap();
        assert_eq!(
            lit("-3/2*z^5*q^2"),
            Scalar::from_ratio(-3, 2) * z8(5) * q.powu(2)
        );
        assert_eq!(lit("z"), z8(1));
        assert_eq!(lit("-z^3"), -z8(3));
        assert_eq!(lit("q^-1"), q.inv().unwrap());
        assert_eq!(lit("2q"), Scalar::from_int(2) * &q);
        assert_eq!(lit("z*q"), z8(1) * &q);
        assert_eq!(lit("zq"), z8(1) * &q);
        assert_eq!(lit("z^-1"), z8(7));
        assert_eq!(lit(" 7 "), Scalar::from_int(7));
        assert!(lit("0").is_zero());
    }

    #[test]
    fn rejected_forms() {
        for bad in ["", "-", "*z", "z^", "1/0", "q*z", "x", "2**z", "3/", "z^q", "1 2"] {
            let e = parse_literal(bad, 8).unwrap_err();
            assert!(matches!(e, Error::Parse { .. }), "{bad:?} gave {e:?}");
        }
    }

    #[test]
    fn error_column_points_at_offender() {
        match parse_literal("z^3x", 4).unwrap_err() {
            Error::Parse { column, .. } => assert_eq!(column, 4),
            e => panic!("{e:?}"),
        }
    }

    #[test]
    fn display_roundtrip() {
        for s in ["-3/2*z^3*q^2", "z", "q^-4", "5/7", "-z^2*q"] {
            let v = parse_literal(s, 8).unwrap();
            assert_eq!(parse_literal(&v.to_string(), 8).unwrap(), v);
        }
    }
}
