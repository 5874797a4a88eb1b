//! Text syntax for exact values and alpha declarations.
//!
//! Values: `p/q`, `a`, `p/q + r/s*a`, `p/q - r/s*a`, whitespace-insensitive;
//! `a` is the session irrational. Oracles: `sqrt(2)/2`, `3/4*sqrt(2)`,
//! `cf[0;1,2,(1,2)]` (parenthesised tail repeats; a trailing `...` infers
//! the period from the listed terms), and `0.4142135 +/- 1e-7`.

use super::{AlphaOracle, QAlpha, Rational};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiteralError {
    /// Byte offset into the parsed text.
    pub position: usize,
    pub message: String,
}

impl fmt::Display for LiteralError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at offset {}: {}", self.position, self.message)
    }
}

impl std::error::Error for LiteralError {}

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str) -> Self {
        Cursor { text, pos: 0 }
    }

    fn rest(&self) -> &'a str {
        &self.text[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.text.len() - trimmed.len();
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.rest().chars().next()
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> Result<(), LiteralError> {
        if self.eat(token) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{token}`")))
        }
    }

    fn error(&self, message: impl Into<String>) -> LiteralError {
        LiteralError {
            position: self.pos,
            message: message.into(),
        }
    }

    fn finish(&mut self) -> Result<(), LiteralError> {
        self.skip_ws();
        if self.pos == self.text.len() {
            Ok(())
        } else {
            Err(self.error("unexpected trailing input"))
        }
    }

    fn digits(&mut self) -> Option<&'a str> {
        let rest = self.rest();
        let len = rest.bytes().take_while(u8::is_ascii_digit).count();
        if len == 0 {
            return None;
        }
        self.pos += len;
        Some(&rest[..len])
    }

    /// Unsigned decimal number with optional fraction and exponent.
    fn unsigned_decimal(&mut self) -> Result<Rational, LiteralError> {
        self.skip_ws();
        let start = self.pos;
        let int_part = self.digits();
        let mut frac_part = "";
        if self.rest().starts_with('.') {
            self.pos += 1;
            frac_part = self.digits().unwrap_or("");
        }
        if int_part.is_none() && frac_part.is_empty() {
            self.pos = start;
            return Err(self.error("expected a number"));
        }
        let mut exponent: i64 = 0;
        if self.rest().starts_with(['e', 'E']) {
            let save = self.pos;
            self.pos += 1;
            let negative = if self.rest().starts_with('-') {
                self.pos += 1;
                true
            } else {
                if self.rest().starts_with('+') {
                    self.pos += 1;
                }
                false
            };
            match self.digits().and_then(|d| d.parse::<i64>().ok()) {
                Some(e) => exponent = if negative { -e } else { e },
                None => self.pos = save,
            }
        }
        let mantissa: BigInt = format!("{}{}", int_part.unwrap_or("0"), frac_part)
            .parse()
            .map_err(|_| self.error("malformed number"))?;
        exponent -= frac_part.len() as i64;
        let ten = BigInt::from(10);
        let value = if exponent >= 0 {
            Rational::from_integer(mantissa * num_traits::pow(ten, exponent as usize))
        } else {
            Rational::new(mantissa, num_traits::pow(ten, (-exponent) as usize))
        };
        Ok(value)
    }

    /// `decimal ['/' decimal]`, unsigned.
    fn unsigned_rational(&mut self) -> Result<Rational, LiteralError> {
        let numer = self.unsigned_decimal()?;
        let save = self.pos;
        if self.eat("/") {
            let at = self.pos;
            match self.unsigned_decimal() {
                Ok(d) if d.is_zero() => {
                    return Err(LiteralError {
                        position: at,
                        message: "division by zero".into(),
                    })
                }
                Ok(d) => return Ok(numer / d),
                Err(_) => self.pos = save,
            }
        }
        Ok(numer)
    }

    fn signed_rational(&mut self) -> Result<Rational, LiteralError> {
        let negative = self.eat("-");
        if !negative {
            self.eat("+");
        }
        let r = self.unsigned_rational()?;
        Ok(if negative { -r } else { r })
    }

    fn integer(&mut self) -> Result<BigInt, LiteralError> {
        self.skip_ws();
        let negative = self.eat("-");
        let d = self.digits().ok_or_else(|| self.error("expected an integer"))?;
        let n: BigInt = d.parse().map_err(|_| self.error("malformed integer"))?;
        Ok(if negative { -n } else { n })
    }
}

/// Parses a signed rational: `3`, `-2/3`, `0.25`, `1e-7`.
pub fn parse_rational(text: &str) -> Result<Rational, LiteralError> {
    let mut c = Cursor::new(text);
    let r = c.signed_rational()?;
    c.finish()?;
    Ok(r)
}

pub(super) fn parse_qalpha(text: &str) -> Result<QAlpha, LiteralError> {
    let mut c = Cursor::new(text);
    let mut q = Rational::zero();
    let mut p = Rational::zero();
    let mut first = true;
    loop {
        let negative = if c.eat("-") {
            true
        } else if c.eat("+") || first {
            false
        } else {
            break;
        };
        first = false;
        let (value, is_alpha) = term(&mut c)?;
        let value = if negative { -value } else { value };
        if is_alpha {
            p += value;
        } else {
            q += value;
        }
    }
    c.finish()?;
    Ok(QAlpha::new(q, p))
}

fn term(c: &mut Cursor<'_>) -> Result<(Rational, bool), LiteralError> {
    if c.peek() == Some('a') {
        c.eat("a");
        let mut coeff = Rational::one();
        if c.eat("/") {
            let d = c.unsigned_decimal()?;
            if d.is_zero() {
                return Err(c.error("division by zero"));
            }
            coeff /= d;
        }
        return Ok((coeff, true));
    }
    let coeff = c.unsigned_rational()?;
    let explicit_star = c.eat("*");
    if c.eat("a") {
        let mut coeff = coeff;
        if c.eat("/") {
            let d = c.unsigned_decimal()?;
            if d.is_zero() {
                return Err(c.error("division by zero"));
            }
            coeff /= d;
        }
        Ok((coeff, true))
    } else if explicit_star {
        Err(c.error("expected `a` after `*`"))
    } else {
        Ok((coeff, false))
    }
}

/// Parses the right-hand side of an alpha declaration. Rational values
/// (finite continued fractions, square roots of squares, bare rationals)
/// are accepted only when `allow_rational` is set.
pub fn parse_oracle(text: &str, allow_rational: bool) -> Result<AlphaOracle, LiteralError> {
    let mut c = Cursor::new(text);
    let invalid = |c: &Cursor<'_>, e: crate::Error| c.error(e.to_string());

    if text.contains("+/-") {
        let center = c.signed_rational()?;
        c.expect("+/-")?;
        let radius = c.unsigned_rational()?;
        c.finish()?;
        return AlphaOracle::decimal(&center - &radius, &center + &radius).map_err(|e| invalid(&c, e));
    }

    let mut factor = Rational::one();
    let save = c.pos;
    if let Ok(r) = c.unsigned_rational() {
        if c.eat("*") {
            factor = r;
        } else {
            c.finish()?;
            if !allow_rational {
                return Err(c.error("rational alpha requires the allow-rational mode"));
            }
            return AlphaOracle::rational(r).map_err(|e| invalid(&c, e));
        }
    } else {
        c.pos = save;
    }

    let start = c.pos;
    let oracle = if c.eat("sqrt") {
        c.expect("(")?;
        let radicand = c.unsigned_rational()?;
        c.expect(")")?;
        if c.eat("/") {
            let d = c.unsigned_rational()?;
            if d.is_zero() {
                return Err(c.error("division by zero"));
            }
            factor /= d;
        }
        c.finish()?;
        match AlphaOracle::sqrt(factor.clone(), radicand.clone()) {
            Ok(o) => o,
            Err(e) if allow_rational => {
                let root = exact_sqrt(&radicand).ok_or_else(|| invalid(&c, e))?;
                AlphaOracle::rational(factor * root).map_err(|e| invalid(&c, e))?
            }
            Err(e) => return Err(invalid(&c, e)),
        }
    } else if c.eat("cf") {
        let (head, period) = cf_body(&mut c)?;
        if c.eat("/") {
            let d = c.unsigned_rational()?;
            if d.is_zero() {
                return Err(c.error("division by zero"));
            }
            factor /= d;
        }
        c.finish()?;
        if period.is_empty() {
            if !allow_rational {
                return Err(LiteralError {
                    position: start,
                    message: "finite continued fraction is rational; requires the allow-rational mode".into(),
                });
            }
            let value = finite_cf_value(&head);
            return AlphaOracle::rational(factor * value).map_err(|e| invalid(&c, e));
        }
        let base = AlphaOracle::continued_fraction(head, period).map_err(|e| invalid(&c, e))?;
        if factor.is_one() {
            base
        } else {
            base.scaled(&factor).map_err(|e| invalid(&c, e))?
        }
    } else {
        return Err(c.error("expected `sqrt(...)`, `cf[...]`, a rational, or `x +/- e`"));
    };
    Ok(oracle)
}

fn exact_sqrt(x: &Rational) -> Option<Rational> {
    let n = x.numer().sqrt();
    let d = x.denom().sqrt();
    (&n * &n == *x.numer() && &d * &d == *x.denom()).then(|| Rational::new(n, d))
}

fn finite_cf_value(terms: &[BigInt]) -> Rational {
    let mut value = Rational::from_integer(terms[terms.len() - 1].clone());
    for t in terms[..terms.len() - 1].iter().rev() {
        value = Rational::from_integer(t.clone()) + value.recip();
    }
    value
}

/// `[a0; a1, ..., (p1, ..., pk)]` or `[a0; a1, a2, ...]`.
fn cf_body(c: &mut Cursor<'_>) -> Result<(Vec<BigInt>, Vec<BigInt>), LiteralError> {
    c.expect("[")?;
    let a0 = c.integer()?;
    let mut head = vec![a0];
    let mut period = Vec::new();
    let mut ellipsis = false;
    if c.eat(";") {
        loop {
            if c.eat("...") {
                ellipsis = true;
                break;
            }
            let close = if c.eat("(") {
                Some(")")
            } else if c.eat("[") {
                Some("]")
            } else {
                None
            };
            if let Some(close) = close {
                period.push(c.integer()?);
                while c.eat(",") {
                    period.push(c.integer()?);
                }
                c.expect(close)?;
                break;
            }
            head.push(c.integer()?);
            if !c.eat(",") {
                break;
            }
        }
    }
    c.expect("]")?;
    if ellipsis {
        let listed = head.split_off(1);
        let (pre, per) = infer_period(&listed).ok_or_else(|| {
            c.error("cannot infer a period: list the repeating block at least twice before `...`")
        })?;
        head.extend_from_slice(&listed[..pre]);
        period = listed[pre..pre + per].to_vec();
    }
    Ok((head, period))
}

/// Smallest `(preperiod, period)` such that the terms after the preperiod
/// repeat with that period at least twice.
fn infer_period(terms: &[BigInt]) -> Option<(usize, usize)> {
    let n = terms.len();
    for total in 1..=n {
        for per in 1..=total {
            let pre = total - per;
            if n < pre + 2 * per {
                continue;
            }
            if (pre..n - per).all(|i| terms[i] == terms[i + per]) {
                return Some((pre, per));
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rational;

    #[test]
    fn value_literals() {
        let cases = [
            ("1/3", QAlpha::frac(1, 3, 0, 1)),
            ("a", QAlpha::alpha()),
            ("1/3-a", QAlpha::frac(1, 3, -1, 1)),
            (" 1/2 + 3/4*a ", QAlpha::frac(1, 2, 3, 4)),
            ("1/2 - 1/2 * a", QAlpha::frac(1, 2, -1, 2)),
            ("-a", QAlpha::frac(0, 1, -1, 1)),
            ("a/2", QAlpha::frac(0, 1, 1, 2)),
            ("2a+1", QAlpha::frac(1, 1, 2, 1)),
            ("0.25", QAlpha::frac(1, 4, 0, 1)),
        ];
        for (text, want) in cases {
            assert_eq!(text.parse::<QAlpha>().unwrap(), want, "{text}");
        }
    }

    #[test]
    fn malformed_values_report_offsets() {
        let err = "1/3 + * a".parse::<QAlpha>().unwrap_err();
        assert_eq!(err.position, 6);
        assert!("1/0".parse::<QAlpha>().is_err());
        assert!("".parse::<QAlpha>().is_err());
        assert!("1/3 a a".parse::<QAlpha>().is_err());
    }

    #[test]
    fn oracle_declarations() {
        let o = parse_oracle("sqrt(2)/8", false).unwrap();
        assert!(o.is_certified_irrational());
        let o = parse_oracle("cf[0;1,2,1,2,...]", false).unwrap();
        assert_eq!(o.to_string(), "cf[0;(1,2)]");
        let o = parse_oracle("cf[0;3,(1,2)]", false).unwrap();
        assert_eq!(o.to_string(), "cf[0;3,(1,2)]");
        let o = parse_oracle("0.4142135 +/- 1e-7", false).unwrap();
        assert!(!o.is_certified_irrational());
        let (lo, hi) = o.enclosure(10);
        assert_eq!(hi - lo, rational(2, 10_000_000));
    }

    #[test]
    fn rational_oracles_need_the_escape_hatch() {
        assert!(parse_oracle("1/3", false).is_err());
        assert!(parse_oracle("1/3", true).unwrap().is_rational());
        assert!(parse_oracle("sqrt(4)/4", false).is_err());
        let o = parse_oracle("sqrt(4)/4", true).unwrap();
        assert_eq!(o.to_string(), "1/2");
        let o = parse_oracle("cf[0;2,1]", true).unwrap();
        assert_eq!(o.to_string(), "1/3");
    }

    #[test]
    fn period_inference() {
        let t = |v: &[i64]| v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
        assert_eq!(infer_period(&t(&[1, 2, 1, 2])), Some((0, 2)));
        assert_eq!(infer_period(&t(&[3, 1, 1])), Some((1, 1)));
        assert_eq!(infer_period(&t(&[1, 2, 3])), None);
    }
}
