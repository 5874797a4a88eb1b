use super::{literal, LiteralError, Rational};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

/// The number `q + p·alpha`.
///
/// Equality and hashing are coordinatewise, which is sound exactly when
/// alpha is irrational. Under a rational oracle every value is collapsed to
/// `p = 0` before it is stored (see [`AlphaOracle::normalize`]).
///
/// [`AlphaOracle::normalize`]: super::AlphaOracle::normalize
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct QAlpha {
    q: Rational,
    p: Rational,
}

impl QAlpha {
    pub fn new(q: Rational, p: Rational) -> Self {
        QAlpha { q, p }
    }

    pub fn zero() -> Self {
        QAlpha::default()
    }

    pub fn one() -> Self {
        QAlpha::from_rational(Rational::one())
    }

    /// The session irrational itself.
    pub fn alpha() -> Self {
        QAlpha::new(Rational::zero(), Rational::one())
    }

    pub fn from_rational(q: Rational) -> Self {
        QAlpha::new(q, Rational::zero())
    }

    pub fn from_integer(n: i64) -> Self {
        QAlpha::from_rational(Rational::from_integer(BigInt::from(n)))
    }

    /// `n/d + a/b·alpha` from machine integers; handy in tests and families.
    pub fn frac(n: i64, d: i64, a: i64, b: i64) -> Self {
        QAlpha::new(super::rational(n, d), super::rational(a, b))
    }

    pub fn rational_part(&self) -> &Rational {
        &self.q
    }

    pub fn alpha_coeff(&self) -> &Rational {
        &self.p
    }

    pub fn is_zero(&self) -> bool {
        self.q.is_zero() && self.p.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.p.is_zero()
    }

    pub fn scale(&self, c: &Rational) -> QAlpha {
        QAlpha::new(&self.q * c, &self.p * c)
    }

    /// `Some(c)` with `self = c·other`, when the two are rationally dependent.
    pub fn ratio_to(&self, other: &QAlpha) -> Option<Rational> {
        if other.is_zero() {
            return None;
        }
        if !self.is_commensurable(other) {
            return None;
        }
        Some(if !other.q.is_zero() {
            &self.q / &other.q
        } else {
            &self.p / &other.p
        })
    }

    /// Two values are commensurable when they lie on one rational line.
    pub fn is_commensurable(&self, other: &QAlpha) -> bool {
        &self.q * &other.p == &self.p * &other.q
    }

    /// `Some(k)` iff `self = k·s` for an integer `k`. Both coordinates must
    /// agree on the same `k`.
    pub fn integer_quotient(&self, s: &QAlpha) -> Option<BigInt> {
        if s.is_zero() {
            return None;
        }
        let k = self.ratio_to(s)?;
        if k.is_integer() {
            Some(k.to_integer())
        } else {
            None
        }
    }

    pub fn to_f64(&self, alpha: f64) -> f64 {
        super::rational_to_f64(&self.q) + super::rational_to_f64(&self.p) * alpha
    }

    /// Common denominator of both coordinates.
    pub fn denominator_lcm(&self) -> BigInt {
        self.q.denom().lcm(self.p.denom())
    }
}

impl fmt::Display for QAlpha {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = &self.p;
        if p.is_zero() {
            return write!(f, "{}", self.q);
        }
        let coeff = |c: &Rational| -> String {
            if c.is_one() {
                "a".to_string()
            } else {
                format!("{c}*a")
            }
        };
        if self.q.is_zero() {
            if p.is_negative() {
                write!(f, "-{}", coeff(&-p))
            } else {
                write!(f, "{}", coeff(p))
            }
        } else if p.is_negative() {
            write!(f, "{} - {}", self.q, coeff(&-p))
        } else {
            write!(f, "{} + {}", self.q, coeff(p))
        }
    }
}

impl FromStr for QAlpha {
    type Err = LiteralError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        literal::parse_qalpha(s)
    }
}

impl From<Rational> for QAlpha {
    fn from(q: Rational) -> Self {
        QAlpha::from_rational(q)
    }
}

impl Neg for QAlpha {
    type Output = QAlpha;
    fn neg(self) -> QAlpha {
        QAlpha::new(-self.q, -self.p)
    }
}

impl Neg for &QAlpha {
    type Output = QAlpha;
    fn neg(self) -> QAlpha {
        QAlpha::new(-&self.q, -&self.p)
    }
}

impl Add<&QAlpha> for &QAlpha {
    type Output = QAlpha;
    fn add(self, rhs: &QAlpha) -> QAlpha {
        QAlpha::new(&self.q + &rhs.q, &self.p + &rhs.p)
    }
}

impl Sub<&QAlpha> for &QAlpha {
    type Output = QAlpha;
    fn sub(self, rhs: &QAlpha) -> QAlpha {
        QAlpha::new(&self.q - &rhs.q, &self.p - &rhs.p)
    }
}

impl Add for QAlpha {
    type Output = QAlpha;
    fn add(self, rhs: QAlpha) -> QAlpha {
        QAlpha::new(self.q + rhs.q, self.p + rhs.p)
    }
}

impl Sub for QAlpha {
    type Output = QAlpha;
    fn sub(self, rhs: QAlpha) -> QAlpha {
        QAlpha::new(self.q - rhs.q, self.p - rhs.p)
    }
}

impl Add<&QAlpha> for QAlpha {
    type Output = QAlpha;
    fn add(mut self, rhs: &QAlpha) -> QAlpha {
        self += rhs;
        self
    }
}

impl Sub<&QAlpha> for QAlpha {
    type Output = QAlpha;
    fn sub(mut self, rhs: &QAlpha) -> QAlpha {
        self -= rhs;
        self
    }
}

impl AddAssign<&QAlpha> for QAlpha {
    fn add_assign(&mut self, rhs: &QAlpha) {
        self.q += &rhs.q;
        self.p += &rhs.p;
    }
}

impl SubAssign<&QAlpha> for QAlpha {
    fn sub_assign(&mut self, rhs: &QAlpha) {
        self.q -= &rhs.q;
        self.p -= &rhs.p;
    }
}

impl Mul<&Rational> for &QAlpha {
    type Output = QAlpha;
    fn mul(self, rhs: &Rational) -> QAlpha {
        self.scale(rhs)
    }
}
