//! Exact arithmetic in the rank-2 space Q + Q·alpha.
//!
//! A [`QAlpha`] is a pair of rationals `(q, p)` read as `q + p·alpha`.
//! Addition and rational scaling never round. Ordering needs to know what
//! alpha is, which is the job of [`AlphaOracle`]: it decides the sign of
//! `q + p·alpha` exactly for every certified irrational.

mod literal;
mod oracle;
mod qalpha;

pub use literal::{parse_oracle, parse_rational, LiteralError};
pub use oracle::{AlphaKind, AlphaOracle, DEFAULT_REFINEMENT_CAP};
pub use qalpha::QAlpha;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;

/// Arbitrary-precision rational used for both coordinates of a [`QAlpha`].
pub type Rational = BigRational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn of_rational(x: &Rational) -> Sign {
        if x.is_zero() {
            Sign::Zero
        } else if x.is_positive() {
            Sign::Positive
        } else {
            Sign::Negative
        }
    }

    pub fn negate(self) -> Sign {
        match self {
            Sign::Negative => Sign::Positive,
            Sign::Zero => Sign::Zero,
            Sign::Positive => Sign::Negative,
        }
    }

    pub fn to_ordering(self) -> Ordering {
        match self {
            Sign::Negative => Ordering::Less,
            Sign::Zero => Ordering::Equal,
            Sign::Positive => Ordering::Greater,
        }
    }
}

/// Exact sign of `x` under `oracle`; shorthand for [`AlphaOracle::sign`].
pub fn qa_sign(x: &QAlpha, oracle: &AlphaOracle) -> crate::Result<Sign> {
    oracle.sign(x)
}

/// `Some(k)` iff `x = k·s` for an integer `k`.
pub fn qa_integer_quotient(x: &QAlpha, s: &QAlpha) -> Option<BigInt> {
    x.integer_quotient(s)
}

pub(crate) fn rational(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub(crate) fn rational_to_f64(x: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or_else(|| {
        // Ratio::to_f64 gives up on huge operands; shift both sides down.
        let shift = x.numer().bits().max(x.denom().bits()).saturating_sub(1000);
        let n = (x.numer() >> shift).to_f64().unwrap_or(f64::NAN);
        let d = (x.denom() >> shift).to_f64().unwrap_or(f64::NAN);
        n / d
    })
}
