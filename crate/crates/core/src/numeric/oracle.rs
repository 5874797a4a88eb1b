use super::{QAlpha, Rational, Sign};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::fmt;

/// Hard cap on enclosure refinement rounds.
pub const DEFAULT_REFINEMENT_CAP: u32 = 256;

/// Precision of the first refinement round (bits, or continued-fraction
/// terms); it doubles every round.
const BASE_PRECISION: u64 = 16;

/// What the session irrational is.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AlphaKind {
    /// `coefficient · sqrt(radicand)`.
    Sqrt {
        coefficient: Rational,
        radicand: Rational,
    },
    /// `[head[0]; head[1], ..., (period)...]`, the period repeating forever.
    ContinuedFraction { head: Vec<BigInt>, period: Vec<BigInt> },
    /// A fixed enclosure `lo <= alpha <= hi`. It cannot be refined, and is
    /// only usable for comparisons when the declaration asserts irrationality.
    Decimal {
        lo: Rational,
        hi: Rational,
        assume_irrational: bool,
    },
    /// Rational parameter, for degenerate experiments only.
    Rational(Rational),
    /// `factor · base`.
    Scaled {
        base: Box<AlphaKind>,
        factor: Rational,
    },
}

/// Enclosure oracle for the session irrational alpha in (0, 1).
#[derive(Clone, Debug)]
pub struct AlphaOracle {
    kind: AlphaKind,
    refinement_cap: u32,
    /// `alpha^2` when alpha is a scaled square root.
    square: Option<Rational>,
}

impl PartialEq for AlphaOracle {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

impl Eq for AlphaOracle {}

fn is_rational_square(x: &Rational) -> bool {
    let is_square = |n: &BigInt| {
        let r = n.sqrt();
        &r * &r == *n
    };
    !x.is_negative() && is_square(x.numer()) && is_square(x.denom())
}

fn cf_term<'a>(head: &'a [BigInt], period: &'a [BigInt], i: usize) -> &'a BigInt {
    if i < head.len() {
        &head[i]
    } else {
        &period[(i - head.len()) % period.len()]
    }
}

fn in_unit_interval(lo: &Rational, hi: &Rational) -> bool {
    !lo.is_negative() && *hi <= Rational::one()
}

impl AlphaOracle {
    fn from_kind(kind: AlphaKind) -> Self {
        let square = match &kind {
            AlphaKind::Sqrt {
                coefficient,
                radicand,
            } => Some(coefficient * coefficient * radicand),
            _ => None,
        };
        AlphaOracle {
            kind,
            refinement_cap: DEFAULT_REFINEMENT_CAP,
            square,
        }
    }

    /// `coefficient · sqrt(radicand)`, which must be an irrational in (0, 1).
    pub fn sqrt(coefficient: Rational, radicand: Rational) -> Result<Self> {
        if !coefficient.is_positive() || !radicand.is_positive() {
            return Err(Error::InvalidOracle(format!(
                "{coefficient}*sqrt({radicand}) needs a positive coefficient and radicand"
            )));
        }
        if is_rational_square(&radicand) {
            return Err(Error::InvalidOracle(format!(
                "sqrt({radicand}) is rational; rational parameters need the allow-rational mode"
            )));
        }
        let oracle = Self::from_kind(AlphaKind::Sqrt {
            coefficient,
            radicand,
        });
        if oracle.square.as_ref().is_some_and(|sq| *sq >= Rational::one()) {
            return Err(Error::InvalidOracle(format!("{oracle} is not below 1")));
        }
        Ok(oracle)
    }

    /// Continued fraction `[0; head..., (period)...]`; `head[0]` is the
    /// integer part and must be 0, the period must be non-empty.
    pub fn continued_fraction(head: Vec<BigInt>, period: Vec<BigInt>) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::InvalidOracle(
                "a finite continued fraction is rational; rational parameters need the allow-rational mode".into(),
            ));
        }
        match head.first() {
            Some(a0) if a0.is_zero() => {}
            _ => {
                return Err(Error::InvalidOracle(
                    "continued fraction must start with integer part 0 so that alpha lies in (0, 1)".into(),
                ))
            }
        }
        if head[1..].iter().chain(&period).any(|t| !t.is_positive()) {
            return Err(Error::InvalidOracle(
                "continued fraction partial quotients must be positive".into(),
            ));
        }
        Ok(Self::from_kind(AlphaKind::ContinuedFraction { head, period }))
    }

    /// Fixed enclosure `[lo, hi]`; the declaration asserts that alpha is an
    /// irrational inside it.
    pub fn decimal(lo: Rational, hi: Rational) -> Result<Self> {
        if lo >= hi || !in_unit_interval(&lo, &hi) {
            return Err(Error::InvalidOracle(format!(
                "enclosure [{lo}, {hi}] must be a proper subinterval of [0, 1]"
            )));
        }
        Ok(Self::from_kind(AlphaKind::Decimal {
            lo,
            hi,
            assume_irrational: true,
        }))
    }

    /// Fixed enclosure with no irrationality claim: comparisons that depend
    /// on alpha fail with `IrrationalityUnknown`.
    pub fn uncertified_enclosure(lo: Rational, hi: Rational) -> Result<Self> {
        let mut oracle = Self::decimal(lo, hi)?;
        if let AlphaKind::Decimal {
            assume_irrational, ..
        } = &mut oracle.kind
        {
            *assume_irrational = false;
        }
        Ok(oracle)
    }

    /// Rational alpha in (0, 1); the escape hatch for degenerate experiments.
    pub fn rational(value: Rational) -> Result<Self> {
        if !value.is_positive() || value >= Rational::one() {
            return Err(Error::InvalidOracle(format!("rational alpha {value} must lie in (0, 1)")));
        }
        Ok(Self::from_kind(AlphaKind::Rational(value)))
    }

    pub fn with_refinement_cap(mut self, cap: u32) -> Self {
        self.refinement_cap = cap.max(1);
        self
    }

    pub fn refinement_cap(&self) -> u32 {
        self.refinement_cap
    }

    pub fn kind(&self) -> &AlphaKind {
        &self.kind
    }

    /// The oracle for `factor · alpha`.
    pub fn scaled(&self, factor: &Rational) -> Result<Self> {
        if !factor.is_positive() {
            return Err(Error::InvalidOracle(format!("scale factor {factor} must be positive")));
        }
        let kind = match &self.kind {
            AlphaKind::Sqrt {
                coefficient,
                radicand,
            } => AlphaKind::Sqrt {
                coefficient: coefficient * factor,
                radicand: radicand.clone(),
            },
            AlphaKind::Decimal {
                lo,
                hi,
                assume_irrational,
            } => AlphaKind::Decimal {
                lo: lo * factor,
                hi: hi * factor,
                assume_irrational: *assume_irrational,
            },
            AlphaKind::Rational(v) => AlphaKind::Rational(v * factor),
            AlphaKind::Scaled { base, factor: f } => AlphaKind::Scaled {
                base: base.clone(),
                factor: f * factor,
            },
            cf @ AlphaKind::ContinuedFraction { .. } => AlphaKind::Scaled {
                base: Box::new(cf.clone()),
                factor: factor.clone(),
            },
        };
        let oracle = Self::from_kind(kind).with_refinement_cap(self.refinement_cap);
        let (lo, hi) = oracle.enclosure(BASE_PRECISION);
        if !in_unit_interval(&lo, &hi) {
            return Err(Error::InvalidOracle(format!("{oracle} leaves (0, 1)")));
        }
        Ok(oracle)
    }

    pub fn is_rational(&self) -> bool {
        matches!(self.kind, AlphaKind::Rational(_))
    }

    /// True for square roots of non-squares and infinite periodic
    /// continued fractions.
    pub fn is_certified_irrational(&self) -> bool {
        fn certified(kind: &AlphaKind) -> bool {
            match kind {
                AlphaKind::Sqrt { .. } | AlphaKind::ContinuedFraction { .. } => true,
                AlphaKind::Scaled { base, .. } => certified(base),
                AlphaKind::Decimal { .. } | AlphaKind::Rational(_) => false,
            }
        }
        certified(&self.kind)
    }

    fn assumed_irrational(&self) -> bool {
        matches!(
            self.kind,
            AlphaKind::Decimal {
                assume_irrational: true,
                ..
            }
        )
    }

    pub fn is_refinable(&self) -> bool {
        fn refinable(kind: &AlphaKind) -> bool {
            match kind {
                AlphaKind::Sqrt { .. } | AlphaKind::ContinuedFraction { .. } => true,
                AlphaKind::Rational(_) => true,
                AlphaKind::Scaled { base, .. } => refinable(base),
                AlphaKind::Decimal { .. } => false,
            }
        }
        refinable(&self.kind)
    }

    /// Rationals `lo <= alpha <= hi`. `precision` is in bits for square
    /// roots and in partial quotients for continued fractions; widths shrink
    /// strictly as it grows for every refinable kind.
    pub fn enclosure(&self, precision: u64) -> (Rational, Rational) {
        enclosure_of(&self.kind, precision)
    }

    /// Midpoint approximation, for float-only consumers (statistics, SVG).
    pub fn approx_f64(&self) -> f64 {
        let (lo, hi) = self.enclosure(64);
        super::rational_to_f64(&((lo + hi) / Rational::from_integer(2.into())))
    }

    /// Collapses `q + p·alpha` to a plain rational under a rational oracle,
    /// so that coordinatewise equality stays sound. No-op otherwise.
    pub fn normalize(&self, x: &QAlpha) -> QAlpha {
        match &self.kind {
            AlphaKind::Rational(v) if !x.is_rational() => {
                QAlpha::from_rational(x.rational_part() + x.alpha_coeff() * v)
            }
            _ => x.clone(),
        }
    }

    /// Compares alpha with the rational `t`.
    pub fn cmp_alpha(&self, t: &Rational) -> Result<Ordering> {
        if let AlphaKind::Rational(v) = &self.kind {
            return Ok(v.cmp(t));
        }
        if let Some(square) = &self.square {
            // alpha > 0, so only non-negative t need squaring.
            if !t.is_positive() {
                return Ok(Ordering::Greater);
            }
            return Ok(square.cmp(&(t * t)));
        }
        self.cmp_alpha_by_enclosure(t)
    }

    /// Enclosure-refinement route: precision doubles every round until `t`
    /// falls strictly outside `[lo, hi]`.
    pub fn cmp_alpha_by_enclosure(&self, t: &Rational) -> Result<Ordering> {
        let mut precision = BASE_PRECISION;
        let rounds = if self.is_refinable() {
            self.refinement_cap
        } else {
            1
        };
        for _ in 0..rounds {
            let (lo, hi) = self.enclosure(precision);
            if *t < lo {
                return Ok(Ordering::Greater);
            }
            if *t > hi {
                return Ok(Ordering::Less);
            }
            if lo == hi {
                return Ok(Ordering::Equal);
            }
            precision = precision.saturating_mul(2);
        }
        Err(Error::PrecisionExhausted {
            value: format!("alpha - {t}"),
            rounds,
        })
    }

    /// Exact sign of `x = q + p·alpha`.
    pub fn sign(&self, x: &QAlpha) -> Result<Sign> {
        let q = x.rational_part();
        let p = x.alpha_coeff();
        if p.is_zero() {
            return Ok(Sign::of_rational(q));
        }
        if let AlphaKind::Rational(v) = &self.kind {
            return Ok(Sign::of_rational(&(q + p * v)));
        }
        if !self.is_certified_irrational() && !self.assumed_irrational() {
            return Err(Error::IrrationalityUnknown {
                value: x.to_string(),
            });
        }
        if let Some(square) = &self.square {
            // q + p·alpha with alpha = sqrt(square) > 0.
            let sp = Sign::of_rational(p);
            let sq = Sign::of_rational(q);
            if sq == Sign::Zero || sq == sp {
                return Ok(sp);
            }
            return Ok(if p * p * square > q * q { sp } else { sq });
        }
        let t = -(q / p);
        let by_alpha = match self.cmp_alpha(&t) {
            Ok(ord) => ord,
            Err(Error::PrecisionExhausted { rounds, .. }) => {
                return Err(Error::PrecisionExhausted {
                    value: x.to_string(),
                    rounds,
                })
            }
            Err(e) => return Err(e),
        };
        // x = p·(alpha - t)
        let s = match by_alpha {
            Ordering::Greater => Sign::Positive,
            Ordering::Less => Sign::Negative,
            Ordering::Equal => Sign::Zero,
        };
        Ok(if p.is_negative() { s.negate() } else { s })
    }

    pub fn cmp(&self, x: &QAlpha, y: &QAlpha) -> Result<Ordering> {
        Ok(self.sign(&(x - y))?.to_ordering())
    }

    pub fn is_positive(&self, x: &QAlpha) -> Result<bool> {
        Ok(self.sign(x)? == Sign::Positive)
    }

    /// Value equality; coordinatewise unless alpha is rational.
    pub fn same(&self, x: &QAlpha, y: &QAlpha) -> bool {
        if self.is_rational() {
            self.normalize(x) == self.normalize(y)
        } else {
            x == y
        }
    }

    /// The right-hand side of a spec-file declaration, `alpha = ...` or
    /// `alpha ~ ...`.
    pub fn declaration(&self) -> String {
        match &self.kind {
            AlphaKind::Decimal { lo, hi, .. } => {
                let two = Rational::from_integer(2.into());
                format!("alpha ~ {} +/- {}", (lo + hi) / &two, (hi - lo) / &two)
            }
            _ => format!("alpha = {self}"),
        }
    }
}

fn enclosure_of(kind: &AlphaKind, precision: u64) -> (Rational, Rational) {
    match kind {
        AlphaKind::Sqrt {
            coefficient,
            radicand,
        } => {
            // c*sqrt(a/b) = (c/b)*sqrt(a*b)
            let bits = precision.max(1);
            let ab = radicand.numer() * radicand.denom();
            let root = (ab << (2 * bits)).sqrt();
            let scale = coefficient / Rational::from_integer(radicand.denom().clone());
            let unit = Rational::new(BigInt::one(), BigInt::one() << bits);
            let lo = &scale * &unit * Rational::from_integer(root.clone());
            let hi = &scale * &unit * Rational::from_integer(root + 1);
            (lo, hi)
        }
        AlphaKind::ContinuedFraction { head, period } => {
            let n = usize::try_from(precision.max(2)).unwrap_or(usize::MAX / 2);
            let (mut h_prev, mut h) = (BigInt::one(), cf_term(head, period, 0).clone());
            let (mut k_prev, mut k) = (BigInt::zero(), BigInt::one());
            for i in 1..=n {
                let a = cf_term(head, period, i);
                let h_next = a * &h + &h_prev;
                let k_next = a * &k + &k_prev;
                h_prev = std::mem::replace(&mut h, h_next);
                k_prev = std::mem::replace(&mut k, k_next);
            }
            let x = Rational::new(h, k);
            let y = Rational::new(h_prev, k_prev);
            if x < y {
                (x, y)
            } else {
                (y, x)
            }
        }
        AlphaKind::Decimal { lo, hi, .. } => (lo.clone(), hi.clone()),
        AlphaKind::Rational(v) => (v.clone(), v.clone()),
        AlphaKind::Scaled { base, factor } => {
            let (lo, hi) = enclosure_of(base, precision);
            (lo * factor, hi * factor)
        }
    }
}

fn fmt_kind(kind: &AlphaKind, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match kind {
        AlphaKind::Sqrt {
            coefficient,
            radicand,
        } => {
            if coefficient.is_one() {
                write!(f, "sqrt({radicand})")
            } else if coefficient.numer().is_one() {
                write!(f, "sqrt({radicand})/{}", coefficient.denom())
            } else {
                write!(f, "{coefficient}*sqrt({radicand})")
            }
        }
        AlphaKind::ContinuedFraction { head, period } => {
            write!(f, "cf[{};", head[0])?;
            for t in &head[1..] {
                write!(f, "{t},")?;
            }
            let tail: Vec<String> = period.iter().map(ToString::to_string).collect();
            write!(f, "({})]", tail.join(","))
        }
        AlphaKind::Decimal { lo, hi, .. } => {
            let two = Rational::from_integer(2.into());
            write!(f, "{} +/- {}", (lo + hi) / &two, (hi - lo) / &two)
        }
        AlphaKind::Rational(v) => write!(f, "{v}"),
        AlphaKind::Scaled { base, factor } => {
            write!(f, "{factor}*")?;
            fmt_kind(base, f)
        }
    }
}

impl fmt::Display for AlphaOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_kind(&self.kind, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rational;

    fn sqrt2_over(k: i64) -> AlphaOracle {
        AlphaOracle::sqrt(rational(1, k), rational(2, 1)).unwrap()
    }

    #[test]
    fn sign_of_zero_is_zero() {
        assert_eq!(sqrt2_over(2).sign(&QAlpha::zero()).unwrap(), Sign::Zero);
    }

    #[test]
    fn half_minus_sqrt2_over_2_is_negative() {
        // 1/2 < 0.7071...
        let x = QAlpha::frac(1, 2, -1, 1);
        assert_eq!(sqrt2_over(2).sign(&x).unwrap(), Sign::Negative);
        let (lo, hi) = sqrt2_over(2).enclosure(16);
        assert!(lo > rational(70, 100) && hi < rational(71, 100));
    }

    #[test]
    fn third_minus_sqrt2_over_6_is_positive() {
        // sqrt(2)/6 ~ 0.2357 < 1/3
        let x = QAlpha::frac(1, 3, -1, 1);
        assert_eq!(sqrt2_over(6).sign(&x).unwrap(), Sign::Positive);
    }

    #[test]
    fn enclosure_widths_strictly_decrease() {
        let oracles = [
            sqrt2_over(2),
            AlphaOracle::continued_fraction(vec![0.into()], vec![1.into(), 2.into()]).unwrap(),
            sqrt2_over(2).scaled(&rational(1, 3)).unwrap(),
        ];
        for oracle in &oracles {
            let mut last: Option<Rational> = None;
            for k in 2..40 {
                let (lo, hi) = oracle.enclosure(k);
                assert!(lo <= hi);
                let width = hi - lo;
                if let Some(prev) = &last {
                    assert!(width < *prev, "{oracle} at precision {k}");
                }
                last = Some(width);
            }
        }
    }

    #[test]
    fn square_roots_of_squares_are_rejected() {
        assert!(AlphaOracle::sqrt(rational(1, 2), rational(1, 4)).is_err());
        assert!(AlphaOracle::sqrt(rational(1, 1), rational(2, 1)).is_err()); // > 1
    }

    #[test]
    fn finite_continued_fraction_is_rejected() {
        assert!(AlphaOracle::continued_fraction(vec![0.into(), 2.into()], vec![]).is_err());
    }

    #[test]
    fn uncertified_enclosure_refuses_alpha_dependent_signs() {
        let o = AlphaOracle::uncertified_enclosure(rational(41, 100), rational(42, 100)).unwrap();
        assert!(matches!(
            o.sign(&QAlpha::frac(0, 1, 1, 1)),
            Err(Error::IrrationalityUnknown { .. })
        ));
        assert_eq!(o.sign(&QAlpha::frac(-1, 2, 0, 1)).unwrap(), Sign::Negative);
    }

    #[test]
    fn fixed_enclosure_exhausts_precision() {
        let o = AlphaOracle::decimal(rational(41, 100), rational(42, 100)).unwrap();
        assert_eq!(o.sign(&QAlpha::frac(-1, 2, 1, 1)).unwrap(), Sign::Negative);
        let undecidable = QAlpha::frac(-415, 1000, 1, 1);
        assert!(matches!(o.sign(&undecidable), Err(Error::PrecisionExhausted { .. })));
    }

    #[test]
    fn rational_mode_normalizes() {
        let o = AlphaOracle::rational(rational(1, 3)).unwrap();
        let x = QAlpha::frac(1, 3, -1, 1);
        assert_eq!(o.sign(&x).unwrap(), Sign::Zero);
        assert!(o.same(&x, &QAlpha::zero()));
        assert_eq!(o.normalize(&QAlpha::alpha()), QAlpha::frac(1, 3, 0, 1));
    }

    #[test]
    fn continued_fraction_matches_square_root_route() {
        // [0; 2, 2, 2, ...] = sqrt(2) - 1, so q + p*alpha = (q - p) + p*sqrt(2).
        let cf = AlphaOracle::continued_fraction(vec![0.into()], vec![2.into()]).unwrap();
        let sqrt2_half = sqrt2_over(2);
        for (q, p) in [(1, 3), (-2, 5), (5, -12), (29, -70), (-41, 99), (0, 1)] {
            let x = QAlpha::frac(q, 1, p, 1);
            // sqrt(2) = 2 * (sqrt(2)/2)
            let y = QAlpha::frac(q - p, 1, 2 * p, 1);
            assert_eq!(cf.sign(&x).unwrap(), sqrt2_half.sign(&y).unwrap(), "{x}");
        }
    }

    #[test]
    fn display_round_trips_through_parser() {
        for text in ["sqrt(2)/2", "sqrt(2)/8", "3/4*sqrt(1/2)", "cf[0;1,(1,2)]", "1/2*cf[0;(2)]"] {
            let o = crate::numeric::parse_oracle(text, false).unwrap();
            assert_eq!(o.to_string(), text);
        }
    }
}
