use crate::iet::{Iet, Permutation};
use crate::intervals::{try_sort_by, Interval};
use crate::numeric::QAlpha;
use crate::{Error, Result};
use std::cmp::Ordering;

/// A maximal piece of the base with one return itinerary.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReturnBranch {
    pub piece: Interval,
    pub return_time: u64,
    /// Total displacement after `return_time` steps.
    pub translation: QAlpha,
    /// Indices (1-based) of the intervals of `T` visited, starting with the
    /// one containing the piece.
    pub itinerary: Vec<usize>,
}

/// The first-return map of `T` to a base `[u, v)`.
#[derive(Clone, Debug)]
pub struct ReturnSystem {
    pub base: Interval,
    pub branches: Vec<ReturnBranch>,
    /// The induced exchange on `[0, v - u)` in canonical form.
    pub induced: Iet,
}

impl ReturnSystem {
    /// `Σ |branch| · return_time`: the measure of the tower over the base.
    pub fn swept(&self) -> QAlpha {
        self.branches.iter().fold(QAlpha::zero(), |acc, b| {
            acc + b.piece.length().scale(&crate::numeric::Rational::from_integer(b.return_time.into()))
        })
    }

    pub fn max_return_time(&self) -> u64 {
        self.branches.iter().map(|b| b.return_time).max().unwrap_or(0)
    }
}

struct Pending {
    origin: Interval,
    time: u64,
    translation: QAlpha,
    itinerary: Vec<usize>,
}

/// Splits `[lo, hi)` at the points of `cuts` lying strictly inside.
fn cut_at(t: &Iet, iv: &Interval, cuts: &[&QAlpha]) -> Result<Vec<Interval>> {
    let o = t.oracle();
    let mut out = Vec::new();
    let mut lo = iv.lo.clone();
    for c in cuts {
        if o.cmp(c, &lo)? == Ordering::Greater && o.cmp(c, &iv.hi)? == Ordering::Less {
            out.push(Interval::new(lo, (*c).clone()));
            lo = (*c).clone();
        }
    }
    out.push(Interval::new(lo, iv.hi.clone()));
    Ok(out)
}

/// First-return map to `[u, v)`. Every piece of the base is pushed forward,
/// split at the breakpoints of `T` and at `u, v`, until it re-enters the
/// base. `budget` caps the return time of each piece and defaults to
/// `10⁴·m`.
pub fn first_return(t: &Iet, base: &Interval, budget: Option<u64>) -> Result<ReturnSystem> {
    let o = t.oracle();
    let base = Interval::new(o.normalize(&base.lo), o.normalize(&base.hi));
    if !t.in_domain(&base.lo)? || o.cmp(&base.lo, &base.hi)? != Ordering::Less || o.cmp(&base.hi, t.total_length())? == Ordering::Greater
    {
        return Err(Error::OutOfDomain {
            point: base.to_string(),
            length: t.total_length().to_string(),
        });
    }
    let budget = budget.unwrap_or(10_000 * t.m() as u64);
    let (u, v) = (&base.lo, &base.hi);
    let mut pending = vec![Pending {
        origin: base.clone(),
        time: 0,
        translation: QAlpha::zero(),
        itinerary: Vec::new(),
    }];
    let mut branches = Vec::new();
    while let Some(p) = pending.pop() {
        if p.time >= budget {
            return Err(Error::NoReturnWithinBudget {
                lo: p.origin.lo.to_string(),
                hi: p.origin.hi.to_string(),
                budget,
            });
        }
        let current = p.origin.translate(&p.translation);
        for (sub, i) in t.split(&current)? {
            let translation = &p.translation + t.translation(i);
            let image = sub.translate(t.translation(i));
            let mut itinerary = p.itinerary.clone();
            itinerary.push(i);
            for part in cut_at(t, &image, &[u, v])? {
                let origin = Interval::new(&part.lo - &translation, &part.hi - &translation);
                if part.is_within(&base, o)? {
                    branches.push(ReturnBranch {
                        piece: origin,
                        return_time: p.time + 1,
                        translation: translation.clone(),
                        itinerary: itinerary.clone(),
                    });
                } else {
                    pending.push(Pending {
                        origin,
                        time: p.time + 1,
                        translation: translation.clone(),
                        itinerary: itinerary.clone(),
                    });
                }
            }
        }
    }
    let branches = try_sort_by(branches, &mut |a: &ReturnBranch, b: &ReturnBranch| o.cmp(&a.piece.lo, &b.piece.lo))?;
    let lengths = branches.iter().map(|b| b.piece.length()).collect();
    let translations = branches.iter().map(|b| b.translation.clone()).collect();
    let induced = Iet::from_pieces(t.oracle_arc().clone(), lengths, translations)?.canonical()?;
    Ok(ReturnSystem { base, branches, induced })
}

/// `Some(θ)` when `t` is, in canonical form, the rotation `x ↦ x + θ mod L`
/// with two branches.
pub fn rotation_angle(t: &Iet) -> Option<QAlpha> {
    (t.m() == 2 && t.permutation() == &Permutation::reversal(2)).then(|| t.lengths()[1].clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{thm14_family, thm15_family};
    use crate::numeric::{rational, AlphaOracle};
    use std::sync::Arc;

    fn sqrt2_over(k: i64) -> Arc<AlphaOracle> {
        Arc::new(AlphaOracle::sqrt(rational(1, k), rational(2, 1)).unwrap())
    }

    fn unit_base() -> Interval {
        Interval::new(QAlpha::zero(), QAlpha::one())
    }

    #[test]
    fn cycle_induces_a_rotation_on_the_first_block() {
        for n in 1..=6 {
            let t = thm15_family(&Permutation::cyclic_shift(n), sqrt2_over(2)).unwrap();
            let rs = first_return(&t, &unit_base(), None).unwrap();
            assert!(rs.branches.iter().all(|b| b.return_time == n as u64));
            let angle = rotation_angle(&rs.induced).unwrap();
            // n(1 - a) mod 1
            let expected = QAlpha::frac(n as i64, 1, -(n as i64), 1);
            let diff = &angle - &expected;
            assert!(diff.is_rational() && diff.rational_part().is_integer(), "n = {n}: {angle}");
            assert_eq!(rs.swept(), QAlpha::from_integer(n as i64));
        }
    }

    #[test]
    fn full_base_returns_in_one_step() {
        let t = thm14_family(5, sqrt2_over(8)).unwrap();
        let rs = first_return(&t, &t.domain(), None).unwrap();
        assert!(rs.branches.iter().all(|b| b.return_time == 1));
        assert_eq!(rs.induced, t);
    }

    #[test]
    fn reversal_returns_within_two_steps() {
        for n in 3..=5 {
            let t = thm15_family(&Permutation::reversal(n), sqrt2_over(2)).unwrap();
            let rs = first_return(&t, &unit_base(), None).unwrap();
            assert_eq!(rs.max_return_time(), 2);
        }
    }

    #[test]
    fn slow_returns_exhaust_the_budget() {
        let t = thm15_family(&Permutation::cyclic_shift(6), sqrt2_over(2)).unwrap();
        let err = first_return(&t, &unit_base(), Some(5)).unwrap_err();
        assert!(matches!(err, Error::NoReturnWithinBudget { budget: 5, .. }));
    }
}
