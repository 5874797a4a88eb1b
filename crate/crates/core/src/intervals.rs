//! Half-open intervals with exact endpoints and finite unions of them.

use crate::numeric::{AlphaOracle, QAlpha};
use crate::Result;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::fmt;

/// The half-open interval `[lo, hi)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Interval {
    pub lo: QAlpha,
    pub hi: QAlpha,
}

impl Interval {
    pub fn new(lo: QAlpha, hi: QAlpha) -> Self {
        Interval { lo, hi }
    }

    pub fn length(&self) -> QAlpha {
        &self.hi - &self.lo
    }

    pub fn translate(&self, by: &QAlpha) -> Interval {
        Interval::new(&self.lo + by, &self.hi + by)
    }

    pub fn midpoint(&self) -> QAlpha {
        (&self.lo + &self.hi).scale(&crate::numeric::rational(1, 2))
    }

    pub fn contains(&self, x: &QAlpha, oracle: &AlphaOracle) -> Result<bool> {
        Ok(oracle.cmp(&self.lo, x)? != Ordering::Greater && oracle.cmp(x, &self.hi)? == Ordering::Less)
    }

    /// `self ⊆ other`.
    pub fn is_within(&self, other: &Interval, oracle: &AlphaOracle) -> Result<bool> {
        Ok(oracle.cmp(&other.lo, &self.lo)? != Ordering::Greater
            && oracle.cmp(&self.hi, &other.hi)? != Ordering::Greater)
    }

    pub fn is_empty(&self, oracle: &AlphaOracle) -> Result<bool> {
        Ok(oracle.cmp(&self.lo, &self.hi)? != Ordering::Less)
    }

    pub fn to_strings(&self) -> IntervalText {
        IntervalText {
            lo: self.lo.to_string(),
            hi: self.hi.to_string(),
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {})", self.lo, self.hi)
    }
}

/// Exact string form of an interval for reports.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntervalText {
    pub lo: String,
    pub hi: String,
}

/// Stable merge sort with a fallible comparator.
pub fn try_sort_by<T, E>(items: Vec<T>, cmp: &mut impl FnMut(&T, &T) -> Result<Ordering, E>) -> Result<Vec<T>, E> {
    if items.len() <= 1 {
        return Ok(items);
    }
    let mut left = items;
    let right = left.split_off(left.len() / 2);
    let left = try_sort_by(left, cmp)?;
    let right = try_sort_by(right, cmp)?;
    let mut out = Vec::with_capacity(left.len() + right.len());
    let mut l = left.into_iter().peekable();
    let mut r = right.into_iter().peekable();
    loop {
        let take_left = match (l.peek(), r.peek()) {
            (Some(a), Some(b)) => cmp(b, a)? != Ordering::Less,
            (Some(_), None) => true,
            (None, Some(_)) => false,
            (None, None) => break,
        };
        out.extend(if take_left { l.next() } else { r.next() });
    }
    Ok(out)
}

/// A finite union of half-open intervals, kept sorted, disjoint and with
/// touching parts merged.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct IntervalSet {
    parts: Vec<Interval>,
}

impl IntervalSet {
    pub fn empty() -> Self {
        IntervalSet::default()
    }

    pub fn from_intervals(intervals: Vec<Interval>, oracle: &AlphaOracle) -> Result<Self> {
        let mut nonempty = Vec::with_capacity(intervals.len());
        for iv in intervals {
            if !iv.is_empty(oracle)? {
                nonempty.push(iv);
            }
        }
        let sorted = try_sort_by(nonempty, &mut |a: &Interval, b: &Interval| oracle.cmp(&a.lo, &b.lo))?;
        let mut parts: Vec<Interval> = Vec::with_capacity(sorted.len());
        for iv in sorted {
            if let Some(last) = parts.last_mut() {
                if oracle.cmp(&iv.lo, &last.hi)? != Ordering::Greater {
                    if oracle.cmp(&iv.hi, &last.hi)? == Ordering::Greater {
                        last.hi = iv.hi;
                    }
                    continue;
                }
            }
            parts.push(iv);
        }
        Ok(IntervalSet { parts })
    }

    pub fn parts(&self) -> &[Interval] {
        &self.parts
    }

    pub fn into_parts(self) -> Vec<Interval> {
        self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn measure(&self) -> QAlpha {
        self.parts.iter().fold(QAlpha::zero(), |acc, iv| acc + iv.length())
    }

    pub fn union(&self, other: &IntervalSet, oracle: &AlphaOracle) -> Result<IntervalSet> {
        let all = self.parts.iter().chain(&other.parts).cloned().collect();
        IntervalSet::from_intervals(all, oracle)
    }

    /// `self \ other`.
    pub fn difference(&self, other: &IntervalSet, oracle: &AlphaOracle) -> Result<IntervalSet> {
        let mut out = Vec::new();
        for iv in &self.parts {
            let mut cursor = iv.lo.clone();
            for cut in &other.parts {
                if oracle.cmp(&cut.hi, &cursor)? != Ordering::Greater {
                    continue;
                }
                if oracle.cmp(&cut.lo, &iv.hi)? != Ordering::Less {
                    break;
                }
                if oracle.cmp(&cursor, &cut.lo)? == Ordering::Less {
                    out.push(Interval::new(cursor.clone(), cut.lo.clone()));
                }
                cursor = cut.hi.clone();
            }
            if oracle.cmp(&cursor, &iv.hi)? == Ordering::Less {
                out.push(Interval::new(cursor, iv.hi.clone()));
            }
        }
        Ok(IntervalSet { parts: out })
    }

    pub fn is_subset(&self, other: &IntervalSet, oracle: &AlphaOracle) -> Result<bool> {
        Ok(self.difference(other, oracle)?.is_empty())
    }
}
