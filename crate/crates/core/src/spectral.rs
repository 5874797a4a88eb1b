//! Eigenvalues of the Koopman operator `U_T f = f ∘ T` that can be certified
//! exactly.
//!
//! An affine structure `delta_i = r + p_i·s` with integer `p_i` makes
//! `f(x) = exp(2iπ x/s)` a continuous eigenfunction for `exp(2iπ r/s)`.
//! A cycle of intervals permuted by `T` gives the eigenvalue `exp(2iπ/n)`
//! with a step eigenfunction.

use crate::iet::Iet;
use crate::intervals::{try_sort_by, Interval, IntervalSet, IntervalText};
use crate::numeric::{QAlpha, Rational, Sign};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use std::cmp::Ordering;

/// `delta_i = r + p_i·s` for every interval `i`.
///
/// Normalization: `s > 0` generates the group spanned by the differences
/// `delta_i - delta_1` together with the lengths commensurable with them,
/// and `r` is reduced modulo `s` (rational coordinate in `[0, s)` when `s`
/// is rational, alpha coordinate in `[0, |s_alpha|)` otherwise). Any other
/// valid `(r, s)` yields an eigenvalue in the group generated by this one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineEigenStructure {
    pub r: QAlpha,
    pub s: QAlpha,
    pub p: Vec<i64>,
}

impl AffineEigenStructure {
    /// `r/s` reduced mod 1 in its rational coordinate, when `s` is rational.
    pub fn phase(&self) -> Option<QAlpha> {
        if !self.s.is_rational() || self.s.is_zero() {
            return None;
        }
        let inv = self.s.rational_part().recip();
        let raw = self.r.scale(&inv);
        let q = raw.rational_part();
        Some(QAlpha::new(q - q.floor(), raw.alpha_coeff().clone()))
    }

    /// `r/s mod 1` as a float.
    pub fn phase_f64(&self, alpha: f64) -> f64 {
        let v = self.r.to_f64(alpha) / self.s.to_f64(alpha);
        v - v.floor()
    }

    pub fn report(&self, alpha: f64) -> AffineEigenReport {
        AffineEigenReport {
            r: self.r.to_string(),
            s: self.s.to_string(),
            p: self.p.clone(),
            eigenvalue: match self.phase() {
                Some(ph) => format!("exp(2iπ·({ph}))"),
                None => format!("exp(2iπ·({})/({}))", self.r, self.s),
            },
            eigenfunction: format!("exp(2iπ·x/({}))", self.s),
            phase_decimal: self.phase_f64(alpha),
            mode: "exact",
            normalization: "s generates the differences and commensurable lengths; r reduced mod s",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AffineEigenReport {
    pub r: String,
    pub s: String,
    pub p: Vec<i64>,
    pub eigenvalue: String,
    pub eigenfunction: String,
    pub phase_decimal: f64,
    pub mode: &'static str,
    pub normalization: &'static str,
}

fn rational_gcd(values: &[Rational]) -> Rational {
    let denom = values.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let g = values
        .iter()
        .map(|v| (v * Rational::from_integer(denom.clone())).to_integer())
        .fold(BigInt::zero(), |acc, n| acc.gcd(&n));
    Rational::new(g, denom)
}

fn floor_div(x: &Rational, s: &Rational) -> BigInt {
    (x / s).floor().to_integer()
}

/// Finds `(r, s, p)` with `delta_i = r + p_i·s`; `None` when the differences
/// of the translations do not lie in one cyclic group.
pub fn try_detect_affine_structure(t: &Iet) -> Result<Option<AffineEigenStructure>> {
    let deltas = t.translations();
    let diffs: Vec<QAlpha> = deltas.iter().map(|d| d - &deltas[0]).collect();
    let direction = diffs.iter().find(|d| !d.is_zero()).cloned().unwrap_or_else(QAlpha::one);
    let mut coeffs = Vec::new();
    for d in &diffs {
        match d.ratio_to(&direction) {
            Some(c) => coeffs.push(c),
            None => return Ok(None),
        }
    }
    coeffs.extend(t.lengths().iter().filter_map(|l| l.ratio_to(&direction)));
    let g = rational_gcd(&coeffs);
    let mut s = if g.is_zero() { QAlpha::one() } else { direction.scale(&g) };
    if t.oracle().sign(&s)? == Sign::Negative {
        s = -s;
    }
    let d1 = &deltas[0];
    let k = if s.is_rational() {
        floor_div(d1.rational_part(), s.rational_part())
    } else {
        let ratio = d1.alpha_coeff() / s.alpha_coeff();
        if s.alpha_coeff().is_positive() {
            ratio.floor().to_integer()
        } else {
            ratio.ceil().to_integer()
        }
    };
    let r = d1 - &s.scale(&Rational::from_integer(k));
    let mut p = Vec::with_capacity(deltas.len());
    for d in deltas {
        let diff = d - &r;
        let coeff = if diff.is_zero() {
            BigInt::zero()
        } else {
            match diff.integer_quotient(&s) {
                Some(c) => c,
                None => return Ok(None),
            }
        };
        match coeff.to_i64() {
            Some(c) => p.push(c),
            None => return Ok(None),
        }
    }
    Ok(Some(AffineEigenStructure { r, s, p }))
}

/// [`try_detect_affine_structure`] with undecidable signs read as absence.
pub fn detect_affine_structure(t: &Iet) -> Option<AffineEigenStructure> {
    try_detect_affine_structure(t).ok().flatten()
}

/// The checked identities `delta_i - r = p_i·s`, one per interval.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AffineProof {
    pub checks: Vec<String>,
    pub conclusion: String,
}

/// Re-checks `delta_i - r = p_i·s` exactly for every interval. Together
/// with `T(x) = x + delta_i` on `I_i` this is `f(T x) = exp(2iπ r/s) f(x)`
/// for `f(x) = exp(2iπ x/s)` and every `x`.
pub fn verify_affine_eigen(t: &Iet, e: &AffineEigenStructure) -> Result<AffineProof> {
    if e.s.is_zero() {
        return Err(Error::VerificationFailed {
            index: 0,
            detail: "s = 0".into(),
        });
    }
    if e.p.len() != t.m() {
        return Err(Error::VerificationFailed {
            index: e.p.len().min(t.m()) + 1,
            detail: format!("{} coefficients for {} intervals", e.p.len(), t.m()),
        });
    }
    let oracle = t.oracle();
    let mut checks = Vec::with_capacity(t.m());
    for (i, (d, &p)) in t.translations().iter().zip(&e.p).enumerate() {
        let lhs = d - &e.r;
        let rhs = e.s.scale(&Rational::from_integer(BigInt::from(p)));
        if !oracle.same(&lhs, &rhs) {
            return Err(Error::VerificationFailed {
                index: i + 1,
                detail: format!("delta_{} - r = {lhs} but p_{}·s = {rhs}", i + 1, i + 1),
            });
        }
        checks.push(format!("delta_{} - ({}) = {} = {p}·({})", i + 1, e.r, lhs, e.s));
    }
    Ok(AffineProof {
        checks,
        conclusion: format!(
            "f(x) = exp(2iπ·x/({})) satisfies f∘T = exp(2iπ·({})/({}))·f on every interval",
            e.s, e.r, e.s
        ),
    })
}

/// Intervals cyclically permuted by `T`: `T(pieces[k]) = pieces[k+1 mod n]`
/// as sets. `branches[k]` lists how `T` carries `pieces[k]`, one
/// translation per sub-piece.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntervalCycle {
    pub pieces: Vec<Interval>,
    pub branches: Vec<Vec<(Interval, QAlpha)>>,
}

impl IntervalCycle {
    pub fn period(&self) -> usize {
        self.pieces.len()
    }

    /// `k/n` such that the step eigenfunction equals `exp(2iπ k/n)` on
    /// `pieces[k]` (and 0 off the cycle).
    pub fn eigenfunction_exponent(&self, k: usize) -> (usize, usize) {
        (k, self.period())
    }

    pub fn report(&self) -> IntervalCycleReport {
        let n = self.period();
        IntervalCycleReport {
            period: n,
            eigenvalue: format!("exp(2iπ/{n})"),
            pieces: self.pieces.iter().map(Interval::to_strings).collect(),
            eigenfunction: (0..n).map(|k| format!("exp(2iπ·{k}/{n})")).collect(),
            translations: self
                .branches
                .iter()
                .map(|b| b.iter().map(|(_, d)| d.to_string()).collect())
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct IntervalCycleReport {
    pub period: usize,
    pub eigenvalue: String,
    pub pieces: Vec<IntervalText>,
    pub eigenfunction: Vec<String>,
    pub translations: Vec<Vec<String>>,
}

/// Why a candidate interval produced no cycle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CandidateOutcome {
    /// An image split into several separated intervals.
    Fragmented { step: usize },
    /// The orbit of the interval closed but its pieces overlap.
    Overlapping { period: usize },
    Error { message: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CandidateDiagnostic {
    pub candidate: IntervalText,
    #[serde(flatten)]
    pub outcome: CandidateOutcome,
}

#[derive(Clone, Debug, Default)]
pub struct CycleSearch {
    pub cycles: Vec<IntervalCycle>,
    pub diagnostics: Vec<CandidateDiagnostic>,
}

enum Followed {
    Cycle(IntervalCycle),
    Open,
    Rejected(CandidateOutcome),
}

fn follow(t: &Iet, start: &Interval, max_period: usize) -> Result<Followed> {
    let oracle = t.oracle();
    let mut pieces = vec![start.clone()];
    let mut branches = Vec::new();
    for step in 1..=max_period {
        let current = pieces.last().unwrap();
        let parts: Vec<(Interval, QAlpha)> = t
            .split(current)?
            .into_iter()
            .map(|(iv, i)| (iv, t.translation(i).clone()))
            .collect();
        let image = IntervalSet::from_intervals(parts.iter().map(|(iv, d)| iv.translate(d)).collect(), oracle)?;
        if image.len() != 1 {
            return Ok(Followed::Rejected(CandidateOutcome::Fragmented { step }));
        }
        branches.push(parts);
        let next = image.into_parts().pop().unwrap();
        if oracle.same(&next.lo, &start.lo) && oracle.same(&next.hi, &start.hi) {
            if step == 1 {
                return Ok(Followed::Open);
            }
            let sorted = try_sort_by(pieces.clone(), &mut |a: &Interval, b: &Interval| oracle.cmp(&a.lo, &b.lo))?;
            for w in sorted.windows(2) {
                if oracle.cmp(&w[0].hi, &w[1].lo)? == Ordering::Greater {
                    return Ok(Followed::Rejected(CandidateOutcome::Overlapping { period: step }));
                }
            }
            return Ok(Followed::Cycle(IntervalCycle { pieces, branches }));
        }
        pieces.push(next);
    }
    Ok(Followed::Open)
}

/// Rotates the cycle so that its leftmost piece comes first.
fn rotate_to_leftmost(mut c: IntervalCycle, t: &Iet) -> Result<IntervalCycle> {
    let mut best = 0;
    for k in 1..c.pieces.len() {
        if t.oracle().cmp(&c.pieces[k].lo, &c.pieces[best].lo)? == Ordering::Less {
            best = k;
        }
    }
    c.pieces.rotate_left(best);
    c.branches.rotate_left(best);
    Ok(c)
}

/// Searches cycles of period `2..=max_period` among the intervals spanned by
/// any two points of `{0, r} ∪ generators` (the full domain excluded).
/// Images are split at the breakpoints of `T` and re-merged; an image that
/// stays disconnected disqualifies the candidate and is reported as a
/// diagnostic. Cycles are deduplicated as sets of pieces and sorted by
/// period, then by position.
pub fn find_interval_cycles(t: &Iet, generators: &[QAlpha], max_period: usize) -> Result<CycleSearch> {
    let oracle = t.oracle();
    let mut points = vec![QAlpha::zero(), t.total_length().clone()];
    for g in generators {
        let g = oracle.normalize(g);
        if t.in_domain(&g)? {
            points.push(g);
        }
    }
    let mut points = try_sort_by(points, &mut |a: &QAlpha, b: &QAlpha| oracle.cmp(a, b))?;
    points.dedup_by(|a, b| oracle.same(a, b));
    let last = points.len() - 1;
    let mut search = CycleSearch::default();
    let mut seen: Vec<Vec<Interval>> = Vec::new();
    for i in 0..last {
        for j in i + 1..=last {
            if i == 0 && j == last {
                continue;
            }
            let candidate = Interval::new(points[i].clone(), points[j].clone());
            match follow(t, &candidate, max_period) {
                Ok(Followed::Cycle(c)) => {
                    let c = rotate_to_leftmost(c, t)?;
                    let key = try_sort_by(c.pieces.clone(), &mut |a: &Interval, b: &Interval| oracle.cmp(&a.lo, &b.lo))?;
                    if !seen.contains(&key) {
                        seen.push(key);
                        search.cycles.push(c);
                    }
                }
                Ok(Followed::Open) => {}
                Ok(Followed::Rejected(outcome)) => search.diagnostics.push(CandidateDiagnostic {
                    candidate: candidate.to_strings(),
                    outcome,
                }),
                Err(e) => search.diagnostics.push(CandidateDiagnostic {
                    candidate: candidate.to_strings(),
                    outcome: CandidateOutcome::Error { message: e.to_string() },
                }),
            }
        }
    }
    let cycles = std::mem::take(&mut search.cycles);
    let mut cycles = try_sort_by(cycles, &mut |a: &IntervalCycle, b: &IntervalCycle| {
        Ok::<_, Error>(match a.period().cmp(&b.period()) {
            Ordering::Equal => oracle.cmp(&a.pieces[0].lo, &b.pieces[0].lo)?,
            other => other,
        })
    })?;
    search.cycles.append(&mut cycles);
    Ok(search)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    NotTopologicallyWeaklyMixing,
    NoContinuousEigenfunctionFound,
    Inconclusive,
}

#[derive(Clone, Debug)]
pub struct WeakMixingVerdict {
    pub affine: Option<AffineEigenStructure>,
    pub affine_proof: Option<AffineProof>,
    pub rational_cycles: Vec<IntervalCycle>,
    pub cycle_diagnostics: Vec<CandidateDiagnostic>,
    pub errors: Vec<String>,
    pub max_period: usize,
    pub verdict: Verdict,
}

/// Affine detection plus a cycle search seeded with all discontinuities.
/// `max_period` defaults to `2m`.
pub fn weak_mixing_report(t: &Iet, max_period: Option<usize>) -> WeakMixingVerdict {
    let max_period = max_period.unwrap_or(2 * t.m());
    let mut errors = Vec::new();
    let affine = match try_detect_affine_structure(t) {
        Ok(a) => a,
        Err(e) => {
            errors.push(format!("affine detection: {e}"));
            None
        }
    };
    let affine_proof = match &affine {
        Some(a) => match verify_affine_eigen(t, a) {
            Ok(p) => Some(p),
            Err(e) => {
                errors.push(format!("affine verification: {e}"));
                None
            }
        },
        None => None,
    };
    let (rational_cycles, cycle_diagnostics) = match find_interval_cycles(t, t.discontinuities(), max_period) {
        Ok(s) => (s.cycles, s.diagnostics),
        Err(e) => {
            errors.push(format!("cycle search: {e}"));
            (Vec::new(), Vec::new())
        }
    };
    let verdict = if affine_proof.is_some() {
        Verdict::NotTopologicallyWeaklyMixing
    } else if errors.is_empty() {
        Verdict::NoContinuousEigenfunctionFound
    } else {
        Verdict::Inconclusive
    };
    WeakMixingVerdict {
        affine,
        affine_proof,
        rational_cycles,
        cycle_diagnostics,
        errors,
        max_period,
        verdict,
    }
}
