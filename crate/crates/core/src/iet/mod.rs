//! Canonical IET representation and its exact algebra.

mod algebra;
mod orbit;
mod permutation;

pub use algebra::compose;
pub use orbit::{iterate, OrbitPoint};
pub use permutation::Permutation;

use crate::intervals::{try_sort_by, Interval};
use crate::numeric::{AlphaOracle, QAlpha, Sign};
use crate::{Error, Result};
use serde::Serialize;
use std::cmp::Ordering;
use std::sync::Arc;

/// An interval exchange of `[0, r)`.
///
/// Interval `I_i = [a_{i-1}, a_i)` is translated by `delta_i` onto
/// `J_{π(i)} = [b_{π(i)-1}, b_{π(i)})`. All coordinates live in Q + Q·alpha
/// for the single irrational described by the oracle.
#[derive(Clone, Debug)]
pub struct Iet {
    oracle: Arc<AlphaOracle>,
    perm: Permutation,
    lengths: Vec<QAlpha>,
    breakpoints: Vec<QAlpha>,
    translations: Vec<QAlpha>,
    image_breakpoints: Vec<QAlpha>,
}

/// Builds the IET with permutation `perm` and lengths `lengths`; the
/// translation vector follows from
/// `delta_i = Σ_{j ≤ π(i)} λ_{π⁻¹(j)} − Σ_{j ≤ i} λ_j`.
pub fn build_iet(perm: Permutation, lengths: Vec<QAlpha>, oracle: Arc<AlphaOracle>) -> Result<Iet> {
    Iet::new(perm, lengths, oracle)
}

/// Exact string form of an IET for reports.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IetDescription {
    pub m: usize,
    pub r: String,
    pub alpha: String,
    pub permutation: Vec<usize>,
    pub lengths: Vec<String>,
    pub breakpoints: Vec<String>,
    pub translations: Vec<String>,
    pub image_breakpoints: Vec<String>,
}

fn prefix_sums<'a>(items: impl Iterator<Item = &'a QAlpha>) -> Vec<QAlpha> {
    let mut out = vec![QAlpha::zero()];
    for x in items {
        let next = out.last().unwrap() + x;
        out.push(next);
    }
    out
}

impl Iet {
    pub fn new(perm: Permutation, lengths: Vec<QAlpha>, oracle: Arc<AlphaOracle>) -> Result<Iet> {
        let m = perm.size();
        if lengths.len() != m {
            return Err(Error::LengthMismatch(format!(
                "permutation of size {m} but {} lengths",
                lengths.len()
            )));
        }
        let lengths: Vec<QAlpha> = lengths.iter().map(|l| oracle.normalize(l)).collect();
        for (i, l) in lengths.iter().enumerate() {
            if oracle.sign(l)? != Sign::Positive {
                return Err(Error::NonPositiveLength {
                    index: i + 1,
                    length: l.to_string(),
                });
            }
        }
        let inv = perm.inverse();
        let breakpoints = prefix_sums(lengths.iter());
        let image_breakpoints = prefix_sums(inv.images().iter().map(|&i| &lengths[i - 1]));
        let translations = (1..=m)
            .map(|i| &image_breakpoints[perm.image(i)] - &breakpoints[i])
            .collect();
        Ok(Iet {
            oracle,
            perm,
            lengths,
            breakpoints,
            translations,
            image_breakpoints,
        })
    }

    /// Builds an IET from consecutive pieces of `[0, r)` and their
    /// translations, checking that the translated pieces tile `[0, r)`.
    pub fn from_pieces(oracle: Arc<AlphaOracle>, lengths: Vec<QAlpha>, translations: Vec<QAlpha>) -> Result<Iet> {
        if lengths.len() != translations.len() || lengths.is_empty() {
            return Err(Error::LengthMismatch(format!(
                "{} lengths but {} translations",
                lengths.len(),
                translations.len()
            )));
        }
        let starts = prefix_sums(lengths.iter());
        let image_lo: Vec<QAlpha> = translations
            .iter()
            .zip(&starts)
            .map(|(d, a)| oracle.normalize(&(a + d)))
            .collect();
        let order = try_sort_by((0..lengths.len()).collect(), &mut |&i: &usize, &j: &usize| {
            oracle.cmp(&image_lo[i], &image_lo[j])
        })?;
        let mut expected = QAlpha::zero();
        let mut images = vec![0; lengths.len()];
        for (rank, &i) in order.iter().enumerate() {
            if !oracle.same(&image_lo[i], &expected) {
                return Err(Error::NotABijection(format!(
                    "image of piece {} starts at {} instead of {}",
                    i + 1,
                    image_lo[i],
                    expected
                )));
            }
            expected = &expected + &lengths[i];
            images[i] = rank + 1;
        }
        let iet = Iet::new(Permutation::new(images)?, lengths, oracle)?;
        debug_assert!(iet
            .translations
            .iter()
            .zip(&translations)
            .all(|(a, b)| iet.oracle.same(a, b)));
        Ok(iet)
    }

    pub fn m(&self) -> usize {
        self.perm.size()
    }

    pub fn total_length(&self) -> &QAlpha {
        &self.breakpoints[self.m()]
    }

    pub fn oracle(&self) -> &AlphaOracle {
        &self.oracle
    }

    pub fn oracle_arc(&self) -> &Arc<AlphaOracle> {
        &self.oracle
    }

    pub fn permutation(&self) -> &Permutation {
        &self.perm
    }

    pub fn lengths(&self) -> &[QAlpha] {
        &self.lengths
    }

    /// `a_0, ..., a_m`.
    pub fn breakpoints(&self) -> &[QAlpha] {
        &self.breakpoints
    }

    /// `b_0, ..., b_m`.
    pub fn image_breakpoints(&self) -> &[QAlpha] {
        &self.image_breakpoints
    }

    pub fn translations(&self) -> &[QAlpha] {
        &self.translations
    }

    /// `delta_i`, 1-indexed.
    pub fn translation(&self, i: usize) -> &QAlpha {
        &self.translations[i - 1]
    }

    /// `D(T) = {a_1, ..., a_{m-1}}`.
    pub fn discontinuities(&self) -> &[QAlpha] {
        &self.breakpoints[1..self.m()]
    }

    /// `I_i`, 1-indexed.
    pub fn interval(&self, i: usize) -> Interval {
        Interval::new(self.breakpoints[i - 1].clone(), self.breakpoints[i].clone())
    }

    pub fn domain(&self) -> Interval {
        Interval::new(QAlpha::zero(), self.total_length().clone())
    }

    pub fn in_domain(&self, x: &QAlpha) -> Result<bool> {
        Ok(self.oracle.sign(x)? != Sign::Negative
            && self.oracle.cmp(x, self.total_length())? == Ordering::Less)
    }

    fn out_of_domain(&self, x: &QAlpha) -> Error {
        Error::OutOfDomain {
            point: x.to_string(),
            length: self.total_length().to_string(),
        }
    }

    /// Index `i` (1-based) with `a_{i-1} <= x < a_i`.
    pub fn locate(&self, x: &QAlpha) -> Result<usize> {
        if !self.in_domain(x)? {
            return Err(self.out_of_domain(x));
        }
        // first breakpoint a_k (k >= 1) with x < a_k
        let (mut lo, mut hi) = (1, self.m());
        while lo < hi {
            let mid = (lo + hi) / 2;
            if self.oracle.cmp(x, &self.breakpoints[mid])? == Ordering::Less {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        Ok(lo)
    }

    /// `T(x)`.
    pub fn apply(&self, x: &QAlpha) -> Result<QAlpha> {
        let x = self.oracle.normalize(x);
        let i = self.locate(&x)?;
        Ok(&x + self.translation(i))
    }

    /// Splits `[lo, hi) ⊆ [0, r)` along the discontinuities of `T`; returns
    /// each piece with the 1-based index of its branch.
    pub fn split(&self, piece: &Interval) -> Result<Vec<(Interval, usize)>> {
        let o = &self.oracle;
        if o.cmp(&piece.lo, &piece.hi)? != Ordering::Less {
            return Ok(Vec::new());
        }
        if o.cmp(&piece.hi, self.total_length())? == Ordering::Greater {
            return Err(self.out_of_domain(&piece.hi));
        }
        let mut i = self.locate(&piece.lo)?;
        let mut lo = piece.lo.clone();
        let mut out = Vec::new();
        loop {
            let end = &self.breakpoints[i];
            if o.cmp(&piece.hi, end)? != Ordering::Greater {
                out.push((Interval::new(lo, piece.hi.clone()), i));
                return Ok(out);
            }
            out.push((Interval::new(lo, end.clone()), i));
            lo = end.clone();
            i += 1;
        }
    }

    /// `T([lo, hi))` as translated pieces, in the order of the source.
    pub fn image_pieces(&self, piece: &Interval) -> Result<Vec<Interval>> {
        Ok(self
            .split(piece)?
            .into_iter()
            .map(|(iv, i)| iv.translate(self.translation(i)))
            .collect())
    }

    /// True when `T` is already in canonical form (no two adjacent
    /// intervals share a translation).
    pub fn is_canonical(&self) -> bool {
        self.translations.windows(2).all(|w| w[0] != w[1])
    }

    /// Merges adjacent intervals with identical translation.
    pub fn canonical(&self) -> Result<Iet> {
        if self.is_canonical() {
            return Ok(self.clone());
        }
        let mut lengths: Vec<QAlpha> = Vec::new();
        let mut translations: Vec<QAlpha> = Vec::new();
        for (l, d) in self.lengths.iter().zip(&self.translations) {
            if translations.last() == Some(d) {
                let last = lengths.last_mut().unwrap();
                *last = &*last + l;
            } else {
                lengths.push(l.clone());
                translations.push(d.clone());
            }
        }
        Iet::from_pieces(self.oracle.clone(), lengths, translations)
    }

    /// True when the two IETs define the same map (canonical forms agree).
    pub fn same_map(&self, other: &Iet) -> Result<bool> {
        if self.oracle != other.oracle {
            return Ok(false);
        }
        let a = self.canonical()?;
        let b = other.canonical()?;
        Ok(a.perm == b.perm && a.lengths == b.lengths)
    }

    /// Rank 2: some length has a non-zero alpha coordinate (alpha irrational).
    pub fn is_rank_two(&self) -> bool {
        self.oracle.is_certified_irrational() && self.lengths.iter().any(|l| !l.is_rational())
    }

    pub fn describe(&self) -> IetDescription {
        let strs = |v: &[QAlpha]| v.iter().map(ToString::to_string).collect();
        IetDescription {
            m: self.m(),
            r: self.total_length().to_string(),
            alpha: self.oracle.to_string(),
            permutation: self.perm.images().to_vec(),
            lengths: strs(&self.lengths),
            breakpoints: strs(&self.breakpoints),
            translations: strs(&self.translations),
            image_breakpoints: strs(&self.image_breakpoints),
        }
    }
}

/// Equality of maps: canonical forms are compared.
impl PartialEq for Iet {
    fn eq(&self, other: &Self) -> bool {
        self.same_map(other).unwrap_or(false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rational;

    fn oracle(k: i64) -> Arc<AlphaOracle> {
        Arc::new(AlphaOracle::sqrt(rational(1, k), rational(2, 1)).unwrap())
    }

    fn qas(v: &[&str]) -> Vec<QAlpha> {
        v.iter().map(|s| s.parse().unwrap()).collect()
    }

    #[test]
    fn translation_vector_for_five_intervals() {
        let perm: Permutation = "[4,3,2,5,1]".parse().unwrap();
        let t = build_iet(perm, qas(&["1/4", "1/4", "1/4", "1/4-a", "a"]), oracle(8)).unwrap();
        assert_eq!(t.translations(), qas(&["a+1/2", "a", "a-1/2", "a", "a-1"]).as_slice());
    }

    #[test]
    fn translation_vector_for_four_intervals() {
        let perm: Permutation = "[3,2,4,1]".parse().unwrap();
        let t = build_iet(perm, qas(&["1/3", "1/3", "1/3-a", "a"]), oracle(6)).unwrap();
        assert_eq!(t.translations(), qas(&["a+1/3", "a-1/3", "a", "a-1"]).as_slice());
        assert_eq!(t.image_breakpoints(), qas(&["0", "a", "a+1/3", "a+2/3", "1"]).as_slice());
        assert_eq!(t.discontinuities(), qas(&["1/3", "2/3", "1-a"]).as_slice());
    }

    #[test]
    fn identity_has_zero_translations() {
        let t = build_iet(Permutation::identity(3), qas(&["a", "1/2-a", "1/2"]), oracle(2)).unwrap_err();
        // sqrt(2)/2 > 1/2, so the middle length is negative.
        assert!(matches!(t, Error::NonPositiveLength { index: 2, .. }));
        let t = build_iet(Permutation::identity(3), qas(&["a", "1-a", "1/2"]), oracle(2)).unwrap();
        assert!(t.translations().iter().all(QAlpha::is_zero));
        assert_eq!(t.canonical().unwrap().m(), 1);
    }

    #[test]
    fn arity_mismatch() {
        let err = build_iet(Permutation::identity(4), qas(&["1/3", "1/3", "1/3"]), oracle(2)).unwrap_err();
        assert!(matches!(err, Error::LengthMismatch(_)));
    }

    #[test]
    fn apply_and_locate() {
        let perm: Permutation = "[4,3,2,5,1]".parse().unwrap();
        let t = build_iet(perm, qas(&["1/4", "1/4", "1/4", "1/4-a", "a"]), oracle(8)).unwrap();
        assert_eq!(t.apply(&"1-a".parse().unwrap()).unwrap(), QAlpha::zero());
        assert_eq!(t.locate(&QAlpha::zero()).unwrap(), 1);
        assert_eq!(t.locate(&"1/4".parse().unwrap()).unwrap(), 2);
        assert!(matches!(t.apply(&QAlpha::one()), Err(Error::OutOfDomain { .. })));
        assert!(matches!(t.apply(&"-1/8".parse().unwrap()), Err(Error::OutOfDomain { .. })));
    }

    #[test]
    fn identity_map_fixes_points() {
        let t = build_iet(Permutation::identity(1), qas(&["1"]), oracle(2)).unwrap();
        let x: QAlpha = "a/3".parse().unwrap();
        assert_eq!(t.apply(&x).unwrap(), x);
    }

    #[test]
    fn splitting_a_piece() {
        let perm: Permutation = "[3,2,4,1]".parse().unwrap();
        let t = build_iet(perm, qas(&["1/3", "1/3", "1/3-a", "a"]), oracle(6)).unwrap();
        let piece = Interval::new("1/6".parse().unwrap(), "5/6".parse().unwrap());
        let parts = t.split(&piece).unwrap();
        let branches: Vec<usize> = parts.iter().map(|p| p.1).collect();
        // 1 - sqrt(2)/6 ~ 0.764 < 5/6
        assert_eq!(branches, vec![1, 2, 3, 4]);
        let total = parts.iter().fold(QAlpha::zero(), |acc, (iv, _)| acc + iv.length());
        assert_eq!(total, piece.length());
    }

    #[test]
    fn from_pieces_rejects_overlaps() {
        let err = Iet::from_pieces(oracle(2), qas(&["1/2", "1/2"]), qas(&["0", "-1/4"])).unwrap_err();
        assert!(matches!(err, Error::NotABijection(_)));
    }
}
