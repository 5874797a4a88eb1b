use crate::iet::Iet;
use crate::intervals::{Interval, IntervalSet};
use crate::Result;

/// A proper finite union of intervals with `T(U) = U`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantUnion {
    pub set: IntervalSet,
    /// 1-based index of the seed interval `I_j`.
    pub seed: usize,
    pub steps: usize,
}

#[derive(Clone, Debug, Default)]
pub struct UnionSearch {
    pub witness: Option<InvariantUnion>,
    /// Seeds whose closure hit a budget before closing.
    pub exhausted_seeds: Vec<usize>,
    /// Seeds whose closure is the whole domain.
    pub full_seeds: Vec<usize>,
}

impl UnionSearch {
    pub fn budget_exhausted(&self) -> bool {
        !self.exhausted_seeds.is_empty()
    }
}

/// `T(S)` for a finite union `S`.
pub(crate) fn image_of(t: &Iet, s: &IntervalSet) -> Result<IntervalSet> {
    let mut parts = Vec::new();
    for iv in s.parts() {
        parts.extend(t.image_pieces(iv)?);
    }
    IntervalSet::from_intervals(parts, t.oracle())
}

/// Forward closure `U = S ∪ T(S) ∪ T²(S) ∪ ...` of each seed `I_j`,
/// driven by the newly added part only. Stops at the first seed whose
/// closure is a proper subset of the domain; such a closure satisfies
/// `T(U) ⊆ U`, hence `T(U) = U` by measure preservation.
pub fn invariant_union_search(t: &Iet, max_pieces: usize, max_steps: usize) -> Result<UnionSearch> {
    let oracle = t.oracle();
    let domain = IntervalSet::from_intervals(vec![t.domain()], oracle)?;
    let mut search = UnionSearch::default();
    for j in 1..=t.m() {
        let seed = IntervalSet::from_intervals(vec![t.interval(j)], oracle)?;
        let mut union = seed.clone();
        let mut frontier = seed;
        let mut closed = false;
        let mut steps = 0;
        while steps < max_steps && union.len() <= max_pieces {
            steps += 1;
            let image = image_of(t, &frontier)?;
            let fresh = image.difference(&union, oracle)?;
            if fresh.is_empty() {
                closed = true;
                break;
            }
            union = union.union(&fresh, oracle)?;
            frontier = fresh;
        }
        if !closed {
            search.exhausted_seeds.push(j);
        } else if union == domain {
            search.full_seeds.push(j);
        } else {
            search.witness = Some(InvariantUnion { set: union, seed: j, steps });
            return Ok(search);
        }
    }
    Ok(search)
}

impl InvariantUnion {
    /// Endpoint-level recheck of `T(U) = U`.
    pub fn verify(&self, t: &Iet) -> Result<bool> {
        Ok(image_of(t, &self.set)? == self.set)
    }

    pub fn parts(&self) -> &[Interval] {
        self.set.parts()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{thm14_family, thm15_family};
    use crate::iet::Permutation;
    use crate::numeric::{rational, AlphaOracle, QAlpha};
    use std::sync::Arc;

    fn sqrt2_over(k: i64) -> Arc<AlphaOracle> {
        Arc::new(AlphaOracle::sqrt(rational(1, k), rational(2, 1)).unwrap())
    }

    fn unit(k: i64) -> Interval {
        Interval::new(QAlpha::from_integer(k - 1), QAlpha::from_integer(k))
    }

    #[test]
    fn reversal_traps_the_end_blocks() {
        for n in 3..=5 {
            let t = thm15_family(&Permutation::reversal(n), sqrt2_over(2)).unwrap();
            let w = invariant_union_search(&t, 1000, 1000).unwrap().witness.unwrap();
            assert_eq!(w.parts(), &[unit(1), unit(n as i64)]);
            assert!(w.verify(&t).unwrap());
        }
    }

    #[test]
    fn cycle_closes_to_the_whole_domain() {
        let t = thm15_family(&Permutation::cyclic_shift(4), sqrt2_over(2)).unwrap();
        let s = invariant_union_search(&t, 16, 16).unwrap();
        assert!(s.witness.is_none());
    }

    #[test]
    fn short_cycle_gives_union_of_its_measure() {
        // σ = (1 2)(3 4 5): the block of 1 has measure 2
        let sigma: Permutation = "[2,1,4,5,3]".parse().unwrap();
        let t = thm15_family(&sigma, sqrt2_over(2)).unwrap();
        let w = invariant_union_search(&t, 1000, 1000).unwrap().witness.unwrap();
        assert_eq!(w.set.measure(), QAlpha::from_integer(2));
    }

    #[test]
    fn minimal_map_has_no_union() {
        let t = thm14_family(4, sqrt2_over(6)).unwrap();
        let s = invariant_union_search(&t, 200, 200).unwrap();
        assert!(s.witness.is_none());
    }
}
