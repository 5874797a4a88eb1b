use super::first_return::{first_return, rotation_angle};
use super::idoc::{drift_certificate, idoc_check, DriftCertificate, IdocVerdict};
use super::union::{invariant_union_search, InvariantUnion};
use crate::combinatorics::is_irreducible;
use crate::iet::Iet;
use crate::intervals::{try_sort_by, Interval};
use crate::numeric::QAlpha;
use crate::Result;
use serde::Serialize;

#[derive(Clone, Copy, Debug)]
pub struct Budgets {
    pub idoc_depth: u64,
    pub union_max_pieces: usize,
    pub union_max_steps: usize,
    /// Per-piece return-time budget of the first-return route; `None` uses
    /// the default of `first_return`.
    pub return_budget: Option<u64>,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets {
            idoc_depth: 1000,
            union_max_pieces: 1000,
            union_max_steps: 1000,
            return_budget: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MinimalityVerdict {
    MinimalCertified,
    MinimalEvidence,
    NonMinimal,
    Unknown,
}

/// The first-return map to `[0, x)` is an irrational two-branch rotation
/// and its tower fills `[0, r)`, so every orbit is dense.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TowerCertificate {
    pub base: Interval,
    pub angle: QAlpha,
    pub return_times: Vec<u64>,
}

#[derive(Clone, Debug)]
pub struct MinimalityReport {
    pub irreducible: bool,
    pub drift: Option<DriftCertificate>,
    pub idoc: IdocVerdict,
    pub invariant_union: Option<InvariantUnion>,
    pub union_budget_exhausted: bool,
    pub tower: Option<TowerCertificate>,
    pub verdict: MinimalityVerdict,
    pub route: String,
    pub annotations: Vec<String>,
}

fn tower_route(t: &Iet, budget: Option<u64>) -> Result<Option<TowerCertificate>> {
    let o = t.oracle();
    if !o.is_certified_irrational() {
        return Ok(None);
    }
    let r = t.total_length();
    let mut ends: Vec<QAlpha> = t.breakpoints()[1..].to_vec();
    ends.extend(t.image_breakpoints()[1..].iter().cloned());
    let mut ends = try_sort_by(ends, &mut |a: &QAlpha, b: &QAlpha| o.cmp(a, b))?;
    ends.dedup();
    for x in ends {
        let base = Interval::new(QAlpha::zero(), x.clone());
        let Ok(rs) = first_return(t, &base, budget) else {
            continue;
        };
        let Some(angle) = rotation_angle(&rs.induced) else {
            continue;
        };
        if angle.is_commensurable(&x) || &rs.swept() != r {
            continue;
        }
        return Ok(Some(TowerCertificate {
            base,
            angle,
            return_times: rs.branches.iter().map(|b| b.return_time).collect(),
        }));
    }
    Ok(None)
}

/// Combines the available routes, in order: Keane (irreducible plus
/// certified idoc), an invariant-union witness, a first-return tower over
/// an irrational rotation, idoc evidence to depth.
pub fn minimality_report(t: &Iet, budgets: Budgets) -> Result<MinimalityReport> {
    let irreducible = is_irreducible(t.permutation());
    let drift = if t.oracle().is_certified_irrational() {
        drift_certificate(t)?
    } else {
        None
    };
    let idoc = match &drift {
        Some(c) if c.certified => IdocVerdict::Certified { certificate: c.clone() },
        _ => idoc_check(t, budgets.idoc_depth)?,
    };
    let keane = irreducible && matches!(idoc, IdocVerdict::Certified { .. });
    // a minimal map has no proper invariant union to find
    let (witness, union_budget_exhausted) = if keane {
        (None, false)
    } else {
        let union = invariant_union_search(t, budgets.union_max_pieces, budgets.union_max_steps)?;
        let exhausted = union.budget_exhausted();
        (union.witness, exhausted)
    };
    let mut report = MinimalityReport {
        irreducible,
        drift,
        idoc,
        invariant_union: witness,
        union_budget_exhausted,
        tower: None,
        verdict: MinimalityVerdict::Unknown,
        route: "none".into(),
        annotations: Vec::new(),
    };
    if keane {
        report.verdict = MinimalityVerdict::MinimalCertified;
        report.route = "keane".into();
        report.annotations.push(
            "minimal by Keane's theorem (cited): the permutation is irreducible and the drift certificate proves idoc".into(),
        );
    } else if report.invariant_union.is_some() {
        report.verdict = MinimalityVerdict::NonMinimal;
        report.route = "invariant-union".into();
    } else if let Some(tower) = tower_route(t, budgets.return_budget)? {
        report.verdict = MinimalityVerdict::MinimalCertified;
        report.route = "first-return-tower".into();
        report.annotations.push(format!(
            "the first-return map to {} is the irrational rotation by {} and its tower has measure {}",
            tower.base,
            tower.angle,
            t.total_length()
        ));
        report.tower = Some(tower);
    } else if irreducible && matches!(report.idoc, IdocVerdict::PassToDepth { .. }) {
        report.verdict = MinimalityVerdict::MinimalEvidence;
        report.route = "idoc-to-depth".into();
    }
    if report.verdict == MinimalityVerdict::MinimalCertified && t.is_rank_two() {
        report.annotations.push(
            "uniquely ergodic by Boshernitzan's theorem (cited): minimal and of rank 2; hypotheses machine-checked".into(),
        );
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{n2_rescaled, thm14_family, thm15_family};
    use crate::iet::Permutation;
    use crate::numeric::{rational, AlphaOracle};
    use std::sync::Arc;

    fn sqrt2_over(k: i64) -> Arc<AlphaOracle> {
        Arc::new(AlphaOracle::sqrt(rational(1, k), rational(2, 1)).unwrap())
    }

    #[test]
    fn thm14_via_keane() {
        let t = thm14_family(5, sqrt2_over(8)).unwrap();
        let r = minimality_report(&t, Budgets::default()).unwrap();
        assert_eq!(r.verdict, MinimalityVerdict::MinimalCertified);
        assert_eq!(r.route, "keane");
        assert!(r.annotations.iter().any(|a| a.contains("Boshernitzan")));
    }

    #[test]
    fn reversal_is_not_minimal() {
        let t = thm15_family(&Permutation::reversal(4), sqrt2_over(2)).unwrap();
        let r = minimality_report(&t, Budgets::default()).unwrap();
        assert_eq!(r.verdict, MinimalityVerdict::NonMinimal);
    }

    #[test]
    fn n2_via_tower() {
        let t = n2_rescaled(sqrt2_over(4)).unwrap();
        let r = minimality_report(&t, Budgets::default()).unwrap();
        assert!(r.idoc.is_fail());
        assert_eq!(r.verdict, MinimalityVerdict::MinimalCertified);
        assert_eq!(r.route, "first-return-tower");
    }

    #[test]
    fn cycle_via_tower() {
        let t = thm15_family(&Permutation::cyclic_shift(5), sqrt2_over(2)).unwrap();
        let r = minimality_report(&t, Budgets::default()).unwrap();
        assert_eq!(r.verdict, MinimalityVerdict::MinimalCertified);
    }
}
