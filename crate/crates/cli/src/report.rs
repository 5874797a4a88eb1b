//! JSON reports.
//!
//! Every section carries a `mode` field: `"exact"` for results computed in
//! exact arithmetic, `"float"` for Birkhoff statistics past the float
//! threshold. Field order is fixed by the struct definitions, so identical
//! inputs serialize to identical bytes.

use crate::error::CliResult;
use crate::spec::{AlphaSource, Subject};
use ietforge::combinatorics::{cycle_decomposition, is_irreducible};
use ietforge::dynamics::{
    birkhoff_discrepancy, minimality_report, BirkhoffOptions, BirkhoffStats, Budgets, IdocVerdict, InvariantUnion,
    MinimalityVerdict, TowerCertificate,
};
use ietforge::families::{Chart, FamilyInstance};
use ietforge::iet::IetDescription;
use ietforge::intervals::{Interval, IntervalText};
use ietforge::spectral::{weak_mixing_report, AffineEigenReport, AffineProof, CandidateDiagnostic, IntervalCycleReport, Verdict};
use ietforge::{AlphaOracle, Iet, QAlpha};
use serde::Serialize;
use std::collections::BTreeMap;

pub const EXACT: &str = "exact";

pub const ALPHA_NOTE: &str =
    "the numeric value of alpha is an implementation choice; every construction holds for each admissible alpha";

#[derive(Clone, Debug, Serialize)]
pub struct Tool {
    pub name: &'static str,
    pub version: &'static str,
}

impl Tool {
    pub fn current() -> Self {
        Tool {
            name: "ietforge",
            version: env!("CARGO_PKG_VERSION"),
        }
    }
}

/// A float derived from exact data, for display only.
#[derive(Clone, Debug, Serialize)]
pub struct FloatValue {
    pub value: f64,
    pub mode: &'static str,
}

#[derive(Clone, Debug, Serialize)]
pub struct AlphaInfo {
    pub value: String,
    pub declaration: String,
    pub source: AlphaSource,
    pub certified_irrational: bool,
    pub approximation: FloatValue,
    pub precision_cap: u32,
    pub note: &'static str,
}

impl AlphaInfo {
    pub fn new(oracle: &AlphaOracle, source: AlphaSource) -> Self {
        AlphaInfo {
            value: oracle.to_string(),
            declaration: oracle.declaration(),
            source,
            certified_irrational: oracle.is_certified_irrational(),
            approximation: FloatValue {
                value: oracle.approx_f64(),
                mode: "float",
            },
            precision_cap: oracle.refinement_cap(),
            note: ALPHA_NOTE,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BudgetInfo {
    pub idoc_depth: u64,
    pub cycle_max_period: usize,
    pub union_max_pieces: usize,
    pub union_max_steps: usize,
    pub return_budget: Option<u64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Parameters {
    pub alpha: AlphaInfo,
    pub budgets: BudgetInfo,
}

#[derive(Clone, Debug, Serialize)]
pub struct FamilyInfo {
    pub name: String,
    pub parameters: BTreeMap<String, String>,
    pub chart: Chart,
    pub footnotes: Vec<String>,
}

impl FamilyInfo {
    pub fn new(f: &FamilyInstance) -> Self {
        FamilyInfo {
            name: f.name.clone(),
            parameters: f.parameters.iter().cloned().collect(),
            chart: f.chart,
            footnotes: f.footnotes.clone(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Source {
    /// `"spec"` or `"family"`.
    pub kind: &'static str,
    pub family: Option<FamilyInfo>,
}

#[derive(Clone, Debug, Serialize)]
pub struct IetSection {
    pub mode: &'static str,
    #[serde(flatten)]
    pub description: IetDescription,
    pub rank_two: bool,
}

impl IetSection {
    pub fn new(t: &Iet) -> Self {
        IetSection {
            mode: EXACT,
            description: t.describe(),
            rank_two: t.is_rank_two(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CombinatoricsSection {
    pub mode: &'static str,
    pub irreducible: bool,
    pub permutation_cycles: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct IdocSection {
    pub mode: &'static str,
    /// Depth budget of the orbit search.
    pub search_depth: u64,
    #[serde(flatten)]
    pub verdict: IdocVerdict,
    pub note: &'static str,
}

impl IdocSection {
    pub fn new(depth: u64, verdict: IdocVerdict) -> Self {
        let note = match verdict {
            IdocVerdict::PassToDepth { .. } => "pass-to-depth: no orbit connection up to the depth; evidence, not a proof",
            IdocVerdict::Certified { .. } => "certified: the drift certificate rules out every orbit connection",
            IdocVerdict::Fail { .. } => "fail: the witness is an orbit connection between discontinuities",
        };
        IdocSection {
            mode: EXACT,
            search_depth: depth,
            verdict,
            note,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct UnionInfo {
    pub seed: usize,
    pub steps: usize,
    pub parts: Vec<IntervalText>,
    pub measure: String,
}

impl UnionInfo {
    pub fn new(u: &InvariantUnion) -> Self {
        UnionInfo {
            seed: u.seed,
            steps: u.steps,
            parts: u.parts().iter().map(Interval::to_strings).collect(),
            measure: u.set.measure().to_string(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TowerInfo {
    pub base: IntervalText,
    pub angle: String,
    pub return_times: Vec<u64>,
}

impl TowerInfo {
    fn new(t: &TowerCertificate) -> Self {
        TowerInfo {
            base: t.base.to_strings(),
            angle: t.angle.to_string(),
            return_times: t.return_times.clone(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MinimalitySection {
    pub mode: &'static str,
    pub verdict: MinimalityVerdict,
    pub route: String,
    pub annotations: Vec<String>,
    pub invariant_union: Option<UnionInfo>,
    pub union_budget_exhausted: bool,
    pub tower: Option<TowerInfo>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectralSection {
    pub mode: &'static str,
    pub verdict: Verdict,
    pub affine: Option<AffineEigenReport>,
    pub affine_proof: Option<AffineProof>,
    pub rational_cycles: Vec<IntervalCycleReport>,
    pub cycle_diagnostics: Vec<CandidateDiagnostic>,
    pub max_period: usize,
    pub errors: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct AnalysisReport {
    pub tool: Tool,
    pub parameters: Parameters,
    pub source: Source,
    pub iet: IetSection,
    pub combinatorics: CombinatoricsSection,
    pub idoc: IdocSection,
    pub minimality: MinimalitySection,
    pub spectral: SpectralSection,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub birkhoff: Option<BirkhoffStats>,
}

/// Birkhoff run requested alongside an analysis.
#[derive(Clone, Debug)]
pub struct BirkhoffRequest {
    pub steps: u64,
    pub from: QAlpha,
    /// Test cells; the intervals of `T` when empty.
    pub cells: Vec<Interval>,
    pub options: BirkhoffOptions,
}

#[derive(Clone, Debug, Default)]
pub struct AnalyzeOptions {
    pub budgets: Budgets,
    /// Longest cycle searched; `2m` when unset.
    pub max_period: Option<usize>,
    pub birkhoff: Option<BirkhoffRequest>,
}

/// Runs combinatorics, dynamics and spectral analysis on a subject.
pub fn analyze(subject: &Subject, options: &AnalyzeOptions) -> CliResult<AnalysisReport> {
    let t = &subject.iet;
    let budgets = options.budgets;
    let minimality = minimality_report(t, budgets)?;
    let spectral = weak_mixing_report(t, options.max_period);
    let alpha = t.oracle().approx_f64();
    let birkhoff = match &options.birkhoff {
        Some(b) => {
            let cells = if b.cells.is_empty() {
                (1..=t.m()).map(|i| t.interval(i)).collect()
            } else {
                b.cells.clone()
            };
            Some(birkhoff_discrepancy(t, &b.from, b.steps, &cells, b.options)?)
        }
        None => None,
    };
    Ok(AnalysisReport {
        tool: Tool::current(),
        parameters: Parameters {
            alpha: AlphaInfo::new(&subject.oracle, subject.alpha_source),
            budgets: BudgetInfo {
                idoc_depth: budgets.idoc_depth,
                cycle_max_period: spectral.max_period,
                union_max_pieces: budgets.union_max_pieces,
                union_max_steps: budgets.union_max_steps,
                return_budget: budgets.return_budget,
            },
        },
        source: Source {
            kind: if subject.family.is_some() { "family" } else { "spec" },
            family: subject.family.as_ref().map(FamilyInfo::new),
        },
        iet: IetSection::new(t),
        combinatorics: CombinatoricsSection {
            mode: EXACT,
            irreducible: is_irreducible(t.permutation()),
            permutation_cycles: cycle_decomposition(t.permutation()),
        },
        idoc: IdocSection::new(budgets.idoc_depth, minimality.idoc.clone()),
        minimality: MinimalitySection {
            mode: EXACT,
            verdict: minimality.verdict,
            route: minimality.route.clone(),
            annotations: minimality.annotations.clone(),
            invariant_union: minimality.invariant_union.as_ref().map(UnionInfo::new),
            union_budget_exhausted: minimality.union_budget_exhausted,
            tower: minimality.tower.as_ref().map(TowerInfo::new),
        },
        spectral: SpectralSection {
            mode: EXACT,
            verdict: spectral.verdict,
            affine: spectral.affine.as_ref().map(|a| a.report(alpha)),
            affine_proof: spectral.affine_proof.clone(),
            rational_cycles: spectral.rational_cycles.iter().map(|c| c.report()).collect(),
            cycle_diagnostics: spectral.cycle_diagnostics.clone(),
            max_period: spectral.max_period,
            errors: spectral.errors.clone(),
        },
        birkhoff,
    })
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spec::{parse_spec, LoadOptions};

    fn report(text: &str) -> AnalysisReport {
        analyze(&parse_spec(text, &LoadOptions::default()).unwrap(), &AnalyzeOptions::default()).unwrap()
    }

    #[test]
    fn five_interval_family() {
        let r = report("alpha = sqrt(2)/10 family thm14 { m = 5 }");
        let affine = r.spectral.affine.unwrap();
        assert_eq!(affine.eigenfunction, "exp(2iπ·x/(1/4))");
        assert_eq!(affine.eigenvalue, "exp(2iπ·(4*a))");
        assert_eq!(r.minimality.verdict, MinimalityVerdict::MinimalCertified);
        assert_eq!(r.idoc.note.split(':').next(), Some("certified"));
    }

    #[test]
    fn reversal_family() {
        let r = report("alpha = sqrt(2)/2 family thm15 { n = 3; sigma = reversal }");
        assert_eq!(r.minimality.verdict, MinimalityVerdict::NonMinimal);
        assert_eq!(r.spectral.affine.unwrap().eigenvalue, "exp(2iπ·(-a))");
        assert_eq!(r.spectral.verdict, Verdict::NotTopologicallyWeaklyMixing);
    }

    #[test]
    fn json_is_stable() {
        let text = "alpha = sqrt(2)/4 family n2 {}";
        assert_eq!(to_json(&report(text)), to_json(&report(text)));
        assert!(to_json(&report(text)).contains("\"mode\": \"exact\""));
    }
}
