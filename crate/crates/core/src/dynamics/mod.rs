//! Orbit-level analysis of a single exchange.

mod birkhoff;
mod first_return;
mod idoc;
mod minimality;
mod union;

pub use birkhoff::{birkhoff_discrepancy, birkhoff_series, BirkhoffOptions, BirkhoffStats, CellStat, Mode};
pub use first_return::{first_return, rotation_angle, ReturnBranch, ReturnSystem};
pub use idoc::{
    drift_certificate, idoc_check, keane_verdict, DriftCertificate, IdocVerdict, IdocWitness, ResidualCheck,
    WitnessKind, MAX_IDOC_DEPTH,
};
pub use minimality::{minimality_report, Budgets, MinimalityReport, MinimalityVerdict, TowerCertificate};
pub use union::{invariant_union_search, InvariantUnion, UnionSearch};
