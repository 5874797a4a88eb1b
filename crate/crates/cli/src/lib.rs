//! Command-line front end for `ietforge`: the spec-file language, JSON
//! analysis reports and SVG plots of interval exchanges.

pub mod app;
pub mod error;
pub mod report;
pub mod spec;
pub mod svg;

pub use app::run;
pub use error::{CliError, CliResult};
pub use report::{analyze, AnalysisReport, AnalyzeOptions};
pub use spec::{parse_spec, serialize_spec, LoadOptions, Subject};
pub use svg::{render_svg, SvgOptions};
