//! Subcommands and their runners.

use crate::error::{CliError, CliResult};
use crate::report::{analyze, to_json, AlphaInfo, AnalyzeOptions, BirkhoffRequest, FamilyInfo, IetSection, UnionInfo, EXACT};
use crate::spec::{make_oracle, parse_spec, serialize_spec, AlphaSource, FamilySpec, LoadOptions, Subject};
use crate::svg::{render_svg, SvgOptions};
use clap::{Args, Parser, Subcommand, ValueEnum};
use ietforge::dynamics::{
    birkhoff_discrepancy, drift_certificate, first_return, idoc_check, invariant_union_search, rotation_angle,
    BirkhoffOptions, Budgets, DriftCertificate,
};
use ietforge::families::Chart;
use ietforge::iet::{compose, iterate, IetDescription, OrbitPoint};
use ietforge::intervals::{Interval, IntervalText};
use ietforge::numeric::LiteralError;
use ietforge::QAlpha;
use serde::Serialize;
use std::ffi::OsString;
use std::path::{Path, PathBuf};

/// Environment variable overriding the oracle refinement cap.
pub const PRECISION_CAP_VAR: &str = "IETFORGE_PRECISION_CAP";

#[derive(Parser, Debug)]
#[command(name = "ietforge", version, about = "Exact analysis of interval exchange transformations")]
pub struct Cli {
    /// Session irrational: `sqrt(2)/8`, `cf[0;2,(1)]` or `0.4142135 +/- 1e-7`.
    #[arg(long, global = true)]
    pub alpha: Option<String>,
    /// Accept a rational alpha (degenerate experiments).
    #[arg(long, global = true)]
    pub allow_rational: bool,
    /// Write the JSON output to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Full report: combinatorics, idoc, minimality, eigenvalues.
    Analyze(AnalyzeArgs),
    /// Build a member of a parametric family.
    Family {
        #[command(subcommand)]
        family: FamilyCmd,
        /// Also render the exchange to this SVG file.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// `T^l(x0)` with occupation counts.
    Orbit(OrbitArgs),
    /// First-return map to a base interval.
    Induce(InduceArgs),
    /// Graph of the exchange as SVG.
    Render(RenderArgs),
    /// Visit frequencies of an orbit in test cells.
    Birkhoff(BirkhoffArgs),
    /// `left ∘ right` of two spec files.
    Compose(ComposeArgs),
    /// Orbit connections between discontinuities.
    Idoc(IdocArgs),
    /// Search for a proper invariant finite union of intervals.
    Invariants(InvariantsArgs),
}

#[derive(Subcommand, Debug, Clone)]
pub enum FamilyCmd {
    /// m intervals with translations alpha + k/(m-1).
    Thm14 {
        #[arg(long)]
        m: usize,
    },
    /// 2n intervals of [0, n) driven by a permutation sigma.
    Thm15 {
        #[arg(long)]
        n: usize,
        /// `cycle`, `reversal`, `identity` or `[i1,...,in]`.
        #[arg(long, default_value = "cycle")]
        sigma: String,
        #[arg(long, value_enum, default_value_t = ChartArg::Native)]
        chart: ChartArg,
    },
    /// The four-interval exchange of [0, 1) with lengths (a, 1/2-a, a, 1/2-a).
    N2,
    /// h ∘ R_alpha ∘ h⁻¹ for an exchange h of [0, 1) read from a spec file.
    #[command(name = "conj-rot")]
    ConjRot {
        #[arg(long)]
        h: PathBuf,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum ChartArg {
    Native,
    Unit,
}

/// Where the exchange comes from: `--spec FILE` or a `family` subcommand.
#[derive(Subcommand, Debug, Clone)]
pub enum SourceCmd {
    /// Analyze a family member instead of a spec file.
    Family {
        #[command(subcommand)]
        family: FamilyCmd,
    },
}

#[derive(Args, Debug)]
pub struct AnalyzeArgs {
    #[arg(long)]
    pub spec: Option<PathBuf>,
    #[command(subcommand)]
    pub source: Option<SourceCmd>,
    #[arg(long, default_value_t = 1000)]
    pub idoc_depth: u64,
    /// Longest interval cycle searched (default 2m).
    #[arg(long)]
    pub max_period: Option<usize>,
    #[arg(long, default_value_t = 1000)]
    pub max_pieces: usize,
    #[arg(long, default_value_t = 1000)]
    pub max_steps: usize,
    /// Return-time budget per piece for first-return maps (default 10⁴·m).
    #[arg(long)]
    pub return_budget: Option<u64>,
    /// Add Birkhoff statistics over this many steps.
    #[arg(long)]
    pub birkhoff_steps: Option<u64>,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    pub from: String,
    /// Also render the exchange to this SVG file.
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct OrbitArgs {
    #[arg(long)]
    pub spec: Option<PathBuf>,
    #[command(subcommand)]
    pub source: Option<SourceCmd>,
    #[arg(long, allow_hyphen_values = true)]
    pub from: String,
    /// Number of steps; negative values iterate the inverse.
    #[arg(long, allow_hyphen_values = true)]
    pub steps: i64,
    /// Also list every point of the orbit (at most 10⁵ steps).
    #[arg(long)]
    pub trajectory: bool,
}

#[derive(Args, Debug)]
pub struct InduceArgs {
    #[arg(long)]
    pub spec: Option<PathBuf>,
    #[command(subcommand)]
    pub source: Option<SourceCmd>,
    /// Base interval `u,v` for `[u, v)`.
    #[arg(long, allow_hyphen_values = true)]
    pub base: String,
    #[arg(long)]
    pub budget: Option<u64>,
}

#[derive(Args, Debug)]
pub struct RenderArgs {
    #[arg(long)]
    pub spec: Option<PathBuf>,
    #[command(subcommand)]
    pub source: Option<SourceCmd>,
    /// Output file; the SVG goes to stdout (or --out) when omitted.
    #[arg(long)]
    pub svg: Option<PathBuf>,
    #[arg(long)]
    pub no_labels: bool,
}

#[derive(Args, Debug)]
pub struct BirkhoffArgs {
    #[arg(long)]
    pub spec: Option<PathBuf>,
    #[command(subcommand)]
    pub source: Option<SourceCmd>,
    #[arg(long)]
    pub steps: u64,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    pub from: String,
    /// Test cells `lo,hi;lo,hi;...` (default: the intervals of T).
    #[arg(long, allow_hyphen_values = true)]
    pub cells: Option<String>,
    /// Runs longer than this use floating point.
    #[arg(long, default_value_t = 1_000_000)]
    pub float_threshold: u64,
}

#[derive(Args, Debug)]
pub struct ComposeArgs {
    /// The map applied second.
    #[arg(long)]
    pub left: PathBuf,
    /// The map applied first.
    #[arg(long)]
    pub right: PathBuf,
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct IdocArgs {
    #[arg(long)]
    pub spec: Option<PathBuf>,
    #[command(subcommand)]
    pub source: Option<SourceCmd>,
    #[arg(long, default_value_t = 1000)]
    pub depth: u64,
}

#[derive(Args, Debug)]
pub struct InvariantsArgs {
    #[arg(long)]
    pub spec: Option<PathBuf>,
    #[command(subcommand)]
    pub source: Option<SourceCmd>,
    #[arg(long, default_value_t = 1000)]
    pub max_pieces: usize,
    #[arg(long, default_value_t = 1000)]
    pub max_steps: usize,
}

/// What a command produced: text for stdout or `--out`, plus side files.
#[derive(Debug, Default)]
pub struct Output {
    pub main: Option<String>,
    pub files: Vec<(PathBuf, String)>,
}

/// Options shared by every command.
#[derive(Clone, Debug)]
pub struct Session {
    pub load: LoadOptions,
}

impl Session {
    pub fn new(cli: &Cli, precision_cap: Option<&str>) -> CliResult<Self> {
        let precision_cap = match precision_cap {
            Some(v) => Some(v.trim().parse::<u32>().ok().filter(|&c| c > 0).ok_or_else(|| {
                CliError::Semantic(format!("{PRECISION_CAP_VAR} must be a positive integer, got `{v}`"))
            })?),
            None => None,
        };
        Ok(Session {
            load: LoadOptions {
                alpha: cli.alpha.clone(),
                allow_rational: cli.allow_rational,
                precision_cap,
            },
        })
    }

    fn read(path: &Path) -> CliResult<String> {
        std::fs::read_to_string(path).map_err(|e| CliError::io(path.display(), e))
    }

    pub fn load_spec(&self, path: &Path) -> CliResult<Subject> {
        parse_spec(&Self::read(path)?, &self.load)
    }

    pub fn load_family(&self, family: &FamilyCmd) -> CliResult<Subject> {
        let Some(alpha) = &self.load.alpha else {
            return Err(CliError::Semantic("families need --alpha".into()));
        };
        let oracle = make_oracle(alpha, None, &self.load)?;
        let spec = match family {
            FamilyCmd::Thm14 { m } => FamilySpec::Thm14 { m: *m },
            FamilyCmd::Thm15 { n, sigma, chart } => FamilySpec::Thm15 {
                n: *n,
                sigma: sigma.clone(),
                chart: match chart {
                    ChartArg::Native => Chart::Native,
                    ChartArg::Unit => Chart::Unit,
                },
            },
            FamilyCmd::N2 => FamilySpec::N2,
            FamilyCmd::ConjRot { h } => FamilySpec::ConjRot {
                h: self.load_spec(h)?.iet,
            },
        };
        let instance = spec.build(oracle.clone())?;
        Ok(Subject {
            oracle,
            alpha_source: AlphaSource::Flag,
            iet: instance.iet.clone(),
            family: Some(instance),
        })
    }

    pub fn load(&self, spec: Option<&Path>, source: Option<&SourceCmd>) -> CliResult<Subject> {
        match (spec, source) {
            (Some(path), None) => self.load_spec(path),
            (None, Some(SourceCmd::Family { family })) => self.load_family(family),
            _ => Err(CliError::Semantic(
                "give exactly one of --spec FILE or a `family` subcommand".into(),
            )),
        }
    }
}

fn literal(text: &str, what: &str) -> CliResult<QAlpha> {
    text.parse().map_err(|e: LiteralError| CliError::Syntax {
        line: 1,
        col: e.position + 1,
        expected: format!("{} in {what} `{text}`", e.message),
    })
}

/// `u,v` as the interval `[u, v)`.
fn interval(text: &str, what: &str) -> CliResult<Interval> {
    let Some((lo, hi)) = text.split_once(',') else {
        return Err(CliError::Syntax {
            line: 1,
            col: text.len() + 1,
            expected: format!("`lo,hi` in {what} `{text}`"),
        });
    };
    Ok(Interval::new(literal(lo.trim(), what)?, literal(hi.trim(), what)?))
}

fn check_interval(subject: &Subject, iv: &Interval, what: &str) -> CliResult<()> {
    let o = subject.oracle.as_ref();
    let inside = o.is_positive(&iv.length())?
        && !o.is_positive(&-iv.lo.clone())?
        && !o.is_positive(&(&iv.hi - subject.iet.total_length()))?;
    if inside {
        Ok(())
    } else {
        Err(CliError::Semantic(format!(
            "{what} {iv} is not a non-empty subinterval of [0, {})",
            subject.iet.total_length()
        )))
    }
}

#[derive(Serialize)]
struct FamilyOutput {
    family: FamilyInfo,
    alpha: AlphaInfo,
    iet: IetSection,
    spec: String,
}

#[derive(Serialize)]
struct OrbitOutput {
    mode: &'static str,
    alpha: String,
    #[serde(flatten)]
    orbit: OrbitPoint,
    #[serde(skip_serializing_if = "Option::is_none")]
    trajectory: Option<Vec<String>>,
}

#[derive(Serialize)]
struct BranchOutput {
    piece: IntervalText,
    return_time: u64,
    translation: String,
    itinerary: Vec<usize>,
}

#[derive(Serialize)]
struct InduceOutput {
    mode: &'static str,
    base: IntervalText,
    branches: Vec<BranchOutput>,
    swept: String,
    max_return_time: u64,
    induced: IetDescription,
    induced_spec: String,
    rotation_angle: Option<String>,
}

#[derive(Serialize)]
struct ComposeOutput {
    mode: &'static str,
    iet: IetSection,
    spec: String,
}

#[derive(Serialize)]
struct IdocOutput {
    #[serde(flatten)]
    section: crate::report::IdocSection,
    drift_certificate: Option<DriftCertificate>,
}

#[derive(Serialize)]
struct InvariantsOutput {
    mode: &'static str,
    max_pieces: usize,
    max_steps: usize,
    witness: Option<UnionInfo>,
    exhausted_seeds: Vec<usize>,
    full_seeds: Vec<usize>,
}

const MAX_TRAJECTORY: u64 = 100_000;

pub fn execute(cli: &Cli, session: &Session) -> CliResult<Output> {
    let mut output = Output::default();
    match &cli.command {
        Command::Analyze(a) => {
            let subject = session.load(a.spec.as_deref(), a.source.as_ref())?;
            let birkhoff = match a.birkhoff_steps {
                Some(steps) => Some(BirkhoffRequest {
                    steps,
                    from: literal(&a.from, "--from")?,
                    cells: Vec::new(),
                    options: BirkhoffOptions::default(),
                }),
                None => None,
            };
            let options = AnalyzeOptions {
                budgets: Budgets {
                    idoc_depth: a.idoc_depth,
                    union_max_pieces: a.max_pieces,
                    union_max_steps: a.max_steps,
                    return_budget: a.return_budget,
                },
                max_period: a.max_period,
                birkhoff,
            };
            output.main = Some(to_json(&analyze(&subject, &options)?));
            if let Some(path) = &a.svg {
                output.files.push((path.clone(), render_svg(&subject.iet, &SvgOptions::default())));
            }
        }
        Command::Family { family, svg } => {
            let subject = session.load_family(family)?;
            let instance = subject.family.as_ref().expect("family subject");
            let out = FamilyOutput {
                family: FamilyInfo::new(instance),
                alpha: AlphaInfo::new(&subject.oracle, subject.alpha_source),
                iet: IetSection::new(&subject.iet),
                spec: serialize_spec(&subject.iet),
            };
            output.main = Some(to_json(&out));
            if let Some(path) = svg {
                output.files.push((path.clone(), render_svg(&subject.iet, &SvgOptions::default())));
            }
        }
        Command::Orbit(a) => {
            let subject = session.load(a.spec.as_deref(), a.source.as_ref())?;
            let x0 = literal(&a.from, "--from")?;
            let orbit = iterate(&subject.iet, &x0, a.steps, None)?;
            let trajectory = if a.trajectory {
                if a.steps < 0 || a.steps as u64 > MAX_TRAJECTORY {
                    return Err(CliError::Semantic(format!(
                        "--trajectory needs 0 <= steps <= {MAX_TRAJECTORY}"
                    )));
                }
                Some(
                    subject
                        .iet
                        .orbit(&x0)?
                        .take(a.steps as usize + 1)
                        .map(|x| x.map(|(point, _)| point.to_string()))
                        .collect::<Result<Vec<_>, _>>()?,
                )
            } else {
                None
            };
            output.main = Some(to_json(&OrbitOutput {
                mode: EXACT,
                alpha: subject.oracle.to_string(),
                orbit,
                trajectory,
            }));
        }
        Command::Induce(a) => {
            let subject = session.load(a.spec.as_deref(), a.source.as_ref())?;
            let base = interval(&a.base, "--base")?;
            check_interval(&subject, &base, "base")?;
            let rs = first_return(&subject.iet, &base, a.budget)?;
            output.main = Some(to_json(&InduceOutput {
                mode: EXACT,
                base: rs.base.to_strings(),
                branches: rs
                    .branches
                    .iter()
                    .map(|b| BranchOutput {
                        piece: b.piece.to_strings(),
                        return_time: b.return_time,
                        translation: b.translation.to_string(),
                        itinerary: b.itinerary.clone(),
                    })
                    .collect(),
                swept: rs.swept().to_string(),
                max_return_time: rs.max_return_time(),
                induced: rs.induced.describe(),
                induced_spec: serialize_spec(&rs.induced),
                rotation_angle: rotation_angle(&rs.induced).map(|a| a.to_string()),
            }));
        }
        Command::Render(a) => {
            let subject = session.load(a.spec.as_deref(), a.source.as_ref())?;
            let options = SvgOptions {
                labels: !a.no_labels,
                ..SvgOptions::default()
            };
            let svg = render_svg(&subject.iet, &options);
            match &a.svg {
                Some(path) => output.files.push((path.clone(), svg)),
                None => output.main = Some(svg),
            }
        }
        Command::Birkhoff(a) => {
            let subject = session.load(a.spec.as_deref(), a.source.as_ref())?;
            let t = &subject.iet;
            let cells = match &a.cells {
                Some(text) => text
                    .split(';')
                    .filter(|c| !c.trim().is_empty())
                    .map(|c| {
                        let iv = interval(c, "--cells")?;
                        check_interval(&subject, &iv, "cell")?;
                        Ok(iv)
                    })
                    .collect::<CliResult<Vec<_>>>()?,
                None => (1..=t.m()).map(|i| t.interval(i)).collect(),
            };
            let options = BirkhoffOptions {
                float_threshold: a.float_threshold,
            };
            let stats = birkhoff_discrepancy(t, &literal(&a.from, "--from")?, a.steps, &cells, options)?;
            output.main = Some(to_json(&stats));
        }
        Command::Compose(a) => {
            let left = session.load_spec(&a.left)?;
            let right = session.load_spec(&a.right)?;
            let t = compose(&left.iet, &right.iet)?;
            output.main = Some(to_json(&ComposeOutput {
                mode: EXACT,
                iet: IetSection::new(&t),
                spec: serialize_spec(&t),
            }));
            if let Some(path) = &a.svg {
                output.files.push((path.clone(), render_svg(&t, &SvgOptions::default())));
            }
        }
        Command::Idoc(a) => {
            let subject = session.load(a.spec.as_deref(), a.source.as_ref())?;
            let verdict = idoc_check(&subject.iet, a.depth)?;
            let drift = if subject.oracle.is_certified_irrational() {
                drift_certificate(&subject.iet)?
            } else {
                None
            };
            let verdict = match &drift {
                Some(c) if c.certified => ietforge::dynamics::IdocVerdict::Certified { certificate: c.clone() },
                _ => verdict,
            };
            output.main = Some(to_json(&IdocOutput {
                section: crate::report::IdocSection::new(a.depth, verdict),
                drift_certificate: drift,
            }));
        }
        Command::Invariants(a) => {
            let subject = session.load(a.spec.as_deref(), a.source.as_ref())?;
            let search = invariant_union_search(&subject.iet, a.max_pieces, a.max_steps)?;
            output.main = Some(to_json(&InvariantsOutput {
                mode: EXACT,
                max_pieces: a.max_pieces,
                max_steps: a.max_steps,
                witness: search.witness.as_ref().map(UnionInfo::new),
                exhausted_seeds: search.exhausted_seeds,
                full_seeds: search.full_seeds,
            }));
        }
    }
    Ok(output)
}

/// Writes `contents` to `path` through a temporary file in the same
/// directory, so readers never see a partial file.
pub fn write_atomically(path: &Path, contents: &str) -> CliResult<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    std::fs::write(&tmp, contents).map_err(|e| CliError::io(tmp.display(), e))?;
    std::fs::rename(&tmp, path).map_err(|e| CliError::io(path.display(), e))
}

/// Parses arguments, runs the command and returns the exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let cap = std::env::var(PRECISION_CAP_VAR).ok();
    let result = Session::new(&cli, cap.as_deref()).and_then(|session| {
        let output = execute(&cli, &session)?;
        // everything is computed before anything is written
        for (path, contents) in &output.files {
            write_atomically(path, contents)?;
        }
        if let Some(main) = &output.main {
            match &cli.out {
                Some(path) => write_atomically(path, main)?,
                None => print!("{main}"),
            }
        }
        Ok(())
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error[{}]: {e}", e.code());
            e.exit_code()
        }
    }
}
