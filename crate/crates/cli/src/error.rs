use std::fmt;

/// Failures of the command-line tool. Mathematical findings are never
/// errors; these are malformed input, undecidable comparisons, exhausted
/// budgets and I/O problems.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    /// Malformed spec text or literal; line and column are 1-based.
    Syntax { line: usize, col: usize, expected: String },
    /// Well-formed input that does not describe a valid object.
    Semantic(String),
    /// A failure reported by the exact machinery.
    Tool(ietforge::Error),
    Io { path: String, message: String },
}

impl CliError {
    /// Process exit status: 2 for syntax errors, 3 for semantic errors,
    /// 4 for computation failures, 5 for I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Syntax { .. } => 2,
            CliError::Semantic(_) => 3,
            CliError::Tool(_) => 4,
            CliError::Io { .. } => 5,
        }
    }

    /// Stable diagnostic code.
    pub fn code(&self) -> &'static str {
        use ietforge::Error as E;
        match self {
            CliError::Syntax { .. } => "syntax-error",
            CliError::Semantic(_) => "semantic-error",
            CliError::Io { .. } => "io-error",
            CliError::Tool(e) => match e {
                E::PrecisionExhausted { .. } => "precision-exhausted",
                E::IrrationalityUnknown { .. } => "irrationality-unknown",
                E::InvalidOracle(_) => "invalid-oracle",
                E::NonPositiveLength { .. } => "non-positive-length",
                E::MixedIrrationals { .. } => "mixed-irrationals",
                E::OutOfDomain { .. } => "out-of-domain",
                E::LengthMismatch(_) => "length-mismatch",
                E::InvalidPermutation(_) => "invalid-permutation",
                E::NotABijection(_) => "not-a-bijection",
                E::VerificationFailed { .. } => "verification-failed",
                E::BudgetExhausted(_) => "budget-exhausted",
                E::ParameterOutOfRange(_) => "parameter-out-of-range",
                E::NoReturnWithinBudget { .. } => "no-return-within-budget",
            },
        }
    }

    pub fn io(path: impl fmt::Display, err: impl fmt::Display) -> Self {
        CliError::Io {
            path: path.to_string(),
            message: err.to_string(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Syntax { line, col, expected } => write!(f, "{line}:{col}: expected {expected}"),
            CliError::Semantic(m) => f.write_str(m),
            CliError::Tool(e) => write!(f, "{e}"),
            CliError::Io { path, message } => write!(f, "{path}: {message}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<ietforge::Error> for CliError {
    fn from(e: ietforge::Error) -> Self {
        use ietforge::Error as E;
        match e {
            // construction failures describe the input, not the computation
            E::NonPositiveLength { .. }
            | E::LengthMismatch(_)
            | E::InvalidPermutation(_)
            | E::NotABijection(_)
            | E::MixedIrrationals { .. }
            | E::InvalidOracle(_)
            | E::ParameterOutOfRange(_)
            | E::OutOfDomain { .. } => CliError::Semantic(e.to_string()),
            other => CliError::Tool(other),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
