use thiserror::Error;

/// Errors raised by the exact IET machinery.
///
/// Mathematical findings (non-minimality, failed idoc, missing eigen
/// structure) are values, never errors. Everything here is a tool-level
/// failure: bad input, an undecidable comparison or an exhausted budget.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("precision exhausted after {rounds} refinement rounds while deciding the sign of {value}")]
    PrecisionExhausted { value: String, rounds: u32 },

    #[error("cannot compare {value}: the oracle for alpha is not certified irrational")]
    IrrationalityUnknown { value: String },

    #[error("invalid alpha oracle: {0}")]
    InvalidOracle(String),

    #[error("interval {index} has non-positive length {length}")]
    NonPositiveLength { index: usize, length: String },

    #[error("operands use different irrationals ({left} vs {right})")]
    MixedIrrationals { left: String, right: String },

    #[error("point {point} lies outside the domain [0, {length})")]
    OutOfDomain { point: String, length: String },

    #[error("length mismatch: {0}")]
    LengthMismatch(String),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("pieces do not tile the domain: {0}")]
    NotABijection(String),

    #[error("affine eigen relation fails on interval {index}: {detail}")]
    VerificationFailed { index: usize, detail: String },

    #[error("budget exhausted: {0}")]
    BudgetExhausted(String),

    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(String),

    #[error("no return to the base within {budget} steps for subinterval [{lo}, {hi})")]
    NoReturnWithinBudget { lo: String, hi: String, budget: u64 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
