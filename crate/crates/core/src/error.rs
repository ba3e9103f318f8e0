use thiserror::Error;

/// Errors raised by the library.
///
/// Variants that signal a broken mathematical expectation (`Falsified`,
/// `Normalization`, `PeriodBridge`) are kept apart from plain input errors so
/// callers can map them to distinct exit codes.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("singular model: discriminant is zero")]
    Singular,
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("unknown curve label `{0}`")]
    UnknownLabel(String),
    #[error("capacity exceeded: {0}")]
    Capacity(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("torsion confirmation failed: {0}")]
    TorsionConfirmation(String),
    #[error("eigenspace ambiguous at pmax={pmax} (dimension {dim}); raise pmax")]
    AmbiguousEigenspace { pmax: u64, dim: usize },
    #[error("curve not found at level {0}")]
    CurveNotFound(u64),
    #[error("normalization failure: {0}")]
    Normalization(String),
    #[error("period bridge failure: ratio {ratio} is not a signed power of 2")]
    PeriodBridge { ratio: f64 },
    #[error("local solubility undecided at {place} with precision {precision}")]
    Undecided { place: String, precision: u32 },
    #[error("insufficient series terms: need about {required}, have {given}")]
    InsufficientTerms { required: u64, given: u64 },
    #[error("falsified: {0}")]
    Falsified(String),
    #[error("cache: {0}")]
    Cache(String),
}

pub type Result<T> = std::result::Result<T, Error>;
