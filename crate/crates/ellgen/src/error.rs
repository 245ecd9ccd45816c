use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("exponent off grid: {0}")]
    Grid(String),
    #[error("window error: {0}")]
    Window(String),
    #[error("leading coefficient is not a unit: {0}")]
    NotInvertible(String),
    #[error("pole at evaluation point: {0}")]
    PoleAtEvaluation(String),
    #[error("division not exact: {0}")]
    NotDivisible(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("validation error: {0}")]
    Validation(String),
    #[error("unsupported input: {0}")]
    Unsupported(String),
    #[error("fan not complete: {0}")]
    NotComplete(String),
    #[error("fan not Gorenstein: {0}")]
    NotGorenstein(String),
    #[error("polytope not reflexive: {0}")]
    NotReflexive(String),
    #[error("m-enumeration did not stabilize: {0}")]
    StabilizationFailure(String),
    #[error("mismatch: {0}")]
    Mismatch(String),
    #[error("evaluation point too close to a theta zero: {0}")]
    NearSingular(String),
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error("not in the span of the basis: {0}")]
    Inconsistent(String),
    #[error("not enough data to determine coefficients: {0}")]
    UnderDetermined(String),
    #[error("q^0 slice not palindromic: {0}")]
    PalindromyFailure(String),
    #[error("no kernel in dimension {0}")]
    NoKernel(usize),
    #[error("bijection check failed at {0}")]
    BijectionFailure(String),
}

pub type Result<T> = std::result::Result<T, Error>;
