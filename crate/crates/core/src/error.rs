use thiserror::Error;

/// Errors shared across the toolkit.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("index out of range: {0}")]
    OutOfRange(String),
    #[error("root finding did not converge (residual {residual:e} after {iterations} iterations)")]
    RootsDidNotConverge { residual: f64, iterations: usize },
    #[error("cross-check failed: {0}")]
    CrossCheckFailed(String),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("term budget exceeded: {terms} terms (budget {budget}) at step {step}")]
    TermBudgetExceeded {
        terms: usize,
        budget: usize,
        step: usize,
    },
    #[error("form budget exceeded: {forms} forms (budget {budget})")]
    FormBudgetExceeded { forms: usize, budget: usize },
    #[error("expression is not subtraction-free: {0}")]
    NotSubtractionFree(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
