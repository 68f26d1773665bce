use thiserror::Error;

/// Failures raised by the library.
///
/// Reports that are values (validator verdicts, inconsistent systems,
/// precondition-not-met) are not errors; only conditions that stop a
/// computation end up here.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("budget exceeded for {what}: needs {required}, limit is {limit}")]
    BudgetExceeded {
        what: &'static str,
        required: u128,
        limit: u128,
    },
    #[error("check failed: {0}")]
    CheckFailed(String),
    #[error("invalid input: {0}")]
    Input(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("subspace is not invariant under the action")]
    NotInvariant,
    #[error("unsupported class: {0}")]
    ClassUnsupported(String),
    #[error("chain is not strictly ascending at position {0}")]
    ChainNotAscending(usize),
    #[error("chain member {0} is not a direct summand")]
    NotASummand(usize),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn budget(what: &'static str, required: u128, limit: u64) -> Error {
    Error::BudgetExceeded {
        what,
        required,
        limit: limit as u128,
    }
}
