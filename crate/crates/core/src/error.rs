use thiserror::Error;

/// Errors produced by the projection routines and their oracles.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("length mismatch: expected {expected} entries, got {actual} for `{what}`")]
    ShapeMismatch {
        what: &'static str,
        expected: usize,
        actual: usize,
    },

    #[error("input vector is empty")]
    Empty,

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid norm budget {0}: must be a nonnegative number")]
    InvalidBudget(f64),

    #[error("infeasible problem: minimal attainable norm {min_norm} exceeds budget {budget}")]
    Infeasible { min_norm: f64, budget: f64 },

    #[error("rank {k} out of range for slice of length {len}")]
    Rank { k: usize, len: usize },

    #[error("problem size {n} exceeds the brute-force limit of {max}")]
    TooLarge { n: usize, max: usize },

    #[error("dual-infeasible multiplier at index {index}: |mu| = {mu} > lambda = {lambda}")]
    DualInfeasible { index: usize, mu: f64, lambda: f64 },

    #[error("objective diverged at iteration {iteration}: {value}")]
    Diverged { iteration: usize, value: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_len(what: &'static str, expected: usize, actual: usize) -> Result<()> {
    if expected != actual {
        return Err(Error::ShapeMismatch {
            what,
            expected,
            actual,
        });
    }
    Ok(())
}

pub(crate) fn check_no_nan(what: &str, values: &[f64]) -> Result<()> {
    if let Some(i) = values.iter().position(|x| x.is_nan()) {
        return Err(Error::InvalidInput(format!("NaN in `{what}` at index {i}")));
    }
    Ok(())
}
