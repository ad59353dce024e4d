use thiserror::Error;

/// Errors raised by the numerical kernels, filters and experiment runner.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("singular matrix: {0}")]
    Singular(String),

    #[error("degenerate denominator {value:e} (guard {guard:e})")]
    DegenerateDenominator { value: f64, guard: f64 },

    #[error("non-generic TLS problem: last minor-eigenvector entry {0:e} is too small")]
    NonGenericTls(f64),

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("asymptotic moments diverge for lambda = 1")]
    DivergentMoments,

    #[error("eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    NotConverged { sweeps: usize, off_norm: f64 },

    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_len(what: &str, got: usize, want: usize) -> Result<()> {
    if got != want {
        return Err(Error::InvalidInput(format!(
            "{what} has length {got}, expected {want}"
        )));
    }
    Ok(())
}
