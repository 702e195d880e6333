use thiserror::Error;

/// Errors raised by the library. Every variant is a domain error: the
/// message names the invariant or precondition that was violated.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error(
        "matrix is not Hermitian: max |A_ij - conj(A_ji)| = {residual:.3e} exceeds {allowed:.3e}"
    )]
    NotHermitian { residual: f64, allowed: f64 },

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("observable norm {norm:.12} exceeds 1 (operator norm must be <= 1)")]
    NormExceeded { norm: f64 },

    #[error("{name} = {value} is outside [{lo}, {hi}]")]
    OutOfRange {
        name: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error(
        "extended CHSH coefficients {coefficients:?} satisfy none of the relations: {failures}"
    )]
    Coefficients {
        coefficients: [f64; 4],
        failures: String,
    },

    #[error("unknown {kind} '{name}'")]
    Unknown { kind: &'static str, name: String },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_unit_interval(name: &'static str, value: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&value) {
        return Err(Error::OutOfRange {
            name,
            value,
            lo: 0.0,
            hi: 1.0,
        });
    }
    Ok(())
}
