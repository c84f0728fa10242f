use std::path::PathBuf;

use thiserror::Error;

use crate::constants::Dimension;
use crate::models::ModelKind;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid {name} = {value:e}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("operation requires a {expected} model, got {found}")]
    WrongModel {
        expected: ModelKind,
        found: ModelKind,
    },

    #[error("cannot {op} quantities of dimension {left} and {right}")]
    DimensionMismatch {
        op: &'static str,
        left: Dimension,
        right: Dimension,
    },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("quadrature did not converge: achieved error {achieved:e}, requested {requested:e}")]
    QuadratureNotConverged { achieved: f64, requested: f64 },

    #[error("simulation aborted at t = {time}: {reason}")]
    Simulation { time: f64, reason: String },

    #[error("heating series is not linear (R^2 = {r_squared})")]
    NonlinearHeating { r_squared: f64 },

    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },

    #[error("{0}")]
    Validation(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub(crate) fn require_positive(name: &'static str, value: f64) -> Result<f64> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be finite and strictly positive",
        })
    }
}

pub(crate) fn require_non_negative(name: &'static str, value: f64) -> Result<f64> {
    if value >= 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be finite and non-negative",
        })
    }
}
