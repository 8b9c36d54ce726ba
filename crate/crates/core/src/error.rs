use thiserror::Error;

use crate::geometry::Point;

/// Errors produced by the wavespin library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An input failed validation; `field` names the offending parameter.
    #[error("invalid {field}: {reason}")]
    Validation { field: &'static str, reason: String },

    /// A point lies outside the domain an operation is defined on.
    #[error("point ({x:e}, {y:e}) m lies outside {domain}")]
    Domain { x: f64, y: f64, domain: &'static str },

    /// Inconsistent numerical configuration (step sizes, grid resolution).
    #[error("configuration error: {0}")]
    Config(String),

    /// An integrand or field sample evaluated to a non-finite number.
    #[error("non-finite sample {value} at ({x:e}, {y:e}) m")]
    NonFinite { value: f64, x: f64, y: f64 },
}

impl Error {
    pub(crate) fn validation(field: &'static str, reason: impl Into<String>) -> Self {
        Error::Validation {
            field,
            reason: reason.into(),
        }
    }

    pub(crate) fn domain(p: Point, domain: &'static str) -> Self {
        Error::Domain {
            x: p.x,
            y: p.y,
            domain,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
