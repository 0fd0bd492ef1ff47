use thiserror::Error;

/// Errors raised by the library. Divergent integrals are not errors; they are
/// reported through [`crate::quadrature::Status`].
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("radius {r} is outside the domain [{lo}, {hi}]")]
    Domain { r: f64, lo: f64, hi: f64 },

    /// m vanishes inside the window, so the spec does not define a plane.
    #[error("m vanishes at r = {first_zero}: the curvature does not define a complete plane")]
    StarViolation { first_zero: f64 },

    #[error("curvature is not non-increasing (first violation near r = {first_violation})")]
    NotVonMangoldt { first_violation: f64 },

    /// The turn angle is within its own error estimate of pi.
    #[error("undetermined: turn angle {value} is within {abs_error} of pi")]
    Undetermined { value: f64, abs_error: f64 },

    /// kappa = pi launches run through the origin and have no turn-angle integral.
    #[error("the geodesic runs through the origin; its turn angle is not defined by the integral")]
    ThroughOrigin,

    #[error("window too small: {0}")]
    WindowLimited(String),

    #[error("construction failed: {0}")]
    Construction(String),

    #[error("integration failed: {0}")]
    Integration(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Io(e.to_string())
    }
}
