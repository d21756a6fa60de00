//! Crate-wide error type and process exit-code mapping.

/// Errors produced by model construction, numerics, the solver, and config
/// ingestion. Inequality violations are *not* errors: checks report them as
/// data in a [`crate::bounds::CheckReport`].
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("unsupported operation: {0}")]
    Unsupported(String),

    /// The piecewise conductivity has kinks at `Z1`, `Z2`; the two-sided
    /// derivative does not exist there.
    #[error("derivative undefined at kink xi = {xi}; request a one-sided value instead")]
    Kink { xi: f64 },

    #[error("root finding did not converge after {iters} iterations; last bracket [{lo:e}, {hi:e}]")]
    NonConvergence { iters: usize, lo: f64, hi: f64 },

    #[error("quadrature tolerance not met on [{a:e}, {b:e}]")]
    Quadrature { a: f64, b: f64 },

    #[error("shape error: {0}")]
    Shape(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("step rejected: requested dt = {requested:e} exceeds admissible dt = {admissible:e}")]
    CflViolation { requested: f64, admissible: f64 },

    #[error("Picard iteration did not converge after {iters} iterations (last update {last_update:e})")]
    PicardNonConvergence { iters: usize, last_update: f64 },

    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    /// Process exit code: 2 for configuration problems, 3 for numeric
    /// failures, 1 otherwise (assertion-level failures are mapped by the
    /// CLI itself).
    pub fn exit_code(&self) -> u8 {
        match self {
            Error::Config(_) | Error::Shape(_) => 2,
            Error::NonConvergence { .. }
            | Error::Quadrature { .. }
            | Error::CflViolation { .. }
            | Error::PicardNonConvergence { .. } => 3,
            _ => 1,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
