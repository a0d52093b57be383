use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Coarse classification used by front ends to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorCategory {
    Config,
    Solver,
    Domain,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension must be at least 3, got {0}")]
    Dimension(i64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("r = {r} is outside the sampled range [{min}, {max}]")]
    OutOfRange { r: f64, min: f64, max: f64 },

    #[error("region [{lo}, {hi}] contains no grid node")]
    EmptyRegion { lo: f64, hi: f64 },

    #[error("domain violation: {0}")]
    Domain(String),

    #[error("domain too large: positivity lost at r = {r} after {nodes} nodes")]
    DomainTooLarge { r: f64, nodes: usize },

    #[error("step instability (non-finite state) at r = {r}")]
    StepInstability { r: f64 },

    #[error("reflection about {lambda} leaves the grid: needs t_min <= {required}, have {t_min}")]
    ReflectionOutOfGrid { lambda: f64, required: f64, t_min: f64 },

    #[error("no admissible plane found while scanning lambda from {from} down to {to}")]
    NoAdmissiblePlane { from: f64, to: f64 },

    #[error("operation requires n = 4, got n = {0}")]
    RequiresDimensionFour(u32),
}

impl Error {
    pub fn category(&self) -> ErrorCategory {
        match self {
            Error::Dimension(_) | Error::InvalidParameter(_) | Error::InvalidGrid(_) => ErrorCategory::Config,
            Error::DomainTooLarge { .. } | Error::StepInstability { .. } => ErrorCategory::Solver,
            _ => ErrorCategory::Domain,
        }
    }
}
