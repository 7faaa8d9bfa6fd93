use thiserror::Error;

/// Errors raised across the crate. Each variant maps onto a distinct CLI
/// exit code (see [`Error::exit_code`]).
#[derive(Debug, Error)]
pub enum Error {
    /// Input outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A documented precondition does not hold.
    #[error("precondition failed: {0}")]
    Precondition(String),

    /// Part set has a common divisor > 1, so the dominant pole is not unique.
    #[error("part set {parts:?} has gcd {gcd} > 1; the asymptotic formula needs gcd 1")]
    Aperiodic { parts: Vec<u64>, gcd: u64 },

    /// The equation has no solution in the requested range.
    #[error("no root: {0}")]
    NoRoot(String),

    #[error(
        "could not reach tolerance {target:e} at {bits} bits of working precision \
         (stalled at width {reached:e}); increase the precision"
    )]
    PrecisionUnreachable { target: f64, reached: f64, bits: u32 },

    /// A size or memory cap was hit.
    #[error("resource limit: {0}")]
    ResourceLimit(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    /// An asserted invariant failed; indicates a bug.
    #[error("invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::Precondition(_) => "precondition",
            Error::Aperiodic { .. } => "aperiodic",
            Error::NoRoot(_) => "no_root",
            Error::PrecisionUnreachable { .. } => "precision_unreachable",
            Error::ResourceLimit(_) => "resource_limit",
            Error::InvalidConfig(_) => "invalid_config",
            Error::Parse(_) => "parse",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
            Error::Invariant(_) => "invariant",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidConfig(_) | Error::Parse(_) => 2,
            Error::PrecisionUnreachable { .. } => 3,
            Error::ResourceLimit(_) => 4,
            Error::Domain(_)
            | Error::Precondition(_)
            | Error::Aperiodic { .. }
            | Error::NoRoot(_) => 5,
            Error::Io(_) | Error::Json(_) => 6,
            Error::Invariant(_) => 70,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
