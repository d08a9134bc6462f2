use thiserror::Error;

/// Errors raised anywhere in the workbench.
#[derive(Debug, Error)]
pub enum Error {
    #[error("composition requires an inner series with zero constant term")]
    NonzeroConstantTerm,

    #[error("reversion requires h(0) = 0 and an invertible linear coefficient")]
    NotReversible,

    #[error("series is not invertible: constant term is zero")]
    NotInvertible,

    #[error("fixed-point iteration made no progress at order {order}")]
    Divergence { order: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unknown scheme id {0} (expected 1..=8)")]
    UnknownScheme(u8),

    #[error("unknown family `{0}`")]
    UnknownFamily(String),

    #[error("fixture `{family}` rejected: {reason}")]
    FixtureInvalid { family: String, reason: String },

    #[error("convention error in scheme {scheme}: {reason}")]
    Convention { scheme: u8, reason: String },

    #[error("oracle cap exceeded: size {requested} > {cap}")]
    OracleCap { requested: usize, cap: usize },

    #[error("singularity estimate did not stabilise; increase N (currently {order})")]
    IncreaseOrder { order: usize },

    #[error("inconsistent singularity solve: {0}")]
    InconsistentSingularity(String),

    #[error("critical-point bracket failure: {0}")]
    Bracket(String),

    #[error("coefficient stride handling failed: {0}")]
    Stride(String),

    #[error("sampler refused: {0}")]
    Sampler(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
