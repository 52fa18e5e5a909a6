use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the library and the experiment harness.
#[derive(Debug, Error)]
pub enum Error {
    /// An amplitude, threshold or sample value was NaN or infinite.
    #[error("invalid input: non-finite value {0}")]
    NonFinite(f64),

    /// A sequence was shorter than an operation requires.
    #[error("sequence of length {len} is too short for an order-{order} difference")]
    InsufficientLength { len: usize, order: usize },

    /// A configuration value violated its invariant.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// The sampling step is too coarse for the order-selection rule:
    /// T * omega * e must be < 1 for the difference order to be finite.
    #[error("oversampling insufficient: T*omega*e = {product} >= 1")]
    OversamplingInsufficient { product: f64 },

    /// Not enough samples to expose the indices the recovery loop reads.
    #[error("window too short: got {len} samples, need at least {required}")]
    WindowTooShort { len: usize, required: usize },

    /// Two sequences that must agree in length did not.
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    /// The amplitude bound beta_g must be a positive integer multiple of 2*lambda.
    #[error("amplitude bound {beta_g} is not a positive multiple of 2*lambda = {two_lambda}")]
    BetaNotOnGrid { beta_g: f64, two_lambda: f64 },

    /// File I/O failure, with the path that caused it.
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// Process exit code for the CLI: 1 for configuration errors, 2 for I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io { .. } => 2,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
