//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by the workbench.
#[derive(Debug, Error)]
pub enum Error {
    /// An operation that needs a sample rate was given a signal without one.
    #[error("signal has no sample rate")]
    MissingSampleRate,

    /// Two sequences that must have equal length do not.
    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    /// A numeric parameter is outside its valid range.
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// A filter design request cannot be satisfied.
    #[error("filter design: {0}")]
    Design(String),

    /// A DFT-property rule has no closed form for the given length.
    #[error("unsupported rule: {0}")]
    UnsupportedRule(String),

    /// The input carries no usable structure (all-zero, constant, ...).
    #[error("degenerate signal: {0}")]
    DegenerateSignal(String),

    /// No spectral peak above the noise floor.
    #[error("no spectral peak found")]
    NoPeak,

    /// Too few autocorrelation zero crossings to estimate a period.
    #[error("insufficient periodicity: found {found} zero crossings, need at least 3")]
    InsufficientPeriodicity { found: usize },

    /// Two spectral impulses coincide; their product diverges.
    #[error("divergent product: impulses coincide at omega = {omega}")]
    DivergentProduct { omega: String },

    /// Text input (CSV, quiz sheet, manifest) failed to parse.
    #[error("parse error at {path}:{line}: {msg}")]
    Parse {
        path: String,
        line: usize,
        msg: String,
    },

    /// A WAV container is malformed.
    #[error("malformed wav ({path}, byte {offset}): {msg}")]
    Wav {
        path: String,
        offset: u64,
        msg: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
