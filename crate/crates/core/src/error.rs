use std::path::PathBuf;

use thiserror::Error;

/// Errors raised across the simulator.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    Parameter { name: &'static str, reason: String },

    #[error("unknown disease preset `{0}` (valid presets: covid19, sars, h1n1, ebola, measles)")]
    UnknownPreset(String),

    #[error("threat basis `{0}` requires random-testing counters, but this run recorded none")]
    MissingRandomTesting(&'static str),

    #[error("config error at line {line}: {reason}")]
    Config { line: usize, reason: String },

    #[error("malformed network file {path}: {reason}")]
    NetworkFormat { path: PathBuf, reason: String },

    #[error("malformed trajectory file {path}: {reason}")]
    TrajectoryFormat { path: PathBuf, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::Parameter {
            name,
            reason: reason.into(),
        }
    }
}

/// Rejects NaN, infinities and negative values.
pub(crate) fn check_rate(name: &'static str, value: f64) -> Result<()> {
    if !value.is_finite() || value < 0.0 {
        return Err(Error::param(name, format!("must be finite and >= 0, got {value}")));
    }
    Ok(())
}

pub(crate) fn check_probability(name: &'static str, value: f64) -> Result<()> {
    if !value.is_finite() || !(0.0..=1.0).contains(&value) {
        return Err(Error::param(name, format!("must lie in [0, 1], got {value}")));
    }
    Ok(())
}
