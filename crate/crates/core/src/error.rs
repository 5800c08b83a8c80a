use std::path::PathBuf;

use thiserror::Error;

use crate::matcore::MatError;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Matrix(#[from] MatError),

    #[error("invalid exponent {0}: must be a number in [1, inf]")]
    InvalidExponent(String),

    #[error("exponent p = {p} outside the admissible range {range}")]
    ExponentOutOfRange { p: String, range: &'static str },

    #[error("incompatible exponents: {0}")]
    IncompatibleExponents(String),

    #[error("invalid dual model: {0}")]
    InvalidModel(String),

    #[error("fields live on different dual models ({left} vs {right})")]
    ModelMismatch { left: String, right: String },

    #[error("invalid field: {0}")]
    InvalidField(String),

    #[error("operation needs a non-zero field")]
    ZeroField,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{n} fields exceed the enumeration limit of {max}")]
    TooManyFields { n: usize, max: usize },

    #[error("norm {norm} of entry {index} lies outside (0, 2]")]
    NormOutOfRange { index: usize, norm: f64 },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for errors caused by bad user input rather than numerics.
    pub fn is_config(&self) -> bool {
        matches!(
            self,
            Error::Config(_)
                | Error::InvalidModel(_)
                | Error::InvalidExponent(_)
                | Error::InvalidField(_)
                | Error::InvalidParameter(_)
                | Error::Json(_)
                | Error::Csv(_)
                | Error::Io { .. }
        )
    }
}
