use thiserror::Error;

/// Errors raised by the engine and its supporting modules.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: tables over {left} and {right} items")]
    DimensionMismatch { left: usize, right: usize },

    #[error("{what} = {value} is out of range ({allowed})")]
    OutOfRange {
        what: &'static str,
        value: String,
        allowed: String,
    },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("scale_bits = {given} cannot represent the table's dynamic range; at least {required} bits are required")]
    Precision { given: u32, required: u32 },

    #[error("the evidence is zero: every partition cardinality has zero posterior weight")]
    EvidenceZero,

    #[error("model/data mismatch: {0}")]
    ModelMismatch(String),

    #[error("parse error at row {row}, column {column}: {message}")]
    Parse {
        row: usize,
        column: usize,
        message: String,
    },

    #[error("i/o error: {0}")]
    Io(String),

    #[error("internal consistency error: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn out_of_range(
        what: &'static str,
        value: impl ToString,
        allowed: impl ToString,
    ) -> Self {
        Error::OutOfRange {
            what,
            value: value.to_string(),
            allowed: allowed.to_string(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
