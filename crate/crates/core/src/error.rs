use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: String, found: String },

    #[error("loop is not invertible: {0}")]
    NotInvertible(String),

    #[error("pole: {0}")]
    Pole(String),

    #[error("could not find a pole-free sample after {attempts} attempts")]
    PoleDense { attempts: usize },

    #[error("arity: {0}")]
    Arity(String),

    #[error("domain: {0}")]
    Domain(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("antiderivative not supported: {0}")]
    UnsupportedAntiderivative(String),

    #[error("point lies outside the open Iwasawa cell: {0}")]
    IwasawaCell(String),

    #[error("loop lies outside the big Birkhoff cell: {0}")]
    BirkhoffCell(String),

    #[error("chart: {0}")]
    Chart(String),

    #[error("stencil: {0}")]
    Stencil(String),

    #[error("pairing: {0}")]
    Pairing(String),

    #[error("parse: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn dim(expected: impl ToString, found: impl ToString) -> Self {
        Error::Dimension {
            expected: expected.to_string(),
            found: found.to_string(),
        }
    }
}
