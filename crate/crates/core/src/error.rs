//! Crate-level error with a coarse classification used for exit codes.

use thiserror::Error;

use crate::classify::ClassifyError;
use crate::eisenstein::EisError;
use crate::ext_arith::ExtError;
use crate::local_field::KError;
use crate::reduce::ReduceError;
use crate::residue_field::RfError;
use crate::standard_form::SfError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorKind {
    /// Malformed or mathematically invalid input.
    Validation,
    /// The working precision does not determine the answer.
    Precision,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Residue(#[from] RfError),
    #[error(transparent)]
    Local(#[from] KError),
    #[error(transparent)]
    Eisenstein(#[from] EisError),
    #[error(transparent)]
    Extension(#[from] ExtError),
    #[error(transparent)]
    StandardForm(#[from] SfError),
    #[error(transparent)]
    Reduce(#[from] ReduceError),
    #[error(transparent)]
    Classify(#[from] ClassifyError),
    #[error("{0}")]
    Format(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        let precision = match self {
            Error::Eisenstein(e) => matches!(e, EisError::InsufficientPrecision { .. }),
            Error::Extension(ExtError::NotEisensteinResult(e)) => matches!(e, EisError::InsufficientPrecision { .. }),
            Error::Reduce(e) => e.is_precision(),
            _ => false,
        };
        if precision {
            ErrorKind::Precision
        } else {
            ErrorKind::Validation
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Format(e.to_string())
    }
}
