//! Scene files, output formats and reference scenarios behind the
//! `minkprod` binary.

pub mod output;
pub mod scene;
pub mod verify;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Verify(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Verify(_) => 1,
            CliError::Input(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

impl From<minkprod::Error> for CliError {
    fn from(e: minkprod::Error) -> Self {
        match e {
            minkprod::Error::InternalInconsistency(_) | minkprod::Error::NumericalFailure => {
                CliError::Verify(e.to_string())
            }
            _ => CliError::Input(e.to_string()),
        }
    }
}
