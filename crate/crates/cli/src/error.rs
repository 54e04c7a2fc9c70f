use std::fmt::Display;

use tsfrac::{Error, ExprError};

/// A failed run. Configuration problems exit with 2, numeric failures with 1.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Numeric(String),
}

impl CliError {
    pub fn config(message: impl Into<String>) -> Self {
        CliError::Config(message.into())
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numeric(_) => 1,
        }
    }
}

fn is_config(e: &Error) -> bool {
    match e {
        Error::Expr(x) => !matches!(x, ExprError::Domain { .. } | ExprError::NonFinite { .. }),
        Error::EmptyTimeScale
        | Error::InvalidPiece(_)
        | Error::InvalidDescriptor(_)
        | Error::PointNotInScale { .. }
        | Error::NotInKappa { .. }
        | Error::InvalidQuadrature(_)
        | Error::InvalidOrder { .. }
        | Error::NonMonotoneWeight { .. }
        | Error::ZeroWeightDerivative { .. }
        | Error::InvalidArgument { .. } => true,
        _ => false,
    }
}

pub trait Context<T> {
    /// Attaches the offending input to a library error.
    fn at(self, what: impl Display) -> Result<T, CliError>;
}

impl<T> Context<T> for Result<T, Error> {
    fn at(self, what: impl Display) -> Result<T, CliError> {
        self.map_err(|e| {
            let message = format!("{e} ({what})");
            if is_config(&e) {
                CliError::Config(message)
            } else {
                CliError::Numeric(message)
            }
        })
    }
}
