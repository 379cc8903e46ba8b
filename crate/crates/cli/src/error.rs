use specflow_core::SpecflowError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid job: {0}")]
    InvalidJob(String),
    #[error("certification failed: {0}")]
    Certification(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::InvalidJob(_) => 3,
            CliError::Certification(_) => 2,
            CliError::Io(_) => 1,
        }
    }
}

impl From<SpecflowError> for CliError {
    fn from(e: SpecflowError) -> Self {
        match e {
            SpecflowError::CannotCertify { .. }
            | SpecflowError::UncertifiedPartition(_)
            | SpecflowError::BoundaryOnSpectrum { .. }
            | SpecflowError::NoConvergence(_) => CliError::Certification(e.to_string()),
            _ => CliError::InvalidJob(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}
