use thiserror::Error;

/// Failure classes, one per process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("check failed: {0}")]
    Check(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Check(_) => 1,
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }

    /// Errors raised while computing: truncation and inversion problems are
    /// numerical, everything else points back at the input.
    pub fn from_engine(e: nctorus::Error) -> Self {
        use nctorus::Error as E;
        match e {
            E::TruncationBudget { .. }
            | E::MetricInversionFailed { .. }
            | E::NotInvertible(_)
            | E::SupportOverflow { .. } => CliError::Numerical(e.to_string()),
            _ => CliError::Config(e.to_string()),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
