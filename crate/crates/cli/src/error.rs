use thiserror::Error;

/// Exit code 2 for usage and precondition failures, 1 for everything else.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("precondition: {0}")]
    Precondition(String),
    #[error("internal: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Precondition(_) => 2,
            CliError::Internal(_) => 1,
        }
    }

    /// The reason on a single line.
    pub fn line(&self) -> String {
        self.to_string().split_whitespace().collect::<Vec<_>>().join(" ")
    }
}

impl From<whitext::Error> for CliError {
    fn from(e: whitext::Error) -> Self {
        use whitext::Error as E;
        match e {
            E::ResolutionTooCoarse(m) => CliError::Precondition(format!("ResolutionTooCoarse: {m}")),
            E::InvalidDomain(_)
            | E::MemoryBudget { .. }
            | E::PreconditionNotMet(_)
            | E::UnsupportedExponent(_)
            | E::Unreachable
            | E::InvalidArgument(_)
            | E::Format(_)
            | E::CollarPoint => CliError::Precondition(e.to_string()),
            E::Construction { .. } | E::Io(_) => CliError::Internal(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Internal(format!("io: {e}"))
    }
}
