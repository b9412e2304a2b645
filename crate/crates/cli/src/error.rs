use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] noisegain::Error),

    #[error("{0}")]
    Io(#[from] std::io::Error),

    #[error("{0}")]
    ToleranceExceeded(String),

    #[error("{0}")]
    Usage(String),
}

impl CliError {
    /// Machine-readable name printed before the message.
    pub fn name(&self) -> &'static str {
        match self {
            CliError::Core(e) => e.name(),
            CliError::Io(_) => "IoError",
            CliError::ToleranceExceeded(_) => "ToleranceExceeded",
            CliError::Usage(_) => "UsageError",
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
