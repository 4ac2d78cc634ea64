use probe_core::ProbeError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),

    #[error(transparent)]
    Probe(#[from] ProbeError),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("plot: {0}")]
    Plot(String),
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    /// 0 ok, 1 io, 2 usage, 3 divergent bound, 4 non-convergence.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Probe(e) => match e {
                ProbeError::Domain(_) | ProbeError::Unsupported(_) => 2,
                ProbeError::Divergent(_) | ProbeError::Kink => 3,
                ProbeError::NonConvergence { .. } => 4,
            },
            CliError::Io(_) | CliError::Csv(_) | CliError::Plot(_) => 1,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
