use std::io;
use std::path::PathBuf;

use pcmem_core::Error as CoreError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("cannot read config {path}: {source}")]
    ConfigRead { path: PathBuf, source: io::Error },
    #[error("malformed config: {0}")]
    ConfigParse(#[from] serde_json::Error),
    #[error("{count} grid point(s) violate complete positivity, first at t={first_t}")]
    CptpGrid { count: usize, first_t: f64 },
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("{0} oracle case(s) failed")]
    OracleFailure(usize),
}

impl CliError {
    /// 0 success, 2 configuration, 3 CPTP violation, 4 degenerate
    /// post-selection, 1 anything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::ConfigRead { .. } | CliError::ConfigParse(_) => 2,
            CliError::CptpGrid { .. } => 3,
            CliError::Core(e) => match e {
                CoreError::Config(_) | CoreError::NotBidirectional => 2,
                CoreError::CptpViolation { .. } => 3,
                CoreError::DegeneratePostSelection { .. } => 4,
                CoreError::NumericContract(_) | CoreError::Singularity(_) => 1,
            },
            CliError::Io(_) | CliError::Csv(_) | CliError::OracleFailure(_) => 1,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
