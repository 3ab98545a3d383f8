use hcluster::{ErrorKind, HcError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error(transparent)]
    Core(#[from] HcError),

    #[error("config line {line}: {msg}")]
    Config { line: usize, msg: String },

    #[error("nothing to run: {0}")]
    NothingToRun(String),

    #[error("{path}: {source}")]
    File { path: String, source: std::io::Error },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error("every row failed ({0} rows)")]
    AllRowsFailed(usize),

    #[error("validation failed: {0}")]
    ValidationFailed(String),
}

pub type Result<T> = std::result::Result<T, BenchError>;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_CONTRACT: i32 = 3;
pub const EXIT_CAP: i32 = 4;

impl BenchError {
    pub fn exit_code(&self) -> i32 {
        match self {
            BenchError::Core(e) => match e.kind() {
                ErrorKind::Input => EXIT_INPUT,
                ErrorKind::ResourceCap => EXIT_CAP,
                // numerical failures count as a broken guarantee of the run
                ErrorKind::Contract | ErrorKind::Numerical => EXIT_CONTRACT,
            },
            BenchError::Config { .. } | BenchError::NothingToRun(_) | BenchError::File { .. } => EXIT_INPUT,
            BenchError::Csv(_) | BenchError::Json(_) => EXIT_INPUT,
            BenchError::AllRowsFailed(_) | BenchError::ValidationFailed(_) => EXIT_CONTRACT,
        }
    }
}

/// Read a whole file, keeping the path in the error.
pub fn read_file(path: &std::path::Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| BenchError::File { path: path.display().to_string(), source })
}

pub fn write_file(path: &std::path::Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|source| BenchError::File { path: path.display().to_string(), source })
}
