use std::process::ExitCode;

/// CLI failures, each mapped to a documented exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error(transparent)]
    Library(#[from] concbound::Error),
    #[error("scan failed: {0}")]
    Scan(concbound::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

pub const EXIT_OK: u8 = 0;
pub const EXIT_DEMO_FAILED: u8 = 1;
pub const EXIT_INVALID: u8 = 2;
pub const EXIT_SCAN: u8 = 3;

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Scan(_) => EXIT_SCAN,
            _ => EXIT_INVALID,
        }
    }
}

impl From<CliError> for ExitCode {
    fn from(e: CliError) -> Self {
        ExitCode::from(e.exit_code())
    }
}
