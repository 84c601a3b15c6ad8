use std::path::PathBuf;

use cvgauss::CvError;

/// Process exit codes.
pub const EXIT_OK: u8 = 0;
pub const EXIT_FAILURE: u8 = 1;
pub const EXIT_UNPHYSICAL: u8 = 2;
pub const EXIT_CONFIG: u8 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cannot read config {path}: {source}")]
    ReadConfig {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("invalid config: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("invalid config: {0}")]
    Config(String),
    #[error("unphysical state: {0}")]
    Unphysical(CvError),
    #[error(transparent)]
    Core(CvError),
    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("serialization failed: {0}")]
    Serialize(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::ReadConfig { .. } | CliError::Parse(_) | CliError::Config(_) => EXIT_CONFIG,
            CliError::Unphysical(_) => EXIT_UNPHYSICAL,
            CliError::Core(_) | CliError::Write { .. } | CliError::Serialize(_) => EXIT_FAILURE,
        }
    }

    /// Classifies an error raised while building a configured state: bad
    /// physics maps to exit 2, malformed recipes to exit 3.
    pub fn from_build(err: CvError) -> Self {
        match err {
            CvError::Unphysical(_) => CliError::Unphysical(err),
            CvError::UnsupportedModeCount(_)
            | CvError::ModeOutOfRange { .. }
            | CvError::ModeCollision(_)
            | CvError::ParameterOutOfRange { .. }
            | CvError::Recipe(_) => CliError::Config(err.to_string()),
            other => CliError::Core(other),
        }
    }
}

impl From<CvError> for CliError {
    fn from(err: CvError) -> Self {
        CliError::Core(err)
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
