use std::io;
use std::path::PathBuf;

/// Everything the front end can fail with, mapped onto process exit codes.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// The config (or a flag) is invalid; `path` names the field.
    #[error("{path}: {message}")]
    Config { path: String, message: String },
    #[error("unsupported format `{format}` for `{command}` (expected one of: {expected})")]
    UnsupportedFormat {
        command: &'static str,
        format: String,
        expected: &'static str,
    },
    #[error("{context}: {message}")]
    Analysis { context: String, message: String },
    #[error("{} golden value(s) out of tolerance", .0)]
    GoldenMiss(usize),
    #[error("{}: {source}", .path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
}

pub const EXIT_OK: u8 = 0;
pub const EXIT_CONFIG: u8 = 1;
pub const EXIT_ANALYSIS: u8 = 2;

impl CliError {
    pub fn config(path: impl Into<String>, message: impl ToString) -> Self {
        Self::Config {
            path: path.into(),
            message: message.to_string(),
        }
    }

    pub fn analysis(context: impl Into<String>, message: impl ToString) -> Self {
        Self::Analysis {
            context: context.into(),
            message: message.to_string(),
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Self::Io {
            path: path.into(),
            source,
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Config { .. } | Self::UnsupportedFormat { .. } => EXIT_CONFIG,
            Self::Analysis { .. } | Self::GoldenMiss(_) | Self::Io { .. } => EXIT_ANALYSIS,
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
