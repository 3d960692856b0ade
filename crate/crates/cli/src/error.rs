use std::path::PathBuf;
use std::process::ExitCode;

use fracwave::ErrorKind;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}{}: {msg}", line.map(|l| format!(":{l}")).unwrap_or_default())]
    Config { path: String, line: Option<usize>, msg: String },

    #[error("{0}")]
    Usage(String),

    #[error("{context}: {source}")]
    Core {
        context: String,
        #[source]
        source: fracwave::Error,
    },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{0} selftest check(s) failed")]
    Selftest(usize),
}

impl CliError {
    pub fn core(context: impl Into<String>) -> impl FnOnce(fracwave::Error) -> CliError {
        let context = context.into();
        move |source| CliError::Core { context, source }
    }

    pub fn io(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> CliError {
        let path = path.into();
        move |source| CliError::Io { path, source }
    }

    /// 1 validation, 2 numerical guard, 3 I/O.
    pub fn exit_code(&self) -> ExitCode {
        let code = match self {
            CliError::Config { .. } | CliError::Usage(_) => 1,
            CliError::Core { source, .. } => match source.kind() {
                ErrorKind::Validation => 1,
                ErrorKind::Numerical => 2,
                ErrorKind::Io => 3,
            },
            CliError::Io { .. } => 3,
            CliError::Selftest(_) => 2,
        };
        ExitCode::from(code)
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
