use std::path::PathBuf;

use incompat_core::Error;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{}: parse error at line {line}, column {column}: {message}", path.display())]
    Parse { path: PathBuf, line: usize, column: usize, message: String },
    #[error("{}: invalid vector {index}: {message}", path.display())]
    InvalidVector { path: PathBuf, index: usize, message: String },
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Usage(String),
    #[error("{context}: {source}")]
    Core { context: String, source: Error },
}

impl CliError {
    pub fn core(context: impl Into<String>) -> impl FnOnce(Error) -> CliError {
        let context = context.into();
        move |source| CliError::Core { context, source }
    }

    /// 1 usage or parse, 2 mathematical precondition, 3 budget.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core { source, .. } => match source {
                Error::NotTight { .. } | Error::NotAFrame | Error::NotSpanning | Error::Inadmissible { .. } => 2,
                Error::BudgetExceeded(_) => 3,
                _ => 1,
            },
            _ => 1,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
