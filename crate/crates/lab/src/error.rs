use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum LabError {
    #[error("{0}")]
    Usage(String),
    #[error("{context}: {source}")]
    Numeric {
        context: String,
        #[source]
        source: emden_core::Error,
    },
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{}: {source}", path.display())]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
    #[error("{}: {source}", path.display())]
    Config {
        path: PathBuf,
        #[source]
        source: toml::de::Error,
    },
}

impl LabError {
    /// 2 for bad input, 3 when a solver fails, 1 for files.
    pub fn exit_code(&self) -> i32 {
        match self {
            LabError::Usage(_) | LabError::Config { .. } => 2,
            LabError::Numeric { .. } => 3,
            LabError::Io { .. } | LabError::Csv { .. } => 1,
        }
    }
}

pub type LabResult<T> = Result<T, LabError>;

/// Attach a short description of what was being computed.
pub trait Context<T> {
    fn context(self, what: impl FnOnce() -> String) -> LabResult<T>;
}

impl<T> Context<T> for emden_core::Result<T> {
    fn context(self, what: impl FnOnce() -> String) -> LabResult<T> {
        self.map_err(|source| LabError::Numeric { context: what(), source })
    }
}
