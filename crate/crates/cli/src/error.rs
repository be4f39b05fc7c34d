use std::fmt;
use std::io;

/// Errors mapped to process exit codes.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags or a labeling layout that does not fit the request. Exit 1.
    Usage(String),
    /// A verification check failed. Exit 2.
    Verify(String),
    /// Unreadable, unwritable, or malformed files. Exit 3.
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Verify(_) => 2,
            CliError::Io(_) => 3,
        }
    }

    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    pub fn io(msg: impl Into<String>) -> Self {
        CliError::Io(msg.into())
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Verify(m) => write!(f, "verification failed: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<hublab_core::GraphError> for CliError {
    fn from(e: hublab_core::GraphError) -> Self {
        CliError::Io(format!("graph: {e}"))
    }
}

impl From<hublab_core::codec::CodecError> for CliError {
    fn from(e: hublab_core::codec::CodecError) -> Self {
        CliError::Io(format!("labeling: {e}"))
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io(format!("manifest: {e}"))
    }
}

impl From<hublab_query::batch::BatchError> for CliError {
    fn from(e: hublab_query::batch::BatchError) -> Self {
        CliError::Io(format!("queries: {e}"))
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

/// Attaches a path to an I/O failure.
pub fn at<T, E: fmt::Display>(path: &std::path::Path, r: std::result::Result<T, E>) -> Result<T> {
    r.map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}
