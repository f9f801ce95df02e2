use std::fmt;
use std::io;
use std::path::Path;

use mfgf::MfgfError;

#[derive(Debug)]
pub enum CliError {
    Mfgf(MfgfError),
    Usage(String),
    Io(String),
}

impl CliError {
    pub fn config(msg: String) -> Self {
        Self::Mfgf(MfgfError::InvalidConfig(msg))
    }

    pub fn io(path: &Path, e: io::Error) -> Self {
        Self::Io(format!("{}: {e}", path.display()))
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Mfgf(_) | Self::Usage(_) => 2,
            Self::Io(_) => 3,
        }
    }
}

impl From<MfgfError> for CliError {
    fn from(e: MfgfError) -> Self {
        Self::Mfgf(e)
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Mfgf(e) => write!(f, "{}: {e}", e.name()),
            Self::Usage(m) => write!(f, "Usage: {m}"),
            Self::Io(m) => write!(f, "Io: {m}"),
        }
    }
}
