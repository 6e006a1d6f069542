use std::fmt;

/// Process exit statuses. These values are part of the command-line contract.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exit {
    Ok = 0,
    Input = 1,
    Invariant = 2,
    NotFound = 3,
}

impl Exit {
    pub fn code(self) -> i32 {
        self as i32
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    /// Unreadable file, malformed JSON, schema or flag violation.
    Input(String),
    /// A mathematical invariant failed; points at a bug.
    Invariant(String),
}

impl CliError {
    pub fn input(msg: impl Into<String>) -> Self {
        Self::Input(msg.into())
    }

    pub fn exit(&self) -> Exit {
        match self {
            Self::Input(_) => Exit::Input,
            Self::Invariant(_) => Exit::Invariant,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Input(m) => write!(f, "input error: {m}"),
            Self::Invariant(m) => write!(f, "invariant violation: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<varbound::Error> for CliError {
    fn from(e: varbound::Error) -> Self {
        match e {
            varbound::Error::Consistency(_) | varbound::Error::NoConvergence { .. } => Self::Invariant(e.to_string()),
            _ => Self::Input(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::Input(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;
