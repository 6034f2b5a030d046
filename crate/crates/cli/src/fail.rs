use fpc_core::Error;

/// A failed command and the process exit code it maps to.
#[derive(Debug, thiserror::Error)]
#[error("{message}")]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub const INVARIANT: u8 = 1;
    pub const ARGS: u8 = 2;
    pub const GATE: u8 = 3;

    pub fn invariant(message: impl Into<String>) -> Self {
        Failure { code: Self::INVARIANT, message: message.into() }
    }

    pub fn args(message: impl Into<String>) -> Self {
        Failure { code: Self::ARGS, message: message.into() }
    }

    pub fn gate(message: impl Into<String>) -> Self {
        Failure { code: Self::GATE, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::BoundaryNotClosed(_)
            | Error::NonCommuting
            | Error::Invariant(_)
            | Error::DependentVectors
            | Error::NotAProduct(_)
            | Error::SliceNotFound(_) => Self::INVARIANT,
            _ => Self::ARGS,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::args(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::args(e.to_string())
    }
}

pub type Outcome<T> = std::result::Result<T, Failure>;
