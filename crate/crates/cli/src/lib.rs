//! Library side of the `mip` binary: argument types, the JSON document and
//! one function per subcommand.

pub mod commands;
pub mod document;

use thiserror::Error;

pub use commands::{run, Cli, Command};
pub use document::CertificateDocument;

/// Exit codes. These are part of the interface and do not change.
pub mod exit {
    pub const OK: i32 = 0;
    pub const INTERNAL: i32 = 1;
    pub const INVALID_INPUT: i32 = 2;
    pub const SEARCH_EXHAUSTED: i32 = 3;
    pub const PRECONDITION: i32 = 4;
    pub const REJECTED: i32 = 5;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Library(#[from] intersective::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("certificate rejected: {}", .0.join("; "))]
    Rejected(Vec<String>),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use intersective::Error as E;
        match self {
            CliError::Invalid(_) | CliError::Io(_) | CliError::Json(_) => exit::INVALID_INPUT,
            CliError::Rejected(_) => exit::REJECTED,
            CliError::Library(e) => match e {
                E::SearchExhausted { .. } => exit::SEARCH_EXHAUSTED,
                E::NotIntersectiveBase => exit::PRECONDITION,
                E::Postcondition(_) => exit::INTERNAL,
                _ => exit::INVALID_INPUT,
            },
        }
    }
}
