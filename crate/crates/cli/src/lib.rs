//! JSON front end for `seesaw-core`: spec parsing, canonical output and scenarios.

pub mod emit;
pub mod scenario;
pub mod spec;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unknown check `{0}`")]
    UnknownCheck(String),
    #[error(transparent)]
    Core(#[from] seesaw_core::Error),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}
