use thiserror::Error;

/// CLI-level errors. The Display strings double as the machine-parsable
/// `error: <category>: <detail>` line printed on failure.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(String),
    #[error("core: {0}")]
    Core(#[from] modqed_core::error::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}
