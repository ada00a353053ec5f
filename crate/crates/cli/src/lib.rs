//! Command-line front end for the norm-emergence experiments: sectioned
//! key-value configuration, seeded parallel execution, CSV emission, and
//! per-figure plot data. All file contents are byte-deterministic for a
//! given (config, seed), independent of worker count.

pub mod config;
pub mod output;
pub mod run;

/// CLI failure modes, mapped to exit codes by the binary: configuration
/// errors exit 1, runtime errors exit 2.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("runtime error: {0}")]
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 1,
            CliError::Runtime(_) => 2,
        }
    }
}
