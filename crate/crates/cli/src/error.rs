use thiserror::Error;

/// Failure of a command, mapped onto the process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("wall collision near t = {last_safe_time:.6e} (smallest root {min_root:.3e})")]
    Wall { last_safe_time: f64, min_root: f64 },
    #[error("{0}")]
    Run(String),
    #[error("verification failed: {0} check(s) did not pass")]
    Verification(usize),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Wall { .. } => 2,
            _ => 1,
        }
    }
}
