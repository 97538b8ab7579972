//! Configuration-driven runner for the `spin_calogero` library: simulation,
//! Lax spectra, coupling constants and structural verification.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod verify;

pub use commands::{run_config, Context, RunKind};
pub use config::{parse_configs, parse_verify, Method, RunConfig, VerifyConfig};
pub use error::CliError;
