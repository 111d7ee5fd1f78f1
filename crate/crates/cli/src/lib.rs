//! Batch driver for the dryout-point solver: configuration parsing, the
//! subcommands, and report/CSV output.
// `!(x > 0.0)` is used on purpose: it also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod pipeline;

use dryout_core::eos::EosRegistry;

pub use commands::{Command, CommandRegistry, Context, RunOptions, SweepSpec};
pub use config::{parse_config, ConfigError, PipeConfig};
pub use error::RunError;
pub use output::{RunReport, Status};

/// Parses `config_text` and runs the named command with the default model
/// and command registries.
pub fn run(command: &str, config_text: &str, options: &RunOptions) -> Result<RunReport, RunError> {
    let commands = CommandRegistry::with_defaults();
    let models = EosRegistry::with_defaults();
    let cmd = commands.get(command).ok_or_else(|| {
        RunError::Invalid(format!(
            "unknown command '{command}' (expected one of: {})",
            commands.names().collect::<Vec<_>>().join(", ")
        ))
    })?;
    let config = config::parse_config_with(config_text, &models)?;
    cmd.run(&Context {
        config: &config,
        options,
        models: &models,
    })
}
