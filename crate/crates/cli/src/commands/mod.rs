//! Subcommands, looked up by name at run time.

mod dryout;
mod interface;
mod profile;
mod saturation;
mod sweep;

use std::collections::BTreeMap;
use std::fmt;

use dryout_core::eos::EosRegistry;

use crate::config::PipeConfig;
use crate::error::RunError;
use crate::output::RunReport;

pub use dryout::DryoutCommand;
pub use interface::InterfaceCommand;
pub use profile::ProfileCommand;
pub use saturation::SaturationCommand;
pub use sweep::SweepCommand;

pub const DEFAULT_POINTS: usize = 200;

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub param: String,
    pub from: f64,
    pub to: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunOptions {
    pub xmax: Option<f64>,
    pub n: Option<usize>,
    pub sweep: Option<SweepSpec>,
}

impl RunOptions {
    pub fn points(&self) -> Result<usize, RunError> {
        match self.n {
            Some(n) if n < 2 => Err(RunError::Invalid(format!("--n must be at least 2 (got {n})"))),
            Some(n) => Ok(n),
            None => Ok(DEFAULT_POINTS),
        }
    }
}

pub struct Context<'a> {
    pub config: &'a PipeConfig,
    pub options: &'a RunOptions,
    pub models: &'a EosRegistry,
}

pub trait Command: Send + Sync {
    fn name(&self) -> &'static str;
    fn run(&self, ctx: &Context<'_>) -> Result<RunReport, RunError>;
}

pub struct CommandRegistry {
    commands: BTreeMap<&'static str, Box<dyn Command>>,
}

impl CommandRegistry {
    pub fn empty() -> Self {
        Self {
            commands: BTreeMap::new(),
        }
    }

    pub fn with_defaults() -> Self {
        let mut reg = Self::empty();
        reg.register(Box::new(SaturationCommand));
        reg.register(Box::new(InterfaceCommand));
        reg.register(Box::new(DryoutCommand));
        reg.register(Box::new(ProfileCommand));
        reg.register(Box::new(SweepCommand));
        reg
    }

    pub fn register(&mut self, cmd: Box<dyn Command>) {
        self.commands.insert(cmd.name(), cmd);
    }

    pub fn get(&self, name: &str) -> Option<&dyn Command> {
        self.commands.get(name).map(|c| c.as_ref())
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.commands.keys().copied()
    }
}

impl Default for CommandRegistry {
    fn default() -> Self {
        Self::with_defaults()
    }
}

impl fmt::Debug for CommandRegistry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.commands.keys()).finish()
    }
}
