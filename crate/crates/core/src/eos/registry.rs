use std::collections::BTreeMap;
use std::fmt;

use super::{Eos, IdealGas, VanDerWaals};
use crate::error::{Error, Result};

/// Named scalar parameters handed to a model factory (`k1`, `k2`, `a`, `b`, ...).
pub type ModelParams = BTreeMap<String, f64>;

pub type EosFactory = fn(&ModelParams) -> Result<Box<dyn Eos>>;

/// Model families by name, so the energy can be picked from a config file.
pub struct EosRegistry {
    factories: BTreeMap<String, EosFactory>,
}

impl EosRegistry {
    pub fn empty() -> Self {
        Self {
            factories: BTreeMap::new(),
        }
    }

    /// `van_der_waals` and `ideal_gas`.
    pub fn with_defaults() -> Self {
        let mut reg = Self::empty();
        reg.register("van_der_waals", build_van_der_waals);
        reg.register("ideal_gas", build_ideal_gas);
        reg
    }

    pub fn register(&mut self, name: impl Into<String>, factory: EosFactory) {
        self.factories.insert(name.into(), factory);
    }

    pub fn contains(&self, name: &str) -> bool {
        self.factories.contains_key(name)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.factories.keys().map(String::as_str)
    }

    pub fn create(&self, name: &str, params: &ModelParams) -> Result<Box<dyn Eos>> {
        let factory = self
            .factories
            .get(name)
            .ok_or_else(|| Error::UnknownModel(name.to_string()))?;
        factory(params)
    }
}

impl Default for EosRegistry {
    fn default() -> Self {
        Self::with_defaults()
    }
}

impl fmt::Debug for EosRegistry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.factories.keys()).finish()
    }
}

fn param(params: &ModelParams, key: &str) -> Result<f64> {
    params
        .get(key)
        .copied()
        .ok_or_else(|| Error::InvalidInput(format!("missing model parameter '{key}'")))
}

fn build_van_der_waals(params: &ModelParams) -> Result<Box<dyn Eos>> {
    let m = VanDerWaals::new(
        param(params, "k1")?,
        param(params, "k2")?,
        param(params, "a")?,
        param(params, "b")?,
    )?;
    Ok(Box::new(m))
}

fn build_ideal_gas(params: &ModelParams) -> Result<Box<dyn Eos>> {
    for key in ["a", "b"] {
        if let Some(&x) = params.get(key) {
            if x != 0.0 {
                return Err(Error::InvalidInput(format!(
                    "ideal gas takes no '{key}' (got {x})"
                )));
            }
        }
    }
    Ok(Box::new(IdealGas::new(
        param(params, "k1")?,
        param(params, "k2")?,
    )?))
}
