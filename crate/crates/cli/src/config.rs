//! Line-based run configuration: one `key = value` per line, `#` starts a
//! comment, unknown or repeated keys are rejected.

use std::collections::BTreeMap;

use dryout_core::eos::{EosRegistry, ModelParams};
use dryout_core::{Eos, Error as CoreError};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("{0}")]
    Validation(String),
}

fn invalid(msg: impl Into<String>) -> ConfigError {
    ConfigError::Validation(msg.into())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Interface values come from the equation of state.
    Eos,
    /// Interface values are given directly.
    Direct,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Flux {
    J(f64),
    /// Liquid inlet velocity; `j = ρ₁u₁`.
    ULiquid(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct EosBlock {
    pub model: String,
    pub k1: f64,
    pub k2: f64,
    pub a: f64,
    pub b: f64,
}

impl EosBlock {
    pub fn params(&self) -> ModelParams {
        [("k1", self.k1), ("k2", self.k2), ("a", self.a), ("b", self.b)]
            .into_iter()
            .map(|(k, v)| (k.to_string(), v))
            .collect()
    }

    pub fn build(&self, registry: &EosRegistry) -> Result<Box<dyn Eos>, CoreError> {
        registry.create(&self.model, &self.params())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DirectBlock {
    pub theta_star: f64,
    pub rho_gas: f64,
    pub latent_heat: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipeConfig {
    pub mode: Mode,
    pub eos: Option<EosBlock>,
    pub direct: Option<DirectBlock>,
    pub rho_liquid: f64,
    pub flux: Flux,
    pub theta_in: f64,
    pub r: f64,
    pub kappa1: f64,
    pub kappa2: f64,
    pub d1: f64,
    pub d2: f64,
}

impl PipeConfig {
    pub fn j(&self) -> f64 {
        match self.flux {
            Flux::J(j) => j,
            Flux::ULiquid(u) => self.rho_liquid * u,
        }
    }

    /// Overwrites one numeric key, as `sweep` does per sample. The result is
    /// re-validated.
    pub fn with_value(&self, key: &str, value: f64, registry: &EosRegistry) -> Result<Self, ConfigError> {
        let mut c = self.clone();
        match key {
            "theta_in" => c.theta_in = value,
            "r" => c.r = value,
            "kappa1" => c.kappa1 = value,
            "kappa2" => c.kappa2 = value,
            "d1" => c.d1 = value,
            "d2" => c.d2 = value,
            "rho_liquid" => c.rho_liquid = value,
            "j_flux" => c.flux = Flux::J(value),
            "u_liquid" => c.flux = Flux::ULiquid(value),
            "theta_star" | "rho_gas" | "latent_heat" => {
                let d = c
                    .direct
                    .as_mut()
                    .ok_or_else(|| invalid(format!("'{key}' can only be varied in direct mode")))?;
                match key {
                    "theta_star" => d.theta_star = value,
                    "rho_gas" => d.rho_gas = value,
                    _ => d.latent_heat = value,
                }
            }
            _ => return Err(invalid(format!("'{key}' cannot be swept"))),
        }
        c.validate(registry)?;
        Ok(c)
    }

    pub fn validate(&self, registry: &EosRegistry) -> Result<(), ConfigError> {
        let positives = [
            ("rho_liquid", self.rho_liquid),
            ("r", self.r),
            ("kappa1", self.kappa1),
            ("kappa2", self.kappa2),
            ("d1", self.d1),
            ("d2", self.d2),
            (
                match self.flux {
                    Flux::J(_) => "j_flux",
                    Flux::ULiquid(_) => "u_liquid",
                },
                self.j(),
            ),
        ];
        for (name, x) in positives {
            if !(x > 0.0) {
                return Err(invalid(format!("{name} must be positive (got {x})")));
            }
        }
        match self.mode {
            Mode::Direct => {
                let d = self
                    .direct
                    .as_ref()
                    .ok_or_else(|| invalid("direct mode needs theta_star, rho_gas, latent_heat"))?;
                if !(d.rho_gas > 0.0) || !(d.rho_gas < self.rho_liquid) {
                    return Err(invalid("rho_gas must be positive and below rho_liquid"));
                }
                if !(d.latent_heat < 0.0) {
                    return Err(invalid("latent_heat must be negative"));
                }
                if !(self.theta_in < d.theta_star) {
                    return Err(invalid("theta_in must be below theta_star"));
                }
            }
            Mode::Eos => {
                let e = self
                    .eos
                    .as_ref()
                    .ok_or_else(|| invalid("eos mode needs k1, k2, a, b"))?;
                if e.a == 0.0 && e.b == 0.0 {
                    return Err(invalid("ideal gas admits no phase transition"));
                }
                let model = e.build(registry).map_err(|err| invalid(err.to_string()))?;
                let cp = model
                    .critical_point()
                    .map_err(|_| invalid("ideal gas admits no phase transition"))?;
                if !(self.rho_liquid > 1.0 / cp.v_c) {
                    return Err(invalid(format!(
                        "rho_liquid must exceed the critical density {}",
                        1.0 / cp.v_c
                    )));
                }
                if !(self.rho_liquid < model.max_density()) {
                    return Err(invalid(format!(
                        "rho_liquid must be below the packing limit {}",
                        model.max_density()
                    )));
                }
            }
        }
        Ok(())
    }
}

const KEYS: &[&str] = &[
    "mode",
    "eos_model",
    "k1",
    "k2",
    "a",
    "b",
    "rho_liquid",
    "j_flux",
    "u_liquid",
    "theta_in",
    "r",
    "kappa1",
    "kappa2",
    "d1",
    "d2",
    "theta_star",
    "rho_gas",
    "latent_heat",
    "pipe_length",
];

const EOS_KEYS: &[&str] = &["eos_model", "k1", "k2", "a", "b"];
const DIRECT_KEYS: &[&str] = &["theta_star", "rho_gas", "latent_heat"];

struct Entry {
    line: usize,
    value: String,
}

pub fn parse_config(text: &str) -> Result<PipeConfig, ConfigError> {
    parse_config_with(text, &EosRegistry::with_defaults())
}

pub fn parse_config_with(text: &str, registry: &EosRegistry) -> Result<PipeConfig, ConfigError> {
    let mut entries: BTreeMap<&str, Entry> = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let (key, value) = body.split_once('=').ok_or_else(|| ConfigError::Parse {
            line,
            msg: format!("expected 'key = value', found '{body}'"),
        })?;
        let key = key.trim();
        let value = value.trim();
        let key = *KEYS
            .iter()
            .find(|k| **k == key)
            .ok_or_else(|| ConfigError::Parse {
                line,
                msg: format!("unknown key '{key}'"),
            })?;
        if value.is_empty() {
            return Err(ConfigError::Parse {
                line,
                msg: format!("missing value for '{key}'"),
            });
        }
        if let Some(prev) = entries.insert(
            key,
            Entry {
                line,
                value: value.to_string(),
            },
        ) {
            return Err(ConfigError::Parse {
                line,
                msg: format!("'{key}' already set on line {}", prev.line),
            });
        }
    }

    let number = |key: &str| -> Result<Option<f64>, ConfigError> {
        let Some(e) = entries.get(key) else {
            return Ok(None);
        };
        let x: f64 = e.value.parse().map_err(|_| ConfigError::Parse {
            line: e.line,
            msg: format!("'{}' is not a number", e.value),
        })?;
        if !x.is_finite() {
            return Err(ConfigError::Parse {
                line: e.line,
                msg: format!("'{key}' must be finite"),
            });
        }
        Ok(Some(x))
    };
    let required = |key: &str| -> Result<f64, ConfigError> {
        number(key)?.ok_or_else(|| invalid(format!("missing key '{key}'")))
    };

    let mode = match entries.get("mode") {
        None => return Err(invalid("missing key 'mode'")),
        Some(e) => match e.value.as_str() {
            "eos" => Mode::Eos,
            "direct" => Mode::Direct,
            other => {
                return Err(ConfigError::Parse {
                    line: e.line,
                    msg: format!("mode must be 'eos' or 'direct', found '{other}'"),
                })
            }
        },
    };

    if let Some(e) = entries.get("pipe_length") {
        let len: f64 = e.value.parse().map_err(|_| ConfigError::Parse {
            line: e.line,
            msg: format!("'{}' is not a number", e.value),
        })?;
        if len != f64::INFINITY {
            return Err(invalid(
                "only a semi-infinite pipe is supported (pipe_length = inf)",
            ));
        }
    }

    let (foreign, kind) = match mode {
        Mode::Eos => (DIRECT_KEYS, "direct"),
        Mode::Direct => (EOS_KEYS, "eos"),
    };
    if let Some(k) = foreign.iter().find(|k| entries.contains_key(**k)) {
        return Err(invalid(format!("'{k}' only applies in {kind} mode")));
    }

    let flux = match (number("j_flux")?, number("u_liquid")?) {
        (Some(_), Some(_)) => return Err(invalid("give either j_flux or u_liquid, not both")),
        (Some(j), None) => Flux::J(j),
        (None, Some(u)) => Flux::ULiquid(u),
        (None, None) => return Err(invalid("missing key 'j_flux' (or 'u_liquid')")),
    };

    let (eos, direct, kappa_default) = match mode {
        Mode::Eos => {
            let model = match entries.get("eos_model") {
                Some(e) if !registry.contains(&e.value) => {
                    return Err(ConfigError::Parse {
                        line: e.line,
                        msg: format!(
                            "unknown eos_model '{}' (known: {})",
                            e.value,
                            registry.names().collect::<Vec<_>>().join(", ")
                        ),
                    })
                }
                Some(e) => e.value.clone(),
                None => "van_der_waals".to_string(),
            };
            let block = EosBlock {
                model,
                k1: required("k1")?,
                k2: required("k2")?,
                a: required("a")?,
                b: required("b")?,
            };
            let k1 = block.k1;
            (Some(block), None, Some(k1))
        }
        Mode::Direct => {
            let block = DirectBlock {
                theta_star: required("theta_star")?,
                rho_gas: required("rho_gas")?,
                latent_heat: required("latent_heat")?,
            };
            (None, Some(block), None)
        }
    };

    let kappa = |key: &str| -> Result<f64, ConfigError> {
        match (number(key)?, kappa_default) {
            (Some(x), _) => Ok(x),
            (None, Some(k1)) => Ok(k1),
            (None, None) => Err(invalid(format!("missing key '{key}'"))),
        }
    };

    let cfg = PipeConfig {
        mode,
        eos,
        direct,
        rho_liquid: required("rho_liquid")?,
        flux,
        theta_in: required("theta_in")?,
        r: required("r")?,
        kappa1: kappa("kappa1")?,
        kappa2: kappa("kappa2")?,
        d1: required("d1")?,
        d2: required("d2")?,
    };
    cfg.validate(registry)?;
    Ok(cfg)
}
