//! Helmholtz-energy equations of state written in the specific volume.
//!
//! A model supplies the raw energy `ψ̃(v, θ)` and its first and second
//! derivatives; everything else (domain checks, internal energy, the
//! volume-specific energy `Ψ = ρψ`, the flux-modified energies) is derived
//! from those in provided methods of [`Eos`].
//!
//! Units are whatever the caller uses consistently; nothing is converted.

mod registry;
mod van_der_waals;

pub use registry::{EosFactory, EosRegistry, ModelParams};
pub use van_der_waals::{IdealGas, VanDerWaals};

use std::fmt;

use crate::error::{Error, Result};

/// Relative margin kept above the excluded volume.
pub const VOLUME_MARGIN: f64 = 1e-12;
/// Smallest admissible temperature.
pub const MIN_TEMPERATURE: f64 = 1e-12;

/// A point `(v, θ)`: mass-specific volume and absolute temperature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermoState {
    pub v: f64,
    pub theta: f64,
}

impl ThermoState {
    pub fn new(v: f64, theta: f64) -> Self {
        Self { v, theta }
    }

    pub fn from_density(rho: f64, theta: f64) -> Self {
        Self { v: 1.0 / rho, theta }
    }
}

impl From<(f64, f64)> for ThermoState {
    fn from((v, theta): (f64, f64)) -> Self {
        Self { v, theta }
    }
}

/// Derived quantities at one state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermoPoint {
    pub psi: f64,
    pub eta: f64,
    pub p: f64,
    pub eps: f64,
    /// Specific heat at constant volume.
    pub kappa: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalPoint {
    pub v_c: f64,
    pub theta_c: f64,
    pub p_c: f64,
}

/// `Ψ = ρψ`, its analytic density derivative, and `ρ∂ρΨ − Ψ` (which must
/// reproduce the pressure).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VolumeEnergy {
    pub psi_vol: f64,
    pub dpsi_vol_drho: f64,
    pub p_check: f64,
}

/// The flux-modified energy `Ψʲ = Ψ − j²/(2ρ)` together with `∂ρΨʲ` and
/// `pʲ = p + j²/ρ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModifiedEnergy {
    pub psi_j: f64,
    pub dpsi_j_drho: f64,
    pub p_j: f64,
}

/// A mass-specific Helmholtz energy `ψ̃(v, θ)`.
///
/// The raw methods (`psi`, `eta`, `p`, ...) assume a valid state and do no
/// checking; the named operations (`helmholtz`, `pressure`, ...) validate
/// first and return [`Error::Domain`] outside `v > b`, `θ > 0`.
pub trait Eos: fmt::Debug + Send + Sync {
    /// Registry name of the model family.
    fn name(&self) -> &str;

    /// Excluded volume `b`; the domain is `v > b`.
    fn excluded_volume(&self) -> f64;

    fn psi(&self, v: f64, theta: f64) -> f64;
    /// `η̃ = −∂θψ̃`
    fn eta(&self, v: f64, theta: f64) -> f64;
    /// `p̃ = −∂vψ̃`
    fn p(&self, v: f64, theta: f64) -> f64;
    fn dp_dv(&self, v: f64, theta: f64) -> f64;
    fn d2p_dv2(&self, v: f64, theta: f64) -> f64;
    /// `∂θp̃`, equal to `∂vη̃` by the Maxwell relation.
    fn dp_dtheta(&self, v: f64, theta: f64) -> f64;
    fn deta_dtheta(&self, v: f64, theta: f64) -> f64;

    fn critical_point(&self) -> Result<CriticalPoint>;

    fn deta_dv(&self, v: f64, theta: f64) -> f64 {
        self.dp_dtheta(v, theta)
    }

    /// `ε = ψ + θη`
    fn eps(&self, v: f64, theta: f64) -> f64 {
        self.psi(v, theta) + theta * self.eta(v, theta)
    }

    /// `κ = θ ∂θη̃`
    fn kappa(&self, v: f64, theta: f64) -> f64 {
        theta * self.deta_dtheta(v, theta)
    }

    /// `∂ρΨ = ψ̃ − v∂vψ̃ = ψ̃ + v p̃` at `v = 1/ρ`.
    fn dpsi_vol_drho(&self, rho: f64, theta: f64) -> f64 {
        let v = 1.0 / rho;
        self.psi(v, theta) + v * self.p(v, theta)
    }

    /// `∂²ρΨ = ∂ρp / ρ = −v³ ∂vp̃`.
    fn d2psi_vol_drho2(&self, rho: f64, theta: f64) -> f64 {
        let v = 1.0 / rho;
        -v * v * v * self.dp_dv(v, theta)
    }

    /// Largest admissible density (`1/b`, or infinity when `b = 0`).
    fn max_density(&self) -> f64 {
        let b = self.excluded_volume();
        if b > 0.0 {
            1.0 / b
        } else {
            f64::INFINITY
        }
    }

    fn check(&self, s: ThermoState) -> Result<()> {
        let b = self.excluded_volume();
        let v_min = b * (1.0 + VOLUME_MARGIN);
        if !s.v.is_finite() || !s.theta.is_finite() || s.v <= 0.0 || s.v < v_min {
            return Err(Error::Domain(format!(
                "v = {} must exceed b(1 + {VOLUME_MARGIN:e}) = {v_min}",
                s.v
            )));
        }
        if s.theta < MIN_TEMPERATURE {
            return Err(Error::Domain(format!(
                "theta = {} must be at least {MIN_TEMPERATURE:e}",
                s.theta
            )));
        }
        Ok(())
    }

    fn check_density(&self, rho: f64, theta: f64) -> Result<()> {
        if !(rho > 0.0) {
            return Err(Error::Domain(format!("density {rho} must be positive")));
        }
        self.check(ThermoState::from_density(rho, theta))
    }

    fn helmholtz(&self, s: ThermoState) -> Result<f64> {
        self.check(s)?;
        Ok(self.psi(s.v, s.theta))
    }

    fn entropy(&self, s: ThermoState) -> Result<f64> {
        self.check(s)?;
        Ok(self.eta(s.v, s.theta))
    }

    fn pressure(&self, s: ThermoState) -> Result<f64> {
        self.check(s)?;
        Ok(self.p(s.v, s.theta))
    }

    /// `(ε, κ)` at the state.
    fn internal_energy_and_heat(&self, s: ThermoState) -> Result<(f64, f64)> {
        self.check(s)?;
        Ok((self.eps(s.v, s.theta), self.kappa(s.v, s.theta)))
    }

    fn point(&self, s: ThermoState) -> Result<ThermoPoint> {
        self.check(s)?;
        let (v, t) = (s.v, s.theta);
        Ok(ThermoPoint {
            psi: self.psi(v, t),
            eta: self.eta(v, t),
            p: self.p(v, t),
            eps: self.eps(v, t),
            kappa: self.kappa(v, t),
        })
    }

    fn volume_helmholtz(&self, rho: f64, theta: f64) -> Result<VolumeEnergy> {
        self.check_density(rho, theta)?;
        let v = 1.0 / rho;
        let psi_vol = rho * self.psi(v, theta);
        let dpsi_vol_drho = self.dpsi_vol_drho(rho, theta);
        Ok(VolumeEnergy {
            psi_vol,
            dpsi_vol_drho,
            p_check: rho * dpsi_vol_drho - psi_vol,
        })
    }

    fn modified_quantities(&self, rho: f64, theta: f64, j: f64) -> Result<ModifiedEnergy> {
        check_flux(j)?;
        self.check_density(rho, theta)?;
        let v = 1.0 / rho;
        let j2 = j * j;
        Ok(ModifiedEnergy {
            psi_j: rho * self.psi(v, theta) - 0.5 * j2 * v,
            dpsi_j_drho: self.dpsi_vol_drho(rho, theta) + 0.5 * j2 * v * v,
            p_j: self.p(v, theta) + j2 * v,
        })
    }

    /// `∂²ρΨʲ = ∂²ρΨ − j²/ρ³`
    fn d2_volume_helmholtz_mod(&self, rho: f64, theta: f64, j: f64) -> Result<f64> {
        check_flux(j)?;
        self.check_density(rho, theta)?;
        Ok(self.d2psi_vol_drho2(rho, theta) - j * j / (rho * rho * rho))
    }
}

fn check_flux(j: f64) -> Result<()> {
    if !(j >= 0.0) || !j.is_finite() {
        return Err(Error::InvalidInput(format!(
            "mass flux {j} must be finite and >= 0"
        )));
    }
    Ok(())
}
