//! EOS → saturation → interface → Stefan, shared by the commands.

use dryout_core::eos::EosRegistry;
use dryout_core::interface::{sign_changes_modified, solve_interface, InterfaceSolution};
use dryout_core::saturation::boiling_temperature;
use dryout_core::stefan::{solve_stationary, Dryout, StefanInputs};
use dryout_core::{Eos, Error as CoreError};

use crate::config::{Mode, PipeConfig};
use crate::error::RunError;

/// Grid used for the sign-change diagnostic.
pub const SIGN_CHANGE_GRID: usize = 2000;

#[derive(Debug)]
pub struct InterfaceStage {
    pub model: Box<dyn Eos>,
    pub solution: InterfaceSolution,
    pub latent_heat: f64,
    pub p_c: f64,
}

fn model(cfg: &PipeConfig, registry: &EosRegistry) -> Result<Box<dyn Eos>, RunError> {
    let block = cfg
        .eos
        .as_ref()
        .ok_or_else(|| RunError::Invalid("this command needs mode = eos".into()))?;
    Ok(block.build(registry)?)
}

pub fn interface_stage(cfg: &PipeConfig, registry: &EosRegistry) -> Result<InterfaceStage, RunError> {
    let model = model(cfg, registry)?;
    let v_l = 1.0 / cfg.rho_liquid;
    let j = cfg.j();
    let solution = match solve_interface(model.as_ref(), v_l, j) {
        Ok(s) => s,
        Err(e @ CoreError::ContinuationFailed { .. }) => {
            // attach the large-flux diagnostic at the boiling temperature
            let tb = boiling_temperature(model.as_ref(), v_l)?;
            let count = sign_changes_modified(model.as_ref(), tb, j, SIGN_CHANGE_GRID)?;
            return Err(RunError::NoSolution(format!(
                "no stationary phase transition found at this flux ({e}); \
                 the modified energy changes convexity {count} time(s) at the boiling temperature {tb}"
            )));
        }
        Err(e) => return Err(e.into()),
    };
    let latent_heat = solution.latent_heat(model.as_ref());
    let p_c = model.critical_point()?.p_c;
    Ok(InterfaceStage {
        model,
        solution,
        latent_heat,
        p_c,
    })
}

#[derive(Debug)]
pub struct DryoutRun {
    pub inputs: StefanInputs,
    pub interface: Option<InterfaceStage>,
    pub dryout: Dryout,
}

pub fn dryout(cfg: &PipeConfig, registry: &EosRegistry) -> Result<DryoutRun, RunError> {
    let (theta_star, ell, v_gas, interface) = match cfg.mode {
        Mode::Eos => {
            let st = interface_stage(cfg, registry)?;
            (st.solution.theta_star, st.latent_heat, st.solution.v_g, Some(st))
        }
        Mode::Direct => {
            let d = cfg.direct.expect("validated direct config");
            (d.theta_star, d.latent_heat, 1.0 / d.rho_gas, None)
        }
    };
    let inputs = StefanInputs {
        kappa1: cfg.kappa1,
        kappa2: cfg.kappa2,
        d1: cfg.d1,
        d2: cfg.d2,
        r: cfg.r,
        j: cfg.j(),
        ell,
        theta_in: cfg.theta_in,
        theta_star,
        v_gas: Some(v_gas),
    };
    let dryout = solve_stationary(&inputs)?;
    Ok(DryoutRun {
        inputs,
        interface,
        dryout,
    })
}
