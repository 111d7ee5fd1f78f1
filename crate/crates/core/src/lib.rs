//! Dryout point of a heated liquid flowing into a semi-infinite pipe.
//!
//! The pipeline runs in four stages:
//! - `eos`: the van der Waals energy
//! - `saturation`: its coexistence curve
//! - `interface`: the interface temperature at a given mass flux
//! - `stefan`: where the liquid runs out.

// `!(x > 0.0)` is used on purpose: it also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod eos;
pub mod error;
pub mod interface;
pub mod numerics;
pub mod saturation;
pub mod stefan;

pub use eos::{CriticalPoint, Eos, EosRegistry, IdealGas, ThermoState, VanDerWaals};
pub use error::{Error, Result};
pub use interface::{solve_interface, FixedPhase, InterfaceSolution};
pub use saturation::{maxwell_construction, SaturationPoint};
pub use stefan::{solve_stationary, Dryout, DryoutProfile, StefanInputs};
