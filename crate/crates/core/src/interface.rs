//! Flat liquid–vapor interface at a prescribed mass flux.
//!
//! With `Z = j²/2`, the momentum balance and the flat-interface energy
//! balance become the pair
//!
//! ```text
//! f₁ = p̃(v_ℓ,θ) − Z(v − v_ℓ) − (ψ̃(v_ℓ,θ) − ψ̃(v,θ))/(v − v_ℓ) = 0
//! f₂ = p̃(v,θ)   + Z(v − v_ℓ) − (ψ̃(v_ℓ,θ) − ψ̃(v,θ))/(v − v_ℓ) = 0
//! ```
//!
//! At `Z = 0` the boiling point `(θ_b, v_g*(θ_b))` solves it; larger `Z` is
//! reached by Newton continuation along that branch.

use crate::eos::Eos;
use crate::error::{Error, Result};
use crate::numerics::{
    find_root_bracketed, log_space, newton2d, solve2, Jacobian2, NewtonConfig, RootConfig,
};
use crate::saturation::{
    boiling_temperature, critical_for_coexistence, dew_temperature, maxwell_construction,
};

/// Densities, temperature and flux on the two sides of the interface.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JumpInputs {
    pub v_l: f64,
    pub v_g: f64,
    pub theta: f64,
    pub j: f64,
}

impl JumpInputs {
    /// `Z = j²/2`
    pub fn z(&self) -> f64 {
        0.5 * self.j * self.j
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JumpResiduals {
    /// `⟦v⟧j² + ⟦p⟧`
    pub momentum: f64,
    /// `⟦ψ⟧ + ⟦v²/2⟧j² + ⟦pv⟧`
    pub energy: f64,
    /// `⟦ψ⟧ + ⟦v⟧(p_ℓ + p_g)/2`
    pub energy_alt: f64,
}

pub fn jump_residuals(model: &dyn Eos, inp: &JumpInputs) -> Result<JumpResiduals> {
    if !(inp.v_g >= inp.v_l) || !(inp.j >= 0.0) {
        return Err(Error::InvalidInput(format!(
            "jump inputs need v_g >= v_l and j >= 0 (got {inp:?})"
        )));
    }
    let (t, j2) = (inp.theta, inp.j * inp.j);
    let lo = model.point((inp.v_l, t).into())?;
    let hi = model.point((inp.v_g, t).into())?;
    let dv = inp.v_g - inp.v_l;
    let dpsi = hi.psi - lo.psi;
    Ok(JumpResiduals {
        momentum: dv * j2 + (hi.p - lo.p),
        energy: dpsi + 0.5 * (inp.v_g * inp.v_g - inp.v_l * inp.v_l) * j2 + (hi.p * inp.v_g - lo.p * inp.v_l),
        energy_alt: dpsi + dv * 0.5 * (lo.p + hi.p),
    })
}

fn gap_scale(model: &dyn Eos, v_l: f64) -> f64 {
    model.critical_point().map(|cp| cp.v_c).unwrap_or(v_l)
}

fn check_gap(model: &dyn Eos, v_l: f64, v_g: f64) -> Result<()> {
    let gap = v_g - v_l;
    if !(gap >= 1e-12 * gap_scale(model, v_l)) {
        return Err(Error::DegenerateGap { gap });
    }
    Ok(())
}

/// `(f₁, f₂)` with all volumes free; `v_g` is the gas-side volume.
fn residual(model: &dyn Eos, theta: f64, v_l: f64, v_g: f64, z: f64) -> Result<[f64; 2]> {
    model.check((v_l, theta).into())?;
    model.check((v_g, theta).into())?;
    check_gap(model, v_l, v_g)?;
    let gap = v_g - v_l;
    let slope = (model.psi(v_l, theta) - model.psi(v_g, theta)) / gap;
    Ok([
        model.p(v_l, theta) - z * gap - slope,
        model.p(v_g, theta) + z * gap - slope,
    ])
}

/// Partial derivatives of `(f₁, f₂)` in `(θ, v_ℓ, v_g)`.
fn full_jacobian(model: &dyn Eos, theta: f64, v_l: f64, v_g: f64, z: f64) -> Result<[[f64; 3]; 2]> {
    model.check((v_l, theta).into())?;
    model.check((v_g, theta).into())?;
    check_gap(model, v_l, v_g)?;
    let gap = v_g - v_l;
    let slope = (model.psi(v_l, theta) - model.psi(v_g, theta)) / gap;
    let eta_jump = (model.eta(v_l, theta) - model.eta(v_g, theta)) / gap;
    let r_g = (slope - model.p(v_g, theta)) / gap;
    let r_l = (slope - model.p(v_l, theta)) / gap;
    Ok([
        [
            model.deta_dv(v_l, theta) + eta_jump,
            model.dp_dv(v_l, theta) + z - r_l,
            -z + r_g,
        ],
        [
            model.deta_dv(v_g, theta) + eta_jump,
            -z - r_l,
            model.dp_dv(v_g, theta) + z + r_g,
        ],
    ])
}

/// `(f₁, f₂)` for fixed liquid volume `v_l` at gas volume `v`.
pub fn f_system(model: &dyn Eos, v_l: f64, theta: f64, v: f64, z: f64) -> Result<[f64; 2]> {
    check_z(z)?;
    residual(model, theta, v_l, v, z)
}

/// Jacobian of [`f_system`] in `(θ, v)`:
///
/// ```text
/// ∂θf₁ = ∂vη̃_ℓ + (η̃_ℓ − η̃_g)/(v − v_ℓ)    ∂vf₁ = −Z + R
/// ∂θf₂ = ∂vη̃_g + (η̃_ℓ − η̃_g)/(v − v_ℓ)    ∂vf₂ = ∂vp̃_g + Z + R
/// R = ((ψ̃_ℓ − ψ̃_g)/(v − v_ℓ) − p̃_g)/(v − v_ℓ)
/// ```
pub fn f_jacobian(model: &dyn Eos, v_l: f64, theta: f64, v: f64, z: f64) -> Result<Jacobian2> {
    check_z(z)?;
    let full = full_jacobian(model, theta, v_l, v, z)?;
    Ok([[full[0][0], full[0][2]], [full[1][0], full[1][2]]])
}

fn check_z(z: f64) -> Result<()> {
    if !(z >= 0.0) || !z.is_finite() {
        return Err(Error::InvalidInput(format!("Z = {z} must be finite and >= 0")));
    }
    Ok(())
}

/// Which volume is held fixed while `θ` and the other volume are solved for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FixedPhase {
    /// Given liquid volume; unknowns `(θ, v_g)`.
    #[default]
    Liquid,
    /// Given gas volume; unknowns `(θ, v_ℓ)`.
    Gas,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContinuationSchedule {
    /// First `Z` increment in units of `p_c / v_c`.
    pub initial_step: f64,
    pub growth: f64,
    pub shrink: f64,
    /// Give up once the increment falls below this fraction of the target `Z`.
    pub min_step_fraction: f64,
    pub max_steps: usize,
}

impl Default for ContinuationSchedule {
    fn default() -> Self {
        Self {
            initial_step: 1e-6,
            growth: 2.0,
            shrink: 0.5,
            min_step_fraction: 1e-12,
            max_steps: 100_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterfaceSolution {
    pub theta_star: f64,
    pub v_l: f64,
    pub v_g: f64,
    pub p_l: f64,
    pub p_g: f64,
    pub z: f64,
    pub j: f64,
    /// Boiling (or dew) temperature of the fixed phase: the `Z = 0` seed.
    pub theta_b: f64,
    /// Accepted continuation steps.
    pub steps: usize,
    pub fixed: FixedPhase,
    /// `‖(f₁, f₂)‖∞` at the solution.
    pub residual: f64,
}

impl InterfaceSolution {
    pub fn rho_g(&self) -> f64 {
        1.0 / self.v_g
    }

    /// `ℓ = −θ*(η̃(v_g) − η̃(v_ℓ))` at the interface state.
    pub fn latent_heat(&self, model: &dyn Eos) -> f64 {
        -self.theta_star * (model.eta(self.v_g, self.theta_star) - model.eta(self.v_l, self.theta_star))
    }

    /// `(⟦pʲ⟧, ⟦∂ρΨʲ⟧)`; both vanish at an exact solution.
    pub fn modified_jumps(&self, model: &dyn Eos) -> Result<(f64, f64)> {
        let g = model.modified_quantities(1.0 / self.v_g, self.theta_star, self.j)?;
        let l = model.modified_quantities(1.0 / self.v_l, self.theta_star, self.j)?;
        Ok((g.p_j - l.p_j, g.dpsi_j_drho - l.dpsi_j_drho))
    }

    /// `j²` implied by the momentum balance `(p_ℓ − p_g)/(v_g − v_ℓ)`.
    pub fn momentum_flux_squared(&self) -> f64 {
        (self.p_l - self.p_g) / (self.v_g - self.v_l)
    }

    /// `∂²ρΨʲ` at the gas density. The continuation branch folds where this
    /// reaches zero.
    pub fn gas_stiffness(&self, model: &dyn Eos) -> Result<f64> {
        model.d2_volume_helmholtz_mod(1.0 / self.v_g, self.theta_star, self.j)
    }
}

/// Interface temperature and gas volume for liquid volume `v_l` at flux `j`.
pub fn solve_interface(model: &dyn Eos, v_l: f64, j: f64) -> Result<InterfaceSolution> {
    solve_interface_with(
        model,
        FixedPhase::Liquid,
        v_l,
        j,
        &ContinuationSchedule::default(),
    )
}

struct Branch<'a> {
    model: &'a dyn Eos,
    fixed: FixedPhase,
    v_fixed: f64,
}

impl Branch<'_> {
    fn volumes(&self, v_free: f64) -> (f64, f64) {
        match self.fixed {
            FixedPhase::Liquid => (self.v_fixed, v_free),
            FixedPhase::Gas => (v_free, self.v_fixed),
        }
    }

    fn f(&self, x: [f64; 2], z: f64) -> Result<[f64; 2]> {
        let (v_l, v_g) = self.volumes(x[1]);
        residual(self.model, x[0], v_l, v_g, z)
    }

    fn jac(&self, x: [f64; 2], z: f64) -> Result<Jacobian2> {
        let (v_l, v_g) = self.volumes(x[1]);
        let full = full_jacobian(self.model, x[0], v_l, v_g, z)?;
        let col = match self.fixed {
            FixedPhase::Liquid => 2,
            FixedPhase::Gas => 1,
        };
        Ok([[full[0][0], full[0][col]], [full[1][0], full[1][col]]])
    }

    /// `dx/dZ = −J⁻¹ ∂Z f` with `∂Z f = (−Δv, Δv)`.
    fn tangent(&self, x: [f64; 2], z: f64) -> Result<[f64; 2]> {
        let (v_l, v_g) = self.volumes(x[1]);
        let gap = v_g - v_l;
        solve2(&self.jac(x, z)?, [-gap, gap])
    }

    fn correct(&self, x0: [f64; 2], z: f64, cfg: &NewtonConfig) -> Result<[f64; 2]> {
        Ok(newton2d(|x| self.f(x, z), |x| self.jac(x, z), x0, cfg)?.x)
    }
}

fn det(j: &Jacobian2) -> f64 {
    j[0][0] * j[1][1] - j[0][1] * j[1][0]
}

/// Continuation in `Z` from the boiling (or dew) point of the fixed phase.
///
/// Steps grow geometrically on success and are halved on failure. A step is
/// only accepted if the Jacobian keeps the sign it has at the seed, so the
/// solve never crosses the fold onto the other branch.
pub fn solve_interface_with(
    model: &dyn Eos,
    fixed: FixedPhase,
    v_fixed: f64,
    j: f64,
    schedule: &ContinuationSchedule,
) -> Result<InterfaceSolution> {
    if !(j >= 0.0) || !j.is_finite() {
        return Err(Error::InvalidInput(format!(
            "mass flux {j} must be finite and >= 0"
        )));
    }
    let cp = critical_for_coexistence(model, f64::NAN)?;
    let (theta_b, v_free0) = match fixed {
        FixedPhase::Liquid => {
            let tb = boiling_temperature(model, v_fixed)?;
            (tb, maxwell_construction(model, tb)?.v_g_star)
        }
        FixedPhase::Gas => {
            let td = dew_temperature(model, v_fixed)?;
            (td, maxwell_construction(model, td)?.v_l_star)
        }
    };
    let branch = Branch {
        model,
        fixed,
        v_fixed,
    };
    let newton = NewtonConfig {
        abs_tol: 1e-12 * cp.p_c,
        ..NewtonConfig::default()
    };

    let mut x = [theta_b, v_free0];
    if branch.f(x, 0.0)?.iter().any(|r| r.abs() > newton.abs_tol) {
        x = branch.correct(x, 0.0, &newton)?;
    }
    let seed_sign = det(&branch.jac(x, 0.0)?).signum();

    let z_target = 0.5 * j * j;
    let mut z = 0.0;
    let mut dz = (schedule.initial_step * cp.p_c / cp.v_c).min(z_target);
    let mut steps = 0;
    while z < z_target {
        if steps >= schedule.max_steps || dz < schedule.min_step_fraction * z_target {
            return Err(Error::ContinuationFailed {
                z_reached: z,
                z_target,
            });
        }
        let z_next = (z + dz).min(z_target);
        let attempt = branch.tangent(x, z).and_then(|t| {
            let pred = [x[0] + (z_next - z) * t[0], x[1] + (z_next - z) * t[1]];
            let sol = branch.correct(pred, z_next, &newton)?;
            if det(&branch.jac(sol, z_next)?).signum() != seed_sign {
                return Err(Error::SingularJacobian { det: 0.0 });
            }
            Ok(sol)
        });
        match attempt {
            Ok(sol) => {
                x = sol;
                z = z_next;
                steps += 1;
                dz *= schedule.growth;
            }
            Err(_) => dz *= schedule.shrink,
        }
    }

    let f = branch.f(x, z)?;
    let (v_l, v_g) = branch.volumes(x[1]);
    Ok(InterfaceSolution {
        theta_star: x[0],
        v_l,
        v_g,
        p_l: model.p(v_l, x[0]),
        p_g: model.p(v_g, x[0]),
        z,
        j,
        theta_b,
        steps,
        fixed,
        residual: f[0].abs().max(f[1].abs()),
    })
}

/// Number of sign changes of `∂²ρΨʲ(·, θ)` on a log-spaced density grid
/// spanning the whole admissible range.
pub fn sign_changes_modified(model: &dyn Eos, theta: f64, j: f64, n_grid: usize) -> Result<usize> {
    if n_grid < 1000 {
        return Err(Error::InvalidInput(format!(
            "n_grid = {n_grid} must be at least 1000"
        )));
    }
    let b = model.excluded_volume();
    let b_ref = if b > 0.0 { b } else { 1.0 };
    let rho_lo = 1e-9 / b_ref;
    let rho_hi = if b > 0.0 { (1.0 - 1e-9) / b } else { 1e9 / b_ref };
    let mut count = 0;
    let mut last = 0.0_f64;
    for rho in log_space(rho_lo, rho_hi, n_grid) {
        let d = model.d2_volume_helmholtz_mod(rho, theta, j)?;
        if d != 0.0 {
            if last != 0.0 && d.signum() != last.signum() {
                count += 1;
            }
            last = d;
        }
    }
    Ok(count)
}

/// Smallest flux in `[j_lo, j_hi]` at which `∂²ρΨʲ(·, θ)` stops changing sign
/// three times, located by bisection on [`sign_changes_modified`].
pub fn sign_change_transition_flux(
    model: &dyn Eos,
    theta: f64,
    j_lo: f64,
    j_hi: f64,
    n_grid: usize,
) -> Result<f64> {
    let three = |j: f64| -> Result<bool> { Ok(sign_changes_modified(model, theta, j, n_grid)? >= 3) };
    if !three(j_lo)? || three(j_hi)? {
        return Err(Error::InvalidInput(format!(
            "[{j_lo}, {j_hi}] does not bracket the loss of the third sign change"
        )));
    }
    let (mut lo, mut hi) = (j_lo, j_hi);
    while hi - lo > 1e-10 * hi {
        let mid = 0.5 * (lo + hi);
        if three(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(hi)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluxScan {
    /// Largest flux found to converge.
    pub j_max: f64,
    /// Smallest flux found to fail, if any failed.
    pub j_fail: Option<f64>,
    pub solution: InterfaceSolution,
}

/// Relative width at which [`max_flux_scan`] stops bisecting.
pub const FLUX_SCAN_REL_WIDTH: f64 = 1e-4;

/// Scans `n` fluxes on `[j_lo, j_hi]` and bisects between the last success
/// and the first continuation failure.
pub fn max_flux_scan(model: &dyn Eos, v_l: f64, j_lo: f64, j_hi: f64, n: usize) -> Result<FluxScan> {
    if n < 2 || !(j_lo >= 0.0) || !(j_lo < j_hi) {
        return Err(Error::InvalidInput(format!(
            "flux scan needs 0 <= j_lo < j_hi and n >= 2 (got {j_lo}, {j_hi}, {n})"
        )));
    }
    let attempt = |j: f64| -> Result<Option<InterfaceSolution>> {
        match solve_interface(model, v_l, j) {
            Ok(s) => Ok(Some(s)),
            Err(Error::ContinuationFailed { .. }) => Ok(None),
            Err(e) => Err(e),
        }
    };

    let grid = crate::numerics::lin_space(j_lo, j_hi, n);
    let mut best: Option<(f64, InterfaceSolution)> = None;
    let mut fail = None;
    for &j in &grid {
        match attempt(j)? {
            Some(s) => best = Some((j, s)),
            None => {
                fail = Some(j);
                break;
            }
        }
    }
    let (mut lo, mut sol) = best.ok_or(Error::AllFailed(j_lo))?;
    let Some(mut hi) = fail else {
        return Ok(FluxScan {
            j_max: lo,
            j_fail: None,
            solution: sol,
        });
    };
    while hi - lo > FLUX_SCAN_REL_WIDTH * lo.max(f64::MIN_POSITIVE) {
        let mid = 0.5 * (lo + hi);
        match attempt(mid)? {
            Some(s) => {
                lo = mid;
                sol = s;
            }
            None => hi = mid,
        }
    }
    Ok(FluxScan {
        j_max: lo,
        j_fail: Some(hi),
        solution: sol,
    })
}

/// Flux at which `∂²ρΨʲ` vanishes at the gas endpoint of the branch, found by
/// bisection between two fluxes with opposite stiffness signs.
pub fn gas_spinodal_flux(model: &dyn Eos, v_l: f64, j_lo: f64, j_hi: f64) -> Result<f64> {
    let stiffness = |j: f64| -> Result<f64> { solve_interface(model, v_l, j)?.gas_stiffness(model) };
    let cfg = RootConfig {
        abs_tol: 1e-14,
        x_tol: 1e-10 * j_hi,
        max_iter: 200,
    };
    find_root_bracketed(stiffness, j_lo, j_hi, &cfg)
}
