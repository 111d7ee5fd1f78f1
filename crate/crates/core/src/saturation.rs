//! Liquid–vapor coexistence: the common tangent of `ψ̃(·, θ)`, saturated
//! volumes and pressure, boiling temperature, latent heat, and the
//! Clausius–Clapeyron slope.

use crate::eos::{CriticalPoint, Eos};
use crate::error::{Error, Result};
use crate::numerics::{find_root_bracketed, newton2d, NewtonConfig, RootConfig};

/// Coexistence is not attempted above this fraction of `θ_c`; the two
/// endpoints merge and the tangent system degenerates.
pub const NEAR_CRITICAL_FRACTION: f64 = 0.999;

/// Lowest temperature (as a fraction of `θ_c`) searched by
/// [`boiling_temperature`] and [`dew_temperature`].
pub const MIN_SEARCH_FRACTION: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SaturationPoint {
    pub theta: f64,
    pub v_l_star: f64,
    pub v_g_star: f64,
    pub p_star: f64,
    pub eta_l_star: f64,
    pub eta_g_star: f64,
    /// Latent heat `ℓ = −θ(η_g* − η_ℓ*)`; negative for evaporation.
    pub ell: f64,
}

impl SaturationPoint {
    /// `|p̃(v_ℓ*) − p̃(v_g*)|`
    pub fn pressure_residual(&self, model: &dyn Eos) -> f64 {
        (model.p(self.v_l_star, self.theta) - model.p(self.v_g_star, self.theta)).abs()
    }

    /// `|ψ̃(v_g*) − ψ̃(v_ℓ*) + (v_g* − v_ℓ*)p*|`, the flat-interface energy
    /// balance at zero flux.
    pub fn tangent_residual(&self, model: &dyn Eos) -> f64 {
        let t = self.theta;
        (model.psi(self.v_g_star, t) - model.psi(self.v_l_star, t)
            + (self.v_g_star - self.v_l_star) * self.p_star)
            .abs()
    }
}

pub(crate) fn critical_for_coexistence(model: &dyn Eos, theta: f64) -> Result<CriticalPoint> {
    match model.critical_point() {
        Ok(cp) => Ok(cp),
        Err(Error::NoCriticalPoint(_)) => Err(Error::NoPhaseTransition(theta)),
        Err(e) => Err(e),
    }
}

fn check_below_cutoff(theta: f64, cp: &CriticalPoint) -> Result<()> {
    let limit = NEAR_CRITICAL_FRACTION * cp.theta_c;
    if theta > limit {
        return Err(Error::AboveCritical {
            theta,
            limit,
            theta_c: cp.theta_c,
        });
    }
    if !(theta > 0.0) {
        return Err(Error::Domain(format!("temperature {theta} must be positive")));
    }
    Ok(())
}

fn tight(scale: f64) -> RootConfig {
    RootConfig {
        abs_tol: 1e-300,
        x_tol: 4.0 * f64::EPSILON * scale,
        max_iter: 200,
    }
}

/// Local extrema of `p̃(·, θ)`: `(v_min, v_max)` bounding the region where
/// `∂vp̃ > 0`.
pub fn spinodal_volumes(model: &dyn Eos, theta: f64) -> Result<(f64, f64)> {
    let cp = critical_for_coexistence(model, theta)?;
    let b = model.excluded_volume();
    let b_eff = b.max(1e-12 * cp.v_c);

    let mut v_mid = cp.v_c;
    if !(model.dp_dv(v_mid, theta) > 0.0) {
        // Scan for any unstable point; none means the isotherm is monotone.
        let grid = crate::numerics::log_space(b_eff * (1.0 + 1e-6), 100.0 * cp.v_c, 2000);
        v_mid = grid
            .into_iter()
            .map(|v| (v, model.dp_dv(v, theta)))
            .filter(|(_, d)| *d > 0.0)
            .max_by(|x, y| x.1.total_cmp(&y.1))
            .map(|(v, _)| v)
            .ok_or(Error::NoPhaseTransition(theta))?;
    }

    let mut v_lo = v_mid;
    for k in 1..=60 {
        v_lo = b_eff + (v_mid - b_eff) * 0.5f64.powi(k);
        if model.dp_dv(v_lo, theta) < 0.0 {
            break;
        }
    }
    let mut v_hi = v_mid;
    for _ in 0..200 {
        v_hi *= 2.0;
        if model.dp_dv(v_hi, theta) < 0.0 {
            break;
        }
    }
    let dp = |v: f64| Ok(model.dp_dv(v, theta));
    let v_min = find_root_bracketed(dp, v_lo, v_mid, &tight(v_mid))?;
    let v_max = find_root_bracketed(dp, v_mid, v_hi, &tight(v_hi))?;
    Ok((v_min, v_max))
}

/// The two volumes on the stable branches where `p̃(v, θ) = pressure`.
fn volumes_at_pressure(
    model: &dyn Eos,
    theta: f64,
    pressure: f64,
    spinodal: (f64, f64),
) -> Result<(f64, f64)> {
    let b = model.excluded_volume();
    let (v_min, v_max) = spinodal;
    let f = |v: f64| Ok(model.p(v, theta) - pressure);

    let mut lo = v_min;
    for k in 1..=200 {
        lo = b + (v_min - b) * 0.5f64.powi(k);
        if model.p(lo, theta) > pressure {
            break;
        }
    }
    let v_l = find_root_bracketed(f, lo, v_min, &tight(v_min))?;

    let mut hi = v_max;
    for _ in 0..1100 {
        hi *= 2.0;
        if model.p(hi, theta) < pressure || !hi.is_finite() {
            break;
        }
    }
    let v_g = find_root_bracketed(f, v_max, hi, &tight(hi))?;
    Ok((v_l, v_g))
}

/// Common tangent of `ψ̃(·, θ)`: equal pressure and equal tangent intercept
/// `v∂vψ̃ − ψ̃` at both ends.
///
/// The saturated pressure is first bracketed between the spinodal pressures
/// (the energy balance is increasing in `p`), then `(v_ℓ*, v_g*)` is polished
/// by Newton on the tangent conditions.
pub fn maxwell_construction(model: &dyn Eos, theta: f64) -> Result<SaturationPoint> {
    let cp = critical_for_coexistence(model, theta)?;
    check_below_cutoff(theta, &cp)?;
    let spin = spinodal_volumes(model, theta)?;

    let balance = |pressure: f64| -> Result<f64> {
        let (v_l, v_g) = volumes_at_pressure(model, theta, pressure, spin)?;
        Ok(model.psi(v_g, theta) - model.psi(v_l, theta) + (v_g - v_l) * pressure)
    };

    let p_hi = model.p(spin.1, theta);
    let p_spin_lo = model.p(spin.0, theta);
    let mut p_lo = if p_spin_lo > 0.0 { p_spin_lo } else { 0.5 * p_hi };
    for _ in 0..1000 {
        if balance(p_lo)? < 0.0 {
            break;
        }
        p_lo *= 0.5;
    }
    let cfg = RootConfig {
        abs_tol: 1e-300,
        x_tol: 2.0 * f64::EPSILON * p_hi,
        max_iter: 200,
    };
    let p_star = find_root_bracketed(balance, p_lo, p_hi, &cfg)?;
    let (v_l0, v_g0) = volumes_at_pressure(model, theta, p_star, spin)?;

    let gibbs = |v: f64| model.psi(v, theta) + model.p(v, theta) * v;
    let newton_cfg = NewtonConfig {
        abs_tol: 1e-13 * cp.p_c.max(gibbs(v_l0).abs()).max(1e-300),
        ..NewtonConfig::default()
    };
    let (v_l, v_g) = match newton2d(
        |x| {
            if x[0] <= model.excluded_volume() || x[1] <= x[0] {
                return Err(Error::Domain("tangent iterate left the domain".into()));
            }
            Ok([
                model.p(x[0], theta) - model.p(x[1], theta),
                gibbs(x[0]) - gibbs(x[1]),
            ])
        },
        |x| {
            let (dl, dg) = (model.dp_dv(x[0], theta), model.dp_dv(x[1], theta));
            Ok([[dl, -dg], [x[0] * dl, -x[1] * dg]])
        },
        [v_l0, v_g0],
        &newton_cfg,
    ) {
        Ok(sol) => (sol.x[0], sol.x[1]),
        // The bracketed solution is already at roundoff level.
        Err(Error::NoConvergence { .. }) => (v_l0, v_g0),
        Err(e) => return Err(e),
    };

    let eta_l = model.eta(v_l, theta);
    let eta_g = model.eta(v_g, theta);
    Ok(SaturationPoint {
        theta,
        v_l_star: v_l,
        v_g_star: v_g,
        p_star: 0.5 * (model.p(v_l, theta) + model.p(v_g, theta)),
        eta_l_star: eta_l,
        eta_g_star: eta_g,
        ell: -theta * (eta_g - eta_l),
    })
}

/// `ℓ = −θ(η̃(v_g*) − η̃(v_ℓ*))`
pub fn latent_heat(model: &dyn Eos, sat: &SaturationPoint) -> Result<f64> {
    if !(sat.v_g_star >= sat.v_l_star) {
        return Err(Error::InvalidInput(format!(
            "saturation point has v_g* = {} < v_l* = {}",
            sat.v_g_star, sat.v_l_star
        )));
    }
    let t = sat.theta;
    Ok(-t * (model.entropy((sat.v_g_star, t).into())? - model.entropy((sat.v_l_star, t).into())?))
}

fn coexistence_window(model: &dyn Eos, theta_hint: f64) -> Result<(CriticalPoint, f64, f64)> {
    let cp = critical_for_coexistence(model, theta_hint)?;
    Ok((
        cp,
        MIN_SEARCH_FRACTION * cp.theta_c,
        NEAR_CRITICAL_FRACTION * cp.theta_c,
    ))
}

/// Temperature `θ_b` at which `v_l` is the saturated liquid volume.
pub fn boiling_temperature(model: &dyn Eos, v_l: f64) -> Result<f64> {
    let (cp, t_lo, t_hi) = coexistence_window(model, f64::NAN)?;
    let b = model.excluded_volume();
    if !(v_l > b && v_l < cp.v_c) {
        return Err(Error::OutOfRange(format!(
            "liquid volume {v_l} must lie in (b, v_c) = ({b}, {})",
            cp.v_c
        )));
    }
    let lo_sat = maxwell_construction(model, t_lo)?;
    if v_l < lo_sat.v_l_star {
        return Err(Error::OutOfRange(format!(
            "liquid volume {v_l} is below v_l*({t_lo}) = {}; boiling point under the search window",
            lo_sat.v_l_star
        )));
    }
    let hi_sat = maxwell_construction(model, t_hi)?;
    if v_l > hi_sat.v_l_star {
        return Err(Error::AboveCritical {
            theta: f64::NAN,
            limit: t_hi,
            theta_c: cp.theta_c,
        });
    }
    let cfg = RootConfig {
        abs_tol: 1e-15 * cp.v_c,
        x_tol: 1e-15 * cp.theta_c,
        max_iter: 200,
    };
    find_root_bracketed(
        |t| Ok(maxwell_construction(model, t)?.v_l_star - v_l),
        t_lo,
        t_hi,
        &cfg,
    )
}

/// Temperature at which `v_g` is the saturated gas volume.
pub fn dew_temperature(model: &dyn Eos, v_g: f64) -> Result<f64> {
    let (cp, t_lo, t_hi) = coexistence_window(model, f64::NAN)?;
    if !(v_g > cp.v_c) {
        return Err(Error::OutOfRange(format!(
            "gas volume {v_g} must exceed v_c = {}",
            cp.v_c
        )));
    }
    let lo_sat = maxwell_construction(model, t_lo)?;
    if v_g > lo_sat.v_g_star {
        return Err(Error::OutOfRange(format!(
            "gas volume {v_g} is above v_g*({t_lo}) = {}",
            lo_sat.v_g_star
        )));
    }
    let hi_sat = maxwell_construction(model, t_hi)?;
    if v_g < hi_sat.v_g_star {
        return Err(Error::AboveCritical {
            theta: f64::NAN,
            limit: t_hi,
            theta_c: cp.theta_c,
        });
    }
    let cfg = RootConfig {
        abs_tol: 1e-15 * v_g,
        x_tol: 1e-15 * cp.theta_c,
        max_iter: 200,
    };
    find_root_bracketed(
        |t| Ok(maxwell_construction(model, t)?.v_g_star - v_g),
        t_lo,
        t_hi,
        &cfg,
    )
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClausiusClapeyron {
    pub theta: f64,
    /// Central difference of `p*(θ)`.
    pub fd_slope: f64,
    /// `(−ℓ) / (θ(v_g* − v_ℓ*))`
    pub predicted_slope: f64,
    /// `|fd_slope − predicted_slope| / |fd_slope|`
    pub residual: f64,
}

pub fn clausius_clapeyron_residual(model: &dyn Eos, theta: f64, h: f64) -> Result<ClausiusClapeyron> {
    if !(h > 0.0) || !(theta - h > 0.0) {
        return Err(Error::InvalidInput(format!(
            "need h > 0 and theta - h > 0 (theta = {theta}, h = {h})"
        )));
    }
    let up = maxwell_construction(model, theta + h)?;
    let down = maxwell_construction(model, theta - h)?;
    let mid = maxwell_construction(model, theta)?;
    let fd_slope = (up.p_star - down.p_star) / (2.0 * h);
    let predicted_slope = -mid.ell / (theta * (mid.v_g_star - mid.v_l_star));
    Ok(ClausiusClapeyron {
        theta,
        fd_slope,
        predicted_slope,
        residual: (fd_slope - predicted_slope).abs() / fd_slope.abs(),
    })
}

/// `n` saturation points evenly spaced in `[theta_lo, theta_hi]`.
pub fn saturation_curve(
    model: &dyn Eos,
    theta_lo: f64,
    theta_hi: f64,
    n: usize,
) -> Result<Vec<SaturationPoint>> {
    if n < 2 || !(theta_lo > 0.0) || !(theta_lo < theta_hi) {
        return Err(Error::InvalidInput(format!(
            "saturation curve needs 0 < theta_lo < theta_hi and n >= 2 (got {theta_lo}, {theta_hi}, {n})"
        )));
    }
    let cp = critical_for_coexistence(model, theta_hi)?;
    check_below_cutoff(theta_hi, &cp)?;
    crate::numerics::lin_space(theta_lo, theta_hi, n)
        .into_iter()
        .map(|t| maxwell_construction(model, t))
        .collect()
}

/// `∂θp̃(v_ℓ*, θ) − dp*/dθ` with the coexistence slope taken from
/// Clausius–Clapeyron. Positive values mean the interface temperature can be
/// continued from the boiling point in the mass flux.
pub fn liquid_slope_excess(model: &dyn Eos, theta: f64) -> Result<f64> {
    let sat = maxwell_construction(model, theta)?;
    let slope = -sat.ell / (theta * (sat.v_g_star - sat.v_l_star));
    Ok(model.dp_dtheta(sat.v_l_star, theta) - slope)
}
