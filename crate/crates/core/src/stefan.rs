//! Stationary two-phase Stefan problem on the half line `x ≥ 0`.
//!
//! Liquid enters at `x = 0` with temperature `θ_in` and is heated by a
//! uniform source `r`; it turns to vapor at the dryout point `x*`, where the
//! temperature reaches the interface value `θ*`. With `y = θ₁ − θ*` the
//! liquid branch reduces to
//!
//! ```text
//! b y′ − a y″ − c = 0,   y(0) = −y₀,   y(x̂) = 0,   y′(x̂) = z₀
//! ```
//!
//! whose solution is closed form, leaving one scalar equation for `x̂`.

use crate::error::{Error, Result};
use crate::numerics::{find_root_bracketed, lin_space, RootConfig};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StefanInputs {
    pub kappa1: f64,
    pub kappa2: f64,
    pub d1: f64,
    pub d2: f64,
    /// Volume-specific heat source, the same in both phases.
    pub r: f64,
    /// Mass flux through the interface.
    pub j: f64,
    /// Latent heat, negative by convention.
    pub ell: f64,
    pub theta_in: f64,
    pub theta_star: f64,
    /// Gas specific volume; only used to report the gas velocity.
    pub v_gas: Option<f64>,
}

impl StefanInputs {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("kappa1", self.kappa1),
            ("kappa2", self.kappa2),
            ("d1", self.d1),
            ("d2", self.d2),
            ("r", self.r),
            ("j", self.j),
        ];
        for (name, x) in positive {
            if !(x > 0.0) || !x.is_finite() {
                return Err(Error::InvalidInput(format!(
                    "{name} = {x} must be positive and finite"
                )));
            }
        }
        if !(self.ell < 0.0) || !self.ell.is_finite() {
            return Err(Error::InvalidInput(format!(
                "latent heat {} must be negative",
                self.ell
            )));
        }
        if !self.theta_in.is_finite() || !self.theta_star.is_finite() {
            return Err(Error::InvalidInput("temperatures must be finite".into()));
        }
        if !(self.theta_in < self.theta_star) {
            return Err(Error::InvalidInput(format!(
                "theta_in must be below theta_star ({} >= {})",
                self.theta_in, self.theta_star
            )));
        }
        if let Some(v) = self.v_gas {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidInput(format!("gas volume {v} must be positive")));
            }
        }
        Ok(())
    }

    /// `d₂r/(κ₂j²)`, the largest `−ℓ` that still admits dryout.
    pub fn dryout_bound(&self) -> f64 {
        self.d2 * self.r / (self.kappa2 * self.j * self.j)
    }

    /// Slope `r/(κ₂j)` of the gas temperature.
    pub fn gas_slope(&self) -> f64 {
        self.r / (self.kappa2 * self.j)
    }
}

/// `(−ℓ) ≤ d₂r/(κ₂j²)`; equality counts.
pub fn dryout_condition(inp: &StefanInputs) -> bool {
    -inp.ell <= inp.dryout_bound()
}

/// Coefficients and data of the reduced boundary value problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FreeBoundaryProblem {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub y0: f64,
    pub z0: f64,
}

impl FreeBoundaryProblem {
    pub fn validate(&self) -> Result<()> {
        for (name, x) in [("a", self.a), ("b", self.b), ("c", self.c), ("y0", self.y0)] {
            if !(x > 0.0) || !x.is_finite() {
                return Err(Error::InvalidInput(format!(
                    "{name} = {x} must be positive and finite"
                )));
            }
        }
        if !(self.z0 >= 0.0) || !self.z0.is_finite() {
            return Err(Error::InvalidInput(format!(
                "z0 = {} must be finite and >= 0",
                self.z0
            )));
        }
        Ok(())
    }

    /// `b/a`, the inverse diffusion length.
    fn rate(&self) -> f64 {
        self.b / self.a
    }

    /// `y(x)` for the solution that vanishes at `xhat`.
    pub fn y(&self, xhat: f64, x: f64) -> f64 {
        let s = self.rate();
        let k = self.y0 - self.c / self.b * xhat;
        self.c / self.b * x - self.y0 + k * growth(s, x, xhat) / (-(-s * xhat).exp_m1())
    }

    /// `y′(x)` for the solution that vanishes at `xhat`.
    pub fn dy(&self, xhat: f64, x: f64) -> f64 {
        let s = self.rate();
        let k = self.y0 - self.c / self.b * xhat;
        self.c / self.b + s * k * (-s * (xhat - x)).exp() / (-(-s * xhat).exp_m1())
    }
}

/// `e^{s(x−x̂)} − e^{−s x̂}` without overflow or cancellation near `x = 0`.
fn growth(s: f64, x: f64, xhat: f64) -> f64 {
    if s * x < 1.0 {
        (-s * xhat).exp() * (s * x).exp_m1()
    } else {
        (-s * (xhat - x)).exp() - (-s * xhat).exp()
    }
}

/// Maps the Stefan data to `(a, b, c, y₀, z₀) = (d₁, κ₁j, r, θ* − θ_in, θ₁′(x*))`.
pub fn canonical_reduction(inp: &StefanInputs) -> Result<FreeBoundaryProblem> {
    inp.validate()?;
    if !dryout_condition(inp) {
        return Err(Error::NoDryout {
            lhs: -inp.ell,
            rhs: inp.dryout_bound(),
        });
    }
    let z0 = (inp.d2 * inp.gas_slope() + inp.ell * inp.j) / inp.d1;
    Ok(FreeBoundaryProblem {
        a: inp.d1,
        b: inp.kappa1 * inp.j,
        c: inp.r,
        y0: inp.theta_star - inp.theta_in,
        // the condition holds, so a negative value is rounding only
        z0: z0.max(0.0),
    })
}

/// Slope `y′(x̂)` of the solution with `y(0) = −y₀`, `y(x̂) = 0`:
///
/// ```text
/// z₀ = c/b + (b/a)(y₀ − (c/b)x̂) / (1 − e^{−(b/a)x̂})
/// ```
pub fn z0_of_xhat(a: f64, b: f64, c: f64, y0: f64, xhat: f64) -> Result<f64> {
    if !(xhat > 0.0) || !xhat.is_finite() {
        return Err(Error::InvalidInput(format!(
            "xhat = {xhat} must be positive and finite"
        )));
    }
    let s = b / a;
    Ok(c / b + s * (y0 - c / b * xhat) / (-(-s * xhat).exp_m1()))
}

fn root_config(scale: f64) -> RootConfig {
    RootConfig {
        abs_tol: 1e-14 * scale,
        x_tol: 1e-300,
        max_iter: 400,
    }
}

/// Zero of `g(x̂) = x̂ − a(1 − e^{−x̂/a}) − y₀`, the `x̂` at which `z₀ = 0`
/// for `b = c = 1`. Strictly increasing in `y₀`.
pub fn xhat_critical(a: f64, y0: f64) -> Result<f64> {
    if !(a > 0.0) || !(y0 > 0.0) || !a.is_finite() || !y0.is_finite() {
        return Err(Error::InvalidInput(format!(
            "xhat_critical needs a > 0, y0 > 0 (got {a}, {y0})"
        )));
    }
    let g = |x: f64| Ok(x + a * (-x / a).exp_m1() - y0);
    // g(0) = −y₀ < 0 and g(y₀ + 2a) > a
    find_root_bracketed(g, 0.0, y0 + 2.0 * a, &root_config(y0))
}

/// Unique `x̂ > 0` with `z0_of_xhat(x̂) = z₀`.
pub fn solve_free_boundary(fbp: &FreeBoundaryProblem) -> Result<f64> {
    fbp.validate()?;
    let FreeBoundaryProblem { a, b, c, y0, z0 } = *fbp;
    if z0 == 0.0 {
        // y = (c/b)Y scales to b = c = 1 with diffusivity a/b
        return xhat_critical(a / b, y0 * b / c);
    }
    let h = |x: f64| Ok(z0_of_xhat(a, b, c, y0, x)? - z0);
    // z₀(x̂) falls from +∞ to −∞; grow a bracket around the length y₀b/c
    let mut lo = y0 * b / c;
    let mut hi = lo;
    while h(lo)? <= 0.0 {
        lo *= 0.5;
        if lo < 1e-300 {
            return Err(Error::NoBracket {
                lo,
                hi,
                f_lo: h(lo)?,
                f_hi: h(hi)?,
            });
        }
    }
    while h(hi)? >= 0.0 {
        hi *= 2.0;
        if !hi.is_finite() {
            return Err(Error::NoBracket {
                lo,
                hi,
                f_lo: h(lo)?,
                f_hi: f64::NAN,
            });
        }
    }
    if lo == hi {
        return Ok(lo);
    }
    find_root_bracketed(h, lo, hi, &root_config(z0.max(1.0)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    Liquid,
    Interface,
    Gas,
}

impl Phase {
    pub fn label(self) -> &'static str {
        match self {
            Phase::Liquid => "liquid",
            Phase::Interface => "interface",
            Phase::Gas => "gas",
        }
    }
}

/// A solved dryout configuration with closed-form temperature profiles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DryoutProfile {
    pub inputs: StefanInputs,
    pub problem: FreeBoundaryProblem,
    pub x_star: f64,
    /// `θ₁(x) = (r/(κ₁j))x + c₂e^{(κ₁j/d₁)x} + c₁`
    pub c1: f64,
    pub c2: f64,
    /// `r/(κ₂j)`
    pub slope2: f64,
    /// `j·v_g`, when the gas volume is known.
    pub u2: Option<f64>,
    /// `θ₁′(x*)`
    pub liquid_slope: f64,
    /// `ℓj + d₂θ₂′ − d₁θ₁′` at `x*`.
    pub stefan_residual: f64,
}

impl DryoutProfile {
    pub fn phase_at(&self, x: f64) -> Phase {
        if x < self.x_star {
            Phase::Liquid
        } else if x == self.x_star {
            Phase::Interface
        } else {
            Phase::Gas
        }
    }

    pub fn temperature_at(&self, x: f64) -> Result<f64> {
        if !(x >= 0.0) {
            return Err(Error::NegativePosition(x));
        }
        let inp = &self.inputs;
        Ok(if x == 0.0 {
            inp.theta_in
        } else if x == self.x_star {
            inp.theta_star
        } else if x < self.x_star {
            inp.theta_star + self.problem.y(self.x_star, x)
        } else {
            inp.theta_star + self.slope2 * (x - self.x_star)
        })
    }

    /// Liquid temperature gradient at `x ≤ x*`.
    pub fn liquid_gradient(&self, x: f64) -> f64 {
        self.problem.dy(self.x_star, x)
    }

    /// Largest `θ₁ − θ*` over `n` evenly spaced points of `[0, x*]`.
    pub fn max_liquid_excess(&self, n: usize) -> Result<f64> {
        lin_space(0.0, self.x_star, n.max(2))
            .into_iter()
            .map(|x| Ok(self.temperature_at(x)? - self.inputs.theta_star))
            .try_fold(f64::NEG_INFINITY, |m, e: Result<f64>| Ok(m.max(e?)))
    }

    /// `n` evenly spaced samples on `[0, x_max]`, with `x*` inserted when it
    /// falls inside.
    pub fn sample(&self, x_max: f64, n: usize) -> Result<Vec<(f64, f64, Phase)>> {
        if !(x_max > 0.0) || n < 2 {
            return Err(Error::InvalidInput(format!(
                "profile needs x_max > 0 and at least 2 points (got {x_max}, {n})"
            )));
        }
        let mut xs = lin_space(0.0, x_max, n);
        if self.x_star <= x_max && !xs.contains(&self.x_star) {
            let at = xs.partition_point(|&x| x < self.x_star);
            xs.insert(at, self.x_star);
        }
        xs.into_iter()
            .map(|x| Ok((x, self.temperature_at(x)?, self.phase_at(x))))
            .collect()
    }
}

/// Outcome of the stationary problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Dryout {
    /// `(−ℓ) > d₂r/(κ₂j²)`: the liquid never dries out.
    Absent {
        lhs: f64,
        rhs: f64,
    },
    Present(DryoutProfile),
}

impl Dryout {
    pub fn exists(&self) -> bool {
        matches!(self, Dryout::Present(_))
    }

    pub fn profile(&self) -> Option<&DryoutProfile> {
        match self {
            Dryout::Present(p) => Some(p),
            Dryout::Absent { .. } => None,
        }
    }

    pub fn x_star(&self) -> Option<f64> {
        self.profile().map(|p| p.x_star)
    }

    pub fn reason(&self) -> Option<String> {
        match *self {
            Dryout::Absent { lhs, rhs } => Some(Error::NoDryout { lhs, rhs }.to_string()),
            Dryout::Present(_) => None,
        }
    }
}

/// Points used to confirm `θ₁ ≤ θ*` on the liquid side.
pub const PROFILE_CHECK_POINTS: usize = 1000;

pub fn solve_stationary(inp: &StefanInputs) -> Result<Dryout> {
    let fbp = match canonical_reduction(inp) {
        Ok(f) => f,
        Err(Error::NoDryout { lhs, rhs }) => return Ok(Dryout::Absent { lhs, rhs }),
        Err(e) => return Err(e),
    };
    let x_star = solve_free_boundary(&fbp)?;

    let s = fbp.b / fbp.a;
    let c2 = (fbp.y0 - fbp.c / fbp.b * x_star) / (s * x_star).exp_m1();
    let liquid_slope = fbp.dy(x_star, x_star);
    let slope2 = inp.gas_slope();
    let profile = DryoutProfile {
        inputs: *inp,
        problem: fbp,
        x_star,
        c1: inp.theta_in - c2,
        c2,
        slope2,
        u2: inp.v_gas.map(|v| inp.j * v),
        liquid_slope,
        stefan_residual: inp.ell * inp.j + inp.d2 * slope2 - inp.d1 * liquid_slope,
    };

    let excess = profile.max_liquid_excess(PROFILE_CHECK_POINTS)?;
    if excess > 1e-12 * fbp.y0.max(inp.theta_star.abs()) {
        return Err(Error::OutOfRange(format!(
            "liquid temperature exceeds the interface value by {excess:e}"
        )));
    }
    Ok(Dryout::Present(profile))
}
