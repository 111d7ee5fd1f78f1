//! Scalar root finding, damped 2-D Newton, central differences and a
//! sampled lower convex envelope.
//!
//! These routines serve double duty: the thermodynamic solvers are built on
//! them, and the tests use them as independent oracles.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootConfig {
    /// Accept `x` once `|f(x)| <= abs_tol`.
    pub abs_tol: f64,
    /// Accept once the bracket is narrower than `x_tol`.
    pub x_tol: f64,
    pub max_iter: usize,
}

impl Default for RootConfig {
    fn default() -> Self {
        Self {
            abs_tol: 1e-12,
            x_tol: 1e-13,
            max_iter: 100,
        }
    }
}

impl RootConfig {
    pub fn new(abs_tol: f64, x_tol: f64, max_iter: usize) -> Result<Self> {
        let cfg = Self {
            abs_tol,
            x_tol,
            max_iter,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0) || !(self.x_tol > 0.0) || self.max_iter == 0 {
            return Err(Error::InvalidInput(format!(
                "root config needs abs_tol > 0, x_tol > 0, max_iter >= 1 (got {self:?})"
            )));
        }
        Ok(())
    }
}

/// Brent's method: inverse quadratic / secant steps, falling back to
/// bisection whenever the interpolated step is not shrinking the bracket
/// fast enough. The returned point always lies inside `[lo, hi]`.
pub fn find_root_bracketed<F>(mut f: F, lo: f64, hi: f64, cfg: &RootConfig) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    cfg.validate()?;
    if !(lo < hi) {
        return Err(Error::InvalidInput(format!(
            "bracket must satisfy lo < hi (got [{lo}, {hi}])"
        )));
    }
    let mut a = lo;
    let mut b = hi;
    let mut fa = f(a)?;
    let mut fb = f(b)?;
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() || fa.is_nan() || fb.is_nan() {
        return Err(Error::NoBracket {
            lo,
            hi,
            f_lo: fa,
            f_hi: fb,
        });
    }

    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;

    for _ in 0..cfg.max_iter {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }

        let tol = 2.0 * f64::EPSILON * b.abs() + 0.5 * cfg.x_tol;
        let half = 0.5 * (c - b);
        if fb.abs() <= cfg.abs_tol || half.abs() <= tol {
            return Ok(b.clamp(lo, hi));
        }

        if e.abs() >= tol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * half * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * half * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            let min1 = 3.0 * half * q - (tol * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = half;
                e = d;
            }
        } else {
            d = half;
            e = d;
        }

        a = b;
        fa = fb;
        b += if d.abs() > tol { d } else { tol.copysign(half) };
        fb = f(b)?;
    }
    Err(Error::NoConvergence {
        iterations: cfg.max_iter,
        residual: fb.abs(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NewtonConfig {
    pub abs_tol: f64,
    pub max_iter: usize,
    /// Maximum number of step halvings per iteration.
    pub max_halvings: usize,
}

impl Default for NewtonConfig {
    fn default() -> Self {
        Self {
            abs_tol: 1e-12,
            max_iter: 50,
            max_halvings: 20,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NewtonSolution {
    pub x: [f64; 2],
    pub residual: f64,
    pub iterations: usize,
}

pub type Jacobian2 = [[f64; 2]; 2];

fn inf_norm(v: [f64; 2]) -> f64 {
    v[0].abs().max(v[1].abs())
}

/// Solves `J d = -f` for a 2×2 system.
pub fn solve2(j: &Jacobian2, f: [f64; 2]) -> Result<[f64; 2]> {
    let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
    let scale = (j[0][0] * j[1][1]).abs() + (j[0][1] * j[1][0]).abs();
    if !det.is_finite() || det.abs() <= 1e-14 * scale || scale == 0.0 {
        return Err(Error::SingularJacobian { det });
    }
    Ok([
        -(j[1][1] * f[0] - j[0][1] * f[1]) / det,
        -(-j[1][0] * f[0] + j[0][0] * f[1]) / det,
    ])
}

/// Damped Newton iteration for `F(x) = 0` in two unknowns with an analytic
/// Jacobian. A trial step that raises `‖F‖∞` (or leaves the domain of `F`)
/// is halved until it does not.
pub fn newton2d<F, J>(mut f: F, mut jac: J, x0: [f64; 2], cfg: &NewtonConfig) -> Result<NewtonSolution>
where
    F: FnMut([f64; 2]) -> Result<[f64; 2]>,
    J: FnMut([f64; 2]) -> Result<Jacobian2>,
{
    let mut x = x0;
    let mut fx = f(x)?;
    let mut norm = inf_norm(fx);
    for it in 0..cfg.max_iter {
        if norm <= cfg.abs_tol {
            return Ok(NewtonSolution {
                x,
                residual: norm,
                iterations: it,
            });
        }
        let step = solve2(&jac(x)?, fx)?;
        let mut lambda = 1.0;
        let mut accepted = None;
        for _ in 0..=cfg.max_halvings {
            let trial = [x[0] + lambda * step[0], x[1] + lambda * step[1]];
            if let Ok(ft) = f(trial) {
                let nt = inf_norm(ft);
                if nt.is_finite() && nt <= norm {
                    accepted = Some((trial, ft, nt));
                    break;
                }
            }
            lambda *= 0.5;
        }
        match accepted {
            Some((xt, ft, nt)) => {
                let stalled = xt == x;
                x = xt;
                fx = ft;
                norm = nt;
                if stalled {
                    break;
                }
            }
            None => break,
        }
    }
    if norm <= cfg.abs_tol {
        return Ok(NewtonSolution {
            x,
            residual: norm,
            iterations: cfg.max_iter,
        });
    }
    Err(Error::NoConvergence {
        iterations: cfg.max_iter,
        residual: norm,
    })
}

/// Central difference `(f(x+h) - f(x-h)) / 2h`.
pub fn fd_gradient<F>(mut f: F, x: f64, h: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    Ok((f(x + h)? - f(x - h)?) / (2.0 * h))
}

/// Central second difference `(f(x+h) - 2f(x) + f(x-h)) / h²`.
pub fn fd_second<F>(mut f: F, x: f64, h: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    Ok((f(x + h)? - 2.0 * f(x)? + f(x - h)?) / (h * h))
}

/// Step used by the finite-difference self checks: `1e-5 · max(|x|, 1)`.
pub fn fd_step(x: f64) -> f64 {
    1e-5 * x.abs().max(1.0)
}

/// A stretch on which the lower convex envelope of a sampled function is a
/// straight line strictly below some of the samples.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnvelopeSegment {
    pub x_lo: f64,
    pub x_hi: f64,
    pub slope: f64,
    /// Indices of the endpoints in the input sample.
    pub i_lo: usize,
    pub i_hi: usize,
}

/// Indices of the vertices of the lower convex hull of `(xs, ys)`.
pub fn lower_hull(xs: &[f64], ys: &[f64]) -> Vec<usize> {
    let mut hull: Vec<usize> = Vec::with_capacity(xs.len());
    for i in 0..xs.len() {
        while hull.len() >= 2 {
            let o = hull[hull.len() - 2];
            let a = hull[hull.len() - 1];
            let cross = (xs[a] - xs[o]) * (ys[i] - ys[o]) - (ys[a] - ys[o]) * (xs[i] - xs[o]);
            if cross <= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(i);
    }
    hull
}

/// Returns the stretches where the lower convex envelope leaves the sampled
/// graph. An empty result means the sample is convex (up to roundoff).
pub fn lower_convex_envelope(xs: &[f64], ys: &[f64]) -> Result<Vec<EnvelopeSegment>> {
    if xs.len() < 3 || xs.len() != ys.len() {
        return Err(Error::TooFewPoints(xs.len().min(ys.len())));
    }
    if xs.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::InvalidInput(
            "envelope abscissae must be strictly increasing".into(),
        ));
    }
    let y_scale = ys.iter().fold(0.0_f64, |m, y| m.max(y.abs())).max(1.0);
    let tol = 1e-12 * y_scale;

    let hull = lower_hull(xs, ys);
    let mut out = Vec::new();
    for w in hull.windows(2) {
        let (i, j) = (w[0], w[1]);
        if j <= i + 1 {
            continue;
        }
        let slope = (ys[j] - ys[i]) / (xs[j] - xs[i]);
        let gap = (i + 1..j)
            .map(|k| ys[k] - (ys[i] + slope * (xs[k] - xs[i])))
            .fold(0.0_f64, f64::max);
        if gap > tol {
            out.push(EnvelopeSegment {
                x_lo: xs[i],
                x_hi: xs[j],
                slope,
                i_lo: i,
                i_hi: j,
            });
        }
    }
    Ok(out)
}

/// `n` points spaced evenly in `ln x` on `[lo, hi]`.
pub fn log_space(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (l0, l1) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| {
            if i == n - 1 {
                hi
            } else {
                (l0 + (l1 - l0) * i as f64 / (n - 1) as f64).exp()
            }
        })
        .collect()
}

pub fn lin_space(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    (0..n)
        .map(|i| {
            if i == n - 1 {
                hi
            } else {
                lo + (hi - lo) * i as f64 / (n - 1) as f64
            }
        })
        .collect()
}
