use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A thermodynamic state or density outside the model's domain of validity.
    #[error("state outside model domain: {0}")]
    Domain(String),

    #[error("model has no critical point: {0}")]
    NoCriticalPoint(String),

    #[error("no sign change on [{lo}, {hi}] (f(lo) = {f_lo}, f(hi) = {f_hi})")]
    NoBracket { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },

    #[error("no convergence after {iterations} iterations (last residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("singular Jacobian (det = {det:e})")]
    SingularJacobian { det: f64 },

    #[error("convex envelope needs at least 3 sample points, got {0}")]
    TooFewPoints(usize),

    #[error(
        "temperature {theta} is at or above the coexistence limit {limit} (critical temperature {theta_c})"
    )]
    AboveCritical { theta: f64, limit: f64, theta_c: f64 },

    #[error("the energy is convex in v at temperature {0}: no phase transition")]
    NoPhaseTransition(f64),

    #[error("{0}")]
    OutOfRange(String),

    #[error("volume gap {gap:e} between the phases is too small")]
    DegenerateGap { gap: f64 },

    /// Newton continuation in the kinetic parameter could not reach the target.
    #[error("continuation stalled at Z = {z_reached:e} before reaching Z = {z_target:e}")]
    ContinuationFailed { z_reached: f64, z_target: f64 },

    #[error("no interface solution even at the lowest scanned flux {0}")]
    AllFailed(f64),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("no dryout point: (−ℓ) > d₂r/(κ₂j²) ({lhs} > {rhs})")]
    NoDryout { lhs: f64, rhs: f64 },

    #[error("position {0} is negative")]
    NegativePosition(f64),

    #[error("unknown model '{0}'")]
    UnknownModel(String),
}
