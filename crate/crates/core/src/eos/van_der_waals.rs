use super::{CriticalPoint, Eos};
use crate::error::{Error, Result};

/// Van der Waals energy
/// `ψ̃(v, θ) = k₁θ(1 − ln θ) − k₂θ ln(v − b) − a/v`.
///
/// `a = b = 0` is allowed and reduces to the ideal gas.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VanDerWaals {
    pub k1: f64,
    pub k2: f64,
    pub a: f64,
    pub b: f64,
}

impl VanDerWaals {
    pub fn new(k1: f64, k2: f64, a: f64, b: f64) -> Result<Self> {
        let finite = [k1, k2, a, b].iter().all(|x| x.is_finite());
        if !finite || !(k1 > 0.0) || !(k2 > 0.0) || !(a >= 0.0) || !(b >= 0.0) {
            return Err(Error::InvalidInput(format!(
                "van der Waals needs k1 > 0, k2 > 0, a >= 0, b >= 0 (got k1={k1}, k2={k2}, a={a}, b={b})"
            )));
        }
        Ok(Self { k1, k2, a, b })
    }

    /// Reduced units: `v_c = θ_c = p_c = 1` with `k₁ = 1`.
    pub fn reduced() -> Self {
        Self {
            k1: 1.0,
            k2: 8.0 / 3.0,
            a: 3.0,
            b: 1.0 / 3.0,
        }
    }
}

impl Eos for VanDerWaals {
    fn name(&self) -> &str {
        "van_der_waals"
    }

    fn excluded_volume(&self) -> f64 {
        self.b
    }

    fn psi(&self, v: f64, theta: f64) -> f64 {
        self.k1 * theta * (1.0 - theta.ln()) - self.k2 * theta * (v - self.b).ln() - self.a / v
    }

    fn eta(&self, v: f64, theta: f64) -> f64 {
        self.k1 * theta.ln() + self.k2 * (v - self.b).ln()
    }

    fn p(&self, v: f64, theta: f64) -> f64 {
        self.k2 * theta / (v - self.b) - self.a / (v * v)
    }

    fn dp_dv(&self, v: f64, theta: f64) -> f64 {
        let w = v - self.b;
        -self.k2 * theta / (w * w) + 2.0 * self.a / (v * v * v)
    }

    fn d2p_dv2(&self, v: f64, theta: f64) -> f64 {
        let w = v - self.b;
        2.0 * self.k2 * theta / (w * w * w) - 6.0 * self.a / (v * v * v * v)
    }

    fn dp_dtheta(&self, v: f64, _theta: f64) -> f64 {
        self.k2 / (v - self.b)
    }

    fn deta_dtheta(&self, _v: f64, theta: f64) -> f64 {
        self.k1 / theta
    }

    fn eps(&self, v: f64, theta: f64) -> f64 {
        self.k1 * theta - self.a / v
    }

    fn kappa(&self, _v: f64, _theta: f64) -> f64 {
        self.k1
    }

    // Ψ = k₁ρθ(1 − ln θ) + k₂ρθ ln(ρ/(1 − bρ)) − aρ²
    fn dpsi_vol_drho(&self, rho: f64, theta: f64) -> f64 {
        let q = 1.0 - self.b * rho;
        self.k1 * theta * (1.0 - theta.ln()) + self.k2 * theta * (rho / q).ln() + self.k2 * theta / q
            - 2.0 * self.a * rho
    }

    fn d2psi_vol_drho2(&self, rho: f64, theta: f64) -> f64 {
        let q = 1.0 - self.b * rho;
        self.k2 * theta * (self.b / (q * q) + 1.0 / rho + self.b / q) - 2.0 * self.a
    }

    /// Solution of `∂vp̃ = ∂²vp̃ = 0`.
    fn critical_point(&self) -> Result<CriticalPoint> {
        if !(self.a > 0.0) || !(self.b > 0.0) {
            return Err(Error::NoCriticalPoint(format!(
                "a = {}, b = {}: pressure is strictly decreasing in v",
                self.a, self.b
            )));
        }
        Ok(CriticalPoint {
            v_c: 3.0 * self.b,
            theta_c: 8.0 * self.a / (27.0 * self.k2 * self.b),
            p_c: self.a / (27.0 * self.b * self.b),
        })
    }
}

/// Ideal gas `ψ̃ = k₁θ(1 − ln θ) − k₂θ ln v`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdealGas {
    pub k1: f64,
    pub k2: f64,
}

impl IdealGas {
    pub fn new(k1: f64, k2: f64) -> Result<Self> {
        if !(k1 > 0.0) || !(k2 > 0.0) || !k1.is_finite() || !k2.is_finite() {
            return Err(Error::InvalidInput(format!(
                "ideal gas needs k1 > 0, k2 > 0 (got k1={k1}, k2={k2})"
            )));
        }
        Ok(Self { k1, k2 })
    }
}

impl Eos for IdealGas {
    fn name(&self) -> &str {
        "ideal_gas"
    }

    fn excluded_volume(&self) -> f64 {
        0.0
    }

    fn psi(&self, v: f64, theta: f64) -> f64 {
        self.k1 * theta * (1.0 - theta.ln()) - self.k2 * theta * v.ln()
    }

    fn eta(&self, v: f64, theta: f64) -> f64 {
        self.k1 * theta.ln() + self.k2 * v.ln()
    }

    fn p(&self, v: f64, theta: f64) -> f64 {
        self.k2 * theta / v
    }

    fn dp_dv(&self, v: f64, theta: f64) -> f64 {
        -self.k2 * theta / (v * v)
    }

    fn d2p_dv2(&self, v: f64, theta: f64) -> f64 {
        2.0 * self.k2 * theta / (v * v * v)
    }

    fn dp_dtheta(&self, v: f64, _theta: f64) -> f64 {
        self.k2 / v
    }

    fn deta_dtheta(&self, _v: f64, theta: f64) -> f64 {
        self.k1 / theta
    }

    fn kappa(&self, _v: f64, _theta: f64) -> f64 {
        self.k1
    }

    fn critical_point(&self) -> Result<CriticalPoint> {
        Err(Error::NoCriticalPoint(
            "ideal gas pressure is strictly decreasing in v".into(),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eos::ThermoState;
    use crate::numerics::{fd_gradient, fd_step};
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn vdw(k1: f64, k2: f64, a: f64, b: f64) -> VanDerWaals {
        VanDerWaals::new(k1, k2, a, b).unwrap()
    }

    #[test]
    fn helmholtz_trivial_values() {
        let s = ThermoState::new(1.0, 1.0);
        assert_eq!(vdw(1.0, 1.0, 0.0, 0.0).helmholtz(s).unwrap(), 1.0);
        assert_eq!(vdw(1.0, 1.0, 1.0, 0.0).helmholtz(s).unwrap(), 0.0);
    }

    #[test]
    fn helmholtz_term_by_term() {
        // k1 θ (1 - ln θ) - k2 θ ln(v - b) - a / v at v = 1, θ = 0.9, summed
        // with the terms evaluated separately.
        let m = VanDerWaals::reduced();
        let t: f64 = 0.9;
        let thermal = 1.0 * t * (1.0 - t.ln());
        let config = -(8.0 / 3.0) * t * (2.0f64 / 3.0).ln();
        let attraction = -3.0;
        let want = thermal + config + attraction;
        let got = m.helmholtz(ThermoState::new(1.0, t)).unwrap();
        assert_relative_eq!(got, want, max_relative = 1e-15);
        // 40-digit evaluation of the same expression
        assert_relative_eq!(got, -1.032_059_276_448_362, max_relative = 1e-14);
    }

    #[test]
    fn entropy_values() {
        let m = vdw(1.0, 1.0, 0.0, 0.0);
        assert_eq!(m.entropy(ThermoState::new(1.0, 1.0)).unwrap(), 0.0);
        let m = vdw(2.0, 1.0, 0.0, 0.0);
        assert_abs_diff_eq!(
            m.entropy(ThermoState::new(1.0, std::f64::consts::E)).unwrap(),
            2.0,
            epsilon = 1e-15
        );
        let m = VanDerWaals::reduced();
        let (v, t) = (2.0, 0.9);
        let fd = fd_gradient(|th| m.helmholtz(ThermoState::new(v, th)), t, 1e-5 * t).unwrap();
        assert_relative_eq!(
            m.entropy(ThermoState::new(v, t)).unwrap(),
            -fd,
            max_relative = 1e-7
        );
    }

    #[test]
    fn pressure_values() {
        let ideal = vdw(1.0, 1.0, 0.0, 0.0);
        assert_eq!(ideal.pressure(ThermoState::new(2.0, 1.0)).unwrap(), 0.5);
        let m = VanDerWaals::reduced();
        assert_abs_diff_eq!(
            m.pressure(ThermoState::new(1.0, 1.0)).unwrap(),
            1.0,
            epsilon = 1e-14
        );
        assert_relative_eq!(
            m.pressure(ThermoState::new(3.0, 0.9)).unwrap(),
            0.9 - 1.0 / 3.0,
            max_relative = 1e-14
        );
    }

    #[test]
    fn energy_and_heat() {
        let m = vdw(1.0, 1.0, 0.0, 0.0);
        assert_eq!(
            m.internal_energy_and_heat(ThermoState::new(1.0, 2.0)).unwrap(),
            (2.0, 1.0)
        );
        let m = vdw(1.0, 1.0, 1.0, 0.0);
        assert_eq!(
            m.internal_energy_and_heat(ThermoState::new(2.0, 1.0)).unwrap(),
            (0.5, 1.0)
        );
    }

    #[test]
    fn kappa_matches_entropy_slope() {
        let m = VanDerWaals::reduced();
        for &(v, t) in &[(0.5, 0.4), (1.3, 0.9), (7.0, 2.5)] {
            let fd = fd_gradient(|th| m.entropy(ThermoState::new(v, th)), t, fd_step(t)).unwrap();
            let (_, kappa) = m.internal_energy_and_heat(ThermoState::new(v, t)).unwrap();
            assert_relative_eq!(kappa, t * fd, max_relative = 1e-7);
        }
    }

    #[test]
    fn eps_is_psi_plus_theta_eta() {
        let m = VanDerWaals::reduced();
        let p = m.point(ThermoState::new(1.7, 0.8)).unwrap();
        assert_relative_eq!(p.eps, p.psi + 0.8 * p.eta, max_relative = 1e-13);
        assert_eq!(p.kappa, 1.0);
    }

    #[test]
    fn volume_energy() {
        let ideal = vdw(1.0, 1.0, 0.0, 0.0);
        let ve = ideal.volume_helmholtz(1.0, 1.0).unwrap();
        assert_eq!(ve.psi_vol, 1.0);

        let m = VanDerWaals::reduced();
        let ve = m.volume_helmholtz(1.0, 0.9).unwrap();
        let fd = fd_gradient(|r| Ok(m.volume_helmholtz(r, 0.9)?.psi_vol), 1.0, 1e-5).unwrap();
        assert_relative_eq!(ve.dpsi_vol_drho, fd, max_relative = 1e-7);
        assert_relative_eq!(ve.p_check, m.p(1.0, 0.9), max_relative = 1e-10);
    }

    #[test]
    fn modified_energy() {
        let m = VanDerWaals::reduced();
        let base = m.volume_helmholtz(0.8, 0.9).unwrap();
        let zero = m.modified_quantities(0.8, 0.9, 0.0).unwrap();
        assert_eq!(zero.psi_j, base.psi_vol);
        assert_eq!(zero.dpsi_j_drho, base.dpsi_vol_drho);
        assert_relative_eq!(zero.p_j, m.p(1.25, 0.9), max_relative = 1e-15);

        let ideal = vdw(1.0, 1.0, 0.0, 0.0);
        let q = ideal.modified_quantities(1.0, 1.0, 1.0).unwrap();
        assert_eq!(q.p_j, 2.0);
    }

    #[test]
    fn second_derivative_of_volume_energy() {
        let ideal = vdw(1.0, 1.0, 0.0, 0.0);
        assert_eq!(ideal.d2_volume_helmholtz_mod(1.0, 1.0, 0.0).unwrap(), 1.0);
        let m = VanDerWaals::reduced();
        assert_abs_diff_eq!(
            m.d2_volume_helmholtz_mod(1.0, 1.0, 0.0).unwrap(),
            0.0,
            epsilon = 1e-14
        );
    }

    #[test]
    fn large_flux_makes_low_density_concave() {
        let m = VanDerWaals::reduced();
        assert!(m.d2_volume_helmholtz_mod(1e-3, 0.9, 5.0).unwrap() < 0.0);
        assert!(m.d2_volume_helmholtz_mod(1e-3, 0.9, 0.0).unwrap() > 0.0);
    }

    #[test]
    fn critical_points() {
        let cp = VanDerWaals::reduced().critical_point().unwrap();
        assert_abs_diff_eq!(cp.v_c, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(cp.theta_c, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(cp.p_c, 1.0, epsilon = 1e-15);

        let cp = vdw(1.0, 1.0, 27.0 / 8.0, 1.0).critical_point().unwrap();
        assert_abs_diff_eq!(cp.v_c, 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(cp.theta_c, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(cp.p_c, 0.125, epsilon = 1e-15);

        assert!(matches!(
            vdw(1.0, 1.0, 0.0, 0.0).critical_point(),
            Err(Error::NoCriticalPoint(_))
        ));
        assert!(IdealGas::new(1.0, 1.0).unwrap().critical_point().is_err());
    }

    #[test]
    fn domain_errors() {
        let m = VanDerWaals::reduced();
        assert!(matches!(
            m.pressure(ThermoState::new(1.0 / 3.0, 1.0)),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            m.pressure(ThermoState::new(0.2, 1.0)),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            m.helmholtz(ThermoState::new(1.0, 0.0)),
            Err(Error::Domain(_))
        ));
        assert!(matches!(m.volume_helmholtz(3.0, 1.0), Err(Error::Domain(_))));
        assert!(matches!(m.volume_helmholtz(-1.0, 1.0), Err(Error::Domain(_))));
        assert!(m.modified_quantities(1.0, 1.0, -1.0).is_err());
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(VanDerWaals::new(0.0, 1.0, 1.0, 1.0).is_err());
        assert!(VanDerWaals::new(1.0, -1.0, 1.0, 1.0).is_err());
        assert!(VanDerWaals::new(1.0, 1.0, -1.0, 1.0).is_err());
        assert!(VanDerWaals::new(1.0, 1.0, 1.0, f64::NAN).is_err());
        assert!(IdealGas::new(1.0, 0.0).is_err());
    }

    #[test]
    fn ideal_gas_matches_degenerate_vdw() {
        let ig = IdealGas::new(1.3, 0.7).unwrap();
        let vd = vdw(1.3, 0.7, 0.0, 0.0);
        for &(v, t) in &[(0.3, 0.5), (2.0, 1.0), (40.0, 3.0)] {
            let s = ThermoState::new(v, t);
            let (a, b) = (ig.point(s).unwrap(), vd.point(s).unwrap());
            assert_relative_eq!(a.psi, b.psi, max_relative = 1e-14);
            assert_relative_eq!(a.p, b.p, max_relative = 1e-14);
            assert_relative_eq!(a.eta, b.eta, max_relative = 1e-14);
            assert_relative_eq!(a.eps, b.eps, max_relative = 1e-13);
            assert_relative_eq!(
                ig.d2psi_vol_drho2(1.0 / v, t),
                vd.d2psi_vol_drho2(1.0 / v, t),
                max_relative = 1e-13
            );
        }
    }
}
