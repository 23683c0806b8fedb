use std::sync::Arc;

use super::{FieldJet, Jet, SelfSimilarOptions, SelfSimilarProfile};
use crate::error::{Error, Result};
use crate::thermo::{self, GasParams, ThermoState};

/// Viscous contact wave `Θᶜ(t,x) = Θ(x/√(1+t))`, `Vᶜ = RΘᶜ/p`,
/// `Uᶜ = u + κ(γ-1)/(γR)·Θᶜ_x/Θᶜ`.
#[derive(Debug, Clone)]
pub struct ContactWave {
    params: GasParams,
    pressure: f64,
    velocity: f64,
    profile: Arc<SelfSimilarProfile>,
}

impl ContactWave {
    /// Contact between two states that share velocity and pressure to
    /// relative tolerance `tol`.
    pub fn new(
        params: &GasParams,
        left: &ThermoState,
        right: &ThermoState,
        opts: &SelfSimilarOptions,
        tol: f64,
    ) -> Result<Self> {
        let pl = thermo::pressure(params, left.v, left.theta)?;
        let pr = thermo::pressure(params, right.v, right.theta)?;
        if (pl - pr).abs() > tol * pl || (left.u - right.u).abs() > tol * (1.0 + left.u.abs()) {
            return Err(Error::Precondition(format!(
                "contact needs equal pressure and velocity: p = ({pl}, {pr}), u = ({}, {})",
                left.u, right.u
            )));
        }
        let p = 0.5 * (pl + pr);
        let a_kappa = super::diffusion_coefficient(params, p);
        let profile = super::solve_selfsimilar(a_kappa, left.theta, right.theta, opts)?;
        Ok(Self::from_profile(
            params,
            p,
            0.5 * (left.u + right.u),
            Arc::new(profile),
        ))
    }

    pub fn from_profile(params: &GasParams, pressure: f64, velocity: f64, profile: Arc<SelfSimilarProfile>) -> Self {
        Self {
            params: *params,
            pressure,
            velocity,
            profile,
        }
    }

    pub fn profile(&self) -> &SelfSimilarProfile {
        &self.profile
    }

    pub fn pressure(&self) -> f64 {
        self.pressure
    }

    pub fn velocity(&self) -> f64 {
        self.velocity
    }

    pub fn eval(&self, t: f64, x: f64) -> Result<FieldJet> {
        if !(t >= 0.0) {
            return Err(Error::Domain(format!("profile time must be >= 0, got {t}")));
        }
        let GasParams { r, gamma, kappa, .. } = self.params;
        let s = (1.0 + t).sqrt();
        let xi = x / s;
        let j = self.profile.eval(xi);

        let theta = Jet {
            val: j.theta,
            x: j.d1 / s,
            xx: j.d2 / (s * s),
            t: -xi * j.d1 / (2.0 * s * s),
        };
        let scale = r / self.pressure;
        let v = Jet {
            val: scale * theta.val,
            x: scale * theta.x,
            xx: scale * theta.xx,
            t: scale * theta.t,
        };

        // g(ξ) = Θ'/Θ and its ξ-derivatives
        let g = j.d1 / j.theta;
        let g1 = j.d2 / j.theta - g * g;
        let g2 = j.d3 / j.theta - 3.0 * j.d1 * j.d2 / (j.theta * j.theta) + 2.0 * g * g * g;
        let k = kappa * (gamma - 1.0) / (gamma * r);
        let u = Jet {
            val: self.velocity + k * g / s,
            x: k * g1 / (s * s),
            xx: k * g2 / (s * s * s),
            t: -k * (xi * g1 + g) / (2.0 * s * s * s),
        };
        Ok(FieldJet { v, u, theta })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gas() -> GasParams {
        GasParams::default()
    }

    fn wave(tm: f64, tp: f64) -> ContactWave {
        let l = ThermoState::euler(tm, 0.2, tm);
        let r = ThermoState::euler(tp, 0.2, tp);
        ContactWave::new(&gas(), &l, &r, &Default::default(), 1e-10).unwrap()
    }

    #[test]
    fn flat_contact_is_constant() {
        let c = wave(1.0, 1.0);
        let j = c.eval(3.0, 0.4).unwrap();
        assert_eq!((j.v.val, j.u.val, j.theta.val), (1.0, 0.2, 1.0));
        assert_eq!((j.v.x, j.u.x, j.theta.x), (0.0, 0.0, 0.0));
    }

    #[test]
    fn pressure_identity_is_exact() {
        let c = wave(1.0, 1.1);
        for k in 0..200 {
            let t = 0.05 * k as f64;
            let x = -8.0 + 0.08 * k as f64;
            let j = c.eval(t, x).unwrap();
            assert!((gas().r * j.theta.val / j.v.val - c.pressure()).abs() <= 1e-15);
        }
    }

    #[test]
    fn rejects_mismatched_pressure() {
        let l = ThermoState::euler(1.0, 0.0, 1.0);
        let r = ThermoState::euler(1.0, 0.0, 1.2);
        assert!(matches!(
            ContactWave::new(&gas(), &l, &r, &Default::default(), 1e-8),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn mass_and_energy_equations_hold() {
        // V_t = U_x and R/(γ-1)Θ_t + pU_x = κ(Θ_x/V)_x hold exactly for the construction
        let g = gas();
        let c = wave(1.0, 1.1);
        for &(t, x) in &[(0.0, 0.3), (2.0, -1.0), (10.0, 2.5)] {
            let j = c.eval(t, x).unwrap();
            assert!((j.v.t - j.u.x).abs() < 1e-7, "{} {}", j.v.t, j.u.x);
            let lhs = g.r / (g.gamma - 1.0) * j.theta.t + c.pressure() * j.u.x;
            let rhs = g.kappa * (j.theta.xx / j.v.val - j.theta.x * j.v.x / (j.v.val * j.v.val));
            assert!((lhs - rhs).abs() < 1e-7, "{lhs} {rhs}");
        }
    }

    #[test]
    fn jets_match_finite_differences() {
        let c = wave(1.0, 1.1);
        let h = 1e-4;
        for &(t, x) in &[(0.5, 0.2), (4.0, -1.5)] {
            let j = c.eval(t, x).unwrap();
            let e = |t, x| c.eval(t, x).unwrap();
            let fx = (e(t, x + h).u.val - e(t, x - h).u.val) / (2.0 * h);
            let fxx = (e(t, x + h).u.x - e(t, x - h).u.x) / (2.0 * h);
            let ft = (e(t + h, x).u.val - e(t - h, x).u.val) / (2.0 * h);
            assert!((j.u.x - fx).abs() < 1e-7);
            assert!((j.u.xx - fxx).abs() < 1e-6);
            assert!((j.u.t - ft).abs() < 1e-7);
        }
    }
}
