use super::{BurgersProfile, FieldJet, Jet};
use crate::error::{Error, Result};
use crate::thermo::{self, Family, GasParams, ThermoState};

/// Smooth approximate rarefaction wave of one family.
///
/// `V` solves `λ(V, s) = ŵ(t+1, x)` where `ŵ` is the Burgers profile between
/// the characteristic speeds of the two states; `U` follows the wave curve
/// and `Θ` the isentrope through the far state.
#[derive(Debug, Clone)]
pub struct RarefactionWave {
    params: GasParams,
    family: Family,
    far: ThermoState,
    mid: ThermoState,
    burgers: BurgersProfile,
    /// `γ p v^γ` on the isentrope, so that `λ² = k V^{-γ-1}`.
    k: f64,
}

impl RarefactionWave {
    /// `far` is the outer end state (`left` for the 1-wave, `right` for the
    /// 3-wave); `mid` the adjacent middle state on the same wave curve.
    pub fn new(params: &GasParams, far: &ThermoState, mid: &ThermoState, family: Family) -> Result<Self> {
        far.validate()?;
        mid.validate()?;
        let s_far = thermo::entropy(params, far.v, far.theta)?;
        let s_mid = thermo::entropy(params, mid.v, mid.theta)?;
        if (s_far - s_mid).abs() > 1e-8 * (1.0 + s_far.abs()) {
            return Err(Error::Precondition(format!(
                "rarefaction states are not on one isentrope: s = ({s_far}, {s_mid})"
            )));
        }
        if mid.v < far.v * (1.0 - 1e-10) {
            return Err(Error::Precondition(format!(
                "rarefaction orientation violated: v_mid = {} < v_far = {}",
                mid.v, far.v
            )));
        }
        let lam_far = thermo::char_speed(params, far.v, far.theta, family)?;
        let lam_mid = thermo::char_speed(params, mid.v, mid.theta, family)?;
        // speeds increase across the wave from left to right
        let (w_l, w_r) = match family {
            Family::Minus => (lam_far, lam_mid),
            Family::Plus => (lam_mid, lam_far),
        };
        let p = thermo::pressure(params, far.v, far.theta)?;
        Ok(Self {
            params: *params,
            family,
            far: *far,
            mid: *mid,
            burgers: BurgersProfile::new(w_l.min(w_r), w_r.max(w_l))?,
            k: params.gamma * p * far.v.powf(params.gamma),
        })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn burgers(&self) -> &BurgersProfile {
        &self.burgers
    }

    pub fn far_state(&self) -> &ThermoState {
        &self.far
    }

    pub fn mid_state(&self) -> &ThermoState {
        &self.mid
    }

    pub fn eval(&self, t: f64, x: f64) -> Result<FieldJet> {
        if !(t >= 0.0) {
            return Err(Error::Domain(format!("profile time must be >= 0, got {t}")));
        }
        let GasParams { gamma, .. } = self.params;
        let b = self.burgers.jet(t + 1.0, x)?;
        let w = b.w;
        if w == 0.0 || (w < 0.0) != (self.family == Family::Minus) {
            return Err(Error::Internal(format!(
                "Burgers value {w} outside the characteristic range of the {:?} family",
                self.family
            )));
        }

        // V = F(ŵ) = (k/ŵ²)^{1/(γ+1)}
        let m = -2.0 / (gamma + 1.0);
        let fv = (self.k / (w * w)).powf(1.0 / (gamma + 1.0));
        let f1 = m * fv / w;
        let f2 = m * (m - 1.0) * fv / (w * w);
        let chain = |d0: f64, d1: f64, d2: f64| Jet {
            val: d0,
            x: d1 * b.w_x,
            xx: d2 * b.w_x * b.w_x + d1 * b.w_xx,
            t: d1 * b.w_t,
        };
        let v = chain(fv, f1, f2);

        // U = G(ŵ) with G' = -ŵF'
        let gm1 = gamma - 1.0;
        let c_far = (self.k * self.far.v.powf(-gm1)).sqrt();
        let c_v = (self.k * fv.powf(-gm1)).sqrt();
        let g0 = self.far.u - self.family.sign() * 2.0 / gm1 * (c_far - c_v);
        let g1 = -w * f1;
        let g2 = -f1 - w * f2;
        let u = chain(g0, g1, g2);

        // Θ = H(ŵ) = θ_far v_far^{γ-1} F^{1-γ}
        let c = self.far.theta * self.far.v.powf(gm1);
        let h0 = c * fv.powf(-gm1);
        let h1 = -gm1 * c * fv.powf(-gamma) * f1;
        let h2 = -gm1 * c * (-gamma * fv.powf(-gamma - 1.0) * f1 * f1 + fv.powf(-gamma) * f2);
        let theta = chain(h0, h1, h2);

        Ok(FieldJet { v, u, theta })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::riemann::rarefaction_state;

    fn gas() -> GasParams {
        GasParams::default()
    }

    fn minus_wave() -> RarefactionWave {
        let g = gas();
        let far = ThermoState::euler(1.0, 0.0, 1.0);
        let mid = rarefaction_state(&g, &far, Family::Minus, 1.1).unwrap();
        RarefactionWave::new(&g, &far, &mid, Family::Minus).unwrap()
    }

    fn plus_wave() -> RarefactionWave {
        let g = gas();
        let far = ThermoState::euler(1.0, 0.3, 1.2);
        let mid = rarefaction_state(&g, &far, Family::Plus, 1.1).unwrap();
        RarefactionWave::new(&g, &far, &mid, Family::Plus).unwrap()
    }

    #[test]
    fn zero_strength_is_constant() {
        let g = gas();
        let s = ThermoState::euler(1.0, 0.5, 2.0);
        let w = RarefactionWave::new(&g, &s, &s, Family::Plus).unwrap();
        let j = w.eval(2.0, -3.0).unwrap();
        assert!((j.v.val - 1.0).abs() < 1e-14);
        assert!((j.u.val - 0.5).abs() < 1e-14);
        assert!((j.theta.val - 2.0).abs() < 1e-14);
        assert_eq!(j.v.x, 0.0);
    }

    #[test]
    fn far_fields_are_reached() {
        for (w, left_is_far) in [(minus_wave(), true), (plus_wave(), false)] {
            let (lft, rgt) = if left_is_far {
                (*w.far_state(), *w.mid_state())
            } else {
                (*w.mid_state(), *w.far_state())
            };
            let jl = w.eval(1.0, -60.0).unwrap();
            let jr = w.eval(1.0, 60.0).unwrap();
            assert!((jl.v.val - lft.v).abs() < 1e-12 && (jl.u.val - lft.u).abs() < 1e-12);
            assert!((jr.v.val - rgt.v).abs() < 1e-12 && (jr.theta.val - rgt.theta).abs() < 1e-12);
        }
    }

    #[test]
    fn velocity_increases() {
        for w in [minus_wave(), plus_wave()] {
            for k in 0..100 {
                let x = -20.0 + 0.4 * k as f64;
                assert!(w.eval(3.0, x).unwrap().u.x >= 0.0);
            }
        }
    }

    #[test]
    fn euler_equations_hold() {
        let g = gas();
        for w in [minus_wave(), plus_wave()] {
            for &(t, x) in &[(0.0, 0.1), (2.0, -1.5), (9.0, 3.0)] {
                let j = w.eval(t, x).unwrap();
                let p = g.r * j.theta.val / j.v.val;
                let p_x = g.r * (j.theta.x / j.v.val - j.theta.val * j.v.x / (j.v.val * j.v.val));
                assert!((j.v.t - j.u.x).abs() < 1e-12);
                assert!((j.u.t + p_x).abs() < 1e-12);
                assert!((g.r / (g.gamma - 1.0) * j.theta.t + p * j.u.x).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn second_derivatives_match_finite_differences() {
        let w = plus_wave();
        let h = 1e-5;
        let (t, x) = (1.5, 0.7);
        let j = w.eval(t, x).unwrap();
        let e = |x| w.eval(t, x).unwrap();
        assert!((j.v.xx - (e(x + h).v.x - e(x - h).v.x) / (2.0 * h)).abs() < 1e-8);
        assert!((j.u.xx - (e(x + h).u.x - e(x - h).u.x) / (2.0 * h)).abs() < 1e-8);
        assert!((j.theta.xx - (e(x + h).theta.x - e(x - h).theta.x) / (2.0 * h)).abs() < 1e-8);
    }

    #[test]
    fn off_curve_states_rejected() {
        let g = gas();
        let far = ThermoState::euler(1.0, 0.0, 1.0);
        let mid = ThermoState::euler(1.1, 0.0, 1.0);
        assert!(RarefactionWave::new(&g, &far, &mid, Family::Minus).is_err());
    }
}
