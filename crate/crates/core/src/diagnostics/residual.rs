use serde::{Deserialize, Serialize};

use super::norms::trapezoid;
use crate::error::Result;
use crate::profiles::{CompositeWave, FieldJet};
use crate::thermo::GasParams;

/// Defects of the composite wave in the momentum and energy equations,
/// computed directly and through the per-wave decomposition.
///
/// ```text
/// R₁ = U_t + P_x
///    = (P - P₋ - P₊)_x + Uᶜ_t
/// R₂ = (κΘ_x/V)_x - R/(γ-1) Θ_t - P U_x
///    = (pᵐ - P)Uᶜ_x + (P₋ - P)U₋_x + (P₊ - P)U₊_x + κ(Θ_x/V - Θᶜ_x/Vᶜ)_x
/// ```
///
/// The decomposition uses that each rarefaction solves the isentropic Euler
/// equations and the contact wave solves the energy equation at constant
/// pressure `pᵐ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualFields {
    pub t: f64,
    pub x: Vec<f64>,
    pub r1: Vec<f64>,
    pub r2: Vec<f64>,
    /// `(P - P₋ - P₊)_x`.
    pub r1_interaction: Vec<f64>,
    /// `Uᶜ_t`.
    pub r1_contact: Vec<f64>,
    /// Pressure-interaction part of `R₂`.
    pub r2_pressure: Vec<f64>,
    /// Heat-flux part `κ(Θ_x/V - Θᶜ_x/Vᶜ)_x`.
    pub r2_heat: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ResidualNorms {
    pub linf: f64,
    pub l1: f64,
    pub l2: f64,
}

impl ResidualNorms {
    pub fn of(f: &[f64], dx: f64) -> Self {
        let abs: Vec<f64> = f.iter().map(|x| x.abs()).collect();
        let sq: Vec<f64> = f.iter().map(|x| x * x).collect();
        Self {
            linf: abs.iter().cloned().fold(0.0, f64::max),
            l1: trapezoid(&abs, dx),
            l2: trapezoid(&sq, dx).sqrt(),
        }
    }
}

impl ResidualFields {
    pub fn r1_decomposed(&self) -> Vec<f64> {
        self.r1_interaction
            .iter()
            .zip(&self.r1_contact)
            .map(|(a, b)| a + b)
            .collect()
    }

    pub fn r2_decomposed(&self) -> Vec<f64> {
        self.r2_pressure.iter().zip(&self.r2_heat).map(|(a, b)| a + b).collect()
    }

    fn dx(&self) -> f64 {
        if self.x.len() > 1 {
            self.x[1] - self.x[0]
        } else {
            0.0
        }
    }

    pub fn r1_norms(&self) -> ResidualNorms {
        ResidualNorms::of(&self.r1, self.dx())
    }

    pub fn r2_norms(&self) -> ResidualNorms {
        ResidualNorms::of(&self.r2, self.dx())
    }
}

/// `(P, P_x)` with `P = RΘ/V`.
fn pressure_jet(r: f64, j: &FieldJet) -> (f64, f64) {
    let (v, th) = (j.v.val, j.theta.val);
    (r * th / v, r * (j.theta.x / v - th * j.v.x / (v * v)))
}

/// `(κΘ_x/V)_x`.
fn heat_flux_x(kappa: f64, j: &FieldJet) -> f64 {
    let v = j.v.val;
    kappa * (j.theta.xx / v - j.theta.x * j.v.x / (v * v))
}

/// Evaluates both residuals on equally spaced points `xs`.
pub fn residual_fields(params: &GasParams, composite: &CompositeWave, t: f64, xs: &[f64]) -> Result<ResidualFields> {
    let n = xs.len();
    let mut out = ResidualFields {
        t,
        x: xs.to_vec(),
        r1: Vec::with_capacity(n),
        r2: Vec::with_capacity(n),
        r1_interaction: Vec::with_capacity(n),
        r1_contact: Vec::with_capacity(n),
        r2_pressure: Vec::with_capacity(n),
        r2_heat: Vec::with_capacity(n),
    };
    let p_mid = composite.pattern().p_mid;
    let cv = params.r / (params.gamma - 1.0);
    for &x in xs {
        let c = composite.components(t, x)?;
        let tot = &c.total;
        let (p, p_x) = pressure_jet(params.r, tot);
        let (pm, pm_x) = pressure_jet(params.r, &c.rar_minus);
        let (pp, pp_x) = pressure_jet(params.r, &c.rar_plus);

        out.r1.push(tot.u.t + p_x);
        out.r1_interaction.push(p_x - pm_x - pp_x);
        out.r1_contact.push(c.contact.u.t);

        out.r2
            .push(heat_flux_x(params.kappa, tot) - cv * tot.theta.t - p * tot.u.x);
        out.r2_pressure
            .push((p_mid - p) * c.contact.u.x + (pm - p) * c.rar_minus.u.x + (pp - p) * c.rar_plus.u.x);
        out.r2_heat
            .push(heat_flux_x(params.kappa, tot) - heat_flux_x(params.kappa, &c.contact));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::riemann::{construct_end_states, solve_pattern, EndStates};
    use crate::thermo::ThermoState;

    fn composite(g: &GasParams) -> CompositeWave {
        let left = ThermoState::euler(1.0, 0.0, 1.0);
        let (end, _, _) = construct_end_states(g, &left, 1.02, 1.08, 1.05).unwrap();
        let pat = solve_pattern(g, &end, &Default::default()).unwrap();
        CompositeWave::build(g, &pat, &Default::default()).unwrap()
    }

    #[test]
    fn zero_strength_has_no_residual() {
        let g = GasParams::default();
        let s = ThermoState::euler(1.0, 0.0, 1.0);
        let pat = solve_pattern(&g, &EndStates::new(s, s), &Default::default()).unwrap();
        let c = CompositeWave::build(&g, &pat, &Default::default()).unwrap();
        let xs: Vec<f64> = (0..101).map(|i| -10.0 + 0.2 * i as f64).collect();
        let r = residual_fields(&g, &c, 2.0, &xs).unwrap();
        assert!(r.r1.iter().chain(&r.r2).all(|x| x.abs() < 1e-14));
    }

    #[test]
    fn decomposition_matches_direct() {
        let g = GasParams::default();
        let c = composite(&g);
        let xs: Vec<f64> = (0..401).map(|i| -40.0 + 0.2 * i as f64).collect();
        for t in [0.0, 1.0, 7.5, 30.0] {
            let r = residual_fields(&g, &c, t, &xs).unwrap();
            for (a, b) in r.r1.iter().zip(r.r1_decomposed()) {
                assert!((a - b).abs() < 1e-8, "t = {t}: {a} vs {b}");
            }
            for (a, b) in r.r2.iter().zip(r.r2_decomposed()) {
                assert!((a - b).abs() < 1e-8, "t = {t}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn mass_equation_is_exact() {
        // V_t = U_x holds for every component, hence for the composite
        let g = GasParams::default();
        let c = composite(&g);
        for x in [-20.0, -3.0, 0.0, 2.5, 15.0] {
            let j = c.eval(4.0, x).unwrap();
            assert!((j.v.t - j.u.x).abs() < 1e-10);
        }
    }
}
