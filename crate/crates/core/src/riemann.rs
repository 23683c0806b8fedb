//! Wave-curve algebra for the Euler part of the model: the two rarefaction
//! curves, the contact condition, and the intermediate states of a
//! 1-rarefaction / contact / 3-rarefaction pattern.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::thermo::{self, Family, GasParams, ThermoState};

/// Far-field data of the Cauchy problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EndStates {
    pub left: ThermoState,
    pub right: ThermoState,
}

impl EndStates {
    pub fn new(left: ThermoState, right: ThermoState) -> Self {
        Self { left, right }
    }

    pub fn validate(&self) -> Result<()> {
        self.left.validate()?;
        self.right.validate()
    }

    /// Profiles are built around `ω ≡ 0`; nonzero far-field microrotation
    /// has no wave pattern to converge to.
    pub fn require_zero_omega(&self) -> Result<()> {
        if self.left.omega != 0.0 || self.right.omega != 0.0 {
            return Err(Error::Precondition(format!(
                "far-field microrotation must vanish, got ({}, {})",
                self.left.omega, self.right.omega
            )));
        }
        Ok(())
    }

    /// Wave strength `|θ₊ - θ₋|`.
    pub fn delta(&self) -> f64 {
        (self.right.theta - self.left.theta).abs()
    }

    /// Checks `u₋ = u₊` and `p₋ = p₊` up to `tol` (relative for pressure).
    pub fn is_pure_contact(&self, params: &GasParams, tol: f64) -> Result<bool> {
        let pl = thermo::pressure(params, self.left.v, self.left.theta)?;
        let pr = thermo::pressure(params, self.right.v, self.right.theta)?;
        Ok((self.left.u - self.right.u).abs() <= tol && (pl - pr).abs() <= tol * pl)
    }
}

/// Strengths of the three waves, each measured as the temperature jump
/// across the wave.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Strengths {
    pub rarefaction_minus: f64,
    pub contact: f64,
    pub rarefaction_plus: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WavePattern {
    pub end: EndStates,
    pub mid_left: ThermoState,
    pub mid_right: ThermoState,
    pub p_mid: f64,
    pub delta: f64,
    pub strengths: Strengths,
    /// Sum of middle-state deviations from the end states divided by δ;
    /// `None` when δ = 0.
    pub bound_ratio: Option<f64>,
    pub iterations: usize,
    pub residual: f64,
}

impl WavePattern {
    pub fn u_mid(&self) -> f64 {
        0.5 * (self.mid_left.u + self.mid_right.u)
    }

    /// Speeds `λ₋(v₋ᵐ, s₋)` and `λ₊(v₊ᵐ, s₊)` bounding the middle region.
    pub fn middle_speeds(&self, params: &GasParams) -> Result<(f64, f64)> {
        Ok((
            thermo::char_speed(params, self.mid_left.v, self.mid_left.theta, Family::Minus)?,
            thermo::char_speed(params, self.mid_right.v, self.mid_right.theta, Family::Plus)?,
        ))
    }
}

/// Point on the `family` rarefaction curve through `anchor` at volume `v`.
///
/// Entropy is held fixed and `u = u_a - ∫_{v_a}^{v} λ(η, s_a) dη`; the
/// integrand is a power law, so the integral is `±2/(γ-1)` times the drop in
/// `√(γpv)`.
pub fn rarefaction_state(params: &GasParams, anchor: &ThermoState, family: Family, v: f64) -> Result<ThermoState> {
    if !(v > 0.0 && v.is_finite()) {
        return Err(Error::Domain(format!("specific volume must be positive, got {v}")));
    }
    anchor.validate()?;
    let gm1 = params.gamma - 1.0;
    let theta = anchor.theta * (anchor.v / v).powf(gm1);
    let c_anchor = thermo::sound_speed(params, anchor.v, anchor.theta)?;
    let c_v = thermo::sound_speed(params, v, theta)?;
    let u = anchor.u - family.sign() * 2.0 / gm1 * (c_anchor - c_v);
    Ok(ThermoState::euler(v, u, theta))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PatternSolverOptions {
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for PatternSolverOptions {
    fn default() -> Self {
        Self {
            tol: 1e-12,
            max_iter: 100,
        }
    }
}

/// Relative slack allowed on the rarefaction orientation `v^m ≥ v±`.
const ORIENTATION_SLACK: f64 = 1e-10;

/// Finds the intermediate states of the 1-rarefaction / contact /
/// 3-rarefaction pattern joining `end.left` to `end.right`.
///
/// Unknowns are `(ln v₋ᵐ, ln v₊ᵐ)`; residuals are the velocity and relative
/// pressure jumps across the contact. Newton with a central-difference
/// Jacobian, with step halving when the residual does not drop.
pub fn solve_pattern(params: &GasParams, end: &EndStates, opts: &PatternSolverOptions) -> Result<WavePattern> {
    params.validate()?;
    end.validate()?;
    if !(opts.tol > 0.0) {
        return Err(Error::InvalidParams(format!(
            "tolerance must be positive, got {}",
            opts.tol
        )));
    }
    let p_scale = thermo::pressure(params, end.left.v, end.left.theta)?;

    let residual = |x: [f64; 2]| -> Result<[f64; 2]> {
        let ml = rarefaction_state(params, &end.left, Family::Minus, x[0].exp())?;
        let mr = rarefaction_state(params, &end.right, Family::Plus, x[1].exp())?;
        let pl = thermo::pressure(params, ml.v, ml.theta)?;
        let pr = thermo::pressure(params, mr.v, mr.theta)?;
        Ok([ml.u - mr.u, (pl - pr) / p_scale])
    };
    let norm = |r: [f64; 2]| r[0].abs().max(r[1].abs());

    let mut x = [end.left.v.ln(), end.right.v.ln()];
    let mut r = residual(x)?;
    let mut iterations = 0;
    while norm(r) > opts.tol {
        if iterations >= opts.max_iter {
            return Err(Error::Convergence {
                what: "middle-state Newton iteration".into(),
                iterations,
                residual: norm(r),
            });
        }
        iterations += 1;

        let h = 1e-7;
        let mut jac = [[0.0; 2]; 2];
        for j in 0..2 {
            let mut xp = x;
            let mut xm = x;
            xp[j] += h;
            xm[j] -= h;
            let (rp, rm) = (residual(xp)?, residual(xm)?);
            for i in 0..2 {
                jac[i][j] = (rp[i] - rm[i]) / (2.0 * h);
            }
        }
        let det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
        if det.abs() < 1e-300 || !det.is_finite() {
            return Err(Error::Convergence {
                what: "singular Jacobian in middle-state solve".into(),
                iterations,
                residual: norm(r),
            });
        }
        let dx = [
            -(jac[1][1] * r[0] - jac[0][1] * r[1]) / det,
            -(-jac[1][0] * r[0] + jac[0][0] * r[1]) / det,
        ];

        let mut lambda = 1.0;
        loop {
            let trial = [x[0] + lambda * dx[0], x[1] + lambda * dx[1]];
            let rt = residual(trial);
            if let Ok(rt) = rt {
                if norm(rt) < norm(r) || lambda < 1e-3 {
                    x = trial;
                    r = rt;
                    break;
                }
            }
            lambda *= 0.5;
            if lambda < 1e-6 {
                return Err(Error::Convergence {
                    what: "line search failed in middle-state solve".into(),
                    iterations,
                    residual: norm(r),
                });
            }
        }
    }

    let mid_left = rarefaction_state(params, &end.left, Family::Minus, x[0].exp())?;
    let mid_right = rarefaction_state(params, &end.right, Family::Plus, x[1].exp())?;

    // Both rarefactions expand: v₋ᵐ ≥ v₋ and v₊ᵐ ≥ v₊. Anything else needs a shock.
    if mid_left.v < end.left.v * (1.0 - ORIENTATION_SLACK) {
        return Err(Error::PatternMismatch(format!(
            "1-wave would be a shock (v_mid_left = {} < v_left = {})",
            mid_left.v, end.left.v
        )));
    }
    if mid_right.v < end.right.v * (1.0 - ORIENTATION_SLACK) {
        return Err(Error::PatternMismatch(format!(
            "3-wave would be a shock (v_mid_right = {} < v_right = {})",
            mid_right.v, end.right.v
        )));
    }

    let p_mid = 0.5
        * (thermo::pressure(params, mid_left.v, mid_left.theta)?
            + thermo::pressure(params, mid_right.v, mid_right.theta)?);
    let delta = end.delta();
    let deviation = (mid_left.v - end.left.v).abs()
        + (mid_left.u - end.left.u).abs()
        + (mid_left.theta - end.left.theta).abs()
        + (mid_right.v - end.right.v).abs()
        + (mid_right.u - end.right.u).abs()
        + (mid_right.theta - end.right.theta).abs();

    Ok(WavePattern {
        end: *end,
        mid_left,
        mid_right,
        p_mid,
        delta,
        strengths: Strengths {
            rarefaction_minus: (mid_left.theta - end.left.theta).abs(),
            contact: (mid_right.theta - mid_left.theta).abs(),
            rarefaction_plus: (end.right.theta - mid_right.theta).abs(),
        },
        bound_ratio: (delta > 0.0).then(|| deviation / delta),
        iterations,
        residual: norm(r),
    })
}

/// Builds end states by walking the wave curves outward from `left`:
/// along the 1-curve to `v_mid_left`, across a contact to temperature
/// `theta_mid_right` at the same pressure and velocity, then along the
/// 3-curve to `v_right` (which must not exceed the middle volume).
pub fn construct_end_states(
    params: &GasParams,
    left: &ThermoState,
    v_mid_left: f64,
    theta_mid_right: f64,
    v_right: f64,
) -> Result<(EndStates, ThermoState, ThermoState)> {
    let mid_left = rarefaction_state(params, left, Family::Minus, v_mid_left)?;
    let p_mid = thermo::pressure(params, mid_left.v, mid_left.theta)?;
    let mid_right = ThermoState::euler(params.r * theta_mid_right / p_mid, mid_left.u, theta_mid_right);
    mid_right.validate()?;
    let right = rarefaction_state(params, &mid_right, Family::Plus, v_right)?;
    let left = ThermoState::euler(left.v, left.u, left.theta);
    Ok((EndStates::new(left, right), mid_left, mid_right))
}

/// Region of the `(t, x)` half-plane relative to the middle-state
/// characteristics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Region {
    OmegaMinus,
    OmegaC,
    OmegaPlus,
}

/// `Ω₋: 2x < λ₋ᵐ t`, `Ω₊: 2x > λ₊ᵐ t`, and the closed middle region `Ωc`.
pub fn classify_domain(params: &GasParams, pattern: &WavePattern, t: f64, x: f64) -> Result<Region> {
    let (lm, lp) = pattern.middle_speeds(params)?;
    Ok(classify_with_speeds(lm, lp, t, x))
}

pub fn classify_with_speeds(lambda_minus: f64, lambda_plus: f64, t: f64, x: f64) -> Region {
    if 2.0 * x < lambda_minus * t {
        Region::OmegaMinus
    } else if 2.0 * x > lambda_plus * t {
        Region::OmegaPlus
    } else {
        Region::OmegaC
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn gas() -> GasParams {
        GasParams::new(1.0, 5.0 / 3.0, 1.0, 1.0, 1.0).unwrap()
    }

    /// Composite Simpson on a power-law integrand, refined until stable.
    fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
        let h = (b - a) / n as f64;
        let mut s = f(a) + f(b);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            s += w * f(a + i as f64 * h);
        }
        s * h / 3.0
    }

    #[test]
    fn rarefaction_anchor_is_fixed_point() {
        let g = gas();
        let a = ThermoState::euler(1.3, -0.2, 0.7);
        for fam in [Family::Minus, Family::Plus] {
            let s = rarefaction_state(&g, &a, fam, a.v).unwrap();
            assert!((s.v - a.v).abs() < 1e-15);
            assert!((s.u - a.u).abs() < 1e-15);
            assert!((s.theta - a.theta).abs() < 1e-15);
        }
    }

    #[test]
    fn rarefaction_velocity_matches_quadrature() {
        let g = gas();
        let a = ThermoState::euler(1.0, 0.0, 1.0);
        let s0 = thermo::entropy(&g, 1.0, 1.0).unwrap();
        let lam = |eta: f64| thermo::char_speed_entropy(&g, eta, s0, Family::Minus).unwrap();
        let oracle = -simpson(lam, 1.0, 1.2, 2000);
        let st = rarefaction_state(&g, &a, Family::Minus, 1.2).unwrap();
        assert!((st.u - oracle).abs() < 1e-10, "{} vs {}", st.u, oracle);
        let s1 = thermo::entropy(&g, st.v, st.theta).unwrap();
        assert!((s1 - s0).abs() < 1e-12);
    }

    #[test]
    fn rarefaction_rejects_bad_volume() {
        let a = ThermoState::euler(1.0, 0.0, 1.0);
        assert!(matches!(
            rarefaction_state(&gas(), &a, Family::Plus, 0.0),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn pure_contact_pattern() {
        let g = gas();
        let end = EndStates::new(ThermoState::euler(1.0, 0.3, 1.0), ThermoState::euler(1.2, 0.3, 1.2));
        assert!(end.is_pure_contact(&g, 1e-14).unwrap());
        let pat = solve_pattern(&g, &end, &Default::default()).unwrap();
        assert!((pat.mid_left.v - 1.0).abs() < 1e-12);
        assert!((pat.mid_right.v - 1.2).abs() < 1e-12);
        assert!((pat.p_mid - 1.0).abs() < 1e-12);
        assert!(pat.strengths.rarefaction_minus < 1e-12);
        assert!(pat.strengths.rarefaction_plus < 1e-12);
        assert!((pat.strengths.contact - 0.2).abs() < 1e-12);
    }

    #[test]
    fn forward_constructed_instance_is_recovered() {
        let g = gas();
        let left = ThermoState::euler(1.0, 0.0, 1.0);
        let ml = rarefaction_state(&g, &left, Family::Minus, 1.15).unwrap();
        let (end, ml2, mr) = construct_end_states(&g, &left, 1.15, 1.05 * ml.theta, 1.05).unwrap();
        assert_eq!(ml, ml2);
        let pat = solve_pattern(&g, &end, &Default::default()).unwrap();
        assert!((pat.mid_left.v - ml.v).abs() < 1e-8);
        assert!((pat.mid_right.v - mr.v).abs() < 1e-8);
        assert!((pat.u_mid() - ml.u).abs() < 1e-8);
        assert!((pat.mid_right.theta - mr.theta).abs() < 1e-8);
    }

    #[test]
    fn symmetric_rarefactions_contact_strength() {
        // θ₊ = θ₋ with rarefactions on both sides: the contact carries the
        // whole temperature difference between the middles.
        let g = gas();
        let left = ThermoState::euler(1.0, 0.0, 1.0);
        let ml = rarefaction_state(&g, &left, Family::Minus, 1.1).unwrap();
        // choose the 3-wave so that the right temperature returns to θ₋
        let theta_mr = 0.97 * ml.theta;
        let p_mid = g.r * ml.theta / ml.v;
        let v_mr = g.r * theta_mr / p_mid;
        let v_right = v_mr * (theta_mr / left.theta).powf(1.0 / (g.gamma - 1.0));
        let (end, _, mr) = construct_end_states(&g, &left, 1.1, theta_mr, v_right).unwrap();
        assert!((end.right.theta - 1.0).abs() < 1e-12);
        let pat = solve_pattern(&g, &end, &Default::default()).unwrap();
        assert!((pat.strengths.contact - (mr.theta - ml.theta).abs()).abs() < 1e-8);
    }

    #[test]
    fn shock_pattern_is_rejected() {
        // Compression: right state pushed into the left one.
        let g = gas();
        let end = EndStates::new(ThermoState::euler(1.0, 0.5, 1.0), ThermoState::euler(1.0, -0.5, 1.05));
        assert!(matches!(
            solve_pattern(&g, &end, &Default::default()),
            Err(Error::PatternMismatch(_))
        ));
    }

    #[test]
    fn domain_classification() {
        let g = gas();
        let end = EndStates::new(ThermoState::euler(1.0, 0.0, 1.0), ThermoState::euler(1.1, 0.0, 1.1));
        let pat = solve_pattern(&g, &end, &Default::default()).unwrap();
        assert_eq!(classify_domain(&g, &pat, 0.0, 1.0).unwrap(), Region::OmegaPlus);
        assert_eq!(classify_domain(&g, &pat, 0.0, -1.0).unwrap(), Region::OmegaMinus);
        assert_eq!(classify_domain(&g, &pat, 10.0, 0.0).unwrap(), Region::OmegaC);
        let (lm, lp) = pat.middle_speeds(&g).unwrap();
        assert_eq!(classify_domain(&g, &pat, 4.0, lp * 4.0 / 2.0).unwrap(), Region::OmegaC);
        assert_eq!(classify_domain(&g, &pat, 4.0, lm * 4.0 / 2.0).unwrap(), Region::OmegaC);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn forward_construction_round_trip(
            dv_l in 0.0f64..0.15, ratio in 0.9f64..1.1, dv_r in 0.0f64..0.15,
            u0 in -1.0f64..1.0, v0 in 0.5f64..2.0, t0 in 0.5f64..2.0,
        ) {
            let g = gas();
            let left = ThermoState::euler(v0, u0, t0);
            let ml = rarefaction_state(&g, &left, Family::Minus, v0 * (1.0 + dv_l)).unwrap();
            let theta_mr = ratio * ml.theta;
            let v_mr = g.r * theta_mr / (g.r * ml.theta / ml.v);
            let (end, ml, mr) =
                construct_end_states(&g, &left, ml.v, theta_mr, v_mr / (1.0 + dv_r)).unwrap();
            let pat = solve_pattern(&g, &end, &Default::default()).unwrap();
            prop_assert!((pat.mid_left.v - ml.v).abs() < 1e-8);
            prop_assert!((pat.mid_right.v - mr.v).abs() < 1e-8);
            let pl = thermo::pressure(&g, pat.mid_left.v, pat.mid_left.theta).unwrap();
            let pr = thermo::pressure(&g, pat.mid_right.v, pat.mid_right.theta).unwrap();
            prop_assert!((pl - pr).abs() <= 1e-10 * pat.p_mid);
            prop_assert!((pat.mid_left.u - pat.mid_right.u).abs() <= 1e-10);
        }
    }
}
