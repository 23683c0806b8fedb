use super::norms::{trapezoid, ProfileSamples};
use crate::error::{Error, Result};
use crate::solver::SimState;

/// Relative-entropy kernel `Φ(s) = s - 1 - ln s`.
pub fn phi(s: f64) -> f64 {
    // ln_1p keeps Φ accurate near s = 1, where it is O((s-1)²)
    let d = s - 1.0;
    d - d.ln_1p()
}

/// `∫ [ΘΦ(v/V) + ψ²/2 + ΘΦ(θ/Θ) + ω²/2] dx` by the trapezoid rule.
pub fn entropy_energy(state: &SimState, profile: &ProfileSamples, dx: f64) -> Result<f64> {
    let n = state.len();
    if profile.v.len() != n {
        return Err(Error::InvalidParams("profile and state sizes differ".into()));
    }
    let mut density = Vec::with_capacity(n);
    for i in 0..n {
        let (v, th) = (state.v[i], state.theta[i]);
        let (pv, pth) = (profile.v[i], profile.theta[i]);
        if !(v > 0.0 && th > 0.0 && pv > 0.0 && pth > 0.0) {
            return Err(Error::Positivity {
                t: state.t,
                detail: format!("entropy energy at cell {i}: v = {v}, theta = {th}, V = {pv}, Theta = {pth}"),
            });
        }
        let psi = state.u[i] - profile.u[i];
        let w = state.omega[i];
        density.push(pth * phi(v / pv) + 0.5 * psi * psi + pth * phi(th / pth) + 0.5 * w * w);
    }
    Ok(trapezoid(&density, dx))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagnostics::norms::{l2_squared_trapezoid, perturbation};
    use crate::solver::Grid;
    use crate::thermo::ThermoState;
    use proptest::prelude::*;

    #[test]
    fn phi_values() {
        assert_eq!(phi(1.0), 0.0);
        assert!((phi(std::f64::consts::E) - 0.7182818).abs() < 1e-7);
    }

    proptest! {
        #[test]
        fn phi_nonnegative_and_convex(s in 0.1f64..10.0) {
            prop_assert!(phi(s) >= 0.0);
            let h = 1e-3;
            let second = (phi(s + h) - 2.0 * phi(s) + phi(s - h)) / (h * h);
            prop_assert!((second - 1.0 / (s * s)).abs() < 1e-4 * (1.0 + 1.0 / (s * s)));
        }
    }

    #[test]
    fn zero_on_profile() {
        let grid = Grid::new(5.0, 64).unwrap();
        let s0 = ThermoState::euler(1.1, 0.3, 0.9);
        let samples = ProfileSamples::sample(&s0, 0.0, &grid.nodes()).unwrap();
        let e = entropy_energy(&SimState::constant(64, &s0, 0.0), &samples, grid.dx()).unwrap();
        assert_eq!(e, 0.0);
    }

    #[test]
    fn quadratic_near_equilibrium() {
        let grid = Grid::new(8.0, 256).unwrap();
        let s0 = ThermoState::euler(1.0, 0.0, 1.0);
        let samples = ProfileSamples::sample(&s0, 0.0, &grid.nodes()).unwrap();
        let mut ratios = Vec::new();
        for eps in [1e-2, 1e-3, 1e-4] {
            let mut s = SimState::constant(256, &s0, 0.0);
            for (i, &x) in grid.nodes().iter().enumerate() {
                let b = eps * (-x * x).exp();
                s.v[i] += b;
                s.u[i] += b;
                s.theta[i] += b;
                s.omega[i] += b;
            }
            let e = entropy_energy(&s, &samples, grid.dx()).unwrap();
            let p = perturbation(&s, &samples).unwrap();
            let sq: f64 = p.fields().iter().map(|f| l2_squared_trapezoid(f, grid.dx())).sum();
            ratios.push(e / sq);
        }
        for r in &ratios {
            assert!(*r > 0.1 && *r < 1.0, "{ratios:?}");
        }
        // each term is half a square to leading order
        assert!((ratios[2] - 0.5).abs() < 1e-3);
    }

    #[test]
    fn rejects_nonpositive_profile() {
        let s0 = ThermoState::euler(1.0, 0.0, 1.0);
        let bad = ProfileSamples {
            v: vec![1.0; 16],
            u: vec![0.0; 16],
            theta: vec![-1.0; 16],
        };
        assert!(entropy_energy(&SimState::constant(16, &s0, 0.0), &bad, 0.1).is_err());
    }
}
