//! Method-of-lines solver for the inviscid micropolar system in
//! `(v, u, θ, ω)` variables, temperature form of the energy equation.

mod rhs;
mod run;
mod step;

pub use rhs::{spatial_rhs, BoundaryFlux, FluxFault, Forcing, Reconstruction, RhsContext, Tendency};
pub use run::{initial_state, run, run_with, InitialPerturbation, RunHooks, RunOutput, RunStatus, RunSummary};
pub use step::{omega_dissipation, omega_energy, stable_dt, step, time_step_limits, StepReport};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::profiles::{CompositeWave, ProfileField};
use crate::thermo::ThermoState;

/// Uniform cell-centred grid on `[-L, L]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub half_width: f64,
    pub n: usize,
}

impl Grid {
    pub fn new(half_width: f64, n: usize) -> Result<Self> {
        if n < 16 || !(half_width > 0.0 && half_width.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "grid needs n >= 16 and L > 0, got n = {n}, L = {half_width}"
            )));
        }
        Ok(Self { half_width, n })
    }

    pub fn dx(&self) -> f64 {
        2.0 * self.half_width / self.n as f64
    }

    /// Centre of cell `i`; negative or `>= n` indices are ghost cells.
    pub fn x(&self, i: isize) -> f64 {
        -self.half_width + (i as f64 + 0.5) * self.dx()
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n as isize).map(|i| self.x(i)).collect()
    }
}

/// Discrete solution at one time.
#[derive(Debug, Clone, PartialEq)]
pub struct SimState {
    pub t: f64,
    pub v: Vec<f64>,
    pub u: Vec<f64>,
    pub theta: Vec<f64>,
    pub omega: Vec<f64>,
}

impl SimState {
    pub fn constant(n: usize, s: &ThermoState, t: f64) -> Self {
        Self {
            t,
            v: vec![s.v; n],
            u: vec![s.u; n],
            theta: vec![s.theta; n],
            omega: vec![s.omega; n],
        }
    }

    pub fn len(&self) -> usize {
        self.v.len()
    }

    pub fn is_empty(&self) -> bool {
        self.v.is_empty()
    }

    /// `v > 0`, `θ > 0` and every value finite.
    pub fn check_positive(&self) -> Result<()> {
        for i in 0..self.len() {
            let (v, u, th, w) = (self.v[i], self.u[i], self.theta[i], self.omega[i]);
            if !(v > 0.0 && th > 0.0 && v.is_finite() && th.is_finite() && u.is_finite() && w.is_finite()) {
                return Err(Error::Positivity {
                    t: self.t,
                    detail: format!("cell {i}: v = {v}, u = {u}, theta = {th}, omega = {w}"),
                });
            }
        }
        Ok(())
    }

    pub fn min_max(values: &[f64]) -> (f64, f64) {
        values.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| {
            (lo.min(x), hi.max(x))
        })
    }
}

/// Reference states at any `(t, x)`: ghost cells, initial data, profiles.
pub trait StateSource: Sync {
    fn state_at(&self, t: f64, x: f64) -> Result<ThermoState>;
}

impl StateSource for CompositeWave {
    fn state_at(&self, t: f64, x: f64) -> Result<ThermoState> {
        let j = self.eval(t, x)?;
        Ok(ThermoState::euler(j.v.val, j.u.val, j.theta.val))
    }
}

impl StateSource for ProfileField {
    fn state_at(&self, t: f64, x: f64) -> Result<ThermoState> {
        let j = self.eval(t, x)?;
        Ok(ThermoState::euler(j.v.val, j.u.val, j.theta.val))
    }
}

/// Constant far-field data.
impl StateSource for ThermoState {
    fn state_at(&self, _t: f64, _x: f64) -> Result<ThermoState> {
        Ok(*self)
    }
}

/// Boundary data from a closure, e.g. an exact manufactured solution.
pub struct FnSource<F>(pub F);

impl<F> StateSource for FnSource<F>
where
    F: Fn(f64, f64) -> ThermoState + Sync,
{
    fn state_at(&self, t: f64, x: f64) -> Result<ThermoState> {
        Ok((self.0)(t, x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_geometry() {
        let g = Grid::new(1.0, 16).unwrap();
        assert!((g.dx() - 0.125).abs() < 1e-15);
        assert!((g.x(0) + 0.9375).abs() < 1e-15);
        assert!((g.x(15) - 0.9375).abs() < 1e-15);
        assert!((g.x(-1) + 1.0625).abs() < 1e-15);
        assert!(Grid::new(1.0, 8).is_err());
    }

    #[test]
    fn positivity_violation_reported() {
        let mut s = SimState::constant(16, &ThermoState::euler(1.0, 0.0, 1.0), 0.5);
        s.theta[3] = -1e-3;
        match s.check_positive() {
            Err(Error::Positivity { t, detail }) => {
                assert_eq!(t, 0.5);
                assert!(detail.contains("cell 3"));
            }
            other => panic!("{other:?}"),
        }
    }
}
