use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::solver::{SimState, StateSource};

/// Reference profile `(V, U, Θ)` sampled on the grid nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileSamples {
    pub v: Vec<f64>,
    pub u: Vec<f64>,
    pub theta: Vec<f64>,
}

impl ProfileSamples {
    pub fn sample(profile: &dyn StateSource, t: f64, xs: &[f64]) -> Result<Self> {
        let mut out = Self {
            v: Vec::with_capacity(xs.len()),
            u: Vec::with_capacity(xs.len()),
            theta: Vec::with_capacity(xs.len()),
        };
        for &x in xs {
            let s = profile.state_at(t, x)?;
            out.v.push(s.v);
            out.u.push(s.u);
            out.theta.push(s.theta);
        }
        Ok(out)
    }
}

/// `(φ, ψ, ζ, ω) = (v - V, u - U, θ - Θ, ω)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PerturbationFields {
    pub phi: Vec<f64>,
    pub psi: Vec<f64>,
    pub zeta: Vec<f64>,
    pub omega: Vec<f64>,
}

impl PerturbationFields {
    pub fn fields(&self) -> [&[f64]; 4] {
        [&self.phi, &self.psi, &self.zeta, &self.omega]
    }
}

pub fn perturbation(state: &SimState, profile: &ProfileSamples) -> Result<PerturbationFields> {
    if profile.v.len() != state.len() {
        return Err(Error::InvalidParams(format!(
            "profile has {} samples, state {} cells",
            profile.v.len(),
            state.len()
        )));
    }
    let diff = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(a, b)| a - b).collect();
    Ok(PerturbationFields {
        phi: diff(&state.v, &profile.v),
        psi: diff(&state.u, &profile.u),
        zeta: diff(&state.theta, &profile.theta),
        omega: state.omega.clone(),
    })
}

/// Trapezoid rule over equally spaced samples.
pub fn trapezoid(f: &[f64], dx: f64) -> f64 {
    match f.len() {
        0 => 0.0,
        1 => 0.0,
        n => dx * (f[1..n - 1].iter().sum::<f64>() + 0.5 * (f[0] + f[n - 1])),
    }
}

/// `Σ f²·dx`, the midpoint rule on cell-centred samples.
pub fn l2_squared_midpoint(f: &[f64], dx: f64) -> f64 {
    dx * f.iter().map(|x| x * x).sum::<f64>()
}

pub fn l2_squared_trapezoid(f: &[f64], dx: f64) -> f64 {
    let sq: Vec<f64> = f.iter().map(|x| x * x).collect();
    trapezoid(&sq, dx)
}

/// Second-order first derivative: central inside, one-sided at the ends.
pub fn derivative(f: &[f64], dx: f64) -> Vec<f64> {
    let n = f.len();
    if n < 3 {
        return vec![0.0; n];
    }
    let mut d = vec![0.0; n];
    d[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * dx);
    d[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * dx);
    for i in 1..n - 1 {
        d[i] = (f[i + 1] - f[i - 1]) / (2.0 * dx);
    }
    d
}

/// Second-order second derivative: central inside, one-sided at the ends.
pub fn second_derivative(f: &[f64], dx: f64) -> Vec<f64> {
    let n = f.len();
    if n < 4 {
        return vec![0.0; n];
    }
    let h2 = dx * dx;
    let mut d = vec![0.0; n];
    d[0] = (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) / h2;
    d[n - 1] = (2.0 * f[n - 1] - 5.0 * f[n - 2] + 4.0 * f[n - 3] - f[n - 4]) / h2;
    for i in 1..n - 1 {
        d[i] = (f[i + 1] - 2.0 * f[i] + f[i - 1]) / h2;
    }
    d
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct FieldNorms {
    pub linf: f64,
    pub l2: f64,
    pub h1: f64,
    pub h2: f64,
}

pub fn field_norms(f: &[f64], dx: f64) -> FieldNorms {
    let fx = derivative(f, dx);
    let fxx = second_derivative(f, dx);
    let l2sq = l2_squared_trapezoid(f, dx);
    let h1sq = l2sq + l2_squared_trapezoid(&fx, dx);
    let h2sq = h1sq + l2_squared_trapezoid(&fxx, dx);
    FieldNorms {
        linf: f.iter().fold(0.0, |m, x| m.max(x.abs())),
        l2: l2sq.sqrt(),
        h1: h1sq.sqrt(),
        h2: h2sq.sqrt(),
    }
}

/// Checks `‖f‖²_∞ ≤ ½(f(-L)² + f(L)²) + ‖f‖·‖f_x‖`, the interval form of
/// `‖f‖_∞ ≤ ‖f‖^{1/2}‖f_x‖^{1/2}` (the boundary term vanishes for decaying
/// fields). A relative slack absorbs quadrature error.
pub fn sobolev_holds(f: &[f64], dx: f64, slack: f64) -> bool {
    if f.is_empty() {
        return true;
    }
    let linf = f.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let norm = l2_squared_trapezoid(f, dx).sqrt();
    let dnorm = l2_squared_trapezoid(&derivative(f, dx), dx).sqrt();
    let edge = 0.5 * (f[0] * f[0] + f[f.len() - 1] * f[f.len() - 1]);
    linf * linf <= (edge + norm * dnorm) * (1.0 + slack) + f64::MIN_POSITIVE
}
