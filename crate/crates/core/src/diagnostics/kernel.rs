use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::norms::trapezoid;
use crate::error::{Error, Result};
use crate::quad::adaptive_simpson;

/// Gaussian weight `h = (1+t)^{-1/2} exp(-αx²/(1+t))` and its primitive
/// `g = ∫_{-∞}^x h dy`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelWeight {
    pub alpha: f64,
}

impl KernelWeight {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "kernel alpha must be positive, got {alpha}"
            )));
        }
        Ok(Self { alpha })
    }

    pub fn h(&self, t: f64, x: f64) -> f64 {
        (-self.alpha * x * x / (1.0 + t)).exp() / (1.0 + t).sqrt()
    }

    pub fn h_x(&self, t: f64, x: f64) -> f64 {
        -2.0 * self.alpha * x / (1.0 + t) * self.h(t, x)
    }

    /// Closed form `√(π/α)/2 · (1 + erf(x√(α/(1+t))))`.
    pub fn g(&self, t: f64, x: f64) -> f64 {
        0.5 * (std::f64::consts::PI / self.alpha).sqrt() * (1.0 + libm::erf(x * (self.alpha / (1.0 + t)).sqrt()))
    }

    /// `g` by adaptive quadrature of `h`, independent of the closed form.
    pub fn g_quadrature(&self, t: f64, x: f64, tol: f64) -> Result<f64> {
        let width = ((1.0 + t) / self.alpha).sqrt();
        let lo = -40.0 * width;
        if x <= lo {
            return Ok(0.0);
        }
        // split at the centre so the peak is never straddled blindly
        let f = |y: f64| self.h(t, y);
        if x <= 0.0 {
            adaptive_simpson(&f, lo, x, tol)
        } else {
            Ok(adaptive_simpson(&f, lo, 0.0, tol)? + adaptive_simpson(&f, 0.0, x, tol)?)
        }
    }

    /// `sup_x g = √π·α^{-1/2}`.
    pub fn sup_g(&self) -> f64 {
        (std::f64::consts::PI / self.alpha).sqrt()
    }

    /// `∫ F² h² dx` by the trapezoid rule on equally spaced samples.
    pub fn weighted_integral(&self, t: f64, xs: &[f64], f: &[f64]) -> f64 {
        if xs.len() < 2 {
            return 0.0;
        }
        let dx = xs[1] - xs[0];
        let w: Vec<f64> = xs.iter().zip(f).map(|(&x, v)| (v * self.h(t, x)).powi(2)).collect();
        trapezoid(&w, dx)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelReport {
    pub alpha: f64,
    /// `(t, sup_x g)` with `g` from quadrature.
    pub sup_g: Vec<(f64, f64)>,
    pub sup_g_expected: f64,
    pub max_sup_rel_error: f64,
    /// Max of `|4α g_t - h_x|` over the random sample points.
    pub max_identity_error: f64,
    pub samples: usize,
}

/// Numerical check of `sup g = √π/√α` and `4α g_t = h_x`. `g` comes from
/// quadrature of `h`, `g_t` from a fourth-order difference in `t`.
pub fn kernel_check(
    weight: &KernelWeight,
    t_samples: &[f64],
    quad_tol: f64,
    points: usize,
    seed: u64,
) -> Result<KernelReport> {
    let expected = weight.sup_g();
    let mut sup_g = Vec::with_capacity(t_samples.len());
    let mut max_sup_rel_error: f64 = 0.0;
    for &t in t_samples {
        let far = 40.0 * ((1.0 + t) / weight.alpha).sqrt();
        let s = weight.g_quadrature(t, far, quad_tol)?;
        max_sup_rel_error = max_sup_rel_error.max((s - expected).abs() / expected);
        sup_g.push((t, s));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_identity_error: f64 = 0.0;
    for _ in 0..points {
        let t = rng.gen_range(0.0..10.0);
        let x = rng.gen_range(-5.0..5.0) * ((1.0 + t) / weight.alpha).sqrt();
        let k = 1e-2 * (1.0 + t);
        let g = |s: f64| weight.g_quadrature(s, x, quad_tol);
        let g_t = (-g(t + 2.0 * k)? + 8.0 * g(t + k)? - 8.0 * g(t - k)? + g(t - 2.0 * k)?) / (12.0 * k);
        max_identity_error = max_identity_error.max((4.0 * weight.alpha * g_t - weight.h_x(t, x)).abs());
    }

    Ok(KernelReport {
        alpha: weight.alpha,
        sup_g,
        sup_g_expected: expected,
        max_sup_rel_error,
        max_identity_error,
        samples: points,
    })
}
