//! Smooth Burgers solution with `tanh` initial data, evaluated along
//! characteristics.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `ŵ_t + ŵŵ_x = 0`, `ŵ(0,x) = (w_r+w_l)/2 + (w_r-w_l)/2·tanh x`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BurgersProfile {
    pub w_l: f64,
    pub w_r: f64,
}

/// Value and derivatives of `ŵ` at one point, plus the accurately resolved
/// distances to the two far-field values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BurgersJet {
    pub w: f64,
    pub w_x: f64,
    pub w_xx: f64,
    pub w_t: f64,
    /// `ŵ - w_l`, computed without cancellation.
    pub above_left: f64,
    /// `w_r - ŵ`, computed without cancellation.
    pub below_right: f64,
}

/// `1 + tanh x` without cancellation for large negative `x`.
fn one_plus_tanh(x: f64) -> f64 {
    2.0 / (1.0 + (-2.0 * x).exp())
}

/// `sech² x`.
fn sech2(x: f64) -> f64 {
    let e = (-2.0 * x.abs()).exp();
    4.0 * e / ((1.0 + e) * (1.0 + e))
}

impl BurgersProfile {
    pub fn new(w_l: f64, w_r: f64) -> Result<Self> {
        if !(w_l.is_finite() && w_r.is_finite()) || w_l > w_r {
            return Err(Error::InvalidParams(format!(
                "Burgers far fields must satisfy w_l <= w_r, got ({w_l}, {w_r})"
            )));
        }
        Ok(Self { w_l, w_r })
    }

    fn half_jump(&self) -> f64 {
        0.5 * (self.w_r - self.w_l)
    }

    pub fn initial(&self, x: f64) -> f64 {
        0.5 * (self.w_r + self.w_l) + self.half_jump() * x.tanh()
    }

    fn initial_deriv(&self, x: f64) -> f64 {
        self.half_jump() * sech2(x)
    }

    fn initial_deriv2(&self, x: f64) -> f64 {
        -2.0 * self.half_jump() * sech2(x) * x.tanh()
    }

    /// Foot `x₀` of the characteristic through `(t, x)`: `x = x₀ + t·w₀(x₀)`.
    ///
    /// The map is strictly increasing, so bisection on the bracket
    /// `[x - w_r t, x - w_l t]` followed by two Newton steps settles it.
    pub fn foot(&self, t: f64, x: f64) -> Result<f64> {
        if !(t >= 0.0) || !x.is_finite() {
            return Err(Error::Domain(format!(
                "Burgers evaluation needs t >= 0, got ({t}, {x})"
            )));
        }
        if self.w_l == self.w_r {
            return Ok(x - self.w_l * t);
        }
        if t == 0.0 {
            return Ok(x);
        }
        let g = |x0: f64| x0 + t * self.initial(x0) - x;
        let (mut lo, mut hi) = (x - self.w_r * t, x - self.w_l * t);
        // g(lo) <= 0 <= g(hi) holds exactly; far in the tails rounding can
        // flip a sign, and then the foot sits on that end of the bracket
        let (g_lo, g_hi) = (g(lo), g(hi));
        if !(g_lo.is_finite() && g_hi.is_finite()) {
            return Err(Error::Internal(format!(
                "characteristic foot undefined at (t, x) = ({t}, {x})"
            )));
        }
        if g_lo >= 0.0 {
            return Ok(lo);
        }
        if g_hi <= 0.0 {
            return Ok(hi);
        }
        let width = 1e-12 * (self.w_r - self.w_l) * t;
        while hi - lo > width {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if g(mid) > 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let mut x0 = 0.5 * (lo + hi);
        for _ in 0..2 {
            let d = 1.0 + t * self.initial_deriv(x0);
            let next = x0 - g(x0) / d;
            if next.is_finite() {
                x0 = next;
            }
        }
        Ok(x0)
    }

    pub fn eval(&self, t: f64, x: f64) -> Result<f64> {
        Ok(self.jet(t, x)?.w)
    }

    /// `ŵ_x = w₀'(x₀) / (1 + t w₀'(x₀))`.
    pub fn deriv(&self, t: f64, x: f64) -> Result<f64> {
        Ok(self.jet(t, x)?.w_x)
    }

    pub fn jet(&self, t: f64, x: f64) -> Result<BurgersJet> {
        let x0 = self.foot(t, x)?;
        let d = self.half_jump();
        let above_left = d * one_plus_tanh(x0);
        let below_right = d * one_plus_tanh(-x0);
        let w = if x0 < 0.0 {
            self.w_l + above_left
        } else {
            self.w_r - below_right
        };
        let wp = self.initial_deriv(x0);
        let denom = 1.0 + t * wp;
        let w_x = wp / denom;
        Ok(BurgersJet {
            w,
            w_x,
            w_xx: self.initial_deriv2(x0) / (denom * denom * denom),
            w_t: -w * w_x,
            above_left,
            below_right,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_data_stays_constant() {
        let b = BurgersProfile::new(0.7, 0.7).unwrap();
        for &(t, x) in &[(0.0, 0.0), (3.0, -5.0), (100.0, 40.0)] {
            let j = b.jet(t, x).unwrap();
            assert_eq!(j.w, 0.7);
            assert_eq!(j.w_x, 0.0);
        }
    }

    #[test]
    fn initial_data_is_returned_at_t0() {
        let b = BurgersProfile::new(-1.0, 2.0).unwrap();
        for &x in &[-3.0, -0.5, 0.0, 0.25, 4.0] {
            let expected = 0.5 + 1.5 * f64::tanh(x);
            assert!((b.eval(0.0, x).unwrap() - expected).abs() < 1e-15);
            let dexp = 1.5 / f64::cosh(x).powi(2);
            assert!((b.deriv(0.0, x).unwrap() - dexp).abs() < 1e-15);
        }
    }

    #[test]
    fn implicit_equation_holds() {
        let b = BurgersProfile::new(-1.0, 1.0).unwrap();
        for &(t, x) in &[(5.0, 0.0), (1.0, 0.3), (20.0, -12.0), (50.0, 49.0)] {
            let w = b.eval(t, x).unwrap();
            assert!((w - b.initial(x - w * t)).abs() < 1e-13);
        }
        assert!(b.eval(5.0, 0.0).unwrap().abs() < 1e-14);
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let b = BurgersProfile::new(0.2, 0.9).unwrap();
        let h = 1e-5;
        for &(t, x) in &[(0.5, 0.1), (3.0, 1.2), (10.0, 4.0)] {
            let j = b.jet(t, x).unwrap();
            let fd = (b.eval(t, x + h).unwrap() - b.eval(t, x - h).unwrap()) / (2.0 * h);
            assert!((j.w_x - fd).abs() < 1e-8);
            let fd2 = (b.deriv(t, x + h).unwrap() - b.deriv(t, x - h).unwrap()) / (2.0 * h);
            assert!((j.w_xx - fd2).abs() < 1e-7);
            let ft = (b.eval(t + h, x).unwrap() - b.eval(t - h, x).unwrap()) / (2.0 * h);
            assert!((j.w_t - ft).abs() < 1e-8);
        }
    }

    #[test]
    fn rejects_negative_time_and_reversed_states() {
        let b = BurgersProfile::new(0.0, 1.0).unwrap();
        assert!(b.eval(-1.0, 0.0).is_err());
        assert!(BurgersProfile::new(1.0, 0.0).is_err());
    }

    #[test]
    fn tail_offsets_are_resolved() {
        let b = BurgersProfile::new(0.5, 0.6).unwrap();
        let j = b.jet(2.0, -30.0).unwrap();
        assert!(j.above_left > 0.0);
        assert!(j.above_left <= 0.1 * (-2.0f64 * (30.0 + 0.5 * 2.0)).exp());
    }
}
