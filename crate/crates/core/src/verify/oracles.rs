//! Independent reference computations used by the acceptance checks.

use crate::thermo::{GasParams, ThermoState};

/// Godunov flux of `w²/2`: exact Riemann solution at the interface.
fn godunov(a: f64, b: f64) -> f64 {
    if a <= b {
        if a > 0.0 {
            0.5 * a * a
        } else if b < 0.0 {
            0.5 * b * b
        } else {
            0.0
        }
    } else if a + b > 0.0 {
        0.5 * a * a
    } else {
        0.5 * b * b
    }
}

fn mc_slope(a: f64, b: f64, c: f64) -> f64 {
    let (l, r) = (b - a, c - b);
    if l * r <= 0.0 {
        return 0.0;
    }
    let m = 0.5 * (l + r);
    m.signum() * (2.0 * l.abs()).min(2.0 * r.abs()).min(m.abs())
}

/// Finite-volume solution of `w_t + (w²/2)_x = 0` with data `w0`:
/// MC-limited slopes, Godunov flux, two-stage SSP Runge–Kutta, constant
/// extrapolation at both ends. Returns cell averages at each requested time
/// together with the cell centres.
pub fn upwind_burgers(
    w0: impl Fn(f64) -> f64,
    x_lo: f64,
    x_hi: f64,
    n: usize,
    times: &[f64],
    cfl: f64,
) -> (Vec<f64>, Vec<Vec<f64>>) {
    let dx = (x_hi - x_lo) / n as f64;
    let xs: Vec<f64> = (0..n).map(|i| x_lo + (i as f64 + 0.5) * dx).collect();
    // Gauss–Legendre cell averages of the initial data
    let g = 0.5 / 3f64.sqrt();
    let mut w: Vec<f64> = xs.iter().map(|&x| 0.5 * (w0(x - g * dx) + w0(x + g * dx))).collect();

    let rhs = |w: &[f64]| -> Vec<f64> {
        let m = w.len();
        let at = |i: isize| w[i.clamp(0, m as isize - 1) as usize];
        let slopes: Vec<f64> = (-1..=m as isize)
            .map(|i| mc_slope(at(i - 1), at(i), at(i + 1)))
            .collect();
        let mut flux = vec![0.0; m + 1];
        for (k, f) in flux.iter_mut().enumerate() {
            let (l, r) = (k as isize - 1, k as isize);
            let wl = at(l) + 0.5 * slopes[(l + 1) as usize];
            let wr = at(r) - 0.5 * slopes[(r + 1) as usize];
            *f = godunov(wl, wr);
        }
        (0..m).map(|i| -(flux[i + 1] - flux[i]) / dx).collect()
    };

    let mut t = 0.0;
    let mut out = Vec::with_capacity(times.len());
    for &target in times {
        while t < target - 1e-14 {
            let speed = w.iter().fold(0.0f64, |a, x| a.max(x.abs())).max(1e-12);
            let dt = (cfl * dx / speed).min(target - t);
            let k1 = rhs(&w);
            let w1: Vec<f64> = w.iter().zip(&k1).map(|(a, k)| a + dt * k).collect();
            let k2 = rhs(&w1);
            w = w
                .iter()
                .zip(&w1)
                .zip(&k2)
                .map(|((a, b), k)| 0.5 * a + 0.5 * (b + dt * k))
                .collect();
            t += dt;
        }
        out.push(w.clone());
    }
    (xs, out)
}

/// Smooth exact fields with the forcing that makes them solve the system.
///
/// ```text
/// v = 1 + 0.2 sin(x - t)      u = 0.1 cos(x + t)
/// θ = 1 + 0.1 sin x cos t     ω = 0.1 sin 2x · e^{-t}
/// ```
#[derive(Debug, Clone, Copy)]
pub struct Manufactured {
    pub params: GasParams,
}

impl Manufactured {
    pub fn state(&self, t: f64, x: f64) -> ThermoState {
        ThermoState {
            v: 1.0 + 0.2 * (x - t).sin(),
            u: 0.1 * (x + t).cos(),
            theta: 1.0 + 0.1 * x.sin() * t.cos(),
            omega: 0.1 * (2.0 * x).sin() * (-t).exp(),
        }
    }

    pub fn forcing(&self, t: f64, x: f64) -> [f64; 4] {
        let GasParams { r, gamma, kappa, a, .. } = self.params;
        let s = self.state(t, x);
        let (v, th, w) = (s.v, s.theta, s.omega);
        let v_x = 0.2 * (x - t).cos();
        let v_t = -v_x;
        let u_x = -0.1 * (x + t).sin();
        let u_t = u_x;
        let th_x = 0.1 * x.cos() * t.cos();
        let th_xx = -0.1 * x.sin() * t.cos();
        let th_t = -0.1 * x.sin() * t.sin();
        let w_x = 0.2 * (2.0 * x).cos() * (-t).exp();
        let w_xx = -4.0 * w;
        let w_t = -w;

        let p = r * th / v;
        let p_x = r * (th_x / v - th * v_x / (v * v));
        let heat = kappa * (th_xx / v - th_x * v_x / (v * v));
        let spin = w_xx / v - w_x * v_x / (v * v);
        [
            v_t - u_x,
            u_t + p_x,
            th_t - (gamma - 1.0) / r * (-p * u_x + heat + w_x * w_x / v + v * w * w),
            w_t - a * (spin - v * w),
        ]
    }
}
