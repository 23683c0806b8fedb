//! Self-similar solution `Θ(ξ)`, `ξ = x/√(1+t)`, of `Θ_t = aκ(Θ_x/Θ)_x`
//! with `Θ(±∞) = θ±`, i.e. the two-point problem
//!
//! ```text
//! aκ (Θ'/Θ)' + (ξ/2) Θ' = 0,   Θ(-Ξ) = θ₋,  Θ(Ξ) = θ₊.
//! ```
//!
//! Solved by Newton relaxation on a second-order central scheme written in
//! `ln Θ`, then Richardson-extrapolated against a grid of half the spacing.
//! Evaluation between nodes is a quintic Hermite interpolant carrying
//! `Θ, Θ', Θ''`, with `Θ''` taken from the ODE itself.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SelfSimilarOptions {
    /// Half-width `Ξ` of the similarity window; `None` picks `12√(2aκ)`.
    #[serde(default)]
    pub xi_max: Option<f64>,
    pub n: usize,
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for SelfSimilarOptions {
    fn default() -> Self {
        Self {
            xi_max: None,
            n: 4001,
            tol: 1e-10,
            max_iter: 50,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SelfSimilarProfile {
    pub theta_minus: f64,
    pub theta_plus: f64,
    pub a_kappa: f64,
    pub xi_max: f64,
    pub h: f64,
    pub theta: Vec<f64>,
    pub dtheta: Vec<f64>,
    pub d2theta: Vec<f64>,
    /// Max-norm residual of the discrete equations on the base grid.
    pub residual: f64,
    pub iterations: usize,
}

/// Diffusion coefficient `aκ` with `a = p(γ-1)/(γR²)`.
pub fn diffusion_coefficient(params: &crate::thermo::GasParams, p: f64) -> f64 {
    p * (params.gamma - 1.0) / (params.gamma * params.r * params.r) * params.kappa
}

struct Discrete {
    theta: Vec<f64>,
    residual: f64,
    iterations: usize,
}

/// Thomas algorithm; `sub[0]` and `sup[n-1]` are ignored.
fn solve_tridiagonal(sub: &[f64], diag: &[f64], sup: &[f64], rhs: &mut [f64]) -> Result<()> {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut beta = diag[0];
    if beta == 0.0 {
        return Err(Error::Internal("zero pivot in tridiagonal solve".into()));
    }
    rhs[0] /= beta;
    for i in 1..n {
        c[i] = sup[i - 1] / beta;
        beta = diag[i] - sub[i] * c[i];
        if beta == 0.0 || !beta.is_finite() {
            return Err(Error::Internal("zero pivot in tridiagonal solve".into()));
        }
        rhs[i] = (rhs[i] - sub[i] * rhs[i - 1]) / beta;
    }
    for i in (0..n - 1).rev() {
        rhs[i] -= c[i + 1] * rhs[i + 1];
    }
    Ok(())
}

fn erf_guess(xi: f64, a_kappa: f64, tm: f64, tp: f64) -> f64 {
    tm + (tp - tm) * 0.5 * (1.0 + libm::erf(xi / (4.0 * a_kappa).sqrt()))
}

/// Residual of the discrete equation at interior node `i`, in `y = ln Θ`.
fn node_residual(y: &[f64], i: usize, xi: f64, h: f64, a_kappa: f64) -> f64 {
    a_kappa * (y[i + 1] - 2.0 * y[i] + y[i - 1]) / (h * h) + xi / (4.0 * h) * (y[i + 1].exp() - y[i - 1].exp())
}

fn solve_discrete(
    a_kappa: f64,
    tm: f64,
    tp: f64,
    xi_max: f64,
    n: usize,
    tol: f64,
    max_iter: usize,
) -> Result<Discrete> {
    let h = 2.0 * xi_max / (n - 1) as f64;
    let xi = |i: usize| -xi_max + i as f64 * h;
    let mut y: Vec<f64> = (0..n).map(|i| erf_guess(xi(i), a_kappa, tm, tp).ln()).collect();
    y[0] = tm.ln();
    y[n - 1] = tp.ln();

    let m = n - 2;
    let (mut sub, mut diag, mut sup, mut rhs) = (vec![0.0; m], vec![0.0; m], vec![0.0; m], vec![0.0; m]);
    let max_res = |y: &[f64]| {
        (1..n - 1)
            .map(|i| node_residual(y, i, xi(i), h, a_kappa).abs())
            .fold(0.0, f64::max)
    };

    let mut res = max_res(&y);
    let mut iterations = 0;
    while res > tol {
        if iterations >= max_iter {
            return Err(Error::Convergence {
                what: "self-similar profile Newton relaxation".into(),
                iterations,
                residual: res,
            });
        }
        iterations += 1;
        let c = a_kappa / (h * h);
        for k in 0..m {
            let i = k + 1;
            let q = xi(i) / (4.0 * h);
            sub[k] = c - q * y[i - 1].exp();
            diag[k] = -2.0 * c;
            sup[k] = c + q * y[i + 1].exp();
            rhs[k] = -node_residual(&y, i, xi(i), h, a_kappa);
        }
        solve_tridiagonal(&sub, &diag, &sup, &mut rhs)?;

        // damped update: halve until the residual drops
        let mut lambda = 1.0;
        loop {
            let mut trial = y.clone();
            for k in 0..m {
                trial[k + 1] += lambda * rhs[k];
            }
            let r = max_res(&trial);
            if r < res || lambda < 1e-4 {
                y = trial;
                // roundoff floor: residual cannot improve further
                let stalled = r >= res;
                res = r;
                if stalled {
                    return Err(Error::Convergence {
                        what: "self-similar profile Newton relaxation stalled".into(),
                        iterations,
                        residual: res,
                    });
                }
                break;
            }
            lambda *= 0.5;
        }
    }
    Ok(Discrete {
        theta: y.iter().map(|v| v.exp()).collect(),
        residual: res,
        iterations,
    })
}

pub fn solve_selfsimilar(
    a_kappa: f64,
    theta_minus: f64,
    theta_plus: f64,
    opts: &SelfSimilarOptions,
) -> Result<SelfSimilarProfile> {
    if !(theta_minus > 0.0 && theta_plus > 0.0) {
        return Err(Error::Domain(format!(
            "far-field temperatures must be positive, got ({theta_minus}, {theta_plus})"
        )));
    }
    if !(a_kappa > 0.0) || !(opts.tol > 0.0) || opts.n < 5 {
        return Err(Error::InvalidParams(format!(
            "need aκ > 0, tol > 0, n >= 5; got aκ = {a_kappa}, {opts:?}"
        )));
    }
    let xi_max = opts.xi_max.unwrap_or(12.0 * (2.0 * a_kappa).sqrt());
    let delta = (theta_plus - theta_minus).abs();
    let tail = (-xi_max * xi_max / (4.0 * a_kappa)).exp() * delta;
    if !(xi_max > 0.0) || tail >= opts.tol {
        return Err(Error::Precondition(format!(
            "similarity window Xi = {xi_max} too small: Gaussian tail {tail:e} >= tol {:e}",
            opts.tol
        )));
    }
    let n = opts.n;
    let h = 2.0 * xi_max / (n - 1) as f64;

    if delta == 0.0 {
        return Ok(SelfSimilarProfile {
            theta_minus,
            theta_plus,
            a_kappa,
            xi_max,
            h,
            theta: vec![theta_minus; n],
            dtheta: vec![0.0; n],
            d2theta: vec![0.0; n],
            residual: 0.0,
            iterations: 0,
        });
    }

    let coarse = solve_discrete(a_kappa, theta_minus, theta_plus, xi_max, n, opts.tol, opts.max_iter)?;
    let fine = solve_discrete(
        a_kappa,
        theta_minus,
        theta_plus,
        xi_max,
        2 * n - 1,
        opts.tol,
        opts.max_iter,
    )?;
    let mut theta: Vec<f64> = (0..n)
        .map(|i| fine.theta[2 * i] + (fine.theta[2 * i] - coarse.theta[i]) / 3.0)
        .collect();
    enforce_monotone(&mut theta, theta_plus > theta_minus)?;

    let dtheta = first_integral_derivative(&theta, a_kappa, xi_max, h, theta_plus - theta_minus);
    let d2theta = (0..n)
        .map(|i| {
            let xi = -xi_max + i as f64 * h;
            ode_second_derivative(a_kappa, xi, theta[i], dtheta[i])
        })
        .collect();

    Ok(SelfSimilarProfile {
        theta_minus,
        theta_plus,
        a_kappa,
        xi_max,
        h,
        theta,
        dtheta,
        d2theta,
        residual: coarse.residual.max(fine.residual),
        iterations: coarse.iterations.max(fine.iterations),
    })
}

/// `Θ'' = Θ'²/Θ - ξΘΘ'/(2aκ)`.
fn ode_second_derivative(a_kappa: f64, xi: f64, th: f64, d1: f64) -> f64 {
    d1 * d1 / th - xi * th * d1 / (2.0 * a_kappa)
}

/// Removes rounding-level reversals in the flat tails; anything larger is a
/// solver failure.
fn enforce_monotone(theta: &mut [f64], increasing: bool) -> Result<()> {
    for i in 1..theta.len() {
        let reversed = if increasing {
            theta[i] < theta[i - 1]
        } else {
            theta[i] > theta[i - 1]
        };
        if reversed {
            if (theta[i] - theta[i - 1]).abs() > 1e-13 * theta[i].abs() {
                return Err(Error::Internal(format!(
                    "self-similar profile not monotone at node {i}: {} -> {}",
                    theta[i - 1],
                    theta[i]
                )));
            }
            theta[i] = theta[i - 1];
        }
    }
    Ok(())
}

/// `Θ' = Θ q` with `q = Θ'/Θ = C exp(-∫ ξΘ/(2aκ) dξ)`, which follows from
/// `aκ q' = -(ξ/2) Θ q`. The constant is fixed by `∫Θ' = θ₊ - θ₋`. The
/// result has the sign of the jump everywhere, tails included.
fn first_integral_derivative(theta: &[f64], a_kappa: f64, xi_max: f64, h: f64, jump: f64) -> Vec<f64> {
    let n = theta.len();
    let xi = |i: usize| -xi_max + i as f64 * h;
    let f = |i: usize| xi(i) * theta[i] / (2.0 * a_kappa);
    let fd = differentiate(theta, h);
    let fprime = |i: usize| (theta[i] + xi(i) * fd[i]) / (2.0 * a_kappa);

    // cumulative trapezoid with the Euler-Maclaurin end correction
    let mut integral = vec![0.0; n];
    let mut acc = 0.0;
    for i in 1..n {
        acc += 0.5 * h * (f(i - 1) + f(i));
        integral[i] = acc - h * h / 12.0 * (fprime(i) - fprime(0));
    }
    let centre = integral[n / 2];
    let shape: Vec<f64> = (0..n).map(|i| theta[i] * (-(integral[i] - centre)).exp()).collect();
    // trapezoid is spectrally accurate for the Gaussian-decaying integrand
    let total = h * (shape.iter().sum::<f64>() - 0.5 * (shape[0] + shape[n - 1]));
    let c = jump / total;
    shape.iter().map(|s| c * s).collect()
}

/// Sixth-order central differences inside, lower order near the ends where
/// the profile is flat to round-off.
fn differentiate(f: &[f64], h: f64) -> Vec<f64> {
    let n = f.len();
    (0..n)
        .map(|i| {
            if i >= 3 && i + 3 < n {
                (45.0 * (f[i + 1] - f[i - 1]) - 9.0 * (f[i + 2] - f[i - 2]) + (f[i + 3] - f[i - 3])) / (60.0 * h)
            } else if i >= 1 && i + 1 < n {
                (f[i + 1] - f[i - 1]) / (2.0 * h)
            } else if i == 0 {
                (f[1] - f[0]) / h
            } else {
                (f[n - 1] - f[n - 2]) / h
            }
        })
        .collect()
}

/// `(Θ, Θ', Θ'', Θ''')` at a similarity coordinate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimilarityJet {
    pub theta: f64,
    pub d1: f64,
    pub d2: f64,
    pub d3: f64,
}

impl SelfSimilarProfile {
    pub fn grid(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.theta.len()).map(move |i| -self.xi_max + i as f64 * self.h)
    }

    pub fn delta(&self) -> f64 {
        (self.theta_plus - self.theta_minus).abs()
    }

    pub fn eval(&self, xi: f64) -> SimilarityJet {
        let n = self.theta.len();
        if xi <= -self.xi_max || xi >= self.xi_max || self.delta() == 0.0 {
            let theta = if xi <= -self.xi_max {
                self.theta_minus
            } else if xi >= self.xi_max {
                self.theta_plus
            } else {
                self.theta_minus
            };
            return SimilarityJet {
                theta,
                d1: 0.0,
                d2: 0.0,
                d3: 0.0,
            };
        }
        let s = (xi + self.xi_max) / self.h;
        let i = (s.floor() as usize).min(n - 2);
        let tau = s - i as f64;
        let h = self.h;
        let (f0, f1) = (self.theta[i], self.theta[i + 1]);
        let (d0, d1) = (self.dtheta[i] * h, self.dtheta[i + 1] * h);
        let (s0, s1) = (self.d2theta[i] * h * h, self.d2theta[i + 1] * h * h);

        // quintic Hermite basis on [0, 1]
        let t = tau;
        let t2 = t * t;
        let t3 = t2 * t;
        let t4 = t3 * t;
        let t5 = t4 * t;
        let h00 = 1.0 - 10.0 * t3 + 15.0 * t4 - 6.0 * t5;
        let h01 = 10.0 * t3 - 15.0 * t4 + 6.0 * t5;
        let h10 = t - 6.0 * t3 + 8.0 * t4 - 3.0 * t5;
        let h11 = -4.0 * t3 + 7.0 * t4 - 3.0 * t5;
        let h20 = 0.5 * t2 - 1.5 * t3 + 1.5 * t4 - 0.5 * t5;
        let h21 = 0.5 * t3 - t4 + 0.5 * t5;

        let dh00 = -30.0 * t2 + 60.0 * t3 - 30.0 * t4;
        let dh01 = -dh00;
        let dh10 = 1.0 - 18.0 * t2 + 32.0 * t3 - 15.0 * t4;
        let dh11 = -12.0 * t2 + 28.0 * t3 - 15.0 * t4;
        let dh20 = t - 4.5 * t2 + 6.0 * t3 - 2.5 * t4;
        let dh21 = 1.5 * t2 - 4.0 * t3 + 2.5 * t4;

        let ddh00 = -60.0 * t + 180.0 * t2 - 120.0 * t3;
        let ddh01 = -ddh00;
        let ddh10 = -36.0 * t + 96.0 * t2 - 60.0 * t3;
        let ddh11 = -24.0 * t + 84.0 * t2 - 60.0 * t3;
        let ddh20 = 1.0 - 9.0 * t + 18.0 * t2 - 10.0 * t3;
        let ddh21 = 3.0 * t - 12.0 * t2 + 10.0 * t3;

        let theta = f0 * h00 + f1 * h01 + d0 * h10 + d1 * h11 + s0 * h20 + s1 * h21;
        let d1v = (f0 * dh00 + f1 * dh01 + d0 * dh10 + d1 * dh11 + s0 * dh20 + s1 * dh21) / h;
        let d2v = (f0 * ddh00 + f1 * ddh01 + d0 * ddh10 + d1 * ddh11 + s0 * ddh20 + s1 * ddh21) / (h * h);

        // differentiate the ODE once more
        let ak = self.a_kappa;
        let d3 = 2.0 * d1v * d2v / theta
            - d1v.powi(3) / (theta * theta)
            - (theta * d1v + xi * d1v * d1v + xi * theta * d2v) / (2.0 * ak);

        SimilarityJet {
            theta,
            d1: d1v,
            d2: d2v,
            d3,
        }
    }

    /// Continuous ODE residual `aκ(Θ'/Θ)' + (ξ/2)Θ'` of the interpolant.
    pub fn ode_residual(&self, xi: f64) -> f64 {
        let j = self.eval(xi);
        self.a_kappa * (j.d2 / j.theta - j.d1 * j.d1 / (j.theta * j.theta)) + 0.5 * xi * j.d1
    }

    /// Fitted Gaussian-tail rate: `|Θ(ξ) - θ±| ≈ C e^{-c₀ξ²}` on both tails;
    /// returns the smaller of the two fitted rates, or `None` for a flat
    /// profile.
    pub fn tail_rate(&self) -> Option<f64> {
        let delta = self.delta();
        if delta == 0.0 {
            return None;
        }
        let mut rates = Vec::new();
        for far in [self.theta_minus, self.theta_plus] {
            let right = far == self.theta_plus;
            let pts: Vec<(f64, f64)> = self
                .grid()
                .zip(&self.theta)
                .filter(|(xi, _)| (*xi > 0.0) == right)
                .map(|(xi, th)| (xi * xi, (th - far).abs()))
                .filter(|&(_, d)| d > 1e-9 * delta && d < 1e-2 * delta)
                .map(|(x2, d)| (x2, d.ln()))
                .collect();
            if pts.len() < 4 {
                return None;
            }
            let n = pts.len() as f64;
            let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
            let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
            let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
            let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
            rates.push(-sxy / sxx);
        }
        rates.into_iter().reduce(f64::min)
    }

    pub fn is_monotone(&self) -> bool {
        if self.delta() == 0.0 {
            return true;
        }
        let increasing = self.theta_plus > self.theta_minus;
        self.theta
            .windows(2)
            .all(|w| if increasing { w[1] >= w[0] } else { w[1] <= w[0] })
            && self.dtheta.iter().all(|&d| if increasing { d > 0.0 } else { d < 0.0 })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_profile_for_equal_temperatures() {
        let p = solve_selfsimilar(0.4, 2.0, 2.0, &Default::default()).unwrap();
        assert_eq!(p.residual, 0.0);
        assert!(p.theta.iter().all(|&t| t == 2.0));
        let j = p.eval(0.3);
        assert_eq!((j.theta, j.d1), (2.0, 0.0));
        assert!(p.tail_rate().is_none());
    }

    #[test]
    fn increasing_profile() {
        let p = solve_selfsimilar(0.4, 1.0, 1.1, &Default::default()).unwrap();
        assert!(p.residual <= 1e-10);
        assert!(p.is_monotone());
        let interior = p.dtheta.len() / 2;
        assert!(p.dtheta[interior] > 0.0);
        assert!(p.tail_rate().unwrap() > 0.0);
    }

    #[test]
    fn decreasing_profile() {
        let p = solve_selfsimilar(0.7, 1.3, 1.0, &Default::default()).unwrap();
        assert!(p.is_monotone());
        assert!(p.eval(0.0).d1 < 0.0);
    }

    #[test]
    fn interpolant_solves_ode() {
        let p = solve_selfsimilar(0.4, 1.0, 1.1, &Default::default()).unwrap();
        let worst = (0..997)
            .map(|k| -5.0 + 10.0 * k as f64 / 996.0 + 1e-3)
            .map(|xi| p.ode_residual(xi).abs())
            .fold(0.0, f64::max);
        assert!(worst < 1e-7, "{worst}");
    }

    #[test]
    fn linear_limit_matches_erf() {
        // tiny jumps linearise to the erf profile with diffusivity aκ/θ
        let (ak, t0, d) = (0.5, 1.0, 1e-6);
        let p = solve_selfsimilar(ak, t0, t0 + d, &Default::default()).unwrap();
        for &xi in &[-1.0, 0.0, 0.7, 2.0] {
            let lin = t0 + d * 0.5 * (1.0 + libm::erf(xi / (4.0 * ak / t0).sqrt()));
            assert!((p.eval(xi).theta - lin).abs() < 1e-3 * d);
        }
    }

    #[test]
    fn window_too_small_is_rejected() {
        let opts = SelfSimilarOptions {
            xi_max: Some(0.5),
            ..Default::default()
        };
        assert!(matches!(
            solve_selfsimilar(0.4, 1.0, 1.1, &opts),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn tridiagonal_solver() {
        let sub = [0.0, 1.0, 1.0];
        let diag = [4.0, 4.0, 4.0];
        let sup = [1.0, 1.0, 0.0];
        let mut rhs = [5.0, 6.0, 5.0];
        solve_tridiagonal(&sub, &diag, &sup, &mut rhs).unwrap();
        for r in rhs {
            assert!((r - 1.0).abs() < 1e-14);
        }
    }
}
