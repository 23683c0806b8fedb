use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Least-squares line through `(x, y)` pairs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
}

fn line_fit(x: &[f64], y: &[f64]) -> LineFit {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let syy: f64 = y.iter().map(|b| (b - my) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r2 = if syy == 0.0 {
        1.0
    } else {
        (sxy * sxy / (sxx * syy)).min(1.0)
    };
    LineFit { slope, intercept, r2 }
}

fn check_positive(series: &[(f64, f64)]) -> Result<()> {
    if let Some((t, v)) = series.iter().find(|(_, v)| !(*v > 0.0 && v.is_finite())) {
        return Err(Error::InvalidParams(format!(
            "decay fit needs positive values, got {v} at t = {t}"
        )));
    }
    Ok(())
}

/// Power-law fit `value ≈ C(1+t)^slope` in log-log coordinates.
///
/// Needs at least three samples whose `1+t` spans a decade.
pub fn fit_decay(series: &[(f64, f64)]) -> Result<LineFit> {
    if series.len() < 3 {
        return Err(Error::InvalidParams(format!(
            "decay fit needs >= 3 samples, got {}",
            series.len()
        )));
    }
    check_positive(series)?;
    let (lo, hi) = series
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), (t, _)| {
            (lo.min(1.0 + t), hi.max(1.0 + t))
        });
    if !(lo > 0.0 && hi / lo >= 10.0 * (1.0 - 1e-12)) {
        return Err(Error::InvalidParams(format!(
            "decay fit needs a decade of 1+t, got [{lo}, {hi}]"
        )));
    }
    let x: Vec<f64> = series.iter().map(|(t, _)| (1.0 + t).ln()).collect();
    let y: Vec<f64> = series.iter().map(|(_, v)| v.ln()).collect();
    Ok(line_fit(&x, &y))
}

/// Exponential fit `value ≈ C e^{rate·t}`; `slope` is the rate.
pub fn fit_exponential(series: &[(f64, f64)]) -> Result<LineFit> {
    if series.len() < 3 {
        return Err(Error::InvalidParams(format!(
            "exponential fit needs >= 3 samples, got {}",
            series.len()
        )));
    }
    check_positive(series)?;
    let x: Vec<f64> = series.iter().map(|(t, _)| *t).collect();
    let y: Vec<f64> = series.iter().map(|(_, v)| v.ln()).collect();
    Ok(line_fit(&x, &y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn exact_power_law() {
        let s: Vec<(f64, f64)> = [1.0, 10.0, 100.0]
            .iter()
            .map(|&t| (t, (1.0f64 + t).powf(-1.5)))
            .collect();
        let f = fit_decay(&s).unwrap();
        assert!((f.slope + 1.5).abs() < 1e-12);
        assert!((f.r2 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn constant_series() {
        let s: Vec<(f64, f64)> = [0.0, 3.0, 10.0, 30.0].iter().map(|&t| (t, 2.5)).collect();
        assert_eq!(fit_decay(&s).unwrap().slope, 0.0);
    }

    #[test]
    fn noisy_power_law() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for truth in [-0.5, -1.0, -1.5] {
            let s: Vec<(f64, f64)> = (0..20)
                .map(|k| {
                    let t = 10f64.powf(k as f64 / 19.0 * 2.0);
                    (t, (1.0 + t).powf(truth) * (1.0 + rng.gen_range(-0.05..0.05)))
                })
                .collect();
            assert!((fit_decay(&s).unwrap().slope - truth).abs() < 0.1);
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(fit_decay(&[(1.0, 1.0), (10.0, -1.0), (100.0, 1.0)]).is_err());
        assert!(fit_decay(&[(1.0, 1.0), (2.0, 1.0), (3.0, 1.0), (4.0, 1.0)]).is_err());
        assert!(fit_decay(&[(1.0, 1.0), (100.0, 1.0)]).is_err());
    }

    #[test]
    fn exponential_rate() {
        let s: Vec<(f64, f64)> = (1..=20).map(|t| (t as f64, 3.0 * (-0.7 * t as f64).exp())).collect();
        assert!((fit_exponential(&s).unwrap().slope + 0.7).abs() < 1e-12);
    }
}
