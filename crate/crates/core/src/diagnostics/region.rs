use serde::{Deserialize, Serialize};

use super::norms::trapezoid;
use crate::riemann::{classify_with_speeds, Region};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct RegionNorm {
    pub sup: f64,
    pub l2: f64,
    pub points: usize,
}

/// Norms of a field restricted to `Ω₋`, `Ωc` and `Ω₊`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct RegionNorms {
    pub minus: RegionNorm,
    pub center: RegionNorm,
    pub plus: RegionNorm,
}

impl RegionNorms {
    pub fn get(&self, region: Region) -> &RegionNorm {
        match region {
            Region::OmegaMinus => &self.minus,
            Region::OmegaC => &self.center,
            Region::OmegaPlus => &self.plus,
        }
    }
}

/// Splits equally spaced samples by region at time `t`; `lambda_minus` and
/// `lambda_plus` are the middle-state characteristic speeds. The L² norm
/// integrates the field times the region's indicator.
pub fn region_norms(xs: &[f64], field: &[f64], t: f64, lambda_minus: f64, lambda_plus: f64) -> RegionNorms {
    let dx = if xs.len() > 1 { xs[1] - xs[0] } else { 0.0 };
    let mut out = RegionNorms::default();
    let mut sq = [vec![0.0; xs.len()], vec![0.0; xs.len()], vec![0.0; xs.len()]];
    for (i, (&x, &f)) in xs.iter().zip(field).enumerate() {
        let (k, slot) = match classify_with_speeds(lambda_minus, lambda_plus, t, x) {
            Region::OmegaMinus => (0, &mut out.minus),
            Region::OmegaC => (1, &mut out.center),
            Region::OmegaPlus => (2, &mut out.plus),
        };
        slot.sup = slot.sup.max(f.abs());
        slot.points += 1;
        sq[k][i] = f * f;
    }
    out.minus.l2 = trapezoid(&sq[0], dx).sqrt();
    out.center.l2 = trapezoid(&sq[1], dx).sqrt();
    out.plus.l2 = trapezoid(&sq[2], dx).sqrt();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_in_plus_region_only() {
        let (lm, lp, t) = (-1.2, 1.3, 4.0);
        let xs: Vec<f64> = (0..801).map(|i| -20.0 + 0.05 * i as f64).collect();
        let f: Vec<f64> = xs
            .iter()
            .map(|&x| {
                if 2.0 * x > lp * t + 0.5 {
                    (x - 10.0).cos() + 2.0
                } else {
                    0.0
                }
            })
            .collect();
        let r = region_norms(&xs, &f, t, lm, lp);
        assert_eq!(r.minus.sup, 0.0);
        assert_eq!(r.center.sup, 0.0);
        assert_eq!(r.minus.l2, 0.0);
        assert_eq!(r.center.l2, 0.0);
        assert!(r.plus.sup > 1.0 && r.plus.l2 > 1.0);
        assert_eq!(r.minus.points + r.center.points + r.plus.points, xs.len());
    }
}
