//! Measurements on discrete solutions and profiles: perturbation norms,
//! composite-wave residuals, heat-kernel weights, the relative-entropy
//! energy, region splits and decay fits.

mod energy;
mod fit;
mod kernel;
mod norms;
mod region;
mod residual;

pub use energy::{entropy_energy, phi};
pub use fit::{fit_decay, fit_exponential, LineFit};
pub use kernel::{kernel_check, KernelReport, KernelWeight};
pub use norms::{
    derivative, field_norms, l2_squared_midpoint, l2_squared_trapezoid, perturbation, second_derivative, sobolev_holds,
    trapezoid, FieldNorms, PerturbationFields, ProfileSamples,
};
pub use region::{region_norms, RegionNorm, RegionNorms};
pub use residual::{residual_fields, ResidualFields, ResidualNorms};

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::solver::SimState;

/// Relative slack for the discrete Sobolev inequality.
pub const SOBOLEV_SLACK: f64 = 1e-2;

/// Diagnostics of one snapshot against the reference profile.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormReport {
    pub t: f64,
    pub phi: FieldNorms,
    pub psi: FieldNorms,
    pub zeta: FieldNorms,
    pub omega: FieldNorms,
    /// Max of the four sup norms.
    pub sup: f64,
    /// `∫(φ² + ψ² + ζ²)h² dx`, when a kernel weight is configured.
    pub weighted: Option<f64>,
    pub entropy_energy: f64,
    pub omega_dissipation: f64,
    /// Largest per-step conservation defects since the previous report.
    pub mass_defect: f64,
    pub momentum_defect: f64,
    pub sobolev_ok: bool,
}

impl NormReport {
    pub const CSV_HEADER: &'static str = "t,phi_linf,phi_l2,phi_h1,phi_h2,psi_linf,psi_l2,psi_h1,psi_h2,\
zeta_linf,zeta_l2,zeta_h1,zeta_h2,omega_linf,omega_l2,omega_h1,omega_h2,sup,weighted,entropy_energy,\
omega_dissipation,mass_defect,momentum_defect,sobolev_ok";

    pub fn csv_row(&self) -> String {
        // Debug formatting is shortest round-trip and switches to exponents
        let mut cols = vec![format!("{:?}", self.t)];
        for f in [&self.phi, &self.psi, &self.zeta, &self.omega] {
            cols.extend([f.linf, f.l2, f.h1, f.h2].iter().map(|x| format!("{x:?}")));
        }
        cols.push(format!("{:?}", self.sup));
        cols.push(self.weighted.map(|w| format!("{w:?}")).unwrap_or_default());
        for x in [
            self.entropy_energy,
            self.omega_dissipation,
            self.mass_defect,
            self.momentum_defect,
        ] {
            cols.push(format!("{x:?}"));
        }
        cols.push(self.sobolev_ok.to_string());
        cols.join(",")
    }
}

/// Extra inputs that come from the time stepper rather than the snapshot.
#[derive(Debug, Clone, Copy, Default)]
pub struct StepLedger {
    pub omega_dissipation: f64,
    pub mass_defect: f64,
    pub momentum_defect: f64,
}

pub fn norm_report(
    state: &SimState,
    profile: &ProfileSamples,
    xs: &[f64],
    dx: f64,
    kernel: Option<&KernelWeight>,
    ledger: StepLedger,
) -> Result<NormReport> {
    let p = perturbation(state, profile)?;
    let norms = p.fields().map(|f| field_norms(f, dx));
    let weighted = kernel.map(|k| {
        let sq: Vec<f64> = (0..xs.len())
            .map(|i| (p.phi[i] * p.phi[i] + p.psi[i] * p.psi[i] + p.zeta[i] * p.zeta[i]).sqrt())
            .collect();
        k.weighted_integral(state.t, xs, &sq)
    });
    Ok(NormReport {
        t: state.t,
        phi: norms[0],
        psi: norms[1],
        zeta: norms[2],
        omega: norms[3],
        sup: norms.iter().fold(0.0, |m, n| m.max(n.linf)),
        weighted,
        entropy_energy: entropy_energy(state, profile, dx)?,
        omega_dissipation: ledger.omega_dissipation,
        mass_defect: ledger.mass_defect,
        momentum_defect: ledger.momentum_defect,
        sobolev_ok: p.fields().iter().all(|f| sobolev_holds(f, dx, SOBOLEV_SLACK)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::Grid;
    use crate::thermo::ThermoState;

    #[test]
    fn report_ordering_and_csv() {
        let grid = Grid::new(8.0, 256).unwrap();
        let xs = grid.nodes();
        let s0 = ThermoState::euler(1.0, 0.0, 1.0);
        let samples = ProfileSamples::sample(&s0, 0.0, &xs).unwrap();
        let mut s = SimState::constant(256, &s0, 0.0);
        for (i, &x) in xs.iter().enumerate() {
            s.theta[i] += 1e-2 * (-x * x).exp();
        }
        let k = KernelWeight::new(1.0).unwrap();
        let r = norm_report(&s, &samples, &xs, grid.dx(), Some(&k), StepLedger::default()).unwrap();
        assert!(r.zeta.h2 >= r.zeta.h1 && r.zeta.h1 >= r.zeta.l2);
        assert!((r.sup - 1e-2).abs() < 1e-4);
        assert!(r.sobolev_ok);
        assert!(r.weighted.unwrap() > 0.0);
        let cols = r.csv_row().split(',').count();
        assert_eq!(cols, NormReport::CSV_HEADER.split(',').count());
    }
}
