use serde::{Deserialize, Serialize};

use super::rhs::RhsContext;
use super::step::{omega_dissipation, stable_dt, step};
use super::{Grid, SimState, StateSource};
use crate::config::RunConfig;
use crate::diagnostics::{norm_report, KernelWeight, NormReport, ProfileSamples, StepLedger};
use crate::error::{Error, Result};
use crate::profiles::CompositeWave;
use crate::riemann::{solve_pattern, WavePattern};

/// Gaussian bump `ε·exp(-((x - c)/w)²)` added to the selected fields.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct InitialPerturbation {
    pub amplitude: f64,
    pub width: f64,
    pub center: f64,
    pub v: bool,
    pub u: bool,
    pub theta: bool,
    pub omega: bool,
}

impl Default for InitialPerturbation {
    fn default() -> Self {
        Self {
            amplitude: 1e-2,
            width: 1.0,
            center: 0.0,
            v: true,
            u: true,
            theta: true,
            omega: true,
        }
    }
}

impl InitialPerturbation {
    pub fn none() -> Self {
        Self {
            amplitude: 0.0,
            ..Self::default()
        }
    }

    pub fn bump(&self, x: f64) -> f64 {
        let z = (x - self.center) / self.width;
        self.amplitude * (-z * z).exp()
    }
}

/// Profile at `t = 0` on the grid plus the configured bump.
pub fn initial_state(grid: &Grid, profile: &dyn StateSource, pert: &InitialPerturbation) -> Result<SimState> {
    let n = grid.n;
    let mut s = SimState {
        t: 0.0,
        v: Vec::with_capacity(n),
        u: Vec::with_capacity(n),
        theta: Vec::with_capacity(n),
        omega: Vec::with_capacity(n),
    };
    let on = |flag: bool, b: f64| if flag { b } else { 0.0 };
    for x in grid.nodes() {
        let p = profile.state_at(0.0, x)?;
        let b = pert.bump(x);
        s.v.push(p.v + on(pert.v, b));
        s.u.push(p.u + on(pert.u, b));
        s.theta.push(p.theta + on(pert.theta, b));
        s.omega.push(p.omega + on(pert.omega, b));
    }
    s.check_positive()?;
    Ok(s)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum RunStatus {
    Completed,
    Aborted { reason: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    #[serde(flatten)]
    pub status: RunStatus,
    pub t_reached: f64,
    pub steps: usize,
    pub min_v: f64,
    pub max_v: f64,
    pub min_theta: f64,
    pub max_theta: f64,
    pub initial_sup: f64,
    pub final_sup: f64,
    pub max_mass_defect: f64,
    pub max_momentum_defect: f64,
    pub max_omega_identity_defect: f64,
    /// Largest distance between the profile at `±L` and the far field.
    pub boundary_deviation: f64,
    /// `‖ω‖_L²` never increased between reports after the configured time.
    pub omega_l2_monotone: bool,
    pub sobolev_ok: bool,
    pub alpha: Option<f64>,
    pub pattern: WavePattern,
    pub final_report: Option<NormReport>,
    pub warnings: Vec<String>,
}

impl RunSummary {
    pub fn completed(&self) -> bool {
        self.status == RunStatus::Completed
    }
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub config: RunConfig,
    pub grid: Grid,
    pub composite: CompositeWave,
    /// Stored snapshots; after an abort the last entry is the last good state.
    pub snapshots: Vec<SimState>,
    pub reports: Vec<NormReport>,
    pub summary: RunSummary,
}

/// Optional callbacks into a running simulation.
#[derive(Default)]
pub struct RunHooks<'a> {
    pub on_report: Option<&'a mut dyn FnMut(&NormReport)>,
}

pub fn run(config: &RunConfig) -> Result<RunOutput> {
    run_with(config, RunHooks::default())
}

/// Relative slack when comparing successive `‖ω‖` values.
const MONOTONE_SLACK: f64 = 1e-12;

struct Clock {
    every: f64,
    next: f64,
}

impl Clock {
    fn new(every: f64) -> Self {
        Self {
            every,
            next: if every > 0.0 { every } else { f64::INFINITY },
        }
    }

    fn due(&self, t: f64) -> bool {
        t >= self.next - 1e-12 * self.next.abs().max(1.0)
    }

    fn advance(&mut self) {
        self.next += self.every;
    }
}

/// Builds the composite wave, perturbs it and integrates to `t_final`.
/// Setup failures are errors; failures during time stepping end the run
/// with an aborted status and keep the last good state.
pub fn run_with(config: &RunConfig, mut hooks: RunHooks<'_>) -> Result<RunOutput> {
    let warnings = config.validate()?;
    let params = config.gas;
    let end = config.end_states()?;
    let pattern = solve_pattern(&params, &end, &config.profiles.pattern())?;
    let composite = CompositeWave::build(&params, &pattern, &config.profiles.selfsimilar())?;
    let grid = config.grid()?;
    let xs = grid.nodes();
    let dx = grid.dx();

    let alpha = config
        .diagnostics
        .alpha
        .or_else(|| composite.contact().profile().tail_rate());
    let kernel = alpha.map(KernelWeight::new).transpose()?;

    let mut ctx = RhsContext::new(params, grid, &composite);
    ctx.reconstruction = config.scheme.reconstruction;
    ctx.fault = config.scheme.fault;

    let t_final = config.time.t_final;
    let mut state = initial_state(&grid, &composite, &config.perturbation)?;
    let mut snapshots = vec![state.clone()];
    let mut reports = Vec::new();

    let mut ledger = StepLedger {
        omega_dissipation: omega_dissipation(&ctx, &state)?,
        ..Default::default()
    };
    let first = report(&state, &composite, &xs, dx, kernel.as_ref(), ledger)?;
    let initial_sup = first.sup;
    if let Some(f) = hooks.on_report.as_mut() {
        f(&first);
    }
    reports.push(first);

    let (mut min_v, mut max_v) = SimState::min_max(&state.v);
    let (mut min_theta, mut max_theta) = SimState::min_max(&state.theta);
    let mut max_mass: f64 = 0.0;
    let mut max_momentum: f64 = 0.0;
    let mut max_identity: f64 = 0.0;
    let mut boundary_deviation = boundary_drift(&composite, &grid, 0.0)?;
    let mut steps = 0usize;
    let mut status = RunStatus::Completed;

    let mut diag = Clock::new(config.time.diagnostic_every);
    let mut snap = Clock::new(config.time.snapshot_every);

    while state.t < t_final * (1.0 - 1e-14) {
        let target = t_final.min(diag.next).min(snap.next);
        let mut dt = stable_dt(&params, &grid, &state, config.time.safety);
        let landing = state.t + dt >= target - 1e-12 * target.max(1.0);
        if landing {
            dt = target - state.t;
        }
        let (mut next, rep) = match step(&ctx, &state, dt) {
            Ok(r) => r,
            Err(e) => {
                status = RunStatus::Aborted { reason: e.to_string() };
                break;
            }
        };
        if landing {
            next.t = target;
        }
        steps += 1;
        state = next;

        let (lo, hi) = SimState::min_max(&state.v);
        min_v = min_v.min(lo);
        max_v = max_v.max(hi);
        let (lo, hi) = SimState::min_max(&state.theta);
        min_theta = min_theta.min(lo);
        max_theta = max_theta.max(hi);
        ledger.mass_defect = ledger.mass_defect.max(rep.mass_defect.abs());
        ledger.momentum_defect = ledger.momentum_defect.max(rep.momentum_defect.abs());
        ledger.omega_dissipation = rep.omega_dissipation_after;
        max_mass = max_mass.max(rep.mass_defect.abs());
        max_momentum = max_momentum.max(rep.momentum_defect.abs());
        max_identity = max_identity.max(rep.omega_identity_defect().abs());

        let final_step = state.t >= t_final * (1.0 - 1e-14);
        if diag.due(state.t) || final_step {
            if diag.due(state.t) {
                diag.advance();
            }
            let r = report(&state, &composite, &xs, dx, kernel.as_ref(), ledger)?;
            if let Some(f) = hooks.on_report.as_mut() {
                f(&r);
            }
            reports.push(r);
            ledger.mass_defect = 0.0;
            ledger.momentum_defect = 0.0;

            let drift = boundary_drift(&composite, &grid, state.t)?;
            boundary_deviation = boundary_deviation.max(drift);
            if let Some(tol) = config.diagnostics.boundary_tol {
                if drift > tol {
                    let e = Error::Boundary(format!(
                        "profile at the domain ends is {drift:e} from the far field at t = {}",
                        state.t
                    ));
                    status = RunStatus::Aborted { reason: e.to_string() };
                    break;
                }
            }
        }
        if snap.due(state.t) && !final_step {
            snap.advance();
            snapshots.push(state.clone());
        }
    }
    if snapshots.last().map(|s| s.t) != Some(state.t) {
        snapshots.push(state.clone());
    }

    let after = config.diagnostics.omega_monotone_after;
    let omega_l2_monotone = reports
        .iter()
        .filter(|r| r.t >= after)
        .collect::<Vec<_>>()
        .windows(2)
        .all(|w| w[1].omega.l2 <= w[0].omega.l2 * (1.0 + MONOTONE_SLACK));
    let final_report = reports.last().cloned();
    let summary = RunSummary {
        status,
        t_reached: state.t,
        steps,
        min_v,
        max_v,
        min_theta,
        max_theta,
        initial_sup,
        final_sup: final_report.as_ref().map_or(f64::NAN, |r| r.sup),
        max_mass_defect: max_mass,
        max_momentum_defect: max_momentum,
        max_omega_identity_defect: max_identity,
        boundary_deviation,
        omega_l2_monotone,
        sobolev_ok: reports.iter().all(|r| r.sobolev_ok),
        alpha,
        pattern,
        final_report,
        warnings,
    };
    Ok(RunOutput {
        config: config.clone(),
        grid,
        composite,
        snapshots,
        reports,
        summary,
    })
}

fn report(
    state: &SimState,
    composite: &CompositeWave,
    xs: &[f64],
    dx: f64,
    kernel: Option<&KernelWeight>,
    ledger: StepLedger,
) -> Result<NormReport> {
    let samples = ProfileSamples::sample(composite, state.t, xs)?;
    norm_report(state, &samples, xs, dx, kernel, ledger)
}

fn boundary_drift(composite: &CompositeWave, grid: &Grid, t: f64) -> Result<f64> {
    let end = composite.pattern().end;
    let mut drift: f64 = 0.0;
    for (x, far) in [(-grid.half_width, end.left), (grid.half_width, end.right)] {
        let s = composite.state_at(t, x)?;
        drift = drift
            .max((s.v - far.v).abs())
            .max((s.u - far.u).abs())
            .max((s.theta - far.theta).abs());
    }
    Ok(drift)
}
