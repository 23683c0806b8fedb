use super::rhs::{spatial_rhs, BoundaryFlux, RhsContext, Tendency};
use super::{Grid, SimState};
use crate::error::Result;
use crate::thermo::GasParams;

/// Bookkeeping for one accepted step.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct StepReport {
    pub t_start: f64,
    pub dt: f64,
    /// `Σ Δv·dx` minus the time-integrated boundary fluxes and sources.
    pub mass_defect: f64,
    /// Same for `Σ Δu·dx`.
    pub momentum_defect: f64,
    pub omega_energy_before: f64,
    pub omega_energy_after: f64,
    pub omega_dissipation_before: f64,
    pub omega_dissipation_after: f64,
}

impl StepReport {
    /// `ΔE_ω/dt + ½(D₀ + D₁)`; `O(dt²)` when the boundary microrotation is 0.
    pub fn omega_identity_defect(&self) -> f64 {
        (self.omega_energy_after - self.omega_energy_before) / self.dt
            + 0.5 * (self.omega_dissipation_before + self.omega_dissipation_after)
    }
}

/// Raw hyperbolic and parabolic step limits, before the safety factor:
/// `dx / max(|u| + √(γp/v))` and `dx²·min v / (2 max(κ(γ-1)/R, A))`.
/// A vanishing diffusion coefficient gives an infinite parabolic limit.
pub fn time_step_limits(params: &GasParams, grid: &Grid, state: &SimState) -> (f64, f64) {
    let dx = grid.dx();
    let mut speed: f64 = 0.0;
    let mut v_min = f64::INFINITY;
    for i in 0..state.len() {
        let (v, th) = (state.v[i], state.theta[i]);
        speed = speed.max(state.u[i].abs() + (params.gamma * params.r * th).sqrt() / v);
        v_min = v_min.min(v);
    }
    let hyperbolic = if speed > 0.0 { dx / speed } else { f64::INFINITY };
    let diffusion = params.thermal_diffusivity().max(params.a);
    let parabolic = if diffusion > 0.0 {
        dx * dx * v_min / (2.0 * diffusion)
    } else {
        f64::INFINITY
    };
    (hyperbolic, parabolic)
}

pub fn stable_dt(params: &GasParams, grid: &Grid, state: &SimState, safety: f64) -> f64 {
    let (h, p) = time_step_limits(params, grid, state);
    safety * h.min(p)
}

/// Compensated sum; keeps conservation defects at round-off level on large grids.
fn neumaier(values: impl Iterator<Item = f64>) -> f64 {
    let (mut sum, mut c) = (0.0f64, 0.0f64);
    for x in values {
        let t = sum + x;
        c += if sum.abs() >= x.abs() {
            (sum - t) + x
        } else {
            (x - t) + sum
        };
        sum = t;
    }
    sum + c
}

/// `Σ ω²/2·dx`.
pub fn omega_energy(state: &SimState, dx: f64) -> f64 {
    0.5 * dx * neumaier(state.omega.iter().map(|w| w * w))
}

/// Discrete dissipation `A[Σ_faces (Δω/dx)²⟨1/v⟩ dx + Σ vω² dx]`, the exact
/// summation-by-parts counterpart of the microrotation operator when the
/// ghost microrotation vanishes.
pub fn omega_dissipation(ctx: &RhsContext<'_>, state: &SimState) -> Result<f64> {
    let n = state.len();
    let dx = ctx.grid.dx();
    let left = ctx.boundary.state_at(state.t, ctx.grid.x(-1))?;
    let right = ctx.boundary.state_at(state.t, ctx.grid.x(n as isize))?;
    let cell = |k: isize| -> (f64, f64) {
        if k < 0 {
            (left.v, left.omega)
        } else if k as usize >= n {
            (right.v, right.omega)
        } else {
            (state.v[k as usize], state.omega[k as usize])
        }
    };
    let faces = neumaier((0..=n as isize).map(|k| {
        let (vl, wl) = cell(k - 1);
        let (vr, wr) = cell(k);
        let g = (wr - wl) / dx;
        g * g * 0.5 * (1.0 / vl + 1.0 / vr) * dx
    }));
    let bulk = neumaier((0..n).map(|i| state.v[i] * state.omega[i] * state.omega[i] * dx));
    Ok(ctx.params.a * (faces + bulk))
}

fn combine(base: &SimState, a: f64, other: &SimState, b: f64, tend: &Tendency, dt: f64, t: f64) -> SimState {
    let mix = |x: &[f64], y: &[f64], d: &[f64]| -> Vec<f64> {
        x.iter()
            .zip(y)
            .zip(d)
            .map(|((x, y), d)| a * x + b * (y + dt * d))
            .collect()
    };
    SimState {
        t,
        v: mix(&base.v, &other.v, &tend.dv),
        u: mix(&base.u, &other.u, &tend.du),
        theta: mix(&base.theta, &other.theta, &tend.dtheta),
        omega: mix(&base.omega, &other.omega, &tend.domega),
    }
}

/// One step of the three-stage strong-stability-preserving Runge–Kutta
/// scheme (Shu–Osher form). Positivity is checked after every stage.
pub fn step(ctx: &RhsContext<'_>, state: &SimState, dt: f64) -> Result<(SimState, StepReport)> {
    let t = state.t;
    let dx = ctx.grid.dx();

    let (l0, b0) = spatial_rhs(ctx, state)?;
    let s1 = combine(state, 0.0, state, 1.0, &l0, dt, t + dt);
    s1.check_positive()?;

    let (l1, b1) = spatial_rhs(ctx, &s1)?;
    let s2 = combine(state, 0.75, &s1, 0.25, &l1, dt, t + 0.5 * dt);
    s2.check_positive()?;

    let (l2, b2) = spatial_rhs(ctx, &s2)?;
    let s3 = combine(state, 1.0 / 3.0, &s2, 2.0 / 3.0, &l2, dt, t + dt);
    s3.check_positive()?;

    // effective stage weights of the scheme are (1/6, 1/6, 2/3)
    let weighted = |f: fn(&BoundaryFlux) -> f64| dt * (f(&b0) / 6.0 + f(&b1) / 6.0 + 2.0 * f(&b2) / 3.0);
    let mass_change = dx * neumaier(s3.v.iter().zip(&state.v).map(|(a, b)| a - b));
    let momentum_change = dx * neumaier(s3.u.iter().zip(&state.u).map(|(a, b)| a - b));

    let report = StepReport {
        t_start: t,
        dt,
        mass_defect: mass_change - weighted(BoundaryFlux::mass_rate),
        momentum_defect: momentum_change - weighted(BoundaryFlux::momentum_rate),
        omega_energy_before: omega_energy(state, dx),
        omega_energy_after: omega_energy(&s3, dx),
        omega_dissipation_before: omega_dissipation(ctx, state)?,
        omega_dissipation_after: omega_dissipation(ctx, &s3)?,
    };
    Ok((s3, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::FluxFault;
    use crate::thermo::ThermoState;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn wavy(grid: &Grid) -> SimState {
        let xs = grid.nodes();
        SimState {
            t: 0.0,
            v: xs.iter().map(|x| 1.0 + 0.1 * (-x * x).exp()).collect(),
            u: xs.iter().map(|x| 0.1 * x * (-x * x).exp()).collect(),
            theta: xs.iter().map(|x| 1.0 + 0.05 * (-(x - 1.0) * (x - 1.0)).exp()).collect(),
            omega: xs.iter().map(|x| 0.1 * (-x * x).exp()).collect(),
        }
    }

    #[test]
    fn constant_state_unchanged() {
        let s0 = ThermoState::euler(0.9, 0.2, 1.4);
        let grid = Grid::new(10.0, 128).unwrap();
        let ctx = RhsContext::new(GasParams::default(), grid, &s0);
        let mut s = SimState::constant(128, &s0, 0.0);
        let dt = stable_dt(&ctx.params, &grid, &s, 0.4);
        for _ in 0..50 {
            s = step(&ctx, &s, dt).unwrap().0;
        }
        assert!(s.v.iter().all(|v| (v - 0.9).abs() < 1e-14));
        assert!(s.theta.iter().all(|th| (th - 1.4).abs() < 1e-14));
    }

    #[test]
    fn conservation_defect_round_off() {
        let grid = Grid::new(8.0, 256).unwrap();
        let far = ThermoState::euler(1.0, 0.0, 1.0);
        let ctx = RhsContext::new(GasParams::default(), grid, &far);
        let mut s = wavy(&grid);
        for _ in 0..20 {
            let dt = stable_dt(&ctx.params, &grid, &s, 0.4);
            let (next, rep) = step(&ctx, &s, dt).unwrap();
            assert!(rep.mass_defect.abs() < 1e-13, "{rep:?}");
            assert!(rep.momentum_defect.abs() < 1e-13, "{rep:?}");
            s = next;
        }
    }

    #[test]
    fn fault_shows_in_defect() {
        let grid = Grid::new(8.0, 256).unwrap();
        let far = ThermoState::euler(1.0, 0.0, 1.0);
        let mut ctx = RhsContext::new(GasParams::default(), grid, &far);
        ctx.fault = FluxFault::OneSidedDissipation;
        // the flipped dissipation leaks Σ a·Δv, visible once v differs across the domain
        let mut s = wavy(&grid);
        for (v, x) in s.v.iter_mut().zip(grid.nodes()) {
            *v += 0.1 * (x.tanh() + 1.0);
        }
        let dt = stable_dt(&ctx.params, &grid, &s, 0.4);
        let (_, rep) = step(&ctx, &s, dt).unwrap();
        assert!(rep.mass_defect.abs() > 1e-6, "{rep:?}");
    }

    #[test]
    fn omega_identity_second_order_in_dt() {
        let grid = Grid::new(8.0, 200).unwrap();
        let far = ThermoState::euler(1.0, 0.0, 1.0);
        let ctx = RhsContext::new(GasParams::default(), grid, &far);
        let mut s = SimState::constant(200, &far, 0.0);
        s.omega = grid.nodes().iter().map(|x| 0.5 * (-x * x).exp()).collect();
        let base = stable_dt(&ctx.params, &grid, &s, 0.4);
        let defects: Vec<f64> = [base, base / 2.0]
            .iter()
            .map(|&dt| step(&ctx, &s, dt).unwrap().1.omega_identity_defect().abs())
            .collect();
        let order = (defects[0] / defects[1]).log2();
        assert!(order > 1.8, "defects {defects:?}");
    }

    #[test]
    fn parabolic_limit_scales_with_dx_squared() {
        let params = GasParams::default();
        let s0 = ThermoState::euler(1.0, 0.0, 1.0);
        let fine = Grid::new(1.0, 1024).unwrap();
        let coarse = Grid::new(1.0, 512).unwrap();
        let (hf, pf) = time_step_limits(&params, &fine, &SimState::constant(1024, &s0, 0.0));
        let (_, pc) = time_step_limits(&params, &coarse, &SimState::constant(512, &s0, 0.0));
        assert!(pf < hf);
        assert!((pc / pf - 4.0).abs() < 1e-12);
    }

    #[test]
    fn inviscid_limit_is_hyperbolic() {
        let params = GasParams {
            kappa: 0.0,
            a: 0.0,
            ..GasParams::default()
        };
        let s0 = ThermoState::euler(1.0, 0.5, 1.0);
        let grid = Grid::new(1.0, 64).unwrap();
        let state = SimState::constant(64, &s0, 0.0);
        let (h, p) = time_step_limits(&params, &grid, &state);
        assert!(p.is_infinite());
        let expect = grid.dx() / (0.5 + (5.0f64 / 3.0).sqrt());
        assert!((stable_dt(&params, &grid, &state, 0.4) - 0.4 * expect).abs() < 1e-15);
        assert!((h - expect).abs() < 1e-15);
    }

    #[test]
    fn dt_respects_both_limits() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let params = GasParams::default();
        for _ in 0..100 {
            let n = 16 + rng.gen_range(0..64);
            let grid = Grid::new(rng.gen_range(0.5..50.0), n).unwrap();
            let state = SimState {
                t: 0.0,
                v: (0..n).map(|_| rng.gen_range(0.2..5.0)).collect(),
                u: (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect(),
                theta: (0..n).map(|_| rng.gen_range(0.2..5.0)).collect(),
                omega: vec![0.0; n],
            };
            let dt = stable_dt(&params, &grid, &state, 0.4);
            let dx = grid.dx();
            let speed = (0..n)
                .map(|i| {
                    state.u[i].abs()
                        + (params.gamma * params.r * state.theta[i] / state.v[i]).sqrt() / state.v[i].sqrt()
                })
                .fold(0.0, f64::max);
            let v_min = state.v.iter().cloned().fold(f64::INFINITY, f64::min);
            assert!(dt <= dx / speed * (1.0 + 1e-12));
            assert!(dt <= dx * dx * v_min / 2.0 * (1.0 + 1e-12));
        }
    }
}
