use serde::{Deserialize, Serialize};

use super::{Grid, SimState, StateSource};
use crate::error::{Error, Result};
use crate::thermo::GasParams;

/// Face reconstruction used for the p-system flux.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Reconstruction {
    /// Piecewise constant: first order, most dissipative.
    FirstOrder,
    /// Unlimited centred slopes: second order for smooth data.
    #[default]
    Linear,
    /// Monotonized-central limited slopes.
    MonotonizedCentral,
}

/// Deliberate defects for exercising the conservation checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FluxFault {
    #[default]
    None,
    /// The cell on the right of each face sees the Rusanov dissipation with
    /// flipped sign, so adjacent cells no longer share a flux.
    OneSidedDissipation,
}

/// Source terms `(S_v, S_u, S_θ, S_ω)` added to the tendencies.
pub type Forcing<'a> = &'a (dyn Fn(f64, f64) -> [f64; 4] + Sync);

pub struct RhsContext<'a> {
    pub params: GasParams,
    pub grid: Grid,
    pub boundary: &'a dyn StateSource,
    pub reconstruction: Reconstruction,
    pub forcing: Option<Forcing<'a>>,
    pub fault: FluxFault,
}

impl<'a> RhsContext<'a> {
    pub fn new(params: GasParams, grid: Grid, boundary: &'a dyn StateSource) -> Self {
        Self {
            params,
            grid,
            boundary,
            reconstruction: Reconstruction::default(),
            forcing: None,
            fault: FluxFault::None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Tendency {
    pub dv: Vec<f64>,
    pub du: Vec<f64>,
    pub dtheta: Vec<f64>,
    pub domega: Vec<f64>,
}

/// Numerical velocity and pressure on the two boundary faces, plus the
/// integrated forcing. A conservative scheme gives
/// `Σ dv·dx = u_right - u_left + source_v` and
/// `Σ du·dx = -(p_right - p_left) + source_u`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BoundaryFlux {
    pub u_left: f64,
    pub u_right: f64,
    pub p_left: f64,
    pub p_right: f64,
    pub source_v: f64,
    pub source_u: f64,
}

impl BoundaryFlux {
    /// Expected rate of change of `Σ v·dx`.
    pub fn mass_rate(&self) -> f64 {
        self.u_right - self.u_left + self.source_v
    }

    /// Expected rate of change of `Σ u·dx`.
    pub fn momentum_rate(&self) -> f64 {
        -(self.p_right - self.p_left) + self.source_u
    }
}

const GHOSTS: usize = 2;

fn slope(kind: Reconstruction, qm: f64, q0: f64, qp: f64) -> f64 {
    match kind {
        Reconstruction::FirstOrder => 0.0,
        Reconstruction::Linear => 0.5 * (qp - qm),
        Reconstruction::MonotonizedCentral => {
            let (a, b) = (q0 - qm, qp - q0);
            if a * b <= 0.0 {
                0.0
            } else {
                let c = 0.5 * (a + b);
                c.signum() * (2.0 * a.abs()).min(2.0 * b.abs()).min(c.abs())
            }
        }
    }
}

/// Semi-discrete right-hand side:
///
/// ```text
/// v_t = u_x
/// u_t = -p_x
/// R/(γ-1) θ_t = -p u_x + (κθ_x/v)_x + ω_x²/v + vω²
/// ω_t = A[(ω_x/v)_x - vω]
/// ```
///
/// `u_x` and `p_x` come from a conservative Rusanov flux; the diffusion terms
/// are centred with `1/v` averaged arithmetically at faces. Ghost cells take
/// their values from the boundary source at `state.t`.
pub fn spatial_rhs(ctx: &RhsContext<'_>, state: &SimState) -> Result<(Tendency, BoundaryFlux)> {
    let n = ctx.grid.n;
    if state.len() != n {
        return Err(Error::InvalidParams(format!(
            "state has {} cells, grid {}",
            state.len(),
            n
        )));
    }
    let GasParams {
        r,
        gamma,
        kappa,
        a: micro,
        ..
    } = ctx.params;
    let dx = ctx.grid.dx();
    let m = n + 2 * GHOSTS;

    let mut v = vec![0.0; m];
    let mut u = vec![0.0; m];
    let mut th = vec![0.0; m];
    let mut w = vec![0.0; m];
    v[GHOSTS..GHOSTS + n].copy_from_slice(&state.v);
    u[GHOSTS..GHOSTS + n].copy_from_slice(&state.u);
    th[GHOSTS..GHOSTS + n].copy_from_slice(&state.theta);
    w[GHOSTS..GHOSTS + n].copy_from_slice(&state.omega);
    for g in 0..GHOSTS {
        let left = -(g as isize) - 1;
        let right = (n + g) as isize;
        for (cell, e) in [(left, GHOSTS - 1 - g), (right, GHOSTS + n + g)] {
            let s = ctx.boundary.state_at(state.t, ctx.grid.x(cell))?;
            v[e] = s.v;
            u[e] = s.u;
            th[e] = s.theta;
            w[e] = s.omega;
        }
    }

    let speed_of = |e: usize| (gamma * r * th[e] / (v[e] * v[e])).sqrt();

    // faces k = 0..=n; face k sits between extended cells k+1 and k+2
    let mut u_face_l = vec![0.0; n + 1];
    let mut u_face_r = vec![0.0; n + 1];
    let mut p_face_l = vec![0.0; n + 1];
    let mut p_face_r = vec![0.0; n + 1];
    let mut heat = vec![0.0; n + 1];
    let mut spin = vec![0.0; n + 1];
    let rec = ctx.reconstruction;
    for k in 0..=n {
        let (el, er) = (k + 1, k + 2);
        let vl = v[el] + 0.5 * slope(rec, v[el - 1], v[el], v[el + 1]);
        let ul = u[el] + 0.5 * slope(rec, u[el - 1], u[el], u[el + 1]);
        let tl = th[el] + 0.5 * slope(rec, th[el - 1], th[el], th[el + 1]);
        let vr = v[er] - 0.5 * slope(rec, v[er - 1], v[er], v[er + 1]);
        let ur = u[er] - 0.5 * slope(rec, u[er - 1], u[er], u[er + 1]);
        let tr = th[er] - 0.5 * slope(rec, th[er - 1], th[er], th[er + 1]);
        if !(vl > 0.0 && vr > 0.0 && tl > 0.0 && tr > 0.0) {
            return Err(Error::Positivity {
                t: state.t,
                detail: format!("reconstructed face {k}: v = ({vl}, {vr}), theta = ({tl}, {tr})"),
            });
        }
        let (pl, pr) = (r * tl / vl, r * tr / vr);
        let speed = speed_of(el).max(speed_of(er));
        let u_avg = 0.5 * (ul + ur);
        let p_avg = 0.5 * (pl + pr);
        let u_diss = 0.5 * speed * (vr - vl);
        let p_diss = 0.5 * speed * (ur - ul);
        u_face_l[k] = u_avg + u_diss;
        p_face_l[k] = p_avg - p_diss;
        match ctx.fault {
            FluxFault::None => {
                u_face_r[k] = u_face_l[k];
                p_face_r[k] = p_face_l[k];
            }
            FluxFault::OneSidedDissipation => {
                u_face_r[k] = u_avg - u_diss;
                p_face_r[k] = p_avg + p_diss;
            }
        }

        let inv_v = 0.5 * (1.0 / v[el] + 1.0 / v[er]);
        heat[k] = kappa * (th[er] - th[el]) / dx * inv_v;
        spin[k] = (w[er] - w[el]) / dx * inv_v;
    }

    let cv = r / (gamma - 1.0);
    let mut out = Tendency {
        dv: vec![0.0; n],
        du: vec![0.0; n],
        dtheta: vec![0.0; n],
        domega: vec![0.0; n],
    };
    for i in 0..n {
        let e = i + GHOSTS;
        // cell i is bounded by faces i (left) and i+1 (right)
        let u_x = (u_face_l[i + 1] - u_face_r[i]) / dx;
        let p_x = (p_face_l[i + 1] - p_face_r[i]) / dx;
        let p = r * th[e] / v[e];
        let w_x = (w[e + 1] - w[e - 1]) / (2.0 * dx);
        let dissipation = w_x * w_x / v[e] + v[e] * w[e] * w[e];
        out.dv[i] = u_x;
        out.du[i] = -p_x;
        out.dtheta[i] = (-p * u_x + (heat[i + 1] - heat[i]) / dx + dissipation) / cv;
        out.domega[i] = micro * ((spin[i + 1] - spin[i]) / dx - v[e] * w[e]);
    }

    let (mut source_v, mut source_u) = (0.0, 0.0);
    if let Some(f) = ctx.forcing {
        for i in 0..n {
            let s = f(state.t, ctx.grid.x(i as isize));
            source_v += s[0] * dx;
            source_u += s[1] * dx;
            out.dv[i] += s[0];
            out.du[i] += s[1];
            out.dtheta[i] += s[2];
            out.domega[i] += s[3];
        }
    }

    Ok((
        out,
        BoundaryFlux {
            u_left: u_face_r[0],
            u_right: u_face_l[n],
            p_left: p_face_r[0],
            p_right: p_face_l[n],
            source_v,
            source_u,
        },
    ))
}
