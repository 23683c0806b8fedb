//! Run configuration, stored as TOML.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::profiles::SelfSimilarOptions;
use crate::riemann::{construct_end_states, EndStates, PatternSolverOptions};
use crate::solver::{FluxFault, Grid, InitialPerturbation, Reconstruction};
use crate::thermo::{GasParams, ThermoState};

/// Far-field data, either explicit or generated from a strength `δ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PatternConfig {
    /// Target `|θ₊ - θ₋|` when `right` is absent.
    pub delta: f64,
    pub left: ThermoState,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub right: Option<ThermoState>,
}

impl Default for PatternConfig {
    fn default() -> Self {
        Self {
            delta: 0.1,
            left: ThermoState::euler(1.0, 0.0, 1.0),
            right: None,
        }
    }
}

/// End states of a rarefaction / contact / rarefaction pattern with
/// `θ₊ - θ₋ = δ`. Both rarefactions expand the volume by the factor
/// `1 + δ/5`, so the whole pattern collapses to `left` as `δ → 0`.
pub fn desk_end_states(params: &GasParams, left: &ThermoState, delta: f64) -> Result<EndStates> {
    if !(delta >= 0.0 && delta.is_finite()) {
        return Err(Error::Config(format!("delta must be >= 0, got {delta}")));
    }
    let ratio = 1.0 + 0.2 * delta;
    let theta_right = left.theta + delta;
    let theta_mid_right = theta_right * ratio.powf(1.0 - params.gamma);
    let v_mid_left = left.v * ratio;
    let p_mid = params.r * left.theta * ratio.powf(1.0 - params.gamma) / v_mid_left;
    let v_right = params.r * theta_mid_right / p_mid / ratio;
    let (end, _, _) = construct_end_states(params, left, v_mid_left, theta_mid_right, v_right)?;
    Ok(end)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub half_width: f64,
    pub n: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            half_width: 150.0,
            n: 4096,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchemeConfig {
    #[serde(default)]
    pub reconstruction: Reconstruction,
    /// Test hook; anything but `none` breaks conservation on purpose.
    #[serde(default)]
    pub fault: FluxFault,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeConfig {
    pub t_final: f64,
    /// Spacing of stored snapshots; 0 keeps only the initial and final states.
    pub snapshot_every: f64,
    /// Spacing of norm reports.
    pub diagnostic_every: f64,
    pub safety: f64,
}

impl Default for TimeConfig {
    fn default() -> Self {
        Self {
            t_final: 200.0,
            snapshot_every: 50.0,
            diagnostic_every: 1.0,
            safety: 0.4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub xi_max: Option<f64>,
    pub bvp_n: usize,
    pub bvp_tol: f64,
    pub bvp_max_iter: usize,
    pub pattern_tol: f64,
    pub pattern_max_iter: usize,
}

impl Default for ProfileConfig {
    fn default() -> Self {
        let ss = SelfSimilarOptions::default();
        let pat = PatternSolverOptions::default();
        Self {
            xi_max: ss.xi_max,
            bvp_n: ss.n,
            bvp_tol: ss.tol,
            bvp_max_iter: ss.max_iter,
            pattern_tol: pat.tol,
            pattern_max_iter: pat.max_iter,
        }
    }
}

impl ProfileConfig {
    pub fn selfsimilar(&self) -> SelfSimilarOptions {
        SelfSimilarOptions {
            xi_max: self.xi_max,
            n: self.bvp_n,
            tol: self.bvp_tol,
            max_iter: self.bvp_max_iter,
        }
    }

    pub fn pattern(&self) -> PatternSolverOptions {
        PatternSolverOptions {
            tol: self.pattern_tol,
            max_iter: self.pattern_max_iter,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagnosticsConfig {
    /// Kernel weight parameter; `None` uses the fitted tail rate of the
    /// contact profile.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    /// Window of the residual decay fits.
    pub fit_t_min: f64,
    pub fit_t_max: f64,
    /// Largest wave strength the pattern check accepts.
    pub delta_cap: f64,
    /// Monotonicity of `‖ω‖` is checked from this time on.
    pub omega_monotone_after: f64,
    /// Abort when the profile at `±L` drifts from the far field by more than
    /// this. Unset means report only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boundary_tol: Option<f64>,
}

impl Default for DiagnosticsConfig {
    fn default() -> Self {
        Self {
            alpha: None,
            fit_t_min: 1.0,
            fit_t_max: 100.0,
            delta_cap: 0.2,
            omega_monotone_after: 1.0,
            boundary_tol: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    /// Output directory; falls back to the CLI flag or environment.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub directory: Option<String>,
    pub snapshots: bool,
    pub norms: bool,
    pub summary: bool,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            directory: None,
            snapshots: true,
            norms: true,
            summary: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub gas: GasParams,
    #[serde(default)]
    pub pattern: PatternConfig,
    #[serde(default)]
    pub perturbation: InitialPerturbation,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default)]
    pub scheme: SchemeConfig,
    #[serde(default)]
    pub time: TimeConfig,
    #[serde(default)]
    pub profiles: ProfileConfig,
    #[serde(default)]
    pub diagnostics: DiagnosticsConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string_pretty(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    /// Applies `section.key=value` overrides. Values are parsed as TOML
    /// literals, falling back to a plain string.
    pub fn with_overrides<S: AsRef<str>>(&self, overrides: &[S]) -> Result<Self> {
        let mut tree = toml::Value::try_from(self).map_err(|e| Error::Config(e.to_string()))?;
        for item in overrides {
            let item = item.as_ref();
            let (key, raw) = item
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("override must be KEY=VALUE, got `{item}`")))?;
            let value = parse_literal(raw.trim());
            set_path(&mut tree, key.trim(), value)?;
        }
        let text = toml::to_string(&tree).map_err(|e| Error::Config(e.to_string()))?;
        Self::from_toml(&text)
    }

    pub fn end_states(&self) -> Result<EndStates> {
        match self.pattern.right {
            Some(right) => Ok(EndStates::new(self.pattern.left, right)),
            None => desk_end_states(&self.gas, &self.pattern.left, self.pattern.delta),
        }
    }

    pub fn grid(&self) -> Result<Grid> {
        Grid::new(self.grid.half_width, self.grid.n)
    }

    /// Hard errors for invalid settings; the returned list holds warnings.
    pub fn validate(&self) -> Result<Vec<String>> {
        self.gas.validate()?;
        self.grid()?;
        let positive = [
            ("time.t_final", self.time.t_final),
            ("time.diagnostic_every", self.time.diagnostic_every),
            ("time.safety", self.time.safety),
            ("profiles.bvp_tol", self.profiles.bvp_tol),
            ("profiles.pattern_tol", self.profiles.pattern_tol),
            ("diagnostics.delta_cap", self.diagnostics.delta_cap),
            ("perturbation.width", self.perturbation.width),
        ];
        for (name, x) in positive {
            if !(x > 0.0 && x.is_finite()) {
                return Err(Error::Config(format!("{name} must be positive, got {x}")));
            }
        }
        if !(self.time.snapshot_every >= 0.0) {
            return Err(Error::Config("time.snapshot_every must be >= 0".into()));
        }
        if self.diagnostics.fit_t_max <= self.diagnostics.fit_t_min {
            return Err(Error::Config("diagnostics.fit_t_max must exceed fit_t_min".into()));
        }
        for (name, x) in [
            ("diagnostics.alpha", self.diagnostics.alpha),
            ("diagnostics.boundary_tol", self.diagnostics.boundary_tol),
        ] {
            if let Some(x) = x {
                if !(x > 0.0) {
                    return Err(Error::Config(format!("{name} must be positive, got {x}")));
                }
            }
        }
        let mut warnings = Vec::new();
        if !self.grid.n.is_power_of_two() {
            warnings.push(format!("grid.n = {} is not a power of two", self.grid.n));
        }
        if self.time.safety > 0.5 {
            warnings.push(format!("time.safety = {} is above the tested range", self.time.safety));
        }
        Ok(warnings)
    }
}

fn parse_literal(raw: &str) -> toml::Value {
    #[derive(Deserialize)]
    struct Probe {
        v: toml::Value,
    }
    toml::from_str::<Probe>(&format!("v = {raw}"))
        .map(|p| p.v)
        .unwrap_or_else(|_| toml::Value::String(raw.to_string()))
}

fn set_path(tree: &mut toml::Value, key: &str, value: toml::Value) -> Result<()> {
    let mut node = tree;
    let parts: Vec<&str> = key.split('.').collect();
    for (i, part) in parts.iter().enumerate() {
        let table = node
            .as_table_mut()
            .ok_or_else(|| Error::Config(format!("`{key}`: `{part}` is not inside a table")))?;
        if i + 1 == parts.len() {
            table.insert(part.to_string(), value);
            return Ok(());
        }
        node = table
            .entry(part.to_string())
            .or_insert_with(|| toml::Value::Table(Default::default()));
    }
    Err(Error::Config("empty override key".into()))
}
