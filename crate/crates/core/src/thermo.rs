//! Ideal-gas thermodynamics for the micropolar model.
//!
//! Pressure and internal energy follow `p = Rθ/v`, `e = Rθ/(γ-1)`. The
//! entropy form `p = B v^{-γ} exp((γ-1)s/R)` fixes the entropy constant `B`.
//! The microviscosity `A` only enters the microrotation equation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GasParams {
    /// Gas constant.
    #[serde(rename = "R")]
    pub r: f64,
    pub gamma: f64,
    /// Heat conductivity.
    pub kappa: f64,
    /// Microviscosity coefficient.
    #[serde(rename = "A")]
    pub a: f64,
    /// Constant of the entropy form of the equation of state.
    #[serde(rename = "B")]
    pub b: f64,
}

impl Default for GasParams {
    fn default() -> Self {
        Self {
            r: 1.0,
            gamma: 5.0 / 3.0,
            kappa: 1.0,
            a: 1.0,
            b: 1.0,
        }
    }
}

impl GasParams {
    pub fn new(r: f64, gamma: f64, kappa: f64, a: f64, b: f64) -> Result<Self> {
        let p = Self { r, gamma, kappa, a, b };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.r > 0.0
            && self.gamma > 1.0
            && self.kappa > 0.0
            && self.a > 0.0
            && self.b > 0.0
            && [self.r, self.gamma, self.kappa, self.a, self.b]
                .iter()
                .all(|x| x.is_finite());
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParams(format!(
                "need R>0, gamma>1, kappa>0, A>0, B>0; got {self:?}"
            )))
        }
    }

    /// Thermal diffusivity factor `κ(γ-1)/R` of the temperature equation.
    pub fn thermal_diffusivity(&self) -> f64 {
        self.kappa * (self.gamma - 1.0) / self.r
    }
}

/// Characteristic family of the Euler system: `minus` is the 1-family,
/// `plus` the 3-family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Minus,
    Plus,
}

impl Family {
    pub fn sign(self) -> f64 {
        match self {
            Family::Minus => -1.0,
            Family::Plus => 1.0,
        }
    }
}

/// Pointwise fluid state `(v, u, θ, ω)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThermoState {
    pub v: f64,
    pub u: f64,
    pub theta: f64,
    #[serde(default)]
    pub omega: f64,
}

impl ThermoState {
    pub fn new(v: f64, u: f64, theta: f64, omega: f64) -> Result<Self> {
        let s = Self { v, u, theta, omega };
        s.validate()?;
        Ok(s)
    }

    /// Euler-system state; microrotation set to zero.
    pub fn euler(v: f64, u: f64, theta: f64) -> Self {
        Self {
            v,
            u,
            theta,
            omega: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_positive("v", self.v)?;
        check_positive("theta", self.theta)?;
        if !self.u.is_finite() || !self.omega.is_finite() {
            return Err(Error::Domain(format!("non-finite state {self:?}")));
        }
        Ok(())
    }
}

fn check_positive(name: &str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name} must be positive and finite, got {x}")))
    }
}

pub fn pressure(params: &GasParams, v: f64, theta: f64) -> Result<f64> {
    check_positive("v", v)?;
    check_positive("theta", theta)?;
    Ok(params.r * theta / v)
}

pub fn internal_energy(params: &GasParams, theta: f64) -> Result<f64> {
    check_positive("theta", theta)?;
    Ok(params.r * theta / (params.gamma - 1.0))
}

/// `s = R/(γ-1) ln(Rθ/B) + R ln v`.
pub fn entropy(params: &GasParams, v: f64, theta: f64) -> Result<f64> {
    check_positive("v", v)?;
    check_positive("theta", theta)?;
    let GasParams { r, gamma, b, .. } = *params;
    Ok(r / (gamma - 1.0) * (r * theta / b).ln() + r * v.ln())
}

/// Pressure recovered from `(v, s)` through the entropy form of the EOS.
pub fn pressure_from_entropy(params: &GasParams, v: f64, s: f64) -> Result<f64> {
    check_positive("v", v)?;
    let GasParams { r, gamma, b, .. } = *params;
    Ok(b * v.powf(-gamma) * ((gamma - 1.0) * s / r).exp())
}

/// Lagrangian characteristic speed `∓√(γp/v)`.
pub fn char_speed(params: &GasParams, v: f64, theta: f64, family: Family) -> Result<f64> {
    let p = pressure(params, v, theta)?;
    Ok(family.sign() * (params.gamma * p / v).sqrt())
}

/// Same speed written through the entropy: `±√(Bγ v^{-γ-1} e^{(γ-1)s/R})`.
pub fn char_speed_entropy(params: &GasParams, v: f64, s: f64, family: Family) -> Result<f64> {
    check_positive("v", v)?;
    let GasParams { r, gamma, b, .. } = *params;
    let sq = b * gamma * v.powf(-gamma - 1.0) * ((gamma - 1.0) * s / r).exp();
    Ok(family.sign() * sq.sqrt())
}

/// Eulerian sound speed `√(γ p v)`; the rarefaction-curve integral of `λ` is
/// `2/(γ-1)` times its difference between the two ends.
pub fn sound_speed(params: &GasParams, v: f64, theta: f64) -> Result<f64> {
    let p = pressure(params, v, theta)?;
    Ok((params.gamma * p * v).sqrt())
}
