//! Numerical laboratory for the one-dimensional compressible micropolar
//! fluid model without viscosity, in Lagrangian coordinates:
//!
//! ```text
//! v_t - u_x = 0
//! u_t + p_x = 0
//! (e + u²/2)_t + (pu)_x = (κθ_x/v)_x + ω_x²/v + vω²
//! ω_t = A[(ω_x/v)_x - vω]
//! ```
//!
//! The crate builds the composite wave made of two smooth rarefactions and a
//! viscous contact wave, evolves perturbations of it under the full system,
//! and measures the quantities that govern its asymptotic stability.

// `!(x > 0.0)` is used deliberately so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![allow(clippy::needless_range_loop)]

pub mod config;
pub mod diagnostics;
pub mod error;
pub mod output;
pub mod profiles;
pub mod quad;
pub mod riemann;
pub mod solver;
pub mod thermo;
pub mod verify;

pub use error::{Error, Result};
pub use thermo::{Family, GasParams, ThermoState};
