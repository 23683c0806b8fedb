//! Space-time wave profiles: smooth rarefactions, the viscous contact wave,
//! and their superposition. All profiles have `W ≡ 0`.

mod burgers;
mod composite;
mod contact;
mod rarefaction;
mod selfsimilar;

pub use burgers::{BurgersJet, BurgersProfile};
pub use composite::{CompositeComponents, CompositeWave};
pub use contact::ContactWave;
pub use rarefaction::RarefactionWave;
pub use selfsimilar::{
    diffusion_coefficient, solve_selfsimilar, SelfSimilarOptions, SelfSimilarProfile, SimilarityJet,
};

use serde::{Deserialize, Serialize};

use crate::error::Result;

/// Value of a scalar field with its `x`, `xx` and `t` derivatives.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Jet {
    pub val: f64,
    pub x: f64,
    pub xx: f64,
    pub t: f64,
}

impl Jet {
    pub fn constant(val: f64) -> Self {
        Self {
            val,
            ..Default::default()
        }
    }
}

impl std::ops::Add for Jet {
    type Output = Jet;
    fn add(self, o: Jet) -> Jet {
        Jet {
            val: self.val + o.val,
            x: self.x + o.x,
            xx: self.xx + o.xx,
            t: self.t + o.t,
        }
    }
}

/// `(V, U, Θ)` jets at one point.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct FieldJet {
    pub v: Jet,
    pub u: Jet,
    pub theta: Jet,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ProfileKind {
    Contact,
    RarefactionMinus,
    RarefactionPlus,
    Composite,
}

#[derive(Debug, Clone)]
#[allow(clippy::large_enum_variant)]
pub enum ProfileField {
    Contact(ContactWave),
    Rarefaction(RarefactionWave),
    Composite(CompositeWave),
}

impl ProfileField {
    pub fn kind(&self) -> ProfileKind {
        match self {
            ProfileField::Contact(_) => ProfileKind::Contact,
            ProfileField::Rarefaction(r) => match r.family() {
                crate::thermo::Family::Minus => ProfileKind::RarefactionMinus,
                crate::thermo::Family::Plus => ProfileKind::RarefactionPlus,
            },
            ProfileField::Composite(_) => ProfileKind::Composite,
        }
    }

    pub fn eval(&self, t: f64, x: f64) -> Result<FieldJet> {
        match self {
            ProfileField::Contact(c) => c.eval(t, x),
            ProfileField::Rarefaction(r) => r.eval(t, x),
            ProfileField::Composite(c) => c.eval(t, x),
        }
    }
}

impl From<CompositeWave> for ProfileField {
    fn from(c: CompositeWave) -> Self {
        ProfileField::Composite(c)
    }
}
