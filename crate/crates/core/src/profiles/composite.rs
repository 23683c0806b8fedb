use std::sync::Arc;

use super::{ContactWave, FieldJet, Jet, RarefactionWave, SelfSimilarOptions};
use crate::error::Result;
use crate::riemann::WavePattern;
use crate::thermo::{Family, GasParams};

/// 1-rarefaction + viscous contact + 3-rarefaction, minus the doubly
/// counted middle states.
#[derive(Debug, Clone)]
pub struct CompositeWave {
    pattern: WavePattern,
    contact: ContactWave,
    rar_minus: RarefactionWave,
    rar_plus: RarefactionWave,
    offset: FieldJet,
}

/// Component jets at one point, used by the residual decomposition.
#[derive(Debug, Clone, Copy)]
pub struct CompositeComponents {
    pub rar_minus: FieldJet,
    pub contact: FieldJet,
    pub rar_plus: FieldJet,
    pub total: FieldJet,
}

impl CompositeWave {
    pub fn new(
        pattern: &WavePattern,
        contact: ContactWave,
        rar_minus: RarefactionWave,
        rar_plus: RarefactionWave,
    ) -> Self {
        let offset = FieldJet {
            v: Jet::constant(pattern.mid_left.v + pattern.mid_right.v),
            u: Jet::constant(2.0 * pattern.u_mid()),
            theta: Jet::constant(pattern.mid_left.theta + pattern.mid_right.theta),
        };
        Self {
            pattern: *pattern,
            contact,
            rar_minus,
            rar_plus,
            offset,
        }
    }

    /// Builds all three components from a solved pattern.
    pub fn build(params: &GasParams, pattern: &WavePattern, opts: &SelfSimilarOptions) -> Result<Self> {
        pattern.end.require_zero_omega()?;
        let a_kappa = super::diffusion_coefficient(params, pattern.p_mid);
        let profile = super::solve_selfsimilar(a_kappa, pattern.mid_left.theta, pattern.mid_right.theta, opts)?;
        let contact = ContactWave::from_profile(params, pattern.p_mid, pattern.u_mid(), Arc::new(profile));
        let rar_minus = RarefactionWave::new(params, &pattern.end.left, &pattern.mid_left, Family::Minus)?;
        let rar_plus = RarefactionWave::new(params, &pattern.end.right, &pattern.mid_right, Family::Plus)?;
        Ok(Self::new(pattern, contact, rar_minus, rar_plus))
    }

    pub fn pattern(&self) -> &WavePattern {
        &self.pattern
    }

    pub fn contact(&self) -> &ContactWave {
        &self.contact
    }

    pub fn rarefaction(&self, family: Family) -> &RarefactionWave {
        match family {
            Family::Minus => &self.rar_minus,
            Family::Plus => &self.rar_plus,
        }
    }

    pub fn components(&self, t: f64, x: f64) -> Result<CompositeComponents> {
        let rar_minus = self.rar_minus.eval(t, x)?;
        let contact = self.contact.eval(t, x)?;
        let rar_plus = self.rar_plus.eval(t, x)?;
        let sum = |f: fn(&FieldJet) -> Jet| {
            let (a, b, c, o) = (f(&rar_minus), f(&contact), f(&rar_plus), f(&self.offset));
            Jet {
                val: (a.val + b.val + c.val) - o.val,
                ..a + b + c
            }
        };
        let total = FieldJet {
            v: sum(|j| j.v),
            u: sum(|j| j.u),
            theta: sum(|j| j.theta),
        };
        Ok(CompositeComponents {
            rar_minus,
            contact,
            rar_plus,
            total,
        })
    }

    pub fn eval(&self, t: f64, x: f64) -> Result<FieldJet> {
        Ok(self.components(t, x)?.total)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::riemann::{construct_end_states, solve_pattern, EndStates};
    use crate::thermo::ThermoState;

    fn gas() -> GasParams {
        GasParams::default()
    }

    fn composite() -> CompositeWave {
        let g = gas();
        let left = ThermoState::euler(1.0, 0.0, 1.0);
        let (end, ml, _) = construct_end_states(&g, &left, 1.05, 1.0, 1.0).unwrap();
        assert!(ml.theta < 1.0);
        let pat = solve_pattern(&g, &end, &Default::default()).unwrap();
        CompositeWave::build(&g, &pat, &Default::default()).unwrap()
    }

    #[test]
    fn zero_strength_is_constant() {
        let g = gas();
        let s = ThermoState::euler(1.0, 0.2, 1.0);
        let pat = solve_pattern(&g, &EndStates::new(s, s), &Default::default()).unwrap();
        let c = CompositeWave::build(&g, &pat, &Default::default()).unwrap();
        for &(t, x) in &[(0.0, 0.0), (5.0, -3.0), (50.0, 20.0)] {
            let j = c.eval(t, x).unwrap();
            assert!((j.v.val - 1.0).abs() < 1e-14);
            assert!((j.u.val - 0.2).abs() < 1e-14);
            assert!((j.theta.val - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn far_fields_match_end_states() {
        let c = composite();
        let end = c.pattern().end;
        for t in [0.0, 10.0] {
            let l = c.eval(t, -150.0).unwrap();
            let r = c.eval(t, 150.0).unwrap();
            assert!((l.v.val - end.left.v).abs() < 1e-10);
            assert!((l.u.val - end.left.u).abs() < 1e-10);
            assert!((l.theta.val - end.left.theta).abs() < 1e-10);
            assert!((r.v.val - end.right.v).abs() < 1e-10);
            assert!((r.u.val - end.right.u).abs() < 1e-10);
            assert!((r.theta.val - end.right.theta).abs() < 1e-10);
        }
    }

    #[test]
    fn sum_formula_holds_pointwise() {
        let c = composite();
        let p = *c.pattern();
        let comp = c.components(3.0, 0.7).unwrap();
        let v = comp.rar_minus.v.val + comp.contact.v.val + comp.rar_plus.v.val - p.mid_left.v - p.mid_right.v;
        assert!((comp.total.v.val - v).abs() < 1e-14);
        let ux = comp.rar_minus.u.x + comp.contact.u.x + comp.rar_plus.u.x;
        assert_eq!(comp.total.u.x, ux);
    }
}
