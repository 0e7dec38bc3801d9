use std::f64::consts::PI;

use serde::Deserialize;

use super::{parse_params, DerivativeSet, EnergyModel, ExactScales, Lattice};
use crate::commensurability::ReducedFraction;
use crate::error::{Error, Result};

/// Particle of unit mass in a periodic two-dimensional box,
/// `E = 2π² (n1²/L1² + n2²/L2²)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Box2D {
    l1_sq: f64,
    l2_sq: f64,
    /// Squared lengths as exact rationals of a common unit, when given so.
    exact: Option<(ReducedFraction, ReducedFraction)>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Params {
    l1: Option<f64>,
    l2: Option<f64>,
    l1_squared: Option<ReducedFraction>,
    l2_squared: Option<ReducedFraction>,
}

impl Box2D {
    pub fn new(l1: f64, l2: f64) -> Result<Self> {
        if !(l1 > 0.0 && l2 > 0.0 && l1.is_finite() && l2.is_finite()) {
            return Err(Error::Parameter(format!(
                "box lengths must be positive, got ({l1}, {l2})"
            )));
        }
        Ok(Self {
            l1_sq: l1 * l1,
            l2_sq: l2 * l2,
            exact: None,
        })
    }

    /// Box whose squared side lengths are exact rationals; enables exact
    /// commensurability of its time scales.
    pub fn from_squared_lengths(l1_sq: ReducedFraction, l2_sq: ReducedFraction) -> Result<Self> {
        if !(l1_sq.is_positive() && l2_sq.is_positive()) {
            return Err(Error::Parameter(format!(
                "squared box lengths must be positive, got ({l1_sq}, {l2_sq})"
            )));
        }
        Ok(Self {
            l1_sq: l1_sq.to_f64(),
            l2_sq: l2_sq.to_f64(),
            exact: Some((l1_sq, l2_sq)),
        })
    }

    pub(crate) fn from_params(
        params: &serde_json::Value,
    ) -> Result<std::sync::Arc<dyn EnergyModel>> {
        let p: Params = parse_params("box2d", params)?;
        let model = match p {
            Params {
                l1_squared: Some(a),
                l2_squared: Some(b),
                l1: None,
                l2: None,
            } => Self::from_squared_lengths(a, b)?,
            Params {
                l1: Some(a),
                l2: Some(b),
                l1_squared: None,
                l2_squared: None,
            } => Self::new(a, b)?,
            _ => {
                return Err(Error::Parameter(
                    "box2d needs either {l1, l2} or {l1_squared, l2_squared}".into(),
                ))
            }
        };
        Ok(std::sync::Arc::new(model))
    }

    pub fn l1(&self) -> f64 {
        self.l1_sq.sqrt()
    }

    pub fn l2(&self) -> f64 {
        self.l2_sq.sqrt()
    }
}

impl EnergyModel for Box2D {
    fn name(&self) -> &'static str {
        "box2d"
    }

    fn energy_at(&self, n1: f64, n2: f64) -> Result<f64> {
        Ok(2.0 * PI * PI * (n1 * n1 / self.l1_sq + n2 * n2 / self.l2_sq))
    }

    fn analytic_derivatives(&self, n1: f64, n2: f64) -> Option<Result<DerivativeSet>> {
        let c = 4.0 * PI * PI;
        Some(self.energy_at(n1, n2).map(|e0| DerivativeSet {
            e0,
            d1: c * n1 / self.l1_sq,
            d2: c * n2 / self.l2_sq,
            d11: c / self.l1_sq,
            d22: c / self.l2_sq,
            d12: 0.0,
            analytic: true,
        }))
    }

    fn exact_scales(&self, lattice: &Lattice) -> Option<ExactScales> {
        // trev_i = L_i² / (π step_i²), tcl_i = L_i² / (2π step_i nbar_i)
        let (a, b) = self.exact?;
        let s1 = ReducedFraction::integer(lattice.step1);
        let s2 = ReducedFraction::integer(lattice.step2);
        let classical = |sq: ReducedFraction, step: ReducedFraction, nbar: i64| {
            (nbar != 0).then(|| sq / (step * ReducedFraction::integer(nbar)))
        };
        Some(ExactScales {
            revival: [Some(a / (s1 * s1)), Some(b / (s2 * s2)), None],
            classical: [
                classical(a, s1, lattice.nbar1),
                classical(b, s2, lattice.nbar2),
            ],
        })
    }

    fn parameters(&self) -> serde_json::Value {
        match self.exact {
            Some((a, b)) => serde_json::json!({
                "l1_squared": a.to_string(),
                "l2_squared": b.to_string(),
            }),
            None => serde_json::json!({ "l1": self.l1(), "l2": self.l2() }),
        }
    }
}
