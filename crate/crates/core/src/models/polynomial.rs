use std::collections::BTreeMap;

use serde::Deserialize;

use super::{parse_params, EnergyModel};
use crate::error::{Error, Result};

/// `E = Σ c_ij n1^i n2^j` over a finite set of monomials. Derivatives are
/// taken numerically.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    terms: BTreeMap<(u32, u32), f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Term {
    powers: (u32, u32),
    coeff: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Params {
    terms: Vec<Term>,
}

impl Polynomial {
    pub fn new(terms: impl IntoIterator<Item = ((u32, u32), f64)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (powers, coeff) in terms {
            if !coeff.is_finite() {
                return Err(Error::Parameter(format!(
                    "non-finite coefficient for powers {powers:?}"
                )));
            }
            *map.entry(powers).or_insert(0.0) += coeff;
        }
        Ok(Self { terms: map })
    }

    pub(crate) fn from_params(
        params: &serde_json::Value,
    ) -> Result<std::sync::Arc<dyn EnergyModel>> {
        let p: Params = parse_params("polynomial", params)?;
        Ok(std::sync::Arc::new(Self::new(
            p.terms.into_iter().map(|t| (t.powers, t.coeff)),
        )?))
    }
}

impl EnergyModel for Polynomial {
    fn name(&self) -> &'static str {
        "polynomial"
    }

    fn energy_at(&self, n1: f64, n2: f64) -> Result<f64> {
        Ok(self
            .terms
            .iter()
            .map(|(&(i, j), c)| c * n1.powi(i as i32) * n2.powi(j as i32))
            .sum())
    }

    fn parameters(&self) -> serde_json::Value {
        let terms: Vec<_> = self
            .terms
            .iter()
            .map(|(&(i, j), &c)| serde_json::json!({ "powers": [i, j], "coeff": c }))
            .collect();
        serde_json::json!({ "terms": terms })
    }
}
