use serde::Deserialize;

use super::{parse_params, DerivativeSet, EnergyModel};
use crate::error::{Error, Result};

/// Hydrogen in a weak static field to first order,
/// `E(n, k) = −1/(2n²) + 3nkF/2`, with `k = n1 − n2` the parabolic
/// difference.
///
/// For fixed `n` adjacent `k` differ by two, and `n + k` is odd; use a
/// lattice with `step2 = 2` (and `step1 = 2` to stay in one parity class).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StarkHydrogen {
    field: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Params {
    field: f64,
}

impl StarkHydrogen {
    pub fn new(field: f64) -> Result<Self> {
        if !(field > 0.0 && field.is_finite()) {
            return Err(Error::Parameter(format!(
                "field strength must be positive, got {field}"
            )));
        }
        Ok(Self { field })
    }

    pub fn field(&self) -> f64 {
        self.field
    }

    pub(crate) fn from_params(
        params: &serde_json::Value,
    ) -> Result<std::sync::Arc<dyn EnergyModel>> {
        let p: Params = parse_params("stark", params)?;
        Ok(std::sync::Arc::new(Self::new(p.field)?))
    }

    /// Whether `(n, k)` obeys the parity rule (`k` odd for even `n`).
    pub fn parity_consistent(n: i64, k: i64) -> bool {
        (n + k).rem_euclid(2) == 1
    }
}

impl EnergyModel for StarkHydrogen {
    fn name(&self) -> &'static str {
        "stark"
    }

    fn energy_at(&self, n: f64, k: f64) -> Result<f64> {
        if n == 0.0 {
            return Err(Error::Domain("Stark energy undefined at n = 0".into()));
        }
        Ok(-0.5 / (n * n) + 1.5 * n * k * self.field)
    }

    fn analytic_derivatives(&self, n: f64, k: f64) -> Option<Result<DerivativeSet>> {
        let f = self.field;
        Some(self.energy_at(n, k).map(|e0| DerivativeSet {
            e0,
            d1: 1.0 / (n * n * n) + 1.5 * k * f,
            d2: 1.5 * n * f,
            d11: -3.0 / (n * n * n * n),
            d22: 0.0,
            d12: 1.5 * f,
            analytic: true,
        }))
    }

    fn check_point(&self, n: i64, k: i64) -> Result<()> {
        if n < 1 {
            return Err(Error::Domain(format!(
                "Stark level needs n >= 1, got n = {n}"
            )));
        }
        if k.abs() > n - 1 {
            return Err(Error::Domain(format!(
                "Stark level needs |k| <= n - 1, got n = {n}, k = {k}"
            )));
        }
        Ok(())
    }

    fn parameters(&self) -> serde_json::Value {
        serde_json::json!({ "field": self.field })
    }
}
