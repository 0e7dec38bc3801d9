//! Central finite differences with repeated step halving and Richardson
//! extrapolation.
//!
//! Every stencil used here has an error expansion in even powers of the
//! step, so each halving removes one more order. The tableau starts at a
//! unit step in the raw quantum numbers.

use super::{DerivativeSet, EnergyModel};
use crate::error::{Error, Result};

const MAX_LEVELS: usize = 10;
const INITIAL_STEP: f64 = 1.0;

/// Extrapolated value and its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

/// Richardson tableau over `h, h/2, h/4, ...`, returning the entry with the
/// smallest error estimate. Stops once the error estimate grows, which
/// marks the onset of roundoff.
pub fn richardson<F>(mut stencil: F) -> Result<Estimate>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut prev: Vec<f64> = vec![stencil(INITIAL_STEP)?];
    let mut best = Estimate {
        value: prev[0],
        error: f64::INFINITY,
    };
    let mut h = INITIAL_STEP;
    for _ in 1..MAX_LEVELS {
        h /= 2.0;
        let mut row = Vec::with_capacity(prev.len() + 1);
        row.push(stencil(h)?);
        let mut factor = 1.0;
        for j in 1..=prev.len() {
            factor *= 4.0;
            let extrapolated = row[j - 1] + (row[j - 1] - prev[j - 1]) / (factor - 1.0);
            row.push(extrapolated);
            let err = (extrapolated - row[j - 1])
                .abs()
                .max((extrapolated - prev[j - 1]).abs());
            if err <= best.error {
                best = Estimate {
                    value: extrapolated,
                    error: err,
                };
            }
        }
        let last = row.len() - 1;
        let diverging = (row[last] - prev[last - 1]).abs() >= 2.0 * best.error;
        prev = row;
        if best.error == 0.0 || diverging {
            break;
        }
    }
    if !best.value.is_finite() {
        return Err(Error::Numeric("finite difference did not converge".into()));
    }
    Ok(best)
}

/// All first and second partials of `model` at `(n1, n2)` by extrapolated
/// central differences.
pub fn derivatives(model: &dyn EnergyModel, n1: f64, n2: f64) -> Result<DerivativeSet> {
    let e = |a: f64, b: f64| model.energy_at(a, b);
    let e0 = e(n1, n2)?;

    let d1 = richardson(|h| Ok((e(n1 + h, n2)? - e(n1 - h, n2)?) / (2.0 * h)))?;
    let d2 = richardson(|h| Ok((e(n1, n2 + h)? - e(n1, n2 - h)?) / (2.0 * h)))?;
    let d11 = richardson(|h| Ok((e(n1 + h, n2)? - 2.0 * e0 + e(n1 - h, n2)?) / (h * h)))?;
    let d22 = richardson(|h| Ok((e(n1, n2 + h)? - 2.0 * e0 + e(n1, n2 - h)?) / (h * h)))?;
    let d12 = richardson(|h| {
        Ok(
            (e(n1 + h, n2 + h)? - e(n1 + h, n2 - h)? - e(n1 - h, n2 + h)? + e(n1 - h, n2 - h)?)
                / (4.0 * h * h),
        )
    })?;

    Ok(DerivativeSet {
        e0,
        d1: d1.value,
        d2: d2.value,
        d11: d11.value,
        d22: d22.value,
        d12: d12.value,
        analytic: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_for_quadratics_at_unit_step() {
        let est = richardson(|h| {
            let f = |x: f64| 3.0 * x * x - 2.0 * x;
            Ok((f(2.0 + h) - f(2.0 - h)) / (2.0 * h))
        })
        .unwrap();
        assert_eq!(est.value, 10.0);
    }

    #[test]
    fn converges_on_rational_function() {
        // d²/dn² of -1/(2n²) = -3/n⁴
        let n = 18.0_f64;
        let f = |x: f64| -0.5 / (x * x);
        let est = richardson(|h| Ok((f(n + h) - 2.0 * f(n) + f(n - h)) / (h * h))).unwrap();
        let exact = -3.0 / n.powi(4);
        assert!(
            ((est.value - exact) / exact).abs() < 1e-9,
            "{est:?} vs {exact}"
        );
    }

    #[test]
    fn propagates_domain_errors() {
        let res = richardson(|h| {
            if h < 0.3 {
                Err(Error::Domain("too close".into()))
            } else {
                Ok(1.0 + h.powi(3))
            }
        });
        assert!(res.is_err());
    }
}
