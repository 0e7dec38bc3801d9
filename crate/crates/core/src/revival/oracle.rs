//! Independent checks of revival points: brute-force period scans over
//! explicit index residues, direct one-dimensional transforms and the
//! separable product law. Used by `verify` and by the test suites.

use num_complex::Complex64;
use serde::Serialize;

use super::{theta, unit_phase, verify_expansion, RevivalPoint, ThetaSpec, ZERO_COEFFICIENT};
use crate::commensurability::ReducedFraction;

fn index_span(spec: &ThetaSpec) -> i64 {
    let c = spec.p12q12.map_or(1, |f| f.den());
    spec.p1q1.den().max(spec.p2q2.den()).max(c) + 1
}

/// Whether `θ(κ1 + l1, κ2) ≡ θ(κ1, κ2)` and `θ(κ1, κ2 + l2) ≡ θ(κ1, κ2)`
/// for every `κ1, κ2` in `0..=kmax`.
pub fn is_cyclic(spec: &ThetaSpec, l1: i64, l2: i64, kmax: i64) -> bool {
    (0..=kmax).all(|k1| {
        (0..=kmax).all(|k2| {
            let here = theta(spec, k1, k2);
            theta(spec, k1 + l1, k2) == here && theta(spec, k1, k2 + l2) == here
        })
    })
}

/// Smallest periods found by testing every candidate shift against the
/// phase at explicit indices. The phase differences are periodic in each
/// index with period dividing one of its denominators, so indices up to
/// the largest denominator cover every residue.
pub fn brute_force_periods(spec: &ThetaSpec) -> (i64, i64) {
    let span = index_span(spec);
    let cap = spec.p1q1.den().max(spec.p2q2.den()) * spec.p12q12.map_or(1, |f| f.den());
    let scan = |first: bool| {
        (1..=cap)
            .find(|&l| {
                (0..=span).all(|k1| {
                    (0..=span).all(|k2| {
                        let shifted = if first {
                            theta(spec, k1 + l, k2)
                        } else {
                            theta(spec, k1, k2 + l)
                        };
                        shifted == theta(spec, k1, k2)
                    })
                })
            })
            .unwrap_or(cap)
    };
    (scan(true), scan(false))
}

/// One-dimensional coefficients `a_s = (1/l) Σ_κ exp(−2πi (p/q) κ²) exp(2πi sκ/l)`
/// by direct summation with exact exponents.
pub fn one_dimensional_coefficients(pq: ReducedFraction, l: i64) -> Vec<Complex64> {
    (0..l)
        .map(|s| {
            let sum: Complex64 = (0..l)
                .map(|k| {
                    let exponent = pq * ReducedFraction::integer(k * k)
                        - ReducedFraction::new(s * k, l).expect("l >= 1");
                    unit_phase(exponent)
                })
                .sum();
            sum / l as f64
        })
        .collect()
}

/// Largest elementwise deviation of the point's coefficients from the
/// product of the one-dimensional transforms. `None` with a cross term.
pub fn product_law_deviation(point: &RevivalPoint) -> Option<f64> {
    if point.spec.has_cross() {
        return None;
    }
    let a1 = one_dimensional_coefficients(point.spec.p1q1, point.l1);
    let a2 = one_dimensional_coefficients(point.spec.p2q2, point.l2);
    Some(
        point
            .coeffs
            .iter()
            .map(|(s1, s2, a)| (a - a1[s1] * a2[s2]).norm())
            .fold(0.0, f64::max),
    )
}

/// Nonvanishing magnitudes of a one-dimensional coefficient vector.
pub fn nonzero_norms(coeffs: &[Complex64]) -> Vec<f64> {
    coeffs
        .iter()
        .map(|a| a.norm())
        .filter(|&n| n > ZERO_COEFFICIENT)
        .collect()
}

/// Spread between the largest and smallest nonvanishing magnitude.
pub fn norm_spread(coeffs: &[Complex64]) -> f64 {
    let norms = nonzero_norms(coeffs);
    let max = norms.iter().copied().fold(f64::MIN, f64::max);
    let min = norms.iter().copied().fold(f64::MAX, f64::min);
    if norms.is_empty() {
        0.0
    } else {
        max - min
    }
}

/// Outcome of every self-check on one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PointCheck {
    pub residual: f64,
    pub unitarity_error: f64,
    pub cyclic: bool,
    pub minimal: bool,
    pub product_deviation: Option<f64>,
    pub factor_norm_spread: Option<f64>,
}

impl PointCheck {
    pub const TOLERANCE: f64 = 1e-12;

    pub fn passes(&self) -> bool {
        self.residual <= Self::TOLERANCE
            && self.unitarity_error <= Self::TOLERANCE
            && self.cyclic
            && self.minimal
            && self.product_deviation.is_none_or(|d| d <= Self::TOLERANCE)
            && self.factor_norm_spread.is_none_or(|d| d <= Self::TOLERANCE)
    }
}

/// Runs the full property suite on a point.
pub fn check_point(point: &RevivalPoint) -> PointCheck {
    let kmax = point.l1.max(point.l2) + 1;
    let separable_parts = (!point.spec.has_cross()).then(|| {
        let a1 = one_dimensional_coefficients(point.spec.p1q1, point.l1);
        let a2 = one_dimensional_coefficients(point.spec.p2q2, point.l2);
        norm_spread(&a1).max(norm_spread(&a2))
    });
    PointCheck {
        residual: verify_expansion(point),
        unitarity_error: (point.coeffs.total_weight() - 1.0).abs(),
        cyclic: is_cyclic(
            &point.spec,
            point.l1,
            point.l2,
            kmax.max(index_span(&point.spec)),
        ),
        minimal: brute_force_periods(&point.spec) == (point.l1, point.l2),
        product_deviation: product_law_deviation(point),
        factor_norm_spread: separable_parts,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rf(n: i64, d: i64) -> ReducedFraction {
        ReducedFraction::new(n, d).unwrap()
    }

    #[test]
    fn brute_force_examples() {
        let s = ThetaSpec::new(rf(1, 1), rf(3, 4), None);
        assert_eq!(brute_force_periods(&s), (1, 2));
        let s = ThetaSpec::new(rf(1, 2), rf(1, 2), None);
        assert_eq!(brute_force_periods(&s), (2, 2));
    }

    #[test]
    fn one_dimensional_half_revival() {
        let a = one_dimensional_coefficients(rf(1, 2), 2);
        assert!(a[0].norm() < 1e-15);
        assert!((a[1] - 1.0).norm() < 1e-15);
    }

    #[test]
    fn full_check_passes_on_cross_point() {
        let p = RevivalPoint::from_theta(ThetaSpec::new(rf(1, 3), rf(2, 5), Some(rf(1, 2))));
        let check = check_point(&p);
        assert!(check.passes(), "{check:?}");
        assert!(check.product_deviation.is_none());
    }
}
