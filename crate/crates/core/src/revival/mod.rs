//! Fractional-revival structure at a commensurate time: the second-order
//! phase `θ`, its minimal cyclic periods, the subsidiary-wave expansion
//! coefficients and their classification.

pub mod oracle;
pub mod tune;

use std::f64::consts::TAU;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_integer::Integer;
use serde::Serialize;

use crate::commensurability::{cross_ratios, CrossRatios, FracTime, ReducedFraction};
use crate::models::TimeScales;
use crate::packet::{classical_overlap, CoefficientGrid};

/// Magnitude below which an expansion coefficient counts as vanishing.
pub const ZERO_COEFFICIENT: f64 = 1e-10;

/// The fractions entering
/// `θ(κ1, κ2) = (p1/q1) κ1² + (p2/q2) κ2² + (p12/q12) κ1 κ2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct ThetaSpec {
    pub p1q1: ReducedFraction,
    pub p2q2: ReducedFraction,
    pub p12q12: Option<ReducedFraction>,
}

impl ThetaSpec {
    pub fn new(
        p1q1: ReducedFraction,
        p2q2: ReducedFraction,
        p12q12: Option<ReducedFraction>,
    ) -> Self {
        Self { p1q1, p2q2, p12q12 }
    }

    pub fn from_frac(frac: &FracTime) -> Self {
        Self::new(frac.p1q1, frac.p2q2, frac.p12q12)
    }

    /// Whether a nonvanishing cross term is present.
    pub fn has_cross(&self) -> bool {
        self.p12q12.is_some_and(|c| !c.is_zero())
    }

    fn cross(&self) -> ReducedFraction {
        self.p12q12.unwrap_or(ReducedFraction::ZERO)
    }

    /// Cross ratios `r_i/s_i` implied by the fractions.
    pub fn cross_ratios(&self) -> Option<CrossRatios> {
        cross_ratios(&FracTime {
            t: 0.0,
            p1q1: self.p1q1,
            p2q2: self.p2q2,
            p12q12: self.p12q12,
        })
    }
}

/// `θ(κ1, κ2)` reduced mod 1, in exact arithmetic.
pub fn theta(spec: &ThetaSpec, k1: i64, k2: i64) -> ReducedFraction {
    let k = ReducedFraction::integer;
    let mut value = spec.p1q1 * k(k1 * k1) + spec.p2q2 * k(k2 * k2);
    if let Some(c) = spec.p12q12 {
        value = value + c * k(k1 * k2);
    }
    value.mod_one()
}

/// Whether shifting `κ1` by `l` leaves `θ` unchanged mod 1 for every
/// integer `κ1, κ2`: `(p1/q1)(l² + 2lκ1) + (p12/q12) l κ2 ∈ ℤ`, i.e. each
/// coefficient of the affine form is an integer.
fn shift_invariant(own: ReducedFraction, cross: ReducedFraction, l: i64) -> bool {
    let l = ReducedFraction::integer(l);
    (own * l * l).is_integer()
        && (own * l * ReducedFraction::integer(2)).is_integer()
        && (cross * l).is_integer()
}

fn period_bound(
    own: ReducedFraction,
    cross: ReducedFraction,
    ratio: Option<ReducedFraction>,
) -> i64 {
    if cross.is_zero() {
        return own.den();
    }
    match ratio {
        // l = q·s always satisfies the conditions
        Some(rs) => own.den() * rs.den(),
        None => own.den().lcm(&cross.den()),
    }
}

fn minimal_period(
    own: ReducedFraction,
    cross: ReducedFraction,
    ratio: Option<ReducedFraction>,
) -> i64 {
    let bound = period_bound(own, cross, ratio);
    (1..=bound)
        .find(|&l| shift_invariant(own, cross, l))
        .unwrap_or(bound)
}

/// Smallest positive `(l1, l2)` with `θ(κ1 + l1, κ2) ≡ θ(κ1, κ2)` and
/// `θ(κ1, κ2 + l2) ≡ θ(κ1, κ2)` mod 1, scanned up to the guaranteed
/// solution `l_i = q_i s_i` (or `q_i` without a cross term).
pub fn minimal_periods(spec: &ThetaSpec, cross: Option<&CrossRatios>) -> (i64, i64) {
    let c = spec.cross();
    (
        minimal_period(spec.p1q1, c, cross.and_then(|r| r.r1s1)),
        minimal_period(spec.p2q2, c, cross.and_then(|r| r.r2s2)),
    )
}

/// `l1 × l2` matrix of expansion coefficients, row-major in `s1`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientMatrix {
    pub l1: usize,
    pub l2: usize,
    pub data: Vec<Complex64>,
}

impl CoefficientMatrix {
    pub fn get(&self, s1: usize, s2: usize) -> Complex64 {
        self.data[s1 * self.l2 + s2]
    }

    pub fn get_mut(&mut self, s1: usize, s2: usize) -> &mut Complex64 {
        &mut self.data[s1 * self.l2 + s2]
    }

    /// `(s1, s2, a)` entries.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        self.data
            .iter()
            .enumerate()
            .map(|(i, &a)| (i / self.l2, i % self.l2, a))
    }

    /// `Σ |a|²`; one for a unitary transform of unimodular phases.
    pub fn total_weight(&self) -> f64 {
        self.data.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn nonzero(&self) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        self.iter().filter(|(_, _, a)| a.norm() > ZERO_COEFFICIENT)
    }

    /// `[re, im]` pairs, row-major.
    pub fn as_pairs(&self) -> Vec<Vec<[f64; 2]>> {
        self.data
            .chunks(self.l2)
            .map(|row| row.iter().map(|a| [a.re, a.im]).collect())
            .collect()
    }
}

/// `exp(2πi j / l)` for `j = 0..l`.
fn roots_of_unity(l: usize) -> Vec<Complex64> {
    (0..l)
        .map(|j| Complex64::from_polar(1.0, TAU * j as f64 / l as f64))
        .collect()
}

/// `exp(−2πi f)` for a rational `f`, reduced mod 1 first.
pub(crate) fn unit_phase(f: ReducedFraction) -> Complex64 {
    let f = f.mod_one();
    Complex64::from_polar(1.0, -TAU * f.num() as f64 / f.den() as f64)
}

/// `a_{s1 s2} = (1/(l1 l2)) Σ_κ exp(−2πi θ_κ) exp(2πi s1κ1/l1) exp(2πi s2κ2/l2)`
/// over one period; `θ` is evaluated exactly before conversion.
pub fn expansion_coefficients(spec: &ThetaSpec, l1: i64, l2: i64) -> CoefficientMatrix {
    let (n1, n2) = (l1.max(1) as usize, l2.max(1) as usize);
    let w1 = roots_of_unity(n1);
    let w2 = roots_of_unity(n2);

    // transform over κ2 first: b[κ1][s2]
    let mut b = vec![Complex64::new(0.0, 0.0); n1 * n2];
    for k1 in 0..n1 {
        let g: Vec<Complex64> = (0..n2)
            .map(|k2| unit_phase(theta(spec, k1 as i64, k2 as i64)))
            .collect();
        for s2 in 0..n2 {
            b[k1 * n2 + s2] = (0..n2).map(|k2| g[k2] * w2[(s2 * k2) % n2]).sum();
        }
    }
    let scale = 1.0 / (n1 * n2) as f64;
    let mut data = vec![Complex64::new(0.0, 0.0); n1 * n2];
    for s1 in 0..n1 {
        for s2 in 0..n2 {
            let sum: Complex64 = (0..n1).map(|k1| b[k1 * n2 + s2] * w1[(s1 * k1) % n1]).sum();
            data[s1 * n2 + s2] = sum * scale;
        }
    }
    CoefficientMatrix {
        l1: n1,
        l2: n2,
        data,
    }
}

/// A fractional-revival time with its periods and expansion coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct RevivalPoint {
    pub frac: FracTime,
    pub spec: ThetaSpec,
    pub cross: Option<CrossRatios>,
    pub l1: i64,
    pub l2: i64,
    pub coeffs: CoefficientMatrix,
}

impl RevivalPoint {
    pub fn analyze(frac: FracTime) -> Self {
        let spec = ThetaSpec::from_frac(&frac);
        Self::from_spec(frac, spec)
    }

    /// Point for a bare `θ` specification (time set to zero).
    pub fn from_theta(spec: ThetaSpec) -> Self {
        let frac = FracTime {
            t: 0.0,
            p1q1: spec.p1q1,
            p2q2: spec.p2q2,
            p12q12: spec.p12q12,
        };
        Self::from_spec(frac, spec)
    }

    fn from_spec(frac: FracTime, spec: ThetaSpec) -> Self {
        let cross = spec.cross_ratios();
        let (l1, l2) = minimal_periods(&spec, cross.as_ref());
        let coeffs = expansion_coefficients(&spec, l1, l2);
        Self {
            frac,
            spec,
            cross,
            l1,
            l2,
            coeffs,
        }
    }
}

/// Largest deviation between `exp(−2πi θ_κ)` and its subsidiary-wave
/// expansion `Σ_s a_s exp(−2πi(κ1 s1/l1 + κ2 s2/l2))`.
///
/// The check runs over two full periods in each index, so it also fails
/// when `(l1, l2)` are not periods of `θ`.
pub fn verify_expansion(point: &RevivalPoint) -> f64 {
    let a = &point.coeffs;
    let (n1, n2) = (a.l1, a.l2);
    let w1 = roots_of_unity(n1);
    let w2 = roots_of_unity(n2);
    let (m1, m2) = (2 * n1, 2 * n2);

    // c[s1][κ2] = Σ_s2 a[s1][s2] exp(−2πi κ2 s2 / l2)
    let mut c = vec![Complex64::new(0.0, 0.0); n1 * m2];
    for s1 in 0..n1 {
        for k2 in 0..m2 {
            c[s1 * m2 + k2] = (0..n2)
                .map(|s2| a.get(s1, s2) * w2[(k2 * s2) % n2].conj())
                .sum();
        }
    }
    let mut worst: f64 = 0.0;
    for k1 in 0..m1 {
        for k2 in 0..m2 {
            let rebuilt: Complex64 = (0..n1)
                .map(|s1| c[s1 * m2 + k2] * w1[(k1 * s1) % n1].conj())
                .sum();
            let target = unit_phase(theta(&point.spec, k1 as i64, k2 as i64));
            worst = worst.max((target - rebuilt).norm());
        }
    }
    worst
}

/// Summary of a coefficient matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Classification {
    /// Number of nonvanishing coefficients.
    pub n_waves: usize,
    /// All nonvanishing coefficients share one magnitude.
    pub equal_norm: bool,
    /// The matrix has numerical rank one, i.e. factorizes as
    /// `a_{s1} a_{s2}`.
    pub separable: bool,
    /// Nonvanishing rows and columns, when separable.
    pub component_waves: Option<(usize, usize)>,
}

/// Counts subsidiary waves and tests the norm and product structure.
pub fn classify(point: &RevivalPoint) -> Classification {
    let a = &point.coeffs;
    let norms: Vec<f64> = a.nonzero().map(|(_, _, c)| c.norm()).collect();
    let n_waves = norms.len();
    let equal_norm = match norms.first() {
        Some(&first) => norms.iter().all(|n| (n - first).abs() <= ZERO_COEFFICIENT),
        None => true,
    };

    let matrix = DMatrix::from_row_slice(a.l1, a.l2, &a.data);
    let singular = matrix.singular_values();
    let mut values: Vec<f64> = singular.iter().copied().collect();
    values.sort_by(|x, y| y.total_cmp(x));
    let separable = match values.as_slice() {
        [] | [_] => true,
        [largest, second, ..] => *second <= ZERO_COEFFICIENT * largest,
    };

    let component_waves = separable.then(|| {
        let rows = (0..a.l1)
            .filter(|&s1| (0..a.l2).any(|s2| a.get(s1, s2).norm() > ZERO_COEFFICIENT))
            .count();
        let cols = (0..a.l2)
            .filter(|&s2| (0..a.l1).any(|s1| a.get(s1, s2).norm() > ZERO_COEFFICIENT))
            .count();
        (rows, cols)
    });

    Classification {
        n_waves,
        equal_norm,
        separable,
        component_waves,
    }
}

/// A nonvanishing term of the expansion: the subsidiary wave
/// `ψ_cl(t + s1 T1/l1, t + s2 T2/l2)` and its weight.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SubsidiaryWave {
    pub s1: usize,
    pub s2: usize,
    pub weight: [f64; 2],
    /// Fractions of the classical periods by which the arguments shift.
    pub shift_fraction1: ReducedFraction,
    pub shift_fraction2: ReducedFraction,
    pub shift1: f64,
    pub shift2: f64,
    /// Both arguments shift by the same time, so the wave follows the
    /// classical motion of the initial packet.
    pub components_in_phase: bool,
}

/// Nonvanishing subsidiary waves with their time shifts.
pub fn subsidiary_waves(point: &RevivalPoint, ts: &TimeScales) -> Vec<SubsidiaryWave> {
    point
        .coeffs
        .nonzero()
        .map(|(s1, s2, a)| {
            let f1 = ReducedFraction::new(s1 as i64, point.coeffs.l1 as i64).expect("l1 >= 1");
            let f2 = ReducedFraction::new(s2 as i64, point.coeffs.l2 as i64).expect("l2 >= 1");
            let shift1 = ts.tcl1.map_or(0.0, |p| f1.to_f64() * p);
            let shift2 = ts.tcl2.map_or(0.0, |p| f2.to_f64() * p);
            let scale = ts
                .tcl1
                .unwrap_or(0.0)
                .abs()
                .max(ts.tcl2.unwrap_or(0.0).abs());
            SubsidiaryWave {
                s1,
                s2,
                weight: [a.re, a.im],
                shift_fraction1: f1,
                shift_fraction2: f2,
                shift1,
                shift2,
                components_in_phase: (shift1 - shift2).abs() <= 1e-12 * scale,
            }
        })
        .collect()
}

/// Expansion-side autocorrelation near the point's time:
/// `Σ_s a_s ⟨Ψ(0)|ψ_cl(t + s1 T1/l1, t + s2 T2/l2)⟩`.
pub fn predict_autocorrelation(
    point: &RevivalPoint,
    grid: &CoefficientGrid,
    ts: &TimeScales,
    t: f64,
) -> Complex64 {
    let a = &point.coeffs;
    let shift =
        |period: Option<f64>, s: usize, l: usize| period.map_or(0.0, |p| s as f64 * p / l as f64);
    a.nonzero()
        .map(|(s1, s2, c)| {
            c * classical_overlap(
                grid,
                ts,
                t + shift(ts.tcl1, s1, a.l1),
                t + shift(ts.tcl2, s2, a.l2),
            )
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rf(n: i64, d: i64) -> ReducedFraction {
        ReducedFraction::new(n, d).unwrap()
    }

    fn spec(a: ReducedFraction, b: ReducedFraction, c: Option<ReducedFraction>) -> ThetaSpec {
        ThetaSpec::new(a, b, c)
    }

    #[test]
    fn theta_examples() {
        let s = spec(rf(1, 1), rf(3, 4), None);
        assert_eq!(theta(&s, 0, 0), ReducedFraction::ZERO);
        assert_eq!(theta(&s, 1, 1), rf(3, 4));
        let half = spec(rf(1, 2), ReducedFraction::ZERO, None);
        assert_eq!(theta(&half, 2, 0), ReducedFraction::ZERO);
        assert_eq!(theta(&half, -3, 5), rf(1, 2));
    }

    #[test]
    fn minimal_period_examples() {
        let s = spec(rf(1, 1), rf(3, 4), None);
        assert_eq!(minimal_periods(&s, None), (1, 2));
        let s = spec(rf(1, 2), rf(1, 2), None);
        assert_eq!(minimal_periods(&s, None), (2, 2));
        let s = spec(ReducedFraction::ZERO, ReducedFraction::ZERO, None);
        assert_eq!(minimal_periods(&s, None), (1, 1));
        // q ≡ 2 mod 4 needs the full denominator, q ≡ 0 mod 4 half of it
        let s = spec(rf(1, 6), rf(1, 12), None);
        assert_eq!(minimal_periods(&s, None), (6, 6));
    }

    #[test]
    fn coefficient_examples() {
        let full = RevivalPoint::from_theta(spec(rf(4, 1), rf(3, 1), None));
        assert_eq!((full.l1, full.l2), (1, 1));
        assert!((full.coeffs.get(0, 0) - 1.0).norm() < 1e-15);

        let half = RevivalPoint::from_theta(spec(rf(1, 2), ReducedFraction::ZERO, None));
        assert_eq!((half.l1, half.l2), (2, 1));
        assert!(half.coeffs.get(0, 0).norm() < 1e-15);
        assert!((half.coeffs.get(1, 0) - 1.0).norm() < 1e-15);

        let fig1 = RevivalPoint::from_theta(spec(rf(1, 1), rf(3, 4), None));
        let nonzero: Vec<_> = fig1.coeffs.nonzero().collect();
        assert_eq!(nonzero.len(), 2);
        for (_, _, a) in nonzero {
            assert!((a.norm_sqr() - 0.5).abs() < 1e-14);
        }
    }

    #[test]
    fn verification_detects_tampering() {
        let mut point = RevivalPoint::from_theta(spec(rf(1, 3), rf(3, 4), Some(rf(1, 6))));
        assert!(verify_expansion(&point) <= 1e-12);
        *point.coeffs.get_mut(0, 0) += 0.1;
        assert!(verify_expansion(&point) >= 0.1 - 1e-9);

        let full = RevivalPoint::from_theta(spec(rf(2, 1), rf(5, 1), Some(rf(3, 1))));
        assert!(verify_expansion(&full) <= 1e-15);
    }

    #[test]
    fn classification_of_separable_points() {
        let p = RevivalPoint::from_theta(spec(rf(3, 4), rf(1, 4), None));
        let c = classify(&p);
        assert_eq!(c.n_waves, 4);
        assert!(c.equal_norm && c.separable);
        assert_eq!(c.component_waves, Some((2, 2)));
    }

    #[test]
    fn out_of_phase_single_wave() {
        let p = RevivalPoint::from_theta(spec(rf(3, 2), rf(1, 2), None));
        let ts = TimeScales {
            tcl1: Some(1.0),
            tcl2: Some(3.0),
            trev1: Some(10.0),
            trev2: Some(30.0),
            trev12: None,
        };
        let waves = subsidiary_waves(&p, &ts);
        assert_eq!(waves.len(), 1);
        assert_eq!(
            (waves[0].shift_fraction1, waves[0].shift_fraction2),
            (rf(1, 2), rf(1, 2))
        );
        assert!(!waves[0].components_in_phase);
    }
}
