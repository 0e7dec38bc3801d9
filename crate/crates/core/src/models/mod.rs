//! Energy models on a two-quantum-number lattice, their derivatives at the
//! packet center, and the controlling time scales.

mod box2d;
pub mod finite_diff;
mod polynomial;
mod stark;

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::commensurability::ReducedFraction;
use crate::error::{Error, Result};

pub use box2d::Box2D;
pub use polynomial::Polynomial;
pub use stark::StarkHydrogen;

/// Central quantum numbers, index spacing and truncation window of a packet.
///
/// Effective indices are `κ = (n − nbar) / step`; all time scales are
/// defined with respect to them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Lattice {
    pub nbar1: i64,
    pub nbar2: i64,
    #[serde(default = "one")]
    pub step1: i64,
    #[serde(default = "one")]
    pub step2: i64,
    pub halfwidth1: i64,
    pub halfwidth2: i64,
}

fn one() -> i64 {
    1
}

impl Lattice {
    pub fn new(
        nbar1: i64,
        nbar2: i64,
        step1: i64,
        step2: i64,
        halfwidth1: i64,
        halfwidth2: i64,
    ) -> Result<Self> {
        let lattice = Self {
            nbar1,
            nbar2,
            step1,
            step2,
            halfwidth1,
            halfwidth2,
        };
        lattice.validate()?;
        Ok(lattice)
    }

    /// Unit-step lattice centered on `(nbar1, nbar2)`.
    pub fn centered(nbar1: i64, nbar2: i64, halfwidth: i64) -> Result<Self> {
        Self::new(nbar1, nbar2, 1, 1, halfwidth, halfwidth)
    }

    pub fn validate(&self) -> Result<()> {
        if self.step1 < 1 || self.step2 < 1 {
            return Err(Error::Parameter(format!(
                "lattice steps must be >= 1, got ({}, {})",
                self.step1, self.step2
            )));
        }
        if self.halfwidth1 < 1 || self.halfwidth2 < 1 {
            return Err(Error::Parameter(format!(
                "lattice halfwidths must be >= 1, got ({}, {})",
                self.halfwidth1, self.halfwidth2
            )));
        }
        Ok(())
    }

    /// Raw quantum numbers of the effective index pair.
    pub fn point(&self, k1: i64, k2: i64) -> (i64, i64) {
        (self.nbar1 + k1 * self.step1, self.nbar2 + k2 * self.step2)
    }

    pub fn center(&self) -> (i64, i64) {
        (self.nbar1, self.nbar2)
    }

    pub fn window1(&self) -> std::ops::RangeInclusive<i64> {
        -self.halfwidth1..=self.halfwidth1
    }

    pub fn window2(&self) -> std::ops::RangeInclusive<i64> {
        -self.halfwidth2..=self.halfwidth2
    }
}

/// Energy and its first and second partials at the packet center, all in
/// raw (not effective) quantum numbers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DerivativeSet {
    pub e0: f64,
    pub d1: f64,
    pub d2: f64,
    pub d11: f64,
    pub d22: f64,
    pub d12: f64,
    /// Whether the partials came from closed-form expressions.
    pub analytic: bool,
}

impl DerivativeSet {
    fn ensure_finite(self) -> Result<Self> {
        let all = [self.e0, self.d1, self.d2, self.d11, self.d22, self.d12];
        if all.iter().all(|v| v.is_finite()) {
            Ok(self)
        } else {
            Err(Error::Numeric(format!(
                "non-finite derivative set {self:?}"
            )))
        }
    }

    /// Second-order Taylor estimate of `E(n1, n2)` around the center.
    pub fn taylor2(&self, dn1: f64, dn2: f64) -> f64 {
        self.e0
            + self.d1 * dn1
            + self.d2 * dn2
            + 0.5 * self.d11 * dn1 * dn1
            + 0.5 * self.d22 * dn2 * dn2
            + self.d12 * dn1 * dn2
    }
}

/// Which controlling time scale a quantity refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScaleKind {
    Tcl1,
    Tcl2,
    Trev1,
    Trev2,
    Trev12,
}

impl ScaleKind {
    pub const ALL: [ScaleKind; 5] = [
        ScaleKind::Tcl1,
        ScaleKind::Tcl2,
        ScaleKind::Trev1,
        ScaleKind::Trev2,
        ScaleKind::Trev12,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ScaleKind::Tcl1 => "tcl1",
            ScaleKind::Tcl2 => "tcl2",
            ScaleKind::Trev1 => "trev1",
            ScaleKind::Trev2 => "trev2",
            ScaleKind::Trev12 => "trev12",
        }
    }
}

impl fmt::Display for ScaleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for ScaleKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ScaleKind::ALL
            .into_iter()
            .find(|k| k.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::Unknown {
                kind: "time scale",
                name: s.to_string(),
                known: "tcl1, tcl2, trev1, trev2, trev12".into(),
            })
    }
}

/// The five controlling time scales on the effective lattice.
///
/// Times are signed: a negative derivative yields a negative time. A scale
/// is `None` when its derivative vanishes (infinite period).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TimeScales {
    pub tcl1: Option<f64>,
    pub tcl2: Option<f64>,
    pub trev1: Option<f64>,
    pub trev2: Option<f64>,
    pub trev12: Option<f64>,
}

impl TimeScales {
    pub fn get(&self, kind: ScaleKind) -> Option<f64> {
        match kind {
            ScaleKind::Tcl1 => self.tcl1,
            ScaleKind::Tcl2 => self.tcl2,
            ScaleKind::Trev1 => self.trev1,
            ScaleKind::Trev2 => self.trev2,
            ScaleKind::Trev12 => self.trev12,
        }
    }

    /// Copy with the cross-revival time removed.
    pub fn without_cross(mut self) -> Self {
        self.trev12 = None;
        self
    }
}

/// Time scales expressed as exact rational multiples of per-group units,
/// available when a model's parameters are exact rationals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExactScales {
    /// `trev1, trev2, trev12` as multiples of one common unit.
    pub revival: [Option<ReducedFraction>; 3],
    /// `tcl1, tcl2` as multiples of one common unit.
    pub classical: [Option<ReducedFraction>; 2],
}

/// A spectrum `E(n1, n2)` depending on two quantum numbers.
pub trait EnergyModel: fmt::Debug + Send + Sync {
    /// Registry name of the variant.
    fn name(&self) -> &'static str;

    /// Energy at (possibly non-integer) quantum numbers. Finite differences
    /// evaluate off-lattice, so implementations must accept real arguments.
    fn energy_at(&self, n1: f64, n2: f64) -> Result<f64>;

    /// Closed-form partials at `(n1, n2)`, if the model has them.
    fn analytic_derivatives(&self, _n1: f64, _n2: f64) -> Option<Result<DerivativeSet>> {
        None
    }

    /// Exact rational time-scale ratios for this lattice, if available.
    fn exact_scales(&self, _lattice: &Lattice) -> Option<ExactScales> {
        None
    }

    /// Advisory validity check for a lattice point.
    fn check_point(&self, _n1: i64, _n2: i64) -> Result<()> {
        Ok(())
    }

    /// Parameters for reports.
    fn parameters(&self) -> serde_json::Value;
}

/// Exact model energy at integer quantum numbers.
pub fn energy(model: &dyn EnergyModel, n1: i64, n2: i64) -> Result<f64> {
    model.check_point(n1, n2)?;
    model.energy_at(n1 as f64, n2 as f64)
}

/// Partials at the lattice center: closed form for built-in models with one,
/// Richardson-extrapolated central differences otherwise.
pub fn derivatives(model: &dyn EnergyModel, lattice: &Lattice) -> Result<DerivativeSet> {
    let (n1, n2) = lattice.center();
    model.check_point(n1, n2)?;
    let (n1, n2) = (n1 as f64, n2 as f64);
    let set = match model.analytic_derivatives(n1, n2) {
        Some(set) => set?,
        None => finite_diff::derivatives(model, n1, n2)?,
    };
    set.ensure_finite()
}

/// Relative threshold under which numerically obtained derivatives count as
/// zero.
pub const NUMERIC_ZERO: f64 = 1e-12;

/// The five controlling time scales on the effective lattice.
pub fn timescales(d: &DerivativeSet, lattice: &Lattice) -> Result<TimeScales> {
    d.ensure_finite()?;
    lattice.validate()?;
    let s1 = lattice.step1 as f64;
    let s2 = lattice.step2 as f64;

    let (first_scale, second_scale) = if d.analytic {
        (0.0, 0.0)
    } else {
        (
            NUMERIC_ZERO * d.d1.abs().max(d.d2.abs()),
            NUMERIC_ZERO * d.d11.abs().max(d.d22.abs()).max(d.d12.abs()),
        )
    };
    let cross_scale = if d.analytic {
        0.0
    } else {
        NUMERIC_ZERO * d.d11.abs().max(d.d22.abs())
    };
    let period = |rate: f64, threshold: f64| {
        if rate == 0.0 || rate.abs() <= threshold {
            None
        } else {
            Some(2.0 * PI / rate)
        }
    };

    Ok(TimeScales {
        tcl1: period(s1 * d.d1, first_scale * s1),
        tcl2: period(s2 * d.d2, first_scale * s2),
        trev1: period(0.5 * s1 * s1 * d.d11, 0.5 * s1 * s1 * second_scale),
        trev2: period(0.5 * s2 * s2 * d.d22, 0.5 * s2 * s2 * second_scale),
        trev12: period(s1 * s2 * d.d12, s1 * s2 * cross_scale),
    })
}

/// Builds a model from JSON parameters.
pub type ModelConstructor = fn(&serde_json::Value) -> Result<Arc<dyn EnergyModel>>;

/// Name-indexed registry of energy-model constructors.
#[derive(Clone)]
pub struct ModelRegistry {
    entries: BTreeMap<&'static str, ModelConstructor>,
}

impl Default for ModelRegistry {
    fn default() -> Self {
        Self::with_builtins()
    }
}

impl ModelRegistry {
    pub fn empty() -> Self {
        Self {
            entries: BTreeMap::new(),
        }
    }

    /// Registry holding `box2d`, `stark` and `polynomial`.
    pub fn with_builtins() -> Self {
        let mut registry = Self::empty();
        registry.register("box2d", Box2D::from_params);
        registry.register("stark", StarkHydrogen::from_params);
        registry.register("polynomial", Polynomial::from_params);
        registry
    }

    pub fn register(&mut self, name: &'static str, ctor: ModelConstructor) {
        self.entries.insert(name, ctor);
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.entries.keys().copied()
    }

    pub fn build(&self, name: &str, params: &serde_json::Value) -> Result<Arc<dyn EnergyModel>> {
        let ctor = self.entries.get(name).ok_or_else(|| Error::Unknown {
            kind: "energy model",
            name: name.to_string(),
            known: self.names().collect::<Vec<_>>().join(", "),
        })?;
        ctor(params)
    }
}

impl fmt::Debug for ModelRegistry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.entries.keys()).finish()
    }
}

pub(crate) fn parse_params<T: serde::de::DeserializeOwned>(
    kind: &str,
    params: &serde_json::Value,
) -> Result<T> {
    serde_json::from_value(params.clone())
        .map_err(|e| Error::Parameter(format!("{kind} parameters: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn box_fig1() -> Box2D {
        Box2D::from_squared_lengths(
            ReducedFraction::new(3, 4).unwrap(),
            ReducedFraction::integer(1),
        )
        .unwrap()
    }

    #[test]
    fn box_energy_examples() {
        let unit = Box2D::new(1.0, 1.0).unwrap();
        assert_eq!(energy(&unit, 0, 0).unwrap(), 0.0);
        let e = energy(&box_fig1(), 18, 18).unwrap();
        let expected = 1512.0 * PI * PI;
        assert!((e - expected).abs() <= 1e-12 * expected);
    }

    #[test]
    fn stark_energy_example_and_domain() {
        let stark = StarkHydrogen::new(1e-6).unwrap();
        let e = energy(&stark, 18, 2).unwrap();
        let expected = -1.0 / 648.0 + 54e-6;
        assert!((e - expected).abs() <= 1e-15);
        assert!(matches!(stark.energy_at(0.0, 0.0), Err(Error::Domain(_))));
        assert!(matches!(energy(&stark, 0, 0), Err(Error::Domain(_))));
    }

    #[test]
    fn box_derivatives_exact() {
        let lattice = Lattice::centered(18, 18, 12).unwrap();
        let d = derivatives(&box_fig1(), &lattice).unwrap();
        assert!(d.analytic);
        assert_eq!(d.d12, 0.0);
        assert!((d.d11 - 16.0 * PI * PI / 3.0).abs() < 1e-12);
        assert!((d.d22 - 4.0 * PI * PI).abs() < 1e-12);
    }

    #[test]
    fn stark_mixed_partial() {
        let f = 2.5e-6;
        let stark = StarkHydrogen::new(f).unwrap();
        let lattice = Lattice::new(30, 3, 1, 2, 4, 4).unwrap();
        let d = derivatives(&stark, &lattice).unwrap();
        assert!((d.d12 - 1.5 * f).abs() < 1e-20);
    }

    #[test]
    fn linear_polynomial() {
        let poly = Polynomial::new([((1, 0), 1.0)]).unwrap();
        let lattice = Lattice::centered(5, 7, 3).unwrap();
        let d = derivatives(&poly, &lattice).unwrap();
        assert!(!d.analytic);
        assert!((d.d1 - 1.0).abs() < 1e-12);
        assert_eq!(d.d2, 0.0);
        assert!(d.d11.abs() < 1e-12 && d.d22.abs() < 1e-12 && d.d12.abs() < 1e-12);
        let ts = timescales(&d, &lattice).unwrap();
        assert!(ts.trev1.is_none() && ts.trev2.is_none() && ts.trev12.is_none());
        assert!(ts.tcl2.is_none());
        assert!((ts.tcl1.unwrap() - 2.0 * PI).abs() < 1e-9);
    }

    #[test]
    fn figure1_timescales() {
        let lattice = Lattice::centered(18, 18, 12).unwrap();
        let d = derivatives(&box_fig1(), &lattice).unwrap();
        let ts = timescales(&d, &lattice).unwrap();
        assert!((ts.trev1.unwrap() - 0.75 / PI).abs() < 1e-15);
        assert!((ts.trev2.unwrap() - 1.0 / PI).abs() < 1e-15);
        assert!((ts.tcl1.unwrap() - 1.0 / (48.0 * PI)).abs() < 1e-16);
        assert!(ts.trev12.is_none());
        assert!((ts.trev1.unwrap() - 0.2387).abs() < 1e-4);
        assert!((ts.tcl1.unwrap() - 0.00663).abs() < 1e-5);
    }

    #[test]
    fn stark_cross_time_on_stride_two_lattice() {
        let f = 1e-6;
        let stark = StarkHydrogen::new(f).unwrap();
        let lattice = Lattice::new(30, 1, 1, 2, 4, 4).unwrap();
        let d = derivatives(&stark, &lattice).unwrap();
        let ts = timescales(&d, &lattice).unwrap();
        let expected = 2.0 * PI / (3.0 * f);
        assert!((ts.trev12.unwrap() - expected).abs() <= 1e-12 * expected);
        // d22 vanishes identically for the first-order Stark formula
        assert!(ts.trev2.is_none());
        // d11 < 0: signed revival time
        assert!(ts.trev1.unwrap() < 0.0);
    }

    #[test]
    fn stride_scaling() {
        let model = Polynomial::new([
            ((2, 0), 1.3),
            ((0, 2), 0.7),
            ((1, 1), 0.2),
            ((0, 1), 3.0),
            ((1, 0), 2.0),
        ])
        .unwrap();
        let base = Lattice::new(4, 6, 1, 1, 3, 3).unwrap();
        let doubled = Lattice { step2: 2, ..base };
        let d = derivatives(&model, &base).unwrap();
        let a = timescales(&d, &base).unwrap();
        let b = timescales(&d, &doubled).unwrap();
        let close = |x: f64, y: f64| (x - y).abs() <= 1e-12 * x.abs();
        assert!(close(b.tcl2.unwrap(), a.tcl2.unwrap() / 2.0));
        assert!(close(b.trev2.unwrap(), a.trev2.unwrap() / 4.0));
        assert!(close(b.trev12.unwrap(), a.trev12.unwrap() / 2.0));
        assert!(close(b.trev1.unwrap(), a.trev1.unwrap()));
    }

    #[test]
    fn box_taylor_is_exact() {
        let model = Box2D::new(0.9, 1.7).unwrap();
        let lattice = Lattice::centered(18, 11, 12).unwrap();
        let d = derivatives(&model, &lattice).unwrap();
        for k1 in lattice.window1() {
            for k2 in lattice.window2() {
                let (n1, n2) = lattice.point(k1, k2);
                let exact = energy(&model, n1, n2).unwrap();
                let taylor = d.taylor2(k1 as f64, k2 as f64);
                assert!((exact - taylor).abs() <= 1e-12 * exact.abs().max(1.0));
            }
        }
    }

    #[test]
    fn registry_builds_and_rejects() {
        let registry = ModelRegistry::with_builtins();
        let m = registry
            .build(
                "box2d",
                &serde_json::json!({"l1_squared": "3/4", "l2_squared": 1}),
            )
            .unwrap();
        assert_eq!(m.name(), "box2d");
        let m = registry
            .build("stark", &serde_json::json!({"field": 1e-6}))
            .unwrap();
        assert_eq!(m.name(), "stark");
        assert!(matches!(
            registry.build("morse", &serde_json::json!({})),
            Err(Error::Unknown { .. })
        ));
        assert!(matches!(
            registry.build("box2d", &serde_json::json!({"l1": -1.0, "l2": 1.0})),
            Err(Error::Parameter(_))
        ));
    }

    #[test]
    fn lattice_validation() {
        assert!(Lattice::new(1, 1, 0, 1, 1, 1).is_err());
        assert!(Lattice::new(1, 1, 1, 1, 0, 1).is_err());
        let l = Lattice::new(10, 3, 1, 2, 2, 2).unwrap();
        assert_eq!(l.point(-1, 2), (9, 7));
    }
}
