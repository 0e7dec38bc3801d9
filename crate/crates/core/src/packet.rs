//! Weighted superpositions, their phase evolution and the autocorrelation
//! function.
//!
//! The eigenstates are orthonormal, so every overlap reduces to a sum over
//! the coefficient grid; no position-space integrals are needed.

use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::fmt;
use std::io::{self, Write};
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fmt::{round15, sig15};
use crate::models::{derivatives, timescales, EnergyModel, Lattice, TimeScales};

/// Default Gaussian width in effective index units.
pub const DEFAULT_SIGMA: f64 = 2.5;
/// Default truncation halfwidth.
pub const DEFAULT_HALFWIDTH: i64 = 12;

/// Lattice plus Gaussian widths of `|c|²` in each effective index.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PacketSpec {
    pub lattice: Lattice,
    pub sigma1: f64,
    pub sigma2: f64,
}

impl PacketSpec {
    /// Requires `halfwidth_i >= ceil(4 σ_i)`, which keeps the discarded
    /// weight below 1e-6.
    pub fn new(lattice: Lattice, sigma1: f64, sigma2: f64) -> Result<Self> {
        lattice.validate()?;
        for (i, (sigma, halfwidth)) in [(sigma1, lattice.halfwidth1), (sigma2, lattice.halfwidth2)]
            .into_iter()
            .enumerate()
        {
            if !(sigma > 0.0 && sigma.is_finite()) {
                return Err(Error::Parameter(format!(
                    "sigma{} must be positive, got {sigma}",
                    i + 1
                )));
            }
            let needed = (4.0 * sigma).ceil() as i64;
            if halfwidth < needed {
                return Err(Error::Parameter(format!(
                    "halfwidth{} = {halfwidth} is below ceil(4 sigma{}) = {needed}",
                    i + 1,
                    i + 1
                )));
            }
        }
        Ok(Self {
            lattice,
            sigma1,
            sigma2,
        })
    }
}

/// Normalized complex weights `c_{κ1 κ2}` over the truncation window,
/// stored row-major with `κ1` outer.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientGrid {
    lattice: Lattice,
    weights: Vec<Complex64>,
    /// Norm before normalization.
    pub norm: f64,
}

impl CoefficientGrid {
    fn dims(lattice: &Lattice) -> (usize, usize) {
        (
            (2 * lattice.halfwidth1 + 1) as usize,
            (2 * lattice.halfwidth2 + 1) as usize,
        )
    }

    /// Normalizes arbitrary weights; missing window entries are zero.
    pub fn from_weights(
        lattice: Lattice,
        weights: &BTreeMap<(i64, i64), Complex64>,
    ) -> Result<Self> {
        lattice.validate()?;
        let (n1, n2) = Self::dims(&lattice);
        let mut data = vec![Complex64::new(0.0, 0.0); n1 * n2];
        for (&(k1, k2), &c) in weights {
            if k1.abs() > lattice.halfwidth1 || k2.abs() > lattice.halfwidth2 {
                return Err(Error::Parameter(format!(
                    "weight at ({k1}, {k2}) lies outside the window"
                )));
            }
            data[(k1 + lattice.halfwidth1) as usize * n2 + (k2 + lattice.halfwidth2) as usize] = c;
        }
        Self::normalized(lattice, data)
    }

    fn normalized(lattice: Lattice, mut data: Vec<Complex64>) -> Result<Self> {
        let norm = data.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::Numeric(format!(
                "cannot normalize weights with norm {norm}"
            )));
        }
        data.iter_mut().for_each(|c| *c /= norm);
        Ok(Self {
            lattice,
            weights: data,
            norm,
        })
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    /// Weight at effective indices, zero outside the window.
    pub fn weight(&self, k1: i64, k2: i64) -> Complex64 {
        let l = &self.lattice;
        if k1.abs() > l.halfwidth1 || k2.abs() > l.halfwidth2 {
            return Complex64::new(0.0, 0.0);
        }
        let (_, n2) = Self::dims(l);
        self.weights[(k1 + l.halfwidth1) as usize * n2 + (k2 + l.halfwidth2) as usize]
    }

    /// `(κ1, κ2, c)` over the window, κ1 outer.
    pub fn iter(&self) -> impl Iterator<Item = (i64, i64, Complex64)> + '_ {
        let l = self.lattice;
        let (_, n2) = Self::dims(&l);
        self.weights.iter().enumerate().map(move |(i, &c)| {
            (
                (i / n2) as i64 - l.halfwidth1,
                (i % n2) as i64 - l.halfwidth2,
                c,
            )
        })
    }

    pub fn total_probability(&self) -> f64 {
        self.weights.iter().map(|c| c.norm_sqr()).sum()
    }
}

/// Product-Gaussian grid: `|c^{(i)}_κ|² ∝ exp(−κ²/(2σ_i²))`, amplitudes real
/// and positive, jointly normalized.
pub fn build_coefficients(spec: &PacketSpec) -> Result<CoefficientGrid> {
    let spec = PacketSpec::new(spec.lattice, spec.sigma1, spec.sigma2)?;
    let l = spec.lattice;
    let amplitude = |k: i64, sigma: f64| (-((k * k) as f64) / (4.0 * sigma * sigma)).exp();
    let c1: Vec<f64> = l.window1().map(|k| amplitude(k, spec.sigma1)).collect();
    let c2: Vec<f64> = l.window2().map(|k| amplitude(k, spec.sigma2)).collect();
    let data = c1
        .iter()
        .flat_map(|a| c2.iter().map(move |b| Complex64::new(a * b, 0.0)))
        .collect();
    CoefficientGrid::normalized(l, data)
}

/// A rule assigning each lattice component its phase rate, so that the
/// component evolves as `exp(−i ω t)`.
pub trait PhaseProvider: fmt::Debug + Send + Sync {
    fn name(&self) -> &'static str;

    /// `ω(κ1, κ2)` in radians per unit time.
    fn angular_frequency(&self, k1: i64, k2: i64) -> Result<f64>;
}

/// Exact model energies with the center energy removed.
#[derive(Debug, Clone)]
pub struct ExactPhase {
    model: Arc<dyn EnergyModel>,
    lattice: Lattice,
    e_center: f64,
}

impl ExactPhase {
    pub fn new(model: Arc<dyn EnergyModel>, lattice: Lattice) -> Result<Self> {
        let (n1, n2) = lattice.center();
        let e_center = crate::models::energy(model.as_ref(), n1, n2)?;
        Ok(Self {
            model,
            lattice,
            e_center,
        })
    }
}

impl PhaseProvider for ExactPhase {
    fn name(&self) -> &'static str {
        "exact"
    }

    fn angular_frequency(&self, k1: i64, k2: i64) -> Result<f64> {
        let (n1, n2) = self.lattice.point(k1, k2);
        Ok(crate::models::energy(self.model.as_ref(), n1, n2)? - self.e_center)
    }
}

/// Taylor-truncated phase built from the five time scales; absent scales
/// drop their term.
#[derive(Debug, Clone, Copy)]
pub struct SecondOrderPhase {
    ts: TimeScales,
    include_second_order: bool,
}

impl SecondOrderPhase {
    pub fn new(ts: TimeScales) -> Self {
        Self {
            ts,
            include_second_order: true,
        }
    }

    /// Only the classical-period terms; reproduces `ψ_cl(t, t)`.
    pub fn first_order_only(ts: TimeScales) -> Self {
        Self {
            ts,
            include_second_order: false,
        }
    }
}

fn rate(period: Option<f64>) -> f64 {
    period.map_or(0.0, |p| 1.0 / p)
}

impl PhaseProvider for SecondOrderPhase {
    fn name(&self) -> &'static str {
        if self.include_second_order {
            "second-order"
        } else {
            "first-order"
        }
    }

    fn angular_frequency(&self, k1: i64, k2: i64) -> Result<f64> {
        let (k1, k2) = (k1 as f64, k2 as f64);
        let ts = &self.ts;
        let mut cycles = k1 * rate(ts.tcl1) + k2 * rate(ts.tcl2);
        if self.include_second_order {
            cycles +=
                k1 * k1 * rate(ts.trev1) + k2 * k2 * rate(ts.trev2) + k1 * k2 * rate(ts.trev12);
        }
        Ok(TAU * cycles)
    }
}

/// Phase of component `(κ1, κ2)` at time `t`, reduced to `[0, 2π)`.
pub fn phase(provider: &dyn PhaseProvider, k1: i64, k2: i64, t: f64) -> Result<f64> {
    Ok((provider.angular_frequency(k1, k2)? * t).rem_euclid(TAU))
}

/// Builds a phase provider from a model, lattice and its time scales.
pub type EvolutionConstructor =
    fn(&Arc<dyn EnergyModel>, &Lattice, &TimeScales) -> Result<Arc<dyn PhaseProvider>>;

/// Name-indexed registry of evolution rules (`exact`, `second-order`, ...).
#[derive(Clone)]
pub struct EvolutionRegistry {
    entries: BTreeMap<&'static str, EvolutionConstructor>,
}

impl Default for EvolutionRegistry {
    fn default() -> Self {
        Self::with_builtins()
    }
}

impl EvolutionRegistry {
    pub fn empty() -> Self {
        Self {
            entries: BTreeMap::new(),
        }
    }

    pub fn with_builtins() -> Self {
        let mut registry = Self::empty();
        registry.register("exact", |model, lattice, _| {
            Ok(Arc::new(ExactPhase::new(model.clone(), *lattice)?))
        });
        registry.register("second-order", |_, _, ts| {
            Ok(Arc::new(SecondOrderPhase::new(*ts)))
        });
        registry.register("first-order", |_, _, ts| {
            Ok(Arc::new(SecondOrderPhase::first_order_only(*ts)))
        });
        registry
    }

    pub fn register(&mut self, name: &'static str, ctor: EvolutionConstructor) {
        self.entries.insert(name, ctor);
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.entries.keys().copied()
    }

    /// Accepts `second_order` as a spelling of `second-order`.
    pub fn build(
        &self,
        name: &str,
        model: &Arc<dyn EnergyModel>,
        lattice: &Lattice,
        ts: &TimeScales,
    ) -> Result<Arc<dyn PhaseProvider>> {
        let key = name.replace('_', "-");
        let ctor = self
            .entries
            .get(key.as_str())
            .ok_or_else(|| Error::Unknown {
                kind: "evolution mode",
                name: name.to_string(),
                known: self.names().collect::<Vec<_>>().join(", "),
            })?;
        ctor(model, lattice, ts)
    }
}

impl fmt::Debug for EvolutionRegistry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.entries.keys()).finish()
    }
}

/// Probabilities and phase rates of a packet, precomputed for repeated
/// evaluation of `A(t)`.
#[derive(Debug, Clone)]
pub struct Propagator {
    probabilities: Vec<f64>,
    frequencies: Vec<f64>,
}

impl Propagator {
    pub fn new(grid: &CoefficientGrid, provider: &dyn PhaseProvider) -> Result<Self> {
        let mut probabilities = Vec::new();
        let mut frequencies = Vec::new();
        for (k1, k2, c) in grid.iter() {
            let p = c.norm_sqr();
            if p == 0.0 {
                continue;
            }
            let w = provider.angular_frequency(k1, k2)?;
            if !w.is_finite() {
                return Err(Error::Numeric(format!(
                    "non-finite phase rate at ({k1}, {k2})"
                )));
            }
            probabilities.push(p);
            frequencies.push(w);
        }
        Ok(Self {
            probabilities,
            frequencies,
        })
    }

    /// `A(t) = Σ |c|² exp(−i ω t)`.
    pub fn autocorrelation(&self, t: f64) -> Complex64 {
        let (mut re, mut im) = (0.0, 0.0);
        for (p, w) in self.probabilities.iter().zip(&self.frequencies) {
            let (s, c) = (w * t).sin_cos();
            re += p * c;
            im -= p * s;
        }
        Complex64::new(re, im)
    }

    /// Samples `A(t)` in parallel; output order follows `times`.
    pub fn sample_series(&self, times: &[f64]) -> AutocorrelationSeries {
        let values: Vec<Complex64> = times.par_iter().map(|&t| self.autocorrelation(t)).collect();
        AutocorrelationSeries::new(times.to_vec(), values)
    }
}

/// One-shot autocorrelation at a single time.
pub fn autocorrelation(
    grid: &CoefficientGrid,
    provider: &dyn PhaseProvider,
    t: f64,
) -> Result<Complex64> {
    Ok(Propagator::new(grid, provider)?.autocorrelation(t))
}

/// Element-wise autocorrelation over `times`.
pub fn sample_series(
    grid: &CoefficientGrid,
    provider: &dyn PhaseProvider,
    times: &[f64],
) -> Result<AutocorrelationSeries> {
    Ok(Propagator::new(grid, provider)?.sample_series(times))
}

/// `⟨Ψ(0)|ψ_cl(t1, t2)⟩ = Σ |c|² exp(−2πi(κ1 t1/T1 + κ2 t2/T2))`. An absent
/// classical period freezes that index.
pub fn classical_overlap(grid: &CoefficientGrid, ts: &TimeScales, t1: f64, t2: f64) -> Complex64 {
    let x1 = ts.tcl1.map_or(0.0, |p| t1 / p);
    let x2 = ts.tcl2.map_or(0.0, |p| t2 / p);
    let (mut re, mut im) = (0.0, 0.0);
    for (k1, k2, c) in grid.iter() {
        let p = c.norm_sqr();
        if p == 0.0 {
            continue;
        }
        let (s, co) = (TAU * (k1 as f64 * x1 + k2 as f64 * x2)).sin_cos();
        re += p * co;
        im -= p * s;
    }
    Complex64::new(re, im)
}

/// Convenience: derivatives, time scales and provider for a model.
pub fn provider_for(
    registry: &EvolutionRegistry,
    mode: &str,
    model: &Arc<dyn EnergyModel>,
    lattice: &Lattice,
) -> Result<(TimeScales, Arc<dyn PhaseProvider>)> {
    let d = derivatives(model.as_ref(), lattice)?;
    let ts = timescales(&d, lattice)?;
    let provider = registry.build(mode, model, lattice, &ts)?;
    Ok((ts, provider))
}

/// Sampled `A(t)` with `|A(t)|²`.
#[derive(Debug, Clone, PartialEq)]
pub struct AutocorrelationSeries {
    pub times: Vec<f64>,
    pub values: Vec<Complex64>,
    pub abs2: Vec<f64>,
}

impl AutocorrelationSeries {
    pub fn new(times: Vec<f64>, values: Vec<Complex64>) -> Self {
        let abs2 = values.iter().map(|a| a.norm_sqr()).collect();
        Self {
            times,
            values,
            abs2,
        }
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|a| a.norm()).fold(0.0, f64::max)
    }

    /// CSV with header `t,re_A,im_A,abs2`, 15 significant digits.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "t,re_A,im_A,abs2")?;
        for ((t, a), abs2) in self.times.iter().zip(&self.values).zip(&self.abs2) {
            writeln!(
                out,
                "{},{},{},{}",
                sig15(*t),
                sig15(a.re),
                sig15(a.im),
                sig15(*abs2)
            )?;
        }
        Ok(())
    }

    /// JSON array of `{t, re_A, im_A, abs2}` objects with the same values
    /// as the CSV.
    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<_> = self
            .times
            .iter()
            .zip(&self.values)
            .zip(&self.abs2)
            .map(|((t, a), abs2)| {
                serde_json::json!({
                    "t": round15(*t),
                    "re_A": round15(a.re),
                    "im_A": round15(a.im),
                    "abs2": round15(*abs2),
                })
            })
            .collect();
        serde_json::Value::Array(rows)
    }
}

/// `n` uniform samples on `[start, end]`, endpoints included.
pub fn uniform_grid(start: f64, end: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![start],
        _ => {
            let step = (end - start) / (n - 1) as f64;
            (0..n)
                .map(|i| {
                    if i == n - 1 {
                        end
                    } else {
                        start + step * i as f64
                    }
                })
                .collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::commensurability::ReducedFraction;
    use crate::models::Box2D;
    use std::f64::consts::PI;

    fn fig1() -> (Arc<dyn EnergyModel>, Lattice) {
        let model: Arc<dyn EnergyModel> = Arc::new(
            Box2D::from_squared_lengths(ReducedFraction::new(3, 4).unwrap(), ReducedFraction::ONE)
                .unwrap(),
        );
        (model, Lattice::centered(18, 18, 12).unwrap())
    }

    fn default_grid(lattice: Lattice) -> CoefficientGrid {
        build_coefficients(&PacketSpec::new(lattice, DEFAULT_SIGMA, DEFAULT_SIGMA).unwrap())
            .unwrap()
    }

    #[test]
    fn coefficients_normalized_and_symmetric() {
        let grid = default_grid(Lattice::centered(18, 18, 12).unwrap());
        assert!((grid.total_probability() - 1.0).abs() <= 1e-12);
        for (k1, k2, c) in grid.iter() {
            assert_eq!(c.im, 0.0);
            assert!(c.re > 0.0);
            assert!((c - grid.weight(k2, k1)).norm() <= 1e-15);
        }
    }

    #[test]
    fn coefficients_factorize() {
        let lattice = Lattice::new(10, 10, 1, 1, 8, 12).unwrap();
        let grid = build_coefficients(&PacketSpec::new(lattice, 1.5, 3.0).unwrap()).unwrap();
        let c00 = grid.weight(0, 0).re;
        for (k1, k2, c) in grid.iter() {
            let product = grid.weight(k1, 0).re * grid.weight(0, k2).re / c00;
            assert!((c.re - product).abs() <= 1e-15);
        }
    }

    #[test]
    fn gaussian_tail_weight() {
        let lattice = Lattice::new(10, 10, 1, 1, 8, 8).unwrap();
        let grid = build_coefficients(&PacketSpec::new(lattice, 1.5, 1.5).unwrap()).unwrap();
        let peak = grid.weight(0, 0).norm_sqr();
        let edge = grid.weight(8, 0).norm_sqr();
        let bound = (-64.0_f64 / 4.5).exp();
        assert!((bound - 6.6e-7).abs() < 1e-8);
        assert!(edge / peak <= bound * (1.0 + 1e-12));
    }

    #[test]
    fn spec_validation() {
        let lattice = Lattice::centered(18, 18, 12).unwrap();
        assert!(matches!(
            PacketSpec::new(lattice, 0.0, 1.0),
            Err(Error::Parameter(_))
        ));
        assert!(matches!(
            PacketSpec::new(lattice, -1.0, 1.0),
            Err(Error::Parameter(_))
        ));
        assert!(matches!(
            PacketSpec::new(lattice, 3.5, 1.0),
            Err(Error::Parameter(_))
        ));
        assert!(PacketSpec::new(lattice, 3.0, 3.0).is_ok());
    }

    #[test]
    fn phase_examples() {
        let (model, lattice) = fig1();
        let registry = EvolutionRegistry::with_builtins();
        let (ts, exact) = provider_for(&registry, "exact", &model, &lattice).unwrap();
        let second = registry
            .build("second_order", &model, &lattice, &ts)
            .unwrap();
        for k1 in lattice.window1() {
            for k2 in lattice.window2() {
                assert_eq!(phase(exact.as_ref(), k1, k2, 0.0).unwrap(), 0.0);
                let a = phase(exact.as_ref(), k1, k2, 1.0).unwrap();
                let b = phase(second.as_ref(), k1, k2, 1.0).unwrap();
                let diff = (a - b).rem_euclid(TAU);
                assert!(diff.min(TAU - diff) <= 1e-9, "({k1},{k2}): {a} vs {b}");
            }
        }
        let first = SecondOrderPhase::first_order_only(ts);
        let p = phase(&first, 1, 0, ts.tcl1.unwrap()).unwrap();
        assert!(p.min(TAU - p) <= 1e-12);
    }

    #[test]
    fn autocorrelation_at_zero_is_one() {
        let (model, lattice) = fig1();
        let (_, exact) =
            provider_for(&EvolutionRegistry::default(), "exact", &model, &lattice).unwrap();
        let grid = default_grid(lattice);
        let a = autocorrelation(&grid, exact.as_ref(), 0.0).unwrap();
        assert!((a - Complex64::new(1.0, 0.0)).norm() <= 1e-15);
    }

    #[test]
    fn figure1_revival_and_cancellation() {
        let (model, lattice) = fig1();
        let (ts, exact) =
            provider_for(&EvolutionRegistry::default(), "exact", &model, &lattice).unwrap();
        let prop = Propagator::new(&default_grid(lattice), exact.as_ref()).unwrap();
        assert!((prop.autocorrelation(3.0 / PI).norm_sqr() - 1.0).abs() <= 1e-9);
        let trev1 = ts.trev1.unwrap();
        assert!(prop.autocorrelation(2.0 * trev1).norm_sqr() <= 0.02);
        assert!((prop.autocorrelation(trev1).norm_sqr() - 0.5).abs() <= 0.05);
    }

    #[test]
    fn classical_overlap_basics() {
        let (model, lattice) = fig1();
        let ts =
            crate::models::timescales(&derivatives(model.as_ref(), &lattice).unwrap(), &lattice)
                .unwrap();
        let grid = default_grid(lattice);
        assert!((classical_overlap(&grid, &ts, 0.0, 0.0) - 1.0).norm() <= 1e-15);
        let t1 = 0.123;
        let a = classical_overlap(&grid, &ts, t1, 0.04);
        let b = classical_overlap(&grid, &ts, t1 + ts.tcl1.unwrap(), 0.04);
        assert!((a - b).norm() <= 1e-12);
        let half = classical_overlap(&grid, &ts, ts.tcl1.unwrap() / 2.0, 0.0);
        assert!(half.norm() < 1e-6);
    }

    #[test]
    fn first_order_matches_classical_overlap() {
        let (model, lattice) = fig1();
        let d = derivatives(model.as_ref(), &lattice).unwrap();
        let ts = crate::models::timescales(&d, &lattice).unwrap();
        let grid = default_grid(lattice);
        let prop = Propagator::new(&grid, &SecondOrderPhase::first_order_only(ts)).unwrap();
        for &t in &[0.0, 0.001, 0.0371, 0.5] {
            let a = prop.autocorrelation(t);
            let b = classical_overlap(&grid, &ts, t, t);
            assert!((a - b).norm() <= 1e-12, "t = {t}: {a} vs {b}");
        }
    }

    #[test]
    fn series_is_pure_and_serializes() {
        let (model, lattice) = fig1();
        let (_, exact) =
            provider_for(&EvolutionRegistry::default(), "exact", &model, &lattice).unwrap();
        let grid = default_grid(lattice);
        let times = uniform_grid(0.0, 0.2, 17);
        let series = sample_series(&grid, exact.as_ref(), &times).unwrap();
        let reversed: Vec<f64> = times.iter().rev().copied().collect();
        let back = sample_series(&grid, exact.as_ref(), &reversed).unwrap();
        for (i, v) in series.values.iter().enumerate() {
            assert_eq!(*v, back.values[times.len() - 1 - i]);
        }
        let single = sample_series(&grid, exact.as_ref(), &[0.0]).unwrap();
        assert!((single.abs2[0] - 1.0).abs() < 1e-15);

        let mut csv = Vec::new();
        series.write_csv(&mut csv).unwrap();
        let text = String::from_utf8(csv).unwrap();
        assert!(text.starts_with("t,re_A,im_A,abs2\n0,1,0,1\n"));
        assert_eq!(text.lines().count(), 18);
        let json = series.to_json();
        assert_eq!(json.as_array().unwrap().len(), 17);
    }

    #[test]
    fn uniform_grid_endpoints() {
        let g = uniform_grid(0.0, 1.0, 4096);
        assert_eq!(g.len(), 4096);
        assert_eq!(g[0], 0.0);
        assert_eq!(g[4095], 1.0);
        assert!(uniform_grid(0.0, 1.0, 0).is_empty());
    }
}
