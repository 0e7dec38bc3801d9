//! End-to-end evaluation of one configured scenario.

use std::fs;
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;
use serde_json::Value;

use revival_core::commensurability::{
    classical_beat_exact, revival_triple_exact, CommensurateTriple, Component,
};
use revival_core::fmt::round15;
use revival_core::models::ExactScales;
use revival_core::packet::{build_coefficients, uniform_grid};
use revival_core::revival::oracle::{check_point, PointCheck};
use revival_core::revival::subsidiary_waves;
use revival_core::revival::tune::{tune_parameter, TuneHit, TuneOptions};
use revival_core::{
    classical_beat, classify, derivatives, enumerate_fractimes, predict_autocorrelation,
    revival_triple, timescales, verify_expansion, AutocorrelationSeries, ClassicalBeat,
    CoefficientGrid, DerivativeSet, EnergyModel, EvolutionRegistry, FracTime, Lattice,
    ModelRegistry, PacketSpec, PhaseProvider, Propagator, ReducedFraction, RevivalPoint,
    TimeScales,
};

use crate::config::{Probe, ScenarioConfig, TuneConfig, DEFAULT_OUT_DIR};
use crate::error::{CliError, Result};
use crate::features::{find_peaks, probe, FeatureReport, ProbeValue};

/// How the revival-time ratios were obtained.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Commensurability {
    /// Exact rationals from the model parameters.
    Exact,
    /// Continued-fraction rationalization of floating-point ratios.
    Rationalized,
}

/// A configured scenario with its model, packet and evolution built.
pub struct Scenario {
    pub config: ScenarioConfig,
    pub model: Arc<dyn EnergyModel>,
    pub lattice: Lattice,
    pub derivs: DerivativeSet,
    pub ts: TimeScales,
    pub grid: CoefficientGrid,
    pub provider: Arc<dyn PhaseProvider>,
    propagator: Propagator,
    exact: Option<ExactScales>,
}

impl Scenario {
    pub fn new(config: ScenarioConfig) -> Result<Self> {
        let model =
            ModelRegistry::with_builtins().build(&config.model.kind, &config.model.params)?;
        let lattice = config.lattice;
        let derivs = derivatives(model.as_ref(), &lattice)?;
        let ts = timescales(&derivs, &lattice)?;
        let spec = PacketSpec::new(lattice, config.packet.sigma1, config.packet.sigma2)?;
        let grid = build_coefficients(&spec)?;
        let provider =
            EvolutionRegistry::with_builtins().build(&config.mode, &model, &lattice, &ts)?;
        let propagator = Propagator::new(&grid, provider.as_ref())?;
        let exact = model.exact_scales(&lattice);
        Ok(Self {
            config,
            model,
            lattice,
            derivs,
            ts,
            grid,
            provider,
            propagator,
            exact,
        })
    }

    pub fn name(&self) -> &str {
        self.config.name.as_deref().unwrap_or("scenario")
    }

    pub fn autocorrelation(&self, t: f64) -> Complex64 {
        self.propagator.autocorrelation(t)
    }

    pub fn triple(&self) -> Option<(CommensurateTriple, Commensurability)> {
        if let Some(t) = self.exact.as_ref().and_then(revival_triple_exact) {
            return Some((t, Commensurability::Exact));
        }
        let a = &self.config.analysis;
        revival_triple(&self.ts, a.max_den, a.tol).map(|t| (t, Commensurability::Rationalized))
    }

    pub fn classical_beat(&self) -> Option<ClassicalBeat> {
        if let Some(b) = self
            .exact
            .as_ref()
            .and_then(|e| classical_beat_exact(e, &self.ts))
        {
            return Some(b);
        }
        let a = &self.config.analysis;
        classical_beat(self.ts.tcl1?, self.ts.tcl2?, a.max_den, a.tol)
    }

    /// Largest relative mismatch between the floating-point revival-time
    /// ratios and the chosen rationals.
    pub fn ratio_residual(&self, triple: &CommensurateTriple) -> f64 {
        let Some(tb) = self.ts.get(triple.base.scale()) else {
            return 0.0;
        };
        Component::ALL
            .into_iter()
            .filter_map(|c| {
                let f = triple.get(c)?.to_f64();
                let t = self.ts.get(c.scale())?;
                Some(((t / tb - f) / f).abs())
            })
            .fold(0.0, f64::max)
    }

    pub fn tmax(&self) -> f64 {
        self.config
            .analysis
            .tmax
            .unwrap_or(self.config.time_grid.t_end)
    }

    pub fn fractimes(&self) -> Vec<FracTime> {
        match self.triple() {
            Some((triple, _)) => {
                enumerate_fractimes(&triple, &self.ts, self.config.analysis.qmax, self.tmax())
            }
            None => Vec::new(),
        }
    }

    pub fn revival_points(&self) -> Vec<RevivalPoint> {
        self.fractimes()
            .into_iter()
            .map(RevivalPoint::analyze)
            .collect()
    }

    /// Probe times with labels, in configuration order.
    pub fn probe_times(&self) -> Result<Vec<(String, f64)>> {
        self.config
            .analysis
            .probes
            .iter()
            .map(|p| match p {
                Probe::At(t) => Ok((format!("t={t}"), *t)),
                Probe::Time { t, label } => Ok((label.clone().unwrap_or(format!("t={t}")), *t)),
                Probe::Scaled {
                    fraction,
                    of,
                    label,
                } => {
                    let scale = self.ts.get(*of).ok_or_else(|| {
                        CliError::Numeric(format!(
                            "probe refers to absent time scale {}",
                            of.as_str()
                        ))
                    })?;
                    let t = fraction.to_f64() * scale.abs();
                    Ok((
                        label
                            .clone()
                            .unwrap_or(format!("{fraction} {}", of.as_str())),
                        t,
                    ))
                }
            })
            .collect()
    }

    /// The uniform grid, merged with probe and revival times inside it
    /// when `include_feature_times` is set.
    pub fn time_grid(&self) -> Result<Vec<f64>> {
        let g = &self.config.time_grid;
        let mut times = uniform_grid(g.t_start, g.t_end, g.samples);
        if self.config.analysis.include_feature_times {
            let inside = |t: f64| t >= g.t_start && t <= g.t_end;
            times.extend(
                self.probe_times()?
                    .into_iter()
                    .map(|(_, t)| t)
                    .filter(|&t| inside(t)),
            );
            times.extend(
                self.fractimes()
                    .into_iter()
                    .map(|f| f.t)
                    .filter(|&t| inside(t)),
            );
            times.sort_by(f64::total_cmp);
            times.dedup();
        }
        Ok(times)
    }

    pub fn series(&self) -> Result<AutocorrelationSeries> {
        Ok(self.propagator.sample_series(&self.time_grid()?))
    }

    pub fn feature_report(&self, series: &AutocorrelationSeries) -> Result<FeatureReport> {
        let threshold = self.config.analysis.peak_threshold;
        let plateaus = self
            .probe_times()?
            .into_iter()
            .map(|(label, t)| {
                Ok(ProbeValue {
                    label,
                    t,
                    abs2: probe(series, t)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(FeatureReport {
            threshold,
            peaks: find_peaks(series, threshold),
            plateaus,
        })
    }

    pub fn timescale_report(&self) -> TimescaleReport {
        let triple = self.triple();
        let ratio = |a, b| triple.as_ref().and_then(|(t, _)| t.ratio(a, b));
        TimescaleReport {
            scenario: self.name().to_string(),
            model: self.model.name(),
            parameters: self.model.parameters(),
            lattice: self.lattice,
            derivatives: self.derivs,
            time_scales: self.ts,
            trev1_over_trev2: ratio(Component::Trev1, Component::Trev2),
            trev1_over_trev12: ratio(Component::Trev1, Component::Trev12),
            commensurability: triple.map(|(_, c)| c),
            ratio_residual: triple.map(|(t, _)| self.ratio_residual(&t)),
            classical_beat: self.classical_beat(),
            warnings: self.lattice_warnings(),
        }
    }

    /// Lattice points the model flags as invalid.
    fn lattice_warnings(&self) -> Vec<String> {
        let mut bad = 0usize;
        let mut first = None;
        for k1 in self.lattice.window1() {
            for k2 in self.lattice.window2() {
                let (n1, n2) = self.lattice.point(k1, k2);
                if let Err(e) = self.model.check_point(n1, n2) {
                    bad += 1;
                    first.get_or_insert(e.to_string());
                }
            }
        }
        match first {
            Some(e) => vec![format!(
                "{bad} lattice points fail the model check, e.g. {e}"
            )],
            None => Vec::new(),
        }
    }

    pub fn revival_report(&self) -> RevivalReport {
        let triple = self.triple();
        let points = self
            .revival_points()
            .into_iter()
            .map(|point| {
                let t = point.frac.t;
                let class = classify(&point);
                PointReport {
                    t,
                    fractions: Fractions {
                        p1q1: point.frac.p1q1,
                        p2q2: point.frac.p2q2,
                        p12q12: point.frac.p12q12,
                    },
                    full_revival: point.frac.is_full_revival(),
                    l1: point.l1,
                    l2: point.l2,
                    n_waves: class.n_waves,
                    equal_norm: class.equal_norm,
                    separable: class.separable,
                    component_waves: class.component_waves,
                    residual: verify_expansion(&point),
                    abs2: self.autocorrelation(t).norm_sqr(),
                    abs2_predicted: predict_autocorrelation(&point, &self.grid, &self.ts, t)
                        .norm_sqr(),
                    subsidiary_waves: subsidiary_waves(&point, &self.ts)
                        .into_iter()
                        .map(|w| WaveReport {
                            s1: w.s1,
                            s2: w.s2,
                            weight: w.weight,
                            shift1: w.shift_fraction1,
                            shift2: w.shift_fraction2,
                            components_in_phase: w.components_in_phase,
                        })
                        .collect(),
                    coefficients: point.coeffs.as_pairs(),
                }
            })
            .collect();
        RevivalReport {
            scenario: self.name().to_string(),
            mode: self.provider.name(),
            time_scales: self.ts,
            triple: triple.map(|(t, _)| t),
            commensurability: triple.map(|(_, c)| c),
            ratio_residual: triple.map(|(t, _)| self.ratio_residual(&t)),
            classical_beat: self.classical_beat(),
            qmax: self.config.analysis.qmax,
            tmax: self.tmax(),
            points,
        }
    }

    /// Runs the full self-check on every enumerated point.
    pub fn verify(&self) -> VerifyReport {
        let checks: Vec<(f64, PointCheck)> = self
            .revival_points()
            .iter()
            .map(|p| (p.frac.t, check_point(p)))
            .collect();
        VerifyReport {
            points: checks.len(),
            max_residual: checks.iter().map(|(_, c)| c.residual).fold(0.0, f64::max),
            failures: checks.into_iter().filter(|(_, c)| !c.passes()).collect(),
        }
    }

    pub fn out_dir(&self, flag: Option<&Path>) -> PathBuf {
        match flag {
            Some(p) => p.to_path_buf(),
            None => PathBuf::from(self.config.output.dir.as_deref().unwrap_or(DEFAULT_OUT_DIR)),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TimescaleReport {
    pub scenario: String,
    pub model: &'static str,
    pub parameters: Value,
    pub lattice: Lattice,
    pub derivatives: DerivativeSet,
    pub time_scales: TimeScales,
    pub trev1_over_trev2: Option<ReducedFraction>,
    pub trev1_over_trev12: Option<ReducedFraction>,
    pub commensurability: Option<Commensurability>,
    pub ratio_residual: Option<f64>,
    pub classical_beat: Option<ClassicalBeat>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Fractions {
    pub p1q1: ReducedFraction,
    pub p2q2: ReducedFraction,
    pub p12q12: Option<ReducedFraction>,
}

#[derive(Debug, Clone, Serialize)]
pub struct WaveReport {
    pub s1: usize,
    pub s2: usize,
    pub weight: [f64; 2],
    /// Shifts as fractions of the classical periods.
    pub shift1: ReducedFraction,
    pub shift2: ReducedFraction,
    pub components_in_phase: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct PointReport {
    pub t: f64,
    pub fractions: Fractions,
    pub full_revival: bool,
    pub l1: i64,
    pub l2: i64,
    pub n_waves: usize,
    pub equal_norm: bool,
    pub separable: bool,
    pub component_waves: Option<(usize, usize)>,
    pub residual: f64,
    pub abs2: f64,
    pub abs2_predicted: f64,
    pub subsidiary_waves: Vec<WaveReport>,
    pub coefficients: Vec<Vec<[f64; 2]>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RevivalReport {
    pub scenario: String,
    pub mode: &'static str,
    pub time_scales: TimeScales,
    pub triple: Option<CommensurateTriple>,
    pub commensurability: Option<Commensurability>,
    pub ratio_residual: Option<f64>,
    pub classical_beat: Option<ClassicalBeat>,
    pub qmax: i64,
    pub tmax: f64,
    pub points: Vec<PointReport>,
}

#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub points: usize,
    pub max_residual: f64,
    pub failures: Vec<(f64, PointCheck)>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Tunes the configured family on the scenario lattice.
pub fn run_tune(
    lattice: &Lattice,
    tune: &TuneConfig,
    tol: f64,
    max_den: i64,
) -> Result<Vec<TuneHit>> {
    let (family, range, target) = tune.resolve()?;
    let options = TuneOptions {
        grid_points: tune.grid,
        max_den,
        triple_tol: tol,
        ..TuneOptions::default()
    };
    Ok(tune_parameter(
        family.as_ref(),
        lattice,
        range,
        &target,
        &options,
    )?)
}

/// JSON with every float rounded to 15 significant digits.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let v = serde_json::to_value(value).map_err(|e| CliError::Io(e.to_string()))?;
    let mut s =
        serde_json::to_string_pretty(&round_floats(v)).map_err(|e| CliError::Io(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn round_floats(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = round15(n.as_f64().expect("f64"));
            serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
        }
        Value::Array(items) => Value::Array(items.into_iter().map(round_floats).collect()),
        Value::Object(map) => {
            Value::Object(map.into_iter().map(|(k, v)| (k, round_floats(v))).collect())
        }
        other => other,
    }
}

/// Files written by [`run_scenario`].
#[derive(Debug, Clone)]
pub struct RunOutputs {
    pub series: PathBuf,
    pub revivals: PathBuf,
    pub features: PathBuf,
}

pub fn write_series(series: &AutocorrelationSeries, dir: &Path) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let path = dir.join("series.csv");
    series.write_csv(BufWriter::new(fs::File::create(&path)?))?;
    Ok(path)
}

pub fn write_json<T: Serialize>(value: &T, dir: &Path, name: &str) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let path = dir.join(name);
    fs::write(&path, to_json(value)?)?;
    Ok(path)
}

/// Evaluates the scenario and writes `series.csv`, `revivals.json` and
/// `features.json` into `dir`.
pub fn run_scenario(config: ScenarioConfig, dir: &Path) -> Result<RunOutputs> {
    let scenario = Scenario::new(config)?;
    let series = scenario.series()?;
    let features = scenario.feature_report(&series)?;
    let revivals = scenario.revival_report();
    Ok(RunOutputs {
        series: write_series(&series, dir)?,
        revivals: write_json(&revivals, dir, "revivals.json")?,
        features: write_json(&features, dir, "features.json")?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{LoadedConfig, Overrides};

    fn preset(name: &str, samples: usize) -> Scenario {
        let o = Overrides {
            samples: Some(samples),
            ..Default::default()
        };
        Scenario::new(LoadedConfig::from_preset(name, &o).unwrap().config).unwrap()
    }

    #[test]
    fn figure1_scales_and_triple() {
        let s = preset("figure1", 64);
        let r = s.timescale_report();
        assert!((s.ts.trev1.unwrap() - 0.75 / std::f64::consts::PI).abs() < 1e-12);
        assert_eq!(
            r.trev1_over_trev2,
            Some(ReducedFraction::new(3, 4).unwrap())
        );
        assert_eq!(r.commensurability, Some(Commensurability::Exact));
        assert!(s.ts.trev12.is_none());
    }

    #[test]
    fn merged_grid_contains_probe_times() {
        let s = preset("figure1", 16);
        let grid = s.time_grid().unwrap();
        for (_, t) in s.probe_times().unwrap() {
            assert!(grid.contains(&t));
        }
        assert!(grid.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn stark_is_rationalized_with_cross_term() {
        let s = preset("stark", 32);
        let r = s.timescale_report();
        assert!(s.ts.trev2.is_none());
        assert!(s.ts.trev12.is_some());
        assert_eq!(r.commensurability, Some(Commensurability::Rationalized));
        assert!(r.warnings.is_empty());
        assert_eq!(
            r.trev1_over_trev12.map(|f| f.abs()),
            Some(ReducedFraction::new(1, 2).unwrap())
        );
        assert!(s.verify().passed());
    }

    #[test]
    fn rounding_is_applied_recursively() {
        let v = serde_json::json!({"a": [0.1 + 0.2, {"b": 1.0 / 3.0}], "c": 2});
        let s = to_json(&v).unwrap();
        assert!(s.contains("0.3"));
        assert!(!s.contains("0.30000000000000004"));
        assert!(s.contains("0.333333333333333"));
        assert!(!s.contains("0.3333333333333333"));
    }
}
