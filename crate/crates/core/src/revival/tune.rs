//! Tuning a model parameter until its time scales hit a target.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::commensurability::{revival_triple, CommensurateTriple, ReducedFraction};
use crate::error::{Error, Result};
use crate::models::{
    derivatives, timescales, Box2D, EnergyModel, Lattice, ScaleKind, StarkHydrogen,
};

/// A one-parameter family of energy models.
pub trait ParameterFamily: fmt::Debug + Send + Sync {
    fn name(&self) -> &'static str;
    fn parameter_name(&self) -> &'static str;
    fn model(&self, value: f64) -> Result<Arc<dyn EnergyModel>>;
}

/// Box with one side length free and the other fixed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoxLength {
    /// 1 or 2: which side is tuned.
    pub side: u8,
    pub fixed: f64,
}

impl ParameterFamily for BoxLength {
    fn name(&self) -> &'static str {
        if self.side == 1 {
            "box2d-l1"
        } else {
            "box2d-l2"
        }
    }

    fn parameter_name(&self) -> &'static str {
        if self.side == 1 {
            "l1"
        } else {
            "l2"
        }
    }

    fn model(&self, value: f64) -> Result<Arc<dyn EnergyModel>> {
        let model = if self.side == 1 {
            Box2D::new(value, self.fixed)?
        } else {
            Box2D::new(self.fixed, value)?
        };
        Ok(Arc::new(model))
    }
}

/// Stark hydrogen with the field strength free.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StarkField;

impl ParameterFamily for StarkField {
    fn name(&self) -> &'static str {
        "stark-field"
    }

    fn parameter_name(&self) -> &'static str {
        "field"
    }

    fn model(&self, value: f64) -> Result<Arc<dyn EnergyModel>> {
        Ok(Arc::new(StarkHydrogen::new(value)?))
    }
}

pub type FamilyConstructor = fn(&serde_json::Value) -> Result<Arc<dyn ParameterFamily>>;

/// Name-indexed registry of tunable families.
#[derive(Clone)]
pub struct FamilyRegistry {
    entries: BTreeMap<&'static str, FamilyConstructor>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FixedSide {
    #[serde(alias = "l2", alias = "l1")]
    fixed: f64,
}

impl Default for FamilyRegistry {
    fn default() -> Self {
        Self::with_builtins()
    }
}

impl FamilyRegistry {
    pub fn empty() -> Self {
        Self {
            entries: BTreeMap::new(),
        }
    }

    pub fn with_builtins() -> Self {
        let mut registry = Self::empty();
        registry.register("box2d-l1", |p| {
            let p: FixedSide = crate::models::parse_params("box2d-l1", p)?;
            Ok(Arc::new(BoxLength {
                side: 1,
                fixed: p.fixed,
            }))
        });
        registry.register("box2d-l2", |p| {
            let p: FixedSide = crate::models::parse_params("box2d-l2", p)?;
            Ok(Arc::new(BoxLength {
                side: 2,
                fixed: p.fixed,
            }))
        });
        registry.register("stark-field", |_| Ok(Arc::new(StarkField)));
        registry
    }

    pub fn register(&mut self, name: &'static str, ctor: FamilyConstructor) {
        self.entries.insert(name, ctor);
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.entries.keys().copied()
    }

    pub fn build(
        &self,
        name: &str,
        params: &serde_json::Value,
    ) -> Result<Arc<dyn ParameterFamily>> {
        let ctor = self.entries.get(name).ok_or_else(|| Error::Unknown {
            kind: "parameter family",
            name: name.to_string(),
            known: self.names().collect::<Vec<_>>().join(", "),
        })?;
        ctor(params)
    }
}

impl fmt::Debug for FamilyRegistry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.entries.keys()).finish()
    }
}

/// What the tuned time scales should satisfy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum TuneTarget {
    /// `|numerator| / |denominator| = value`.
    Ratio {
        numerator: ScaleKind,
        denominator: ScaleKind,
        value: ReducedFraction,
    },
    /// `|scale| = value`.
    Time { scale: ScaleKind, value: f64 },
}

impl FromStr for TuneTarget {
    type Err = Error;

    /// `trev1/trev2=3/4` or `trev12=2.5e5`.
    fn from_str(s: &str) -> Result<Self> {
        let (lhs, rhs) = s.split_once('=').ok_or_else(|| {
            Error::Parameter(format!(
                "target `{s}` must look like `trev1/trev2=3/4` or `trev12=1e5`"
            ))
        })?;
        match lhs.split_once('/') {
            Some((a, b)) => Ok(TuneTarget::Ratio {
                numerator: a.parse()?,
                denominator: b.parse()?,
                value: rhs.parse()?,
            }),
            None => {
                let value: f64 = rhs
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parameter(format!("bad target time `{rhs}`")))?;
                if !(value > 0.0 && value.is_finite()) {
                    return Err(Error::Parameter(format!(
                        "target time must be positive, got {value}"
                    )));
                }
                Ok(TuneTarget::Time {
                    scale: lhs.parse()?,
                    value,
                })
            }
        }
    }
}

impl TuneTarget {
    /// Signed mismatch: absolute for ratios, relative for times. `None`
    /// when a needed scale is absent.
    fn residual(&self, ts: &crate::models::TimeScales) -> Option<f64> {
        match *self {
            TuneTarget::Ratio {
                numerator,
                denominator,
                value,
            } => Some(ts.get(numerator)?.abs() / ts.get(denominator)?.abs() - value.to_f64()),
            TuneTarget::Time { scale, value } => Some(ts.get(scale)?.abs() / value - 1.0),
        }
    }
}

/// A parameter value meeting the target.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TuneHit {
    pub param: f64,
    pub residual: f64,
    /// Revival-time commensurability at the tuned value.
    pub triple: Option<CommensurateTriple>,
}

/// Scan and bisection settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TuneOptions {
    pub grid_points: usize,
    /// Accepted `|residual|`.
    pub tol: f64,
    pub max_den: i64,
    pub triple_tol: f64,
}

impl Default for TuneOptions {
    fn default() -> Self {
        Self {
            grid_points: 200,
            tol: 1e-9,
            max_den: crate::commensurability::DEFAULT_MAX_DEN,
            triple_tol: crate::commensurability::DEFAULT_TOL,
        }
    }
}

fn try_evaluate(
    family: &dyn ParameterFamily,
    lattice: &Lattice,
    target: &TuneTarget,
    value: f64,
) -> Result<Option<(f64, crate::models::TimeScales)>> {
    let model = family.model(value)?;
    let d = derivatives(model.as_ref(), lattice)?;
    let ts = timescales(&d, lattice)?;
    Ok(target
        .residual(&ts)
        .filter(|r| r.is_finite())
        .map(|r| (r, ts)))
}

fn evaluate(
    family: &dyn ParameterFamily,
    lattice: &Lattice,
    target: &TuneTarget,
    value: f64,
) -> Option<(f64, crate::models::TimeScales)> {
    try_evaluate(family, lattice, target, value).ok().flatten()
}

/// Scans `range` on a uniform grid, brackets sign changes of the residual
/// and refines each by bisection. An empty result means the target is not
/// reachable in the range.
pub fn tune_parameter(
    family: &dyn ParameterFamily,
    lattice: &Lattice,
    range: (f64, f64),
    target: &TuneTarget,
    options: &TuneOptions,
) -> Result<Vec<TuneHit>> {
    let (lo, hi) = range;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::Parameter(format!(
            "invalid tuning range [{lo}, {hi}]"
        )));
    }
    if options.grid_points < 2 {
        return Err(Error::Parameter(
            "tuning needs at least two grid points".into(),
        ));
    }
    let n = options.grid_points;
    let grid: Vec<f64> = crate::packet::uniform_grid(lo, hi, n);
    let evaluated: Vec<Result<Option<f64>>> = grid
        .iter()
        .map(|&p| try_evaluate(family, lattice, target, p).map(|v| v.map(|(r, _)| r)))
        .collect();
    // a failure everywhere is a setup problem, not an unreachable target
    if let Some(Err(e)) = evaluated.iter().find(|v| v.is_err()) {
        if evaluated.iter().all(|v| v.is_err()) {
            return Err(e.clone());
        }
    }
    let values: Vec<Option<f64>> = evaluated.into_iter().map(|v| v.ok().flatten()).collect();

    let mut roots = Vec::new();
    for i in 0..n {
        let Some(r) = values[i] else { continue };
        if r == 0.0 {
            roots.push(grid[i]);
            continue;
        }
        if i + 1 < n {
            if let Some(next) = values[i + 1] {
                if next != 0.0 && r.signum() != next.signum() {
                    roots.push(bisect(family, lattice, target, grid[i], grid[i + 1], r));
                }
            }
        }
    }

    let mut hits = Vec::new();
    for param in roots {
        let Some((residual, ts)) = evaluate(family, lattice, target, param) else {
            continue;
        };
        if residual.abs() <= options.tol {
            hits.push(TuneHit {
                param,
                residual,
                triple: revival_triple(&ts, options.max_den, options.triple_tol),
            });
        }
    }
    Ok(hits)
}

fn bisect(
    family: &dyn ParameterFamily,
    lattice: &Lattice,
    target: &TuneTarget,
    mut a: f64,
    mut b: f64,
    mut ra: f64,
) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        let Some((rm, _)) = evaluate(family, lattice, target, mid) else {
            break;
        };
        if rm == 0.0 {
            return mid;
        }
        if rm.signum() == ra.signum() {
            a = mid;
            ra = rm;
        } else {
            b = mid;
        }
    }
    0.5 * (a + b)
}
