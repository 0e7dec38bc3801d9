//! Exact rational commensurability of time scales and enumeration of
//! fractional-revival times.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::{ExactScales, ScaleKind, TimeScales};

/// Default largest denominator accepted by [`rationalize`].
pub const DEFAULT_MAX_DEN: i64 = 64;
/// Default relative tolerance of [`rationalize`].
pub const DEFAULT_TOL: f64 = 1e-9;
/// Default denominator bound of [`enumerate_fractimes`].
pub const DEFAULT_QMAX: i64 = 12;

/// An irreducible fraction with positive denominator; zero is `0/1`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ReducedFraction(Ratio<i64>);

impl ReducedFraction {
    pub fn new(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::Parameter(format!("zero denominator in {num}/0")));
        }
        Ok(Self(Ratio::new(num, den)))
    }

    pub const fn integer(n: i64) -> Self {
        Self(Ratio::new_raw(n, 1))
    }

    pub const ZERO: Self = Self::integer(0);
    pub const ONE: Self = Self::integer(1);

    pub fn num(&self) -> i64 {
        *self.0.numer()
    }

    pub fn den(&self) -> i64 {
        *self.0.denom()
    }

    pub fn to_f64(&self) -> f64 {
        self.num() as f64 / self.den() as f64
    }

    pub fn is_zero(&self) -> bool {
        self.num() == 0
    }

    pub fn is_integer(&self) -> bool {
        self.den() == 1
    }

    pub fn is_positive(&self) -> bool {
        self.num() > 0
    }

    pub fn abs(&self) -> Self {
        Self(Ratio::new_raw(self.num().abs(), self.den()))
    }

    pub fn signum(&self) -> i64 {
        self.num().signum()
    }

    pub fn recip(&self) -> Option<Self> {
        (!self.is_zero()).then(|| Self(self.0.recip()))
    }

    /// Representative in `[0, 1)`.
    pub fn mod_one(&self) -> Self {
        let den = self.den();
        Self(Ratio::new_raw(self.num().rem_euclid(den), den))
    }
}

impl fmt::Display for ReducedFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num(), self.den())
    }
}

impl fmt::Debug for ReducedFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for ReducedFraction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parameter(format!("expected a fraction like `3/4`, got `{s}`"));
        let s = s.trim();
        match s.split_once('/') {
            Some((n, d)) => {
                let n = n.trim().parse().map_err(|_| bad())?;
                let d = d.trim().parse().map_err(|_| bad())?;
                Self::new(n, d)
            }
            None => Ok(Self::integer(s.parse().map_err(|_| bad())?)),
        }
    }
}

impl Serialize for ReducedFraction {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ReducedFraction {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Int(i64),
            Text(String),
        }
        match Repr::deserialize(d)? {
            Repr::Int(n) => Ok(Self::integer(n)),
            Repr::Text(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

impl From<i64> for ReducedFraction {
    fn from(n: i64) -> Self {
        Self::integer(n)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for ReducedFraction {
            type Output = Self;
            fn $method(self, rhs: Self) -> Self {
                Self($trait::$method(self.0, rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for ReducedFraction {
    type Output = Self;
    fn neg(self) -> Self {
        Self(-self.0)
    }
}

/// Smallest-denominator continued-fraction convergent `p/q` of `x` with
/// `q <= max_den` and `|x − p/q| <= tol · max(1, |x|)`, or `None` when `x`
/// is incommensurate at this resolution.
pub fn rationalize(x: f64, max_den: i64, tol: f64) -> Option<ReducedFraction> {
    if !x.is_finite() || max_den < 1 || tol < 0.0 || x.abs() >= 1e15 {
        return None;
    }
    let limit = tol * x.abs().max(1.0);

    let (mut h_prev, mut h) = (1_i128, x.floor() as i128);
    let (mut k_prev, mut k) = (0_i128, 1_i128);
    let mut rem = x - x.floor();
    for _ in 0..64 {
        if k > max_den as i128 {
            return None;
        }
        if (x - h as f64 / k as f64).abs() <= limit {
            return ReducedFraction::new(h as i64, k as i64).ok();
        }
        if rem <= f64::EPSILON {
            return None;
        }
        let y = 1.0 / rem;
        let a = y.floor();
        rem = y - a;
        let a = a as i128;
        (h_prev, h) = (h, a * h + h_prev);
        (k_prev, k) = (k, a * k + k_prev);
    }
    None
}

/// Beat period of two commensurate classical periods.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClassicalBeat {
    /// `|tcl1| / |tcl2| = a / b`.
    pub a: i64,
    pub b: i64,
    /// `b·|tcl1| = a·|tcl2|`.
    pub period: f64,
}

/// Short-time periodicity of the packet: `None` when the classical periods
/// are incommensurate at this resolution and the initial motion is not
/// exactly periodic.
pub fn classical_beat(tcl1: f64, tcl2: f64, max_den: i64, tol: f64) -> Option<ClassicalBeat> {
    if tcl1 == 0.0 || tcl2 == 0.0 || !tcl1.is_finite() || !tcl2.is_finite() {
        return None;
    }
    let ratio = rationalize(tcl1.abs() / tcl2.abs(), max_den, tol)?;
    Some(ClassicalBeat {
        a: ratio.num(),
        b: ratio.den(),
        period: ratio.den() as f64 * tcl1.abs(),
    })
}

/// [`classical_beat`] from exact rational multiples of a common unit.
pub fn classical_beat_exact(exact: &ExactScales, ts: &TimeScales) -> Option<ClassicalBeat> {
    let [Some(c1), Some(c2)] = exact.classical else {
        return None;
    };
    let ratio = (c1 / c2).abs();
    Some(ClassicalBeat {
        a: ratio.num(),
        b: ratio.den(),
        period: ratio.den() as f64 * ts.tcl1?.abs(),
    })
}

/// Revival component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Component {
    Trev1,
    Trev2,
    Trev12,
}

impl Component {
    pub const ALL: [Component; 3] = [Component::Trev1, Component::Trev2, Component::Trev12];

    pub fn scale(self) -> ScaleKind {
        match self {
            Component::Trev1 => ScaleKind::Trev1,
            Component::Trev2 => ScaleKind::Trev2,
            Component::Trev12 => ScaleKind::Trev12,
        }
    }

    fn index(self) -> usize {
        match self {
            Component::Trev1 => 0,
            Component::Trev2 => 1,
            Component::Trev12 => 2,
        }
    }
}

/// Exact ratios of the present revival times: `trev_i = f_i · trev_base`.
/// Signs are kept, so a negative entry flips the phase direction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CommensurateTriple {
    pub base: Component,
    pub f1: Option<ReducedFraction>,
    pub f2: Option<ReducedFraction>,
    pub f12: Option<ReducedFraction>,
}

impl CommensurateTriple {
    pub fn get(&self, c: Component) -> Option<ReducedFraction> {
        [self.f1, self.f2, self.f12][c.index()]
    }

    /// `trev_a / trev_b` as an exact fraction.
    pub fn ratio(&self, a: Component, b: Component) -> Option<ReducedFraction> {
        let fa = self.get(a)?;
        let fb = self.get(b)?;
        Some(fa / fb)
    }

    fn from_multiples(multiples: [Option<ReducedFraction>; 3]) -> Option<Self> {
        let base = Component::ALL
            .into_iter()
            .find(|c| multiples[c.index()].is_some_and(|f| !f.is_zero()))?;
        let b = multiples[base.index()]?;
        let f = |c: Component| multiples[c.index()].map(|m| m / b);
        Some(Self {
            base,
            f1: f(Component::Trev1),
            f2: f(Component::Trev2),
            f12: f(Component::Trev12),
        })
    }
}

fn revival_times(ts: &TimeScales) -> [Option<f64>; 3] {
    [ts.trev1, ts.trev2, ts.trev12]
}

/// Rationalizes the ratios of the present revival times to the first
/// present one. `None` when a ratio is incommensurate at this resolution
/// or no revival time exists.
pub fn revival_triple(ts: &TimeScales, max_den: i64, tol: f64) -> Option<CommensurateTriple> {
    let times = revival_times(ts);
    let base = Component::ALL
        .into_iter()
        .find(|c| times[c.index()].is_some())?;
    let tb = times[base.index()]?;
    let mut multiples = [None; 3];
    for c in Component::ALL {
        if let Some(t) = times[c.index()] {
            multiples[c.index()] = Some(rationalize(t / tb, max_den, tol)?);
        }
    }
    CommensurateTriple::from_multiples(multiples)
}

/// [`revival_triple`] from exact rational multiples; no rationalization.
pub fn revival_triple_exact(exact: &ExactScales) -> Option<CommensurateTriple> {
    CommensurateTriple::from_multiples(exact.revival)
}

/// A candidate fractional-revival time with its per-component irreducible
/// fractions `t / trev_i`. Absent revival times contribute `0/1` (an
/// infinite revival time), except the cross term which is `None`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FracTime {
    pub t: f64,
    pub p1q1: ReducedFraction,
    pub p2q2: ReducedFraction,
    pub p12q12: Option<ReducedFraction>,
}

impl FracTime {
    pub fn is_full_revival(&self) -> bool {
        self.p1q1.is_integer()
            && self.p2q2.is_integer()
            && self.p12q12.is_none_or(|f| f.is_integer())
    }
}

/// All times in `(0, tmax]` at which every component fraction `t / trev_i`
/// has denominator at most `qmax`, ascending. Full revivals are included.
pub fn enumerate_fractimes(
    triple: &CommensurateTriple,
    ts: &TimeScales,
    qmax: i64,
    tmax: f64,
) -> Vec<FracTime> {
    let Some(tb) = ts.get(triple.base.scale()) else {
        return Vec::new();
    };
    if qmax < 1 || tmax.is_nan() || tmax <= 0.0 {
        return Vec::new();
    }
    let sign = ReducedFraction::integer(tb.signum() as i64);
    let limit = tmax / tb.abs() * (1.0 + 1e-12);

    let mut fracs: Vec<ReducedFraction> = Vec::new();
    for q in 1..=qmax {
        let mut p = 1_i64;
        while (p as f64) / (q as f64) <= limit {
            if p.gcd(&q) == 1 {
                fracs.push(ReducedFraction::new(p, q).expect("q >= 1"));
            }
            p += 1;
        }
    }
    fracs.sort();

    let component = |f: Option<ReducedFraction>, y: ReducedFraction| {
        // t / trev_i = y·sign(tb) / f_i
        f.map(|fi| y * sign / fi)
    };
    fracs
        .into_iter()
        .filter_map(|y| {
            let p1q1 = component(triple.f1, y).unwrap_or(ReducedFraction::ZERO);
            let p2q2 = component(triple.f2, y).unwrap_or(ReducedFraction::ZERO);
            let p12q12 = component(triple.f12, y);
            let fits = |f: ReducedFraction| f.den() <= qmax;
            (fits(p1q1) && fits(p2q2) && p12q12.is_none_or(fits)).then(|| FracTime {
                t: y.to_f64() * tb.abs(),
                p1q1,
                p2q2,
                p12q12,
            })
        })
        .collect()
}

/// `r1/s1 = (q1·p12)/(p1·q12)` and `r2/s2 = (q2·p12)/(p2·q12)`, i.e.
/// `trev_i / trev12`. Each entry is `None` when its `p_i` vanishes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CrossRatios {
    pub r1s1: Option<ReducedFraction>,
    pub r2s2: Option<ReducedFraction>,
}

/// Cross ratios of a point, or `None` when there is no cross-revival time.
pub fn cross_ratios(point: &FracTime) -> Option<CrossRatios> {
    let p12 = point.p12q12?;
    let ratio = |pq: ReducedFraction| pq.recip().map(|inv| p12 * inv);
    Some(CrossRatios {
        r1s1: ratio(point.p1q1),
        r2s2: ratio(point.p2q2),
    })
}

/// Orders fractional times by `t`.
pub fn by_time(a: &FracTime, b: &FracTime) -> Ordering {
    a.t.total_cmp(&b.t)
}
