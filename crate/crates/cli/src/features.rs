//! Reading feature values off a sampled `|A(t)|²` series.

use serde::Serialize;

use revival_core::{AutocorrelationSeries, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Peak {
    pub t: f64,
    pub abs2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeValue {
    pub label: String,
    pub t: f64,
    pub abs2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FeatureReport {
    pub threshold: f64,
    pub peaks: Vec<Peak>,
    pub plateaus: Vec<ProbeValue>,
}

/// `|A(t)|²` at `t`: the stored value on a sample, otherwise linear
/// interpolation between the bracketing samples.
pub fn probe(series: &AutocorrelationSeries, t: f64) -> Result<f64> {
    let times = &series.times;
    let (Some(&first), Some(&last)) = (times.first(), times.last()) else {
        return Err(Error::Range("probe on an empty series".into()));
    };
    if !(t >= first && t <= last) {
        return Err(Error::Range(format!(
            "probe time {t} outside [{first}, {last}]"
        )));
    }
    match times.binary_search_by(|x| x.total_cmp(&t)) {
        Ok(i) => Ok(series.abs2[i]),
        Err(i) => {
            let (t0, t1) = (times[i - 1], times[i]);
            let (y0, y1) = (series.abs2[i - 1], series.abs2[i]);
            Ok(y0 + (y1 - y0) * (t - t0) / (t1 - t0))
        }
    }
}

/// Local maxima of `|A|²` at or above `threshold`, in time order. A flat
/// top is reported once, at its first sample; endpoints count when they
/// dominate their single neighbor.
pub fn find_peaks(series: &AutocorrelationSeries, threshold: f64) -> Vec<Peak> {
    let y = &series.abs2;
    let n = y.len();
    (0..n)
        .filter(|&i| {
            y[i] >= threshold && (i == 0 || y[i] > y[i - 1]) && (i + 1 == n || y[i] >= y[i + 1])
        })
        .map(|i| Peak {
            t: series.times[i],
            abs2: y[i],
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn series(times: &[f64], amps: &[f64]) -> AutocorrelationSeries {
        AutocorrelationSeries::new(
            times.to_vec(),
            amps.iter().map(|&a| Complex64::new(a, 0.0)).collect(),
        )
    }

    #[test]
    fn probe_exact_and_interpolated() {
        let s = series(&[0.0, 1.0, 2.0], &[1.0, 0.5, 0.0]);
        assert_eq!(probe(&s, 1.0).unwrap(), 0.25);
        assert_eq!(probe(&s, 0.5).unwrap(), 0.625);
        assert!(matches!(probe(&s, 2.5), Err(Error::Range(_))));
        assert!(matches!(probe(&s, -0.1), Err(Error::Range(_))));
    }

    #[test]
    fn peaks_respect_threshold_and_order() {
        let s = series(
            &[0.0, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0],
            &[1.0, 0.2, 0.3, 0.3, 0.1, 0.2, 0.9],
        );
        let peaks = find_peaks(&s, 0.05);
        let ts: Vec<f64> = peaks.iter().map(|p| p.t).collect();
        assert_eq!(ts, vec![0.0, 2.0, 6.0]);
        assert!(peaks.iter().all(|p| p.abs2 >= 0.05));
        assert_eq!(find_peaks(&s, 0.5).len(), 2);
    }
}
