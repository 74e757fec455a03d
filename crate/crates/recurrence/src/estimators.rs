//! Entropy, Lyapunov-exponent and local-dimension estimators built on
//! return-time series.
//!
//! The asymptotic limits behind these quantities are approximated by
//! least-squares slopes over geometric scale grids; a lower-envelope
//! statistic is reported alongside the fitted slope so that liminf-type
//! statements keep an honest finite-scale counterpart. Almost-everywhere
//! statements are realized as seed ensembles, never as single-orbit claims.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::maps::{IntervalMap, Orbit};
use crate::returns::{
    empirical_ball_measure, repetition_time_with_limit, ReturnSeries, SeriesKind,
};
use crate::symbolic::SymbolSequence;

/// Minimum orbit hits a ball must collect before its empirical measure is
/// considered resolved.
pub const MIN_BALL_HITS: usize = 50;

/// Ordinary least-squares diagnostics of a log-log fit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitDiagnostics {
    pub slope: f64,
    pub intercept: f64,
    pub residual_rms: f64,
}

/// A value with its fit diagnostics and the scale range it used.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub method: String,
    pub fit: Option<FitDiagnostics>,
    /// Finite-scale stand-in for the liminf: the lower envelope of the
    /// per-scale ratios, where the method has one.
    pub lower_envelope: Option<f64>,
    pub scale_min: f64,
    pub scale_max: f64,
    pub n_samples: usize,
}

/// A per-seed ensemble of estimates with its summary statistics.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AggregateEstimate {
    pub per_seed: Vec<Estimate>,
    /// Seeds whose pipeline failed (critical-point hits, scan limits);
    /// excluded from the mean but counted here.
    pub failures: usize,
    pub mean: f64,
    /// Interquartile range of the per-seed values.
    pub spread: f64,
}

impl AggregateEstimate {
    pub fn from_estimates(per_seed: Vec<Estimate>, failures: usize) -> Result<Self> {
        if per_seed.is_empty() {
            return Err(Error::TooFewRows { need: 1, got: 0 });
        }
        let mut values: Vec<f64> = per_seed.iter().map(|e| e.value).collect();
        values.sort_by(f64::total_cmp);
        let mean = values.iter().sum::<f64>() / values.len() as f64;
        let q = |p: f64| -> f64 {
            let idx = p * (values.len() - 1) as f64;
            let lo = idx.floor() as usize;
            let hi = idx.ceil() as usize;
            values[lo] + (values[hi] - values[lo]) * (idx - lo as f64)
        };
        let spread = q(0.75) - q(0.25);
        Ok(AggregateEstimate { per_seed, failures, mean, spread })
    }
}

/// Ordinary least squares of `ys` on `xs`.
pub fn fit_loglog(xs: &[f64], ys: &[f64]) -> Result<FitDiagnostics> {
    assert_eq!(xs.len(), ys.len());
    if xs.len() < 2 {
        return Err(Error::DegenerateFit(format!("{} point(s)", xs.len())));
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::DegenerateFit("all x equal".into()));
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| {
            let e = y - (slope * x + intercept);
            e * e
        })
        .sum();
    Ok(FitDiagnostics { slope, intercept, residual_rms: (ss / n).sqrt() })
}

/// Per-seed Birkhoff average of `log|T'|` over `n` steps.
pub fn lyapunov_birkhoff(map: &IntervalMap, seeds: &[u64], n: u64) -> Result<AggregateEstimate> {
    let mut per_seed = Vec::with_capacity(seeds.len());
    let mut failures = 0usize;
    for &seed in seeds {
        let x = map.sample_initial_point(seed)?;
        match map.log_derivative_sum(x, n) {
            Ok(sum) => per_seed.push(Estimate {
                value: sum / n as f64,
                method: "lyapunov-birkhoff".into(),
                fit: None,
                lower_envelope: None,
                scale_min: n as f64,
                scale_max: n as f64,
                n_samples: n as usize,
            }),
            Err(_) => failures += 1,
        }
    }
    AggregateEstimate::from_estimates(per_seed, failures)
}

fn usable_rows(series: &ReturnSeries) -> Result<Vec<(f64, u64)>> {
    if series.zero_entropy {
        return Err(Error::ZeroEntropyMap);
    }
    let rows: Vec<(f64, u64)> = series.unflagged().map(|r| (r.scale, r.value)).collect();
    if rows.len() < 4 {
        return Err(Error::TooFewRows { need: 4, got: rows.len() });
    }
    Ok(rows)
}

/// Lyapunov exponent from ball set-returns: fits `tau(B_r)` against
/// `-log r` and inverts the slope. Exact for piecewise expanding Markov
/// maps, a lower bound in general.
pub fn lyapunov_from_ball_returns(series: &ReturnSeries) -> Result<Estimate> {
    assert_eq!(series.kind, SeriesKind::BallSetReturn);
    let rows = usable_rows(series)?;
    let xs: Vec<f64> = rows.iter().map(|(r, _)| -r.ln()).collect();
    let ys: Vec<f64> = rows.iter().map(|(_, v)| *v as f64).collect();
    let fit = fit_loglog(&xs, &ys)?;
    if fit.slope <= 0.0 {
        return Err(Error::NonpositiveSlope(fit.slope));
    }
    let envelope = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| y / x)
        .fold(f64::INFINITY, f64::min);
    Ok(Estimate {
        value: 1.0 / fit.slope,
        method: "lyapunov-ball-returns".into(),
        fit: Some(fit),
        lower_envelope: Some(envelope),
        scale_min: rows.last().unwrap().0,
        scale_max: rows[0].0,
        n_samples: rows.len(),
    })
}

/// Local dimension from point returns: slope of `log tau_r` against
/// `-log r`.
pub fn dimension_from_point_returns(series: &ReturnSeries) -> Result<Estimate> {
    assert_eq!(series.kind, SeriesKind::PointReturn);
    let rows = usable_rows(series)?;
    let xs: Vec<f64> = rows.iter().map(|(r, _)| -r.ln()).collect();
    let ys: Vec<f64> = rows.iter().map(|(_, v)| (*v as f64).ln()).collect();
    let fit = fit_loglog(&xs, &ys)?;
    if fit.slope <= 0.0 {
        return Err(Error::NonpositiveSlope(fit.slope));
    }
    let envelope = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| y / x)
        .fold(f64::INFINITY, f64::min);
    Ok(Estimate {
        value: fit.slope,
        method: "dimension-point-returns".into(),
        fit: Some(fit),
        lower_envelope: Some(envelope),
        scale_min: rows.last().unwrap().0,
        scale_max: rows[0].0,
        n_samples: rows.len(),
    })
}

/// Entropy from repetition times: per-word value `log R_n / n` at the
/// largest `n` the word resolves within the scan limit.
pub fn entropy_ow(
    words: &[SymbolSequence],
    n_values: &[usize],
    scan_limit: u64,
) -> Result<AggregateEstimate> {
    assert!(!n_values.is_empty());
    let mut per_seed = Vec::with_capacity(words.len());
    let mut failures = 0usize;
    for word in words {
        // Largest n whose repetition completes within the limit.
        let mut best: Option<(usize, u64)> = None;
        for &n in n_values {
            if let Ok(r) = repetition_time_with_limit(word, n, scan_limit) {
                best = Some((n, r));
            }
        }
        match best {
            Some((n, r)) => per_seed.push(Estimate {
                value: (r as f64).ln() / n as f64,
                method: "entropy-ornstein-weiss".into(),
                fit: None,
                lower_envelope: None,
                scale_min: n as f64,
                scale_max: n as f64,
                n_samples: 1,
            }),
            None => failures += 1,
        }
    }
    AggregateEstimate::from_estimates(per_seed, failures)
}

/// Local dimension from the measure itself: slope of
/// `log mu(B_r(x))` against `log r` using orbit occupation frequencies.
/// Scales capturing fewer than [`MIN_BALL_HITS`] orbit points are flagged
/// under-resolved; saturated scales (`mu = 1`) are excluded as well.
pub fn local_dimension_from_measure(
    map: &IntervalMap,
    orbit: &Orbit,
    x: f64,
    scales: &[f64],
) -> Result<Estimate> {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for &r in scales {
        let mu = empirical_ball_measure(map, orbit, x, r);
        let hits = mu * orbit.len() as f64;
        if hits < MIN_BALL_HITS as f64 || mu >= 1.0 {
            continue;
        }
        xs.push(r.ln());
        ys.push(mu.ln());
    }
    if xs.len() < 2 {
        return Err(Error::UnderResolved);
    }
    let fit = fit_loglog(&xs, &ys)?;
    Ok(Estimate {
        value: fit.slope,
        method: "dimension-ball-measure".into(),
        fit: Some(fit),
        lower_envelope: None,
        scale_min: xs.iter().cloned().fold(f64::INFINITY, f64::min).exp(),
        scale_max: xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max).exp(),
        n_samples: xs.len(),
    })
}

/// Outcome of the entropy / Lyapunov / dimension identity check
/// `d = h / lambda`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CrosscheckReport {
    pub entropy: f64,
    pub lyapunov: f64,
    pub dimension: f64,
    /// `d - h/lambda`.
    pub discrepancy: f64,
    pub tolerance: f64,
    pub within_tolerance: bool,
}

/// Checks the dimension identity `d = h / lambda` at a combined tolerance.
pub fn hofbauer_crosscheck(
    entropy: &Estimate,
    lyapunov: &Estimate,
    dimension: &Estimate,
    tolerance: f64,
) -> Result<CrosscheckReport> {
    if lyapunov.value <= 0.0 {
        return Err(Error::NonpositiveSlope(lyapunov.value));
    }
    let discrepancy = dimension.value - entropy.value / lyapunov.value;
    Ok(CrosscheckReport {
        entropy: entropy.value,
        lyapunov: lyapunov.value,
        dimension: dimension.value,
        discrepancy,
        tolerance,
        within_tolerance: discrepancy.abs() < tolerance,
    })
}
