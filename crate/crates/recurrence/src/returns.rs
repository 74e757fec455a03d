//! Metric recurrence quantities: point return times, exact ball
//! set-returns via interval-union iteration, repetition times of symbolic
//! prefixes, and empirical ball measures.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::maps::{IntervalMap, IntervalUnion, Orbit};
use crate::symbolic::SymbolSequence;

/// Default cap on the number of pieces of an iterated interval union.
pub const DEFAULT_PIECE_CAP: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SeriesKind {
    PointReturn,
    BallSetReturn,
    CylinderReturn,
    Repetition,
}

impl SeriesKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            SeriesKind::PointReturn => "point-return",
            SeriesKind::BallSetReturn => "ball-set-return",
            SeriesKind::CylinderReturn => "cylinder-return",
            SeriesKind::Repetition => "repetition",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "point-return" => SeriesKind::PointReturn,
            "ball-set-return" => SeriesKind::BallSetReturn,
            "cylinder-return" => SeriesKind::CylinderReturn,
            "repetition" => SeriesKind::Repetition,
            other => return Err(Error::InvalidConfig(format!("unknown series kind `{}`", other))),
        })
    }
}

/// Per-row status; failed rows are kept and flagged, never dropped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RowFlag {
    Ok,
    BudgetExceeded,
    PieceCapExceeded,
    ScanLimitExceeded,
    UnderResolved,
    OrbitError,
}

impl RowFlag {
    pub fn as_str(&self) -> &'static str {
        match self {
            RowFlag::Ok => "ok",
            RowFlag::BudgetExceeded => "budget-exceeded",
            RowFlag::PieceCapExceeded => "piece-cap-exceeded",
            RowFlag::ScanLimitExceeded => "scan-limit-exceeded",
            RowFlag::UnderResolved => "under-resolved",
            RowFlag::OrbitError => "orbit-error",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "ok" => RowFlag::Ok,
            "budget-exceeded" => RowFlag::BudgetExceeded,
            "piece-cap-exceeded" => RowFlag::PieceCapExceeded,
            "scan-limit-exceeded" => RowFlag::ScanLimitExceeded,
            "under-resolved" => RowFlag::UnderResolved,
            "orbit-error" => RowFlag::OrbitError,
            other => return Err(Error::InvalidConfig(format!("unknown row flag `{}`", other))),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReturnRow {
    /// Radius `r` for metric kinds, cylinder/prefix length `n` for
    /// symbolic kinds.
    pub scale: f64,
    pub value: u64,
    pub flag: RowFlag,
}

/// A table of (scale, return-time) pairs for one base point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReturnSeries {
    pub kind: SeriesKind,
    pub seed: u64,
    pub x: f64,
    pub rows: Vec<ReturnRow>,
    /// Set for maps on which the positive-entropy hypothesis of the
    /// return-time theorems fails (rotation family).
    pub zero_entropy: bool,
}

impl ReturnSeries {
    pub fn unflagged(&self) -> impl Iterator<Item = &ReturnRow> {
        self.rows.iter().filter(|r| r.flag == RowFlag::Ok)
    }
}

/// Smallest `k <= budget` with `d(T^k x, x) < r`.
pub fn point_return_time(map: &IntervalMap, x: f64, r: f64, budget: u64) -> Result<u64> {
    assert!(r > 0.0 && budget >= 1);
    let mut y = x;
    for k in 1..=budget {
        y = map.apply(y)?;
        if map.distance(y, x) < r {
            return Ok(k);
        }
    }
    Err(Error::BudgetExceeded { budget })
}

/// Default point-return budget: an order of magnitude above the expected
/// Kac return `1/(2r)`.
pub fn default_point_budget(r: f64) -> u64 {
    (10.0 / r * (1.0 + r.ln().abs())).ceil() as u64
}

/// Default ball-return budget for uniformly expanding maps: an order of
/// magnitude above the predicted `(-log r)/log(inf |T'|)`.
pub fn default_ball_budget(r: f64, expansion: Option<f64>) -> u64 {
    match expansion {
        Some(s) if s > 1.0 => (10.0 * (-r.ln()) / s.ln()).ceil() as u64,
        _ => 10_000,
    }
}

/// First reoccurrence of the length-`n` prefix: smallest `k >= 1` with
/// `word[k..k+n) = word[0..n)`, searched by the failure-function
/// (Knuth-Morris-Pratt) automaton in linear time.
pub fn repetition_time(word: &SymbolSequence, n: usize) -> Result<u64> {
    let limit = word.len().saturating_sub(n) as u64;
    repetition_time_with_limit(word, n, limit)
}

/// As [`repetition_time`], reporting a scan-limit signal when no
/// reoccurrence starts at `k <= scan_limit`.
pub fn repetition_time_with_limit(
    word: &SymbolSequence,
    n: usize,
    scan_limit: u64,
) -> Result<u64> {
    assert!(n >= 1 && n <= word.len(), "prefix length out of range");
    let s = word.symbols();
    let pat = &s[..n];
    // Failure function of the prefix.
    let mut fail = vec![0usize; n];
    let mut k = 0usize;
    for i in 1..n {
        while k > 0 && pat[i] != pat[k] {
            k = fail[k - 1];
        }
        if pat[i] == pat[k] {
            k += 1;
        }
        fail[i] = k;
    }
    let mut q = 0usize;
    for (i, &c) in s.iter().enumerate().skip(1) {
        while q > 0 && c != pat[q] {
            q = fail[q - 1];
        }
        if c == pat[q] {
            q += 1;
        }
        if q == n {
            let start = (i + 1 - n) as u64;
            if start > scan_limit {
                break;
            }
            return Ok(start);
        }
    }
    Err(Error::ScanLimitExceeded { limit: scan_limit })
}

/// Outcome of one exact ball-iteration: smallest `k` with
/// `T^k B_r(x)` meeting `B_r(x)` again.
pub fn ball_set_return(map: &IntervalMap, x: f64, r: f64, budget: u64) -> Result<u64> {
    ball_set_return_capped(map, x, r, budget, DEFAULT_PIECE_CAP)
}

pub fn ball_set_return_capped(
    map: &IntervalMap,
    x: f64,
    r: f64,
    budget: u64,
    piece_cap: usize,
) -> Result<u64> {
    assert!(r > 0.0 && budget >= 1);
    let ball = IntervalUnion::ball(x, r, map.circle_metric());
    let mut current = ball.clone();
    for step in 1..=budget {
        current = map.image_of_union(&current)?;
        if current.piece_count() > piece_cap {
            return Err(Error::PieceCapExceeded { cap: piece_cap, step });
        }
        if current.intersects(&ball) {
            return Ok(step);
        }
    }
    Err(Error::BudgetExceeded { budget })
}

/// Occupation frequency of the ball `B_r(x)` along an orbit.
pub fn empirical_ball_measure(map: &IntervalMap, orbit: &Orbit, x: f64, r: f64) -> f64 {
    assert!(!orbit.is_empty());
    let hits = orbit.points.iter().filter(|&&p| map.distance(p, x) < r).count();
    hits as f64 / orbit.len() as f64
}

/// Runs one return quantity over a decreasing scale grid, flagging (never
/// dropping) rows whose budget or piece cap was exhausted.
pub fn scan_scales(
    kind: SeriesKind,
    map: &IntervalMap,
    x: f64,
    scales: &[f64],
    budget_scale: f64,
) -> ReturnSeries {
    assert!(
        scales.windows(2).all(|w| w[0] > w[1]) && scales.iter().all(|&r| r > 0.0),
        "scales must be strictly decreasing and positive"
    );
    let rows = scales
        .iter()
        .map(|&r| {
            let outcome = match kind {
                SeriesKind::PointReturn => {
                    let budget = (default_point_budget(r) as f64 * budget_scale).ceil() as u64;
                    point_return_time(map, x, r, budget.max(1))
                }
                SeriesKind::BallSetReturn => {
                    let budget = (default_ball_budget(r, map.uniform_expansion()) as f64
                        * budget_scale)
                        .ceil() as u64;
                    ball_set_return(map, x, r, budget.max(1))
                }
                SeriesKind::CylinderReturn | SeriesKind::Repetition => {
                    panic!("symbolic kinds take a word, not a map; see the symbolic module")
                }
            };
            match outcome {
                Ok(value) => ReturnRow { scale: r, value, flag: RowFlag::Ok },
                Err(Error::BudgetExceeded { .. }) => {
                    ReturnRow { scale: r, value: 0, flag: RowFlag::BudgetExceeded }
                }
                Err(Error::PieceCapExceeded { .. }) => {
                    ReturnRow { scale: r, value: 0, flag: RowFlag::PieceCapExceeded }
                }
                Err(_) => ReturnRow { scale: r, value: 0, flag: RowFlag::OrbitError },
            }
        })
        .collect();
    ReturnSeries { kind, seed: 0, x, rows, zero_entropy: map.zero_entropy() }
}

/// Builds a symbolic return series (cylinder returns or repetition times)
/// from a coded word, with `n` as the scale column.
pub fn symbolic_series(
    kind: SeriesKind,
    word: &SymbolSequence,
    n_values: &[usize],
    admissibility: &crate::symbolic::Admissibility,
    scan_limit: u64,
) -> ReturnSeries {
    let rows = n_values
        .iter()
        .map(|&n| {
            let outcome = match kind {
                SeriesKind::CylinderReturn => {
                    crate::symbolic::cylinder_return_time(&word.prefix(n), admissibility)
                }
                SeriesKind::Repetition => repetition_time_with_limit(word, n, scan_limit),
                _ => panic!("metric kinds take a map; use scan_scales"),
            };
            match outcome {
                Ok(value) => ReturnRow { scale: n as f64, value, flag: RowFlag::Ok },
                Err(Error::ScanLimitExceeded { .. }) => {
                    ReturnRow { scale: n as f64, value: 0, flag: RowFlag::ScanLimitExceeded }
                }
                Err(_) => ReturnRow { scale: n as f64, value: 0, flag: RowFlag::OrbitError },
            }
        })
        .collect();
    ReturnSeries { kind, seed: 0, x: f64::NAN, rows, zero_entropy: false }
}
