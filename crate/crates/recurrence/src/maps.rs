//! Piecewise-monotonic self-maps of `[0,1]`.
//!
//! A map is a finite (or, for the Gauss map, countable) family of strictly
//! monotone branches whose closures cover the interval. Orbits, Birkhoff
//! sums of `log|T'|` and exact forward images of interval unions are all
//! computed here.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Index of the last Gauss-map branch that is ever materialized; orbit
/// points below `1/(GAUSS_MAX_BRANCH+1)` raise [`Error::GaussUnderflow`]
/// instead of being silently mis-branched.
pub const GAUSS_MAX_BRANCH: u64 = 1_000_000;

/// Built-in map families.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MapKind {
    /// `3x mod 1`; the floating-point expanding Markov workhorse.
    Tripling,
    /// `2x mod 1`; exposed only through its exact symbolic model
    /// (fair-bit Bernoulli words), never through floating orbits.
    Doubling,
    /// Tent map `min(2x, 2-2x)`.
    Tent,
    /// `a x (1-x)`.
    Logistic { a: f64 },
    /// `1/x mod 1` with countably many branches.
    Gauss,
    /// Circle rotation `x + alpha mod 1`.
    Rotation { alpha: f64 },
    /// `x + x^{1+s} mod 1`, parabolic fixed point at 0.
    MannevillePomeau { s: f64 },
}

/// Sampling scheme for mu-distributed initial points.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Measure {
    /// Lebesgue.
    Uniform,
    /// Arcsine density `1/(pi sqrt(x(1-x)))`, invariant for logistic(4).
    Arcsine,
    /// Gauss measure, density `1/((1+x) ln 2)`.
    Gauss,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MonotoneDirection {
    Increasing,
    Decreasing,
}

/// One monotone branch: an open domain plus evaluators for the branch map
/// and its derivative, both extended continuously to the domain closure.
#[derive(Debug, Clone, Copy)]
pub struct Branch {
    pub lo: f64,
    pub hi: f64,
    pub direction: MonotoneDirection,
    kind: BranchKind,
}

#[derive(Debug, Clone, Copy)]
enum BranchKind {
    Affine { slope: f64, offset: f64 },
    Logistic { a: f64 },
    GaussInverse { k: u64 },
    MannevillePomeau { s: f64, wrap: bool },
}

impl Branch {
    fn affine(lo: f64, hi: f64, slope: f64, offset: f64) -> Self {
        Branch {
            lo,
            hi,
            direction: if slope >= 0.0 {
                MonotoneDirection::Increasing
            } else {
                MonotoneDirection::Decreasing
            },
            kind: BranchKind::Affine { slope, offset },
        }
    }

    /// Branch evaluator, clamped into `[0,1]` against rounding spill.
    pub fn forward(&self, x: f64) -> f64 {
        let y = match self.kind {
            BranchKind::Affine { slope, offset } => slope * x + offset,
            BranchKind::Logistic { a } => a * x * (1.0 - x),
            BranchKind::GaussInverse { k } => 1.0 / x - k as f64,
            BranchKind::MannevillePomeau { s, wrap } => {
                let y = x + x.powf(1.0 + s);
                if wrap {
                    y - 1.0
                } else {
                    y
                }
            }
        };
        y.clamp(0.0, 1.0)
    }

    /// Derivative evaluator.
    pub fn derivative(&self, x: f64) -> f64 {
        match self.kind {
            BranchKind::Affine { slope, .. } => slope,
            BranchKind::Logistic { a } => a * (1.0 - 2.0 * x),
            BranchKind::GaussInverse { .. } => -1.0 / (x * x),
            BranchKind::MannevillePomeau { s, .. } => 1.0 + (1.0 + s) * x.powf(s),
        }
    }

    pub fn increasing(&self) -> bool {
        self.direction == MonotoneDirection::Increasing
    }
}

/// A piecewise-monotonic self-map of `[0,1]`.
///
/// Immutable after construction; safe to share read-only across workers.
#[derive(Debug, Clone)]
pub struct IntervalMap {
    name: String,
    kind: MapKind,
    /// Finite branch list; empty for the Gauss map, whose branches are
    /// materialized lazily from the branch formula.
    branches: Vec<Branch>,
    markov: bool,
    measure: Option<Measure>,
    zero_entropy: bool,
    circle_metric: bool,
    symbolic_only: bool,
}

/// Builds one of the built-in map families.
///
/// Known names: `tripling`, `doubling`, `tent`, `logistic` (param `a`),
/// `gauss`, `rotation` (param `alpha`), `manneville-pomeau` (param `s`).
pub fn make_builtin_map(name: &str, params: &[f64]) -> Result<IntervalMap> {
    let need = |n: usize| -> Result<()> {
        if params.len() != n {
            Err(Error::InvalidParameter {
                map: name.to_string(),
                reason: format!("expected {} parameter(s), got {}", n, params.len()),
            })
        } else {
            Ok(())
        }
    };
    match name {
        "tripling" => {
            need(0)?;
            Ok(IntervalMap {
                name: name.into(),
                kind: MapKind::Tripling,
                branches: (0..3)
                    .map(|k| {
                        Branch::affine(k as f64 / 3.0, (k + 1) as f64 / 3.0, 3.0, -(k as f64))
                    })
                    .collect(),
                markov: true,
                measure: Some(Measure::Uniform),
                zero_entropy: false,
                circle_metric: false,
                symbolic_only: false,
            })
        }
        "doubling" => {
            need(0)?;
            Ok(IntervalMap {
                name: name.into(),
                kind: MapKind::Doubling,
                branches: vec![
                    Branch::affine(0.0, 0.5, 2.0, 0.0),
                    Branch::affine(0.5, 1.0, 2.0, -1.0),
                ],
                markov: true,
                measure: Some(Measure::Uniform),
                zero_entropy: false,
                circle_metric: false,
                symbolic_only: true,
            })
        }
        "tent" => {
            need(0)?;
            Ok(IntervalMap {
                name: name.into(),
                kind: MapKind::Tent,
                branches: vec![
                    Branch::affine(0.0, 0.5, 2.0, 0.0),
                    Branch::affine(0.5, 1.0, -2.0, 2.0),
                ],
                markov: true,
                measure: Some(Measure::Uniform),
                zero_entropy: false,
                circle_metric: false,
                symbolic_only: false,
            })
        }
        "logistic" => {
            need(1)?;
            let a = params[0];
            if !(a > 0.0 && a <= 4.0) {
                return Err(Error::InvalidParameter {
                    map: name.into(),
                    reason: format!("a = {} outside (0, 4]", a),
                });
            }
            let full = a == 4.0;
            Ok(IntervalMap {
                name: format!("logistic({})", a),
                kind: MapKind::Logistic { a },
                branches: vec![
                    Branch {
                        lo: 0.0,
                        hi: 0.5,
                        direction: MonotoneDirection::Increasing,
                        kind: BranchKind::Logistic { a },
                    },
                    Branch {
                        lo: 0.5,
                        hi: 1.0,
                        direction: MonotoneDirection::Decreasing,
                        kind: BranchKind::Logistic { a },
                    },
                ],
                markov: full,
                measure: full.then_some(Measure::Arcsine),
                zero_entropy: false,
                circle_metric: false,
                symbolic_only: false,
            })
        }
        "gauss" => {
            need(0)?;
            Ok(IntervalMap {
                name: name.into(),
                kind: MapKind::Gauss,
                branches: Vec::new(),
                markov: true,
                measure: Some(Measure::Gauss),
                zero_entropy: false,
                circle_metric: false,
                symbolic_only: false,
            })
        }
        "rotation" => {
            need(1)?;
            let alpha = params[0];
            if !(alpha > 0.0 && alpha < 1.0) {
                return Err(Error::InvalidParameter {
                    map: name.into(),
                    reason: format!("alpha = {} outside (0, 1)", alpha),
                });
            }
            Ok(IntervalMap {
                name: format!("rotation({})", alpha),
                kind: MapKind::Rotation { alpha },
                branches: vec![
                    Branch::affine(0.0, 1.0 - alpha, 1.0, alpha),
                    Branch::affine(1.0 - alpha, 1.0, 1.0, alpha - 1.0),
                ],
                markov: false,
                measure: Some(Measure::Uniform),
                zero_entropy: true,
                circle_metric: true,
                symbolic_only: false,
            })
        }
        "manneville-pomeau" => {
            need(1)?;
            let s = params[0];
            if !(s > 0.0) {
                return Err(Error::InvalidParameter {
                    map: name.into(),
                    reason: format!("s = {} must be positive", s),
                });
            }
            // Cut point c solves c + c^{1+s} = 1.
            let mut lo = 0.0f64;
            let mut hi = 1.0f64;
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid + mid.powf(1.0 + s) < 1.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let c = 0.5 * (lo + hi);
            Ok(IntervalMap {
                name: format!("manneville-pomeau({})", s),
                kind: MapKind::MannevillePomeau { s },
                branches: vec![
                    Branch {
                        lo: 0.0,
                        hi: c,
                        direction: MonotoneDirection::Increasing,
                        kind: BranchKind::MannevillePomeau { s, wrap: false },
                    },
                    Branch {
                        lo: c,
                        hi: 1.0,
                        direction: MonotoneDirection::Increasing,
                        kind: BranchKind::MannevillePomeau { s, wrap: true },
                    },
                ],
                markov: false,
                measure: None,
                zero_entropy: false,
                circle_metric: false,
                symbolic_only: false,
            })
        }
        other => Err(Error::UnknownMap(other.to_string())),
    }
}

impl IntervalMap {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> MapKind {
        self.kind
    }

    pub fn markov(&self) -> bool {
        self.markov
    }

    pub fn zero_entropy(&self) -> bool {
        self.zero_entropy
    }

    pub fn symbolic_only(&self) -> bool {
        self.symbolic_only
    }

    pub fn circle_metric(&self) -> bool {
        self.circle_metric
    }

    pub fn measure(&self) -> Option<Measure> {
        self.measure
    }

    /// Finite branch list. For the Gauss map this materializes the first
    /// `count` branches (largest domains first).
    pub fn branch_list(&self, count: usize) -> Vec<Branch> {
        if self.kind == MapKind::Gauss {
            (1..=count as u64).map(gauss_branch).collect()
        } else {
            self.branches.clone()
        }
    }

    /// Number of branches of the finite built-ins; `None` for Gauss.
    pub fn branch_count(&self) -> Option<usize> {
        if self.kind == MapKind::Gauss {
            None
        } else {
            Some(self.branches.len())
        }
    }

    /// Distance used for balls and point returns: circle metric for the
    /// rotation family, flat metric otherwise.
    pub fn distance(&self, a: f64, b: f64) -> f64 {
        let d = (a - b).abs();
        if self.circle_metric {
            d.min(1.0 - d)
        } else {
            d
        }
    }

    /// Uniform expansion lower bound `inf |T'|` when it exceeds 1.
    pub fn uniform_expansion(&self) -> Option<f64> {
        match self.kind {
            MapKind::Tripling => Some(3.0),
            MapKind::Doubling | MapKind::Tent => Some(2.0),
            _ => None,
        }
    }

    /// The branch containing `x`. A point on a shared boundary goes to the
    /// branch on its right; `x = 1` goes to the rightmost branch.
    pub fn branch_at(&self, x: f64) -> Result<Branch> {
        debug_assert!((0.0..=1.0).contains(&x), "point {} outside [0,1]", x);
        if self.kind == MapKind::Gauss {
            if x < 1.0 / (GAUSS_MAX_BRANCH as f64 + 1.0) {
                return Err(Error::GaussUnderflow(x));
            }
            let inv = 1.0 / x;
            let mut k = inv.floor() as u64;
            // On the boundary 1/k the right-hand branch is k-1; x = 1 stays
            // on branch 1.
            if k > 1 && x * k as f64 == 1.0 {
                k -= 1;
            }
            return Ok(gauss_branch(k.min(GAUSS_MAX_BRANCH)));
        }
        if x >= self.branches.last().unwrap().lo {
            return Ok(*self.branches.last().unwrap());
        }
        Ok(*self
            .branches
            .iter()
            .find(|b| x < b.hi)
            .expect("branch domains cover [0,1]"))
    }

    /// One application of the map.
    pub fn apply(&self, x: f64) -> Result<f64> {
        Ok(self.branch_at(x)?.forward(x))
    }

    /// `T^n x`.
    pub fn iterate(&self, x: f64, n: u64) -> Result<f64> {
        let mut y = x;
        for _ in 0..n {
            y = self.apply(y)?;
        }
        Ok(y)
    }

    /// A length-`len` orbit `x, Tx, ..., T^{len-1} x`.
    pub fn orbit(&self, seed: f64, len: usize) -> Result<Orbit> {
        if self.symbolic_only {
            return Err(Error::SymbolicOnly(self.name.clone()));
        }
        let mut points = Vec::with_capacity(len);
        let mut y = seed;
        for _ in 0..len {
            points.push(y);
            y = self.apply(y)?;
        }
        Ok(Orbit { points, seed })
    }

    /// Birkhoff sum of `log|T'|` along `n` steps of the orbit of `x`.
    pub fn log_derivative_sum(&self, x: f64, n: u64) -> Result<f64> {
        let mut sum = 0.0;
        let mut y = x;
        for _ in 0..n {
            let b = self.branch_at(y)?;
            let d = b.derivative(y).abs();
            if d == 0.0 || !d.is_finite() {
                return Err(Error::CriticalPoint(y));
            }
            sum += d.ln();
            y = b.forward(y);
        }
        Ok(sum)
    }

    /// A point distributed according to the map's invariant measure,
    /// reproducibly determined by `seed`.
    pub fn sample_initial_point(&self, seed: u64) -> Result<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        self.sample_with(&mut rng)
    }

    /// Same as [`sample_initial_point`](Self::sample_initial_point) but
    /// drawing from a caller-owned RNG.
    pub fn sample_with<R: Rng>(&self, rng: &mut R) -> Result<f64> {
        let measure = self.measure.ok_or_else(|| Error::NoSampler(self.name.clone()))?;
        let u: f64 = rng.gen();
        Ok(match measure {
            Measure::Uniform => u,
            // Inverse CDF of the arcsine law.
            Measure::Arcsine => {
                let s = (std::f64::consts::PI * u / 2.0).sin();
                s * s
            }
            // Inverse CDF of the Gauss measure: F(x) = log2(1+x).
            Measure::Gauss => 2f64.powf(u) - 1.0,
        })
    }

    /// Cut points of the natural monotonicity partition (interior branch
    /// boundaries). For Gauss this truncates to the `count` largest cells.
    pub fn natural_cut_points(&self, gauss_cells: usize) -> Vec<f64> {
        if self.kind == MapKind::Gauss {
            (2..=gauss_cells as u64).map(|k| 1.0 / k as f64).collect()
        } else {
            self.branches[1..].iter().map(|b| b.lo).collect()
        }
    }

    /// Exact forward image of an interval union: each interval is split at
    /// branch boundaries, every piece is mapped endpoint-to-endpoint by its
    /// branch, and the results are merged.
    pub fn image_of_union(&self, u: &IntervalUnion) -> Result<IntervalUnion> {
        let mut out = Vec::new();
        for &(a, b) in &u.intervals {
            for (lo, hi) in self.split_at_branch_bounds(a, b)? {
                let branch = self.branch_at(0.5 * (lo + hi))?;
                let (p, q) = (branch.forward(lo), branch.forward(hi));
                out.push(if branch.increasing() { (p, q) } else { (q, p) });
            }
        }
        Ok(IntervalUnion::from_intervals(out))
    }

    /// Cuts `[a,b]` into maximal pieces each lying inside one branch closure.
    fn split_at_branch_bounds(&self, a: f64, b: f64) -> Result<Vec<(f64, f64)>> {
        let mut cuts: Vec<f64> = if self.kind == MapKind::Gauss {
            if a < 1.0 / (GAUSS_MAX_BRANCH as f64 + 1.0) {
                return Err(Error::GaussUnderflow(a));
            }
            let k_hi = (1.0 / a).floor() as u64; // smallest boundary index side
            let k_lo = (1.0 / b).ceil() as u64;
            (k_lo.max(2)..=k_hi)
                .map(|k| 1.0 / k as f64)
                .filter(|c| *c > a && *c < b)
                .collect()
        } else {
            self.branches[1..]
                .iter()
                .map(|br| br.lo)
                .filter(|c| *c > a && *c < b)
                .collect()
        };
        cuts.sort_by(f64::total_cmp);
        let mut pieces = Vec::with_capacity(cuts.len() + 1);
        let mut left = a;
        for c in cuts {
            pieces.push((left, c));
            left = c;
        }
        pieces.push((left, b));
        Ok(pieces)
    }
}

fn gauss_branch(k: u64) -> Branch {
    Branch {
        lo: 1.0 / (k as f64 + 1.0),
        hi: 1.0 / k as f64,
        direction: MonotoneDirection::Decreasing,
        kind: BranchKind::GaussInverse { k },
    }
}

/// A finite orbit segment.
#[derive(Debug, Clone)]
pub struct Orbit {
    pub points: Vec<f64>,
    pub seed: f64,
}

impl Orbit {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// A finite disjoint union of closed subintervals of `[0,1]`, sorted by
/// left endpoint. Carrier for exact forward images of balls.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalUnion {
    intervals: Vec<(f64, f64)>,
}

impl IntervalUnion {
    /// Normalizes an arbitrary interval list: drops empty intervals, sorts,
    /// and merges overlapping or touching neighbours.
    pub fn from_intervals(mut raw: Vec<(f64, f64)>) -> Self {
        raw.retain(|(a, b)| b >= a);
        raw.sort_by(|x, y| f64::total_cmp(&x.0, &y.0));
        let mut intervals: Vec<(f64, f64)> = Vec::with_capacity(raw.len());
        for (a, b) in raw {
            match intervals.last_mut() {
                Some(last) if a <= last.1 => last.1 = last.1.max(b),
                _ => intervals.push((a, b)),
            }
        }
        IntervalUnion { intervals }
    }

    /// The ball `B_r(x)` clipped to `[0,1]`; on the circle a ball may wrap
    /// around 0/1 and become two intervals.
    pub fn ball(x: f64, r: f64, circle: bool) -> Self {
        let (lo, hi) = (x - r, x + r);
        if circle && 2.0 * r < 1.0 {
            let mut parts = Vec::new();
            if lo < 0.0 {
                parts.push((lo + 1.0, 1.0));
                parts.push((0.0, hi));
            } else if hi > 1.0 {
                parts.push((lo, 1.0));
                parts.push((0.0, hi - 1.0));
            } else {
                parts.push((lo, hi));
            }
            IntervalUnion::from_intervals(parts)
        } else {
            IntervalUnion::from_intervals(vec![(lo.max(0.0), hi.min(1.0))])
        }
    }

    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    pub fn piece_count(&self) -> usize {
        self.intervals.len()
    }

    pub fn total_length(&self) -> f64 {
        self.intervals.iter().map(|(a, b)| b - a).sum()
    }

    pub fn contains(&self, x: f64) -> bool {
        self.intervals.iter().any(|&(a, b)| a <= x && x <= b)
    }

    /// Closed-interval intersection test with exact endpoint comparison.
    pub fn intersects(&self, other: &IntervalUnion) -> bool {
        let (mut i, mut j) = (0, 0);
        while i < self.intervals.len() && j < other.intervals.len() {
            let (a1, b1) = self.intervals[i];
            let (a2, b2) = other.intervals[j];
            if a1 <= b2 && a2 <= b1 {
                return true;
            }
            if b1 < b2 {
                i += 1;
            } else {
                j += 1;
            }
        }
        false
    }
}
