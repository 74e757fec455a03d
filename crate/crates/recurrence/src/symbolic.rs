//! Symbolic coding of orbits and exact Poincaré return times of cylinder
//! sets.
//!
//! The return time of a cylinder `[w]` is a property of the *set*: the
//! smallest shift `k` such that the k-shifted overlap of `w` with itself is
//! consistent (and, on a Markov shift, the merged word is admissible). This
//! is the minimal period of the word, not the first return of any sampled
//! point; the two are deliberately kept apart.

use std::fmt::Write as _;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::maps::{IntervalMap, Orbit};

/// A finite partition of `[0,1]` given by its interior cut points; cell `k`
/// is the open interval between consecutive cut points.
#[derive(Debug, Clone)]
pub struct Partition {
    cut_points: Vec<f64>,
}

impl Partition {
    pub fn new(mut cut_points: Vec<f64>) -> Self {
        cut_points.sort_by(f64::total_cmp);
        cut_points.dedup();
        assert!(
            cut_points.iter().all(|c| *c > 0.0 && *c < 1.0),
            "cut points must lie in (0,1)"
        );
        Partition { cut_points }
    }

    pub fn cut_points(&self) -> &[f64] {
        &self.cut_points
    }

    pub fn alphabet_size(&self) -> usize {
        self.cut_points.len() + 1
    }

    /// Cell containing `x`; a point exactly on a cut goes to the cell on
    /// its right.
    pub fn cell_index(&self, x: f64) -> u32 {
        self.cut_points.partition_point(|c| *c <= x) as u32
    }
}

/// A finite word over a finite alphabet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolSequence {
    symbols: Vec<u32>,
}

impl SymbolSequence {
    pub fn new(symbols: Vec<u32>) -> Self {
        SymbolSequence { symbols }
    }

    pub fn symbols(&self) -> &[u32] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn prefix(&self, n: usize) -> SymbolSequence {
        SymbolSequence::new(self.symbols[..n].to_vec())
    }

    /// Serializes as whitespace-separated integers (one sequence per line).
    pub fn to_line(&self) -> String {
        let mut s = String::new();
        for (i, sym) in self.symbols.iter().enumerate() {
            if i > 0 {
                s.push(' ');
            }
            let _ = write!(s, "{}", sym);
        }
        s
    }

    pub fn parse_line(line: &str) -> Result<SymbolSequence> {
        let symbols = line
            .split_whitespace()
            .map(|t| {
                t.parse::<u32>().map_err(|e| Error::InvalidConfig(format!("bad symbol `{}`: {}", t, e)))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SymbolSequence::new(symbols))
    }
}

/// Boolean transition matrix of a subshift of finite type.
#[derive(Debug, Clone)]
pub struct TransitionMatrix {
    n: usize,
    entries: Vec<bool>,
}

impl TransitionMatrix {
    pub fn new(n: usize, entries: Vec<bool>) -> Result<Self> {
        assert_eq!(entries.len(), n * n);
        let m = TransitionMatrix { n, entries };
        for s in 0..n {
            if !(0..n).any(|t| m.allows(s, t)) || !(0..n).any(|t| m.allows(t, s)) {
                return Err(Error::DanglingSymbol(s));
            }
        }
        Ok(m)
    }

    pub fn full(n: usize) -> Self {
        TransitionMatrix { n, entries: vec![true; n * n] }
    }

    pub fn alphabet_size(&self) -> usize {
        self.n
    }

    pub fn allows(&self, from: usize, to: usize) -> bool {
        self.entries[from * self.n + to]
    }

    fn word_admissible(&self, w: impl Iterator<Item = u32> + Clone) -> bool {
        let mut it = w;
        let mut prev = match it.next() {
            Some(s) => s as usize,
            None => return true,
        };
        for s in it {
            if !self.allows(prev, s as usize) {
                return false;
            }
            prev = s as usize;
        }
        true
    }

    /// Smallest `t >= 1` such that a path of exactly `t` edges runs from
    /// `from` to `to`, searched up to the Wielandt primitivity bound.
    fn shortest_exact_path(&self, from: usize, to: usize) -> Option<u64> {
        let bound = if self.n <= 1 { 2 } else { (self.n - 1) * (self.n - 1) + 1 };
        let mut reach = vec![false; self.n];
        reach[from] = true;
        for t in 1..=bound as u64 {
            let mut next = vec![false; self.n];
            for s in 0..self.n {
                if reach[s] {
                    for q in 0..self.n {
                        if self.allows(s, q) {
                            next[q] = true;
                        }
                    }
                }
            }
            reach = next;
            if reach[to] {
                return Some(t);
            }
        }
        None
    }
}

/// Full-shift vs Markov-shift admissibility for cylinder returns.
#[derive(Debug, Clone)]
pub enum Admissibility {
    FullShift,
    Markov(TransitionMatrix),
}

/// Codes an orbit by a partition: symbol `k` at position `i` iff
/// `orbit.points[i]` lies in cell `k`.
pub fn encode_orbit(orbit: &Orbit, partition: &Partition) -> SymbolSequence {
    SymbolSequence::new(orbit.points.iter().map(|&x| partition.cell_index(x)).collect())
}

/// Codes an orbit by branch index — the natural Markov coding, valid also
/// for the countable Gauss alphabet.
pub fn encode_orbit_by_branch(map: &IntervalMap, orbit: &Orbit) -> Result<SymbolSequence> {
    let branches = map.branch_list(0);
    let symbols = orbit
        .points
        .iter()
        .map(|&x| {
            let b = map.branch_at(x)?;
            Ok(match map.branch_count() {
                // Countable family: the branch on (1/(k+1), 1/k) gets symbol k-1.
                None => ((1.0 / b.hi).round() as u32) - 1,
                Some(_) => branches
                    .iter()
                    .position(|c| c.lo == b.lo)
                    .expect("branch from this map") as u32,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SymbolSequence::new(symbols))
}

/// An i.i.d. word, reproducible from the seed. Exact symbolic model of the
/// doubling map under Lebesgue measure when `probabilities = [1/2, 1/2]`.
pub fn generate_bernoulli_word(
    probabilities: &[f64],
    length: usize,
    seed: u64,
) -> Result<SymbolSequence> {
    if probabilities.is_empty() || probabilities.iter().any(|p| *p < 0.0) {
        return Err(Error::InvalidProbabilities("entries must be nonnegative".into()));
    }
    let total: f64 = probabilities.iter().sum();
    if (total - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidProbabilities(format!("sum {} != 1", total)));
    }
    let mut cdf = Vec::with_capacity(probabilities.len());
    let mut acc = 0.0;
    for p in probabilities {
        acc += p;
        cdf.push(acc);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let symbols = (0..length)
        .map(|_| {
            let u: f64 = rng.gen();
            cdf.partition_point(|c| *c <= u).min(probabilities.len() - 1) as u32
        })
        .collect();
    Ok(SymbolSequence::new(symbols))
}

/// Border (failure-function) array: `border[i]` = length of the longest
/// proper border of the prefix of length `i`.
fn border_array(w: &[u32]) -> Vec<usize> {
    let n = w.len();
    let mut border = vec![0usize; n + 1];
    let mut k = 0usize;
    for i in 1..n {
        while k > 0 && w[i] != w[k] {
            k = border[k];
        }
        if w[i] == w[k] {
            k += 1;
        }
        border[i + 1] = k;
    }
    border
}

/// All periods of `w` in increasing order (a shift `k` is a period iff
/// `w[i] = w[i+k]` on the overlap); obtained from the border chain.
fn periods(w: &[u32]) -> Vec<usize> {
    let n = w.len();
    let border = border_array(w);
    let mut ps = Vec::new();
    let mut b = border[n];
    loop {
        ps.push(n - b);
        if b == 0 {
            break;
        }
        b = border[b];
    }
    ps
}

fn merged_word_admissible(w: &[u32], k: usize, matrix: &TransitionMatrix) -> bool {
    // Merged word u of length n+k: u_i = w_i for i < n, u_i = w_{i-k} after.
    let n = w.len();
    matrix.word_admissible((0..n + k).map(|i| if i < n { w[i] } else { w[i - k] }))
}

/// Poincaré return time of the cylinder `[w]`: the smallest shift under
/// which the word self-overlaps consistently and (for Markov shifts) the
/// merged word is admissible. Runs in O(n) via the failure function.
pub fn cylinder_return_time(w: &SymbolSequence, admissibility: &Admissibility) -> Result<u64> {
    assert!(!w.is_empty(), "cylinder word must be nonempty");
    let s = w.symbols();
    match admissibility {
        Admissibility::FullShift => Ok(periods(s)[0] as u64),
        Admissibility::Markov(m) => {
            for k in periods(s) {
                if merged_word_admissible(s, k, m) {
                    return Ok(k as u64);
                }
            }
            markov_completion_search(s, m)
        }
    }
}

/// O(n^2) oracle with the same contract as [`cylinder_return_time`],
/// implemented by a direct double loop.
pub fn cylinder_return_time_bruteforce(
    w: &SymbolSequence,
    admissibility: &Admissibility,
) -> Result<u64> {
    assert!(!w.is_empty(), "cylinder word must be nonempty");
    let s = w.symbols();
    let n = s.len();
    for k in 1..=n {
        if (0..n - k).all(|i| s[i] == s[i + k]) {
            match admissibility {
                Admissibility::FullShift => return Ok(k as u64),
                Admissibility::Markov(m) => {
                    if merged_word_admissible(s, k, m) {
                        return Ok(k as u64);
                    }
                }
            }
        }
    }
    match admissibility {
        Admissibility::FullShift => unreachable!("k = n always self-overlaps on the full shift"),
        Admissibility::Markov(m) => markov_completion_search(s, m),
    }
}

/// For Markov shifts where no shift `k <= n` yields an admissible merge:
/// look for the shortest completion `w v w` with an admissible connecting
/// path, up to the mixing-time (Wielandt) bound.
fn markov_completion_search(s: &[u32], m: &TransitionMatrix) -> Result<u64> {
    let n = s.len() as u64;
    if !m.word_admissible(s.iter().copied()) {
        // The cylinder is empty in this shift; report rather than guess.
        return Err(Error::NoAdmissibleReturn { searched: n });
    }
    let last = s[s.len() - 1] as usize;
    let first = s[0] as usize;
    match m.shortest_exact_path(last, first) {
        // A path of t edges inserts t-1 symbols: k = n + t - 1.
        Some(t) => Ok(n + t - 1),
        None => Err(Error::NoAdmissibleReturn {
            searched: n + ((m.alphabet_size().saturating_sub(1)).pow(2) as u64) + 1,
        }),
    }
}

/// One row of a cylinder-return scan: `(n, tau(prefix of length n))`.
pub fn return_ratio_series(
    word: &SymbolSequence,
    n_values: &[usize],
    admissibility: &Admissibility,
) -> Result<Vec<(usize, u64)>> {
    n_values
        .iter()
        .map(|&n| {
            assert!(n >= 1 && n <= word.len(), "n = {} out of range", n);
            Ok((n, cylinder_return_time(&word.prefix(n), admissibility)?))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::make_builtin_map;
    use proptest::prelude::*;

    fn word(s: &[u32]) -> SymbolSequence {
        SymbolSequence::new(s.to_vec())
    }

    #[test]
    fn encode_orbit_examples() {
        let trip = make_builtin_map("tripling", &[]).unwrap();
        let part = Partition::new(vec![1.0 / 3.0, 2.0 / 3.0]);
        let orbit = trip.orbit(0.2, 3).unwrap();
        assert_eq!(encode_orbit(&orbit, &part).symbols(), &[0, 1, 2]);

        let orbit0 = trip.orbit(0.0, 5).unwrap();
        assert_eq!(encode_orbit(&orbit0, &part).symbols(), &[0; 5]);

        let rot = make_builtin_map("rotation", &[0.25]).unwrap();
        let half = Partition::new(vec![0.5]);
        let orbit = rot.orbit(0.0, 4).unwrap();
        // 0, .25, .5, .75 with the right tie-break at .5.
        assert_eq!(encode_orbit(&orbit, &half).symbols(), &[0, 0, 1, 1]);
    }

    #[test]
    fn branch_coding_matches_partition_coding_on_tripling() {
        let trip = make_builtin_map("tripling", &[]).unwrap();
        let part = Partition::new(trip.natural_cut_points(0));
        let orbit = trip.orbit(0.456789, 200).unwrap();
        assert_eq!(
            encode_orbit_by_branch(&trip, &orbit).unwrap(),
            encode_orbit(&orbit, &part)
        );
    }

    #[test]
    fn bernoulli_word_examples() {
        assert_eq!(
            generate_bernoulli_word(&[1.0, 0.0], 5, 42).unwrap().symbols(),
            &[0; 5]
        );

        let w = generate_bernoulli_word(&[0.5, 0.5], 100_000, 1).unwrap();
        let ones = w.symbols().iter().filter(|&&s| s == 1).count() as f64;
        assert!((ones / 100_000.0 - 0.5).abs() < 0.01);

        // All 9 digrams occur in a long uniform ternary word.
        let w = generate_bernoulli_word(&[1.0 / 3.0; 3], 10_000, 2).unwrap();
        let mut seen = [[false; 3]; 3];
        for pair in w.symbols().windows(2) {
            seen[pair[0] as usize][pair[1] as usize] = true;
        }
        assert!(seen.iter().flatten().all(|&b| b));
    }

    #[test]
    fn bad_probability_vector() {
        assert!(generate_bernoulli_word(&[0.5, 0.4], 10, 0).is_err());
        assert!(generate_bernoulli_word(&[], 10, 0).is_err());
    }

    #[test]
    fn cylinder_return_examples() {
        let full = Admissibility::FullShift;
        assert_eq!(cylinder_return_time(&word(&[0, 0, 0, 0]), &full).unwrap(), 1);
        assert_eq!(cylinder_return_time(&word(&[0, 1, 0, 1]), &full).unwrap(), 2);
        assert_eq!(cylinder_return_time(&word(&[0, 1, 1]), &full).unwrap(), 3);
        assert_eq!(cylinder_return_time(&word(&[0, 1, 0]), &full).unwrap(), 2);
        assert_eq!(cylinder_return_time(&word(&[0]), &full).unwrap(), 1);
    }

    #[test]
    fn bruteforce_agrees_on_examples() {
        let full = Admissibility::FullShift;
        for w in [
            word(&[0, 0, 0, 0]),
            word(&[0, 1, 0, 1]),
            word(&[0, 1, 1]),
            word(&[0, 1, 0]),
            word(&[0]),
        ] {
            assert_eq!(
                cylinder_return_time(&w, &full).unwrap(),
                cylinder_return_time_bruteforce(&w, &full).unwrap()
            );
        }
    }

    #[test]
    fn markov_admissibility_golden_mean() {
        // Golden-mean shift: 11 forbidden.
        let m = TransitionMatrix::new(2, vec![true, true, true, false]).unwrap();
        let adm = Admissibility::Markov(m);
        // "10" has period 2 on the full shift; merged word 1010 is
        // admissible (10,01,10 allowed).
        assert_eq!(cylinder_return_time(&word(&[1, 0]), &adm).unwrap(), 2);
        // "01": period 2 merge gives 0101, fine.
        assert_eq!(cylinder_return_time(&word(&[0, 1]), &adm).unwrap(), 2);
        // "1": period 1 merge is 11, forbidden; completion 1 0 1 gives k = 2.
        assert_eq!(cylinder_return_time(&word(&[1]), &adm).unwrap(), 2);
        assert_eq!(
            cylinder_return_time_bruteforce(&word(&[1]), &adm).unwrap(),
            2
        );
        // Inadmissible word: the cylinder is empty.
        assert!(matches!(
            cylinder_return_time(&word(&[1, 1]), &adm),
            Err(Error::NoAdmissibleReturn { .. })
        ));
    }

    #[test]
    fn non_mixing_matrix_is_reported() {
        // Period-2 deterministic cycle 0 -> 1 -> 0; word "0 1" wants an
        // even shift but only k with matching parity exist; "0" has k = 2.
        let m = TransitionMatrix::new(2, vec![false, true, true, false]).unwrap();
        let adm = Admissibility::Markov(m);
        assert_eq!(cylinder_return_time(&word(&[0, 1]), &adm).unwrap(), 2);
        assert_eq!(cylinder_return_time(&word(&[0]), &adm).unwrap(), 2);
    }

    #[test]
    fn dangling_symbol_rejected() {
        assert!(matches!(
            TransitionMatrix::new(2, vec![true, false, true, false]),
            Err(Error::DanglingSymbol(1))
        ));
    }

    #[test]
    fn reconstruction_from_minimal_period() {
        // tau-periodicity claim: w_{i+tau} = w_i for all 0 <= i < n - tau.
        let full = Admissibility::FullShift;
        let w = generate_bernoulli_word(&[0.5, 0.5], 64, 7).unwrap();
        for n in 1..=64usize {
            let p = w.prefix(n);
            let tau = cylinder_return_time(&p, &full).unwrap() as usize;
            assert!(tau >= 1 && tau <= n);
            let s = p.symbols();
            for i in 0..n - tau {
                assert_eq!(s[i + tau], s[i]);
            }
        }
    }

    #[test]
    fn monotone_under_refinement() {
        let full = Admissibility::FullShift;
        for seed in 0..20 {
            let w = generate_bernoulli_word(&[0.5, 0.5], 100, seed).unwrap();
            let mut prev = 0;
            for n in 1..=100usize {
                let tau = cylinder_return_time(&w.prefix(n), &full).unwrap();
                assert!(tau >= prev, "tau dropped from {} to {} at n = {}", prev, tau, n);
                prev = tau;
            }
        }
    }

    #[test]
    fn return_ratio_series_constant_word() {
        let w = word(&[3; 50]);
        let rows = return_ratio_series(&w, &[1, 10, 50], &Admissibility::FullShift).unwrap();
        assert_eq!(rows, vec![(1, 1), (10, 1), (50, 1)]);
    }

    #[test]
    fn word_line_round_trip() {
        let w = word(&[0, 17, 3, 3, 255]);
        assert_eq!(SymbolSequence::parse_line(&w.to_line()).unwrap(), w);
    }

    proptest! {
        #[test]
        fn fast_matches_bruteforce_binary(symbols in proptest::collection::vec(0u32..2, 1..200)) {
            let w = SymbolSequence::new(symbols);
            let full = Admissibility::FullShift;
            prop_assert_eq!(
                cylinder_return_time(&w, &full).unwrap(),
                cylinder_return_time_bruteforce(&w, &full).unwrap()
            );
        }

        #[test]
        fn fast_matches_bruteforce_ternary_markov(symbols in proptest::collection::vec(0u32..3, 1..120)) {
            let w = SymbolSequence::new(symbols);
            // A mixing 3-symbol matrix with one forbidden pair.
            let m = TransitionMatrix::new(
                3,
                vec![true, true, true, true, false, true, true, true, true],
            ).unwrap();
            let adm = Admissibility::Markov(m);
            let fast = cylinder_return_time(&w, &adm);
            let brute = cylinder_return_time_bruteforce(&w, &adm);
            match (fast, brute) {
                (Ok(a), Ok(b)) => prop_assert_eq!(a, b),
                (Err(_), Err(_)) => {}
                other => prop_assert!(false, "fast/brute disagree: {:?}", other),
            }
        }
    }
}
