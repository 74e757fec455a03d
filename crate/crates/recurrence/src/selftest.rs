//! Oracle-equivalence suites runnable from the command line.
//!
//! Each check pits a fast implementation against an independent slow oracle
//! on randomized inputs and reports pass/fail; the same suites back the
//! integration tests.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::complexity::{lz76_parse, lz76_parse_scan};
use crate::maps::{make_builtin_map, IntervalUnion};
use crate::returns::repetition_time;
use crate::symbolic::{
    cylinder_return_time, cylinder_return_time_bruteforce, generate_bernoulli_word, Admissibility,
    SymbolSequence,
};

#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// Fast vs brute-force cylinder return times: exhaustive over all binary
/// words up to `max_exhaustive_len`, then on random ternary words.
pub fn check_cylinder_oracle(max_exhaustive_len: u32, random_words: usize) -> CheckResult {
    let full = Admissibility::FullShift;
    let mut tested = 0usize;
    for len in 1..=max_exhaustive_len {
        for bits in 0u64..(1u64 << len) {
            let symbols: Vec<u32> = (0..len).map(|i| ((bits >> i) & 1) as u32).collect();
            let w = SymbolSequence::new(symbols);
            let fast = cylinder_return_time(&w, &full).unwrap();
            let brute = cylinder_return_time_bruteforce(&w, &full).unwrap();
            if fast != brute {
                return CheckResult {
                    name: "cylinder-return-oracle".into(),
                    passed: false,
                    detail: format!("mismatch on {:?}: fast {} brute {}", w.symbols(), fast, brute),
                };
            }
            tested += 1;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0xC1);
    for _ in 0..random_words {
        let len = rng.gen_range(1..=200);
        let symbols: Vec<u32> = (0..len).map(|_| rng.gen_range(0..3)).collect();
        let w = SymbolSequence::new(symbols);
        let fast = cylinder_return_time(&w, &full).unwrap();
        let brute = cylinder_return_time_bruteforce(&w, &full).unwrap();
        if fast != brute {
            return CheckResult {
                name: "cylinder-return-oracle".into(),
                passed: false,
                detail: format!("mismatch on random word of length {}", len),
            };
        }
        tested += 1;
    }
    CheckResult {
        name: "cylinder-return-oracle".into(),
        passed: true,
        detail: format!("{} words agree", tested),
    }
}

/// Linear LZ76 vs the quadratic reference scan on random small words.
pub fn check_lz76_oracle(words: usize) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(0x17);
    for i in 0..words {
        let len = rng.gen_range(1..=400);
        let alphabet = rng.gen_range(2..=4);
        let symbols: Vec<u32> = (0..len).map(|_| rng.gen_range(0..alphabet)).collect();
        let w = SymbolSequence::new(symbols);
        if lz76_parse(&w).phrases != lz76_parse_scan(&w).phrases {
            return CheckResult {
                name: "lz76-oracle".into(),
                passed: false,
                detail: format!("parse mismatch on word {}", i),
            };
        }
    }
    CheckResult {
        name: "lz76-oracle".into(),
        passed: true,
        detail: format!("{} words agree", words),
    }
}

/// Exact interval-union images vs a dense point-sampling oracle.
pub fn check_image_oracle() -> CheckResult {
    let maps = ["tripling", "tent", "gauss"]
        .iter()
        .map(|n| make_builtin_map(n, &[]).unwrap())
        .chain([make_builtin_map("logistic", &[4.0]).unwrap()])
        .collect::<Vec<_>>();
    let mut rng = ChaCha8Rng::seed_from_u64(0x1A);
    for map in &maps {
        for _ in 0..50 {
            let a: f64 = rng.gen_range(0.05..0.9);
            let b = a + rng.gen_range(1e-4..0.09);
            let u = IntervalUnion::from_intervals(vec![(a, b)]);
            let img = match map.image_of_union(&u) {
                Ok(v) => v,
                Err(_) => continue,
            };
            for i in 0..=500 {
                let x = a + (b - a) * i as f64 / 500.0;
                let y = match map.apply(x) {
                    Ok(v) => v,
                    Err(_) => continue,
                };
                if !img.contains(y) {
                    return CheckResult {
                        name: "interval-image-oracle".into(),
                        passed: false,
                        detail: format!("{}: T({}) = {} outside image of [{}, {}]", map.name(), x, y, a, b),
                    };
                }
            }
        }
    }
    CheckResult {
        name: "interval-image-oracle".into(),
        passed: true,
        detail: "dense samples stay inside exact images".into(),
    }
}

/// Failure-function repetition search vs a naive window scan.
pub fn check_repetition_oracle(words: usize) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(0x2B);
    for i in 0..words {
        let w = generate_bernoulli_word(&[0.5, 0.5], 800, rng.gen()).unwrap();
        let s = w.symbols();
        let n = rng.gen_range(1..=6usize);
        let naive = (1..=s.len() - n).find(|&k| s[k..k + n] == s[..n]).map(|k| k as u64);
        let fast = repetition_time(&w, n).ok();
        if naive != fast {
            return CheckResult {
                name: "repetition-oracle".into(),
                passed: false,
                detail: format!("word {}: fast {:?} naive {:?}", i, fast, naive),
            };
        }
    }
    CheckResult {
        name: "repetition-oracle".into(),
        passed: true,
        detail: format!("{} prefix searches agree", words),
    }
}

/// Runs every suite with moderate sizes.
pub fn run_all() -> Vec<CheckResult> {
    vec![
        check_cylinder_oracle(12, 2000),
        check_lz76_oracle(500),
        check_image_oracle(),
        check_repetition_oracle(500),
    ]
}

#[cfg(test)]
mod tests {
    #[test]
    fn selftest_suites_pass() {
        for check in super::run_all() {
            assert!(check.passed, "{}: {}", check.name, check.detail);
        }
    }
}
