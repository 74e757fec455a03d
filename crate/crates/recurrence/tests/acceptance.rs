//! End-to-end acceptance suite. Each test prints one PASS line with the
//! measured statistic so a failing tolerance is immediately legible.

use std::f64::consts::PI;

use recurrence::complexity::{complexity_rate, repetition_bound_check};
use recurrence::estimators::{
    dimension_from_point_returns, entropy_ow, hofbauer_crosscheck, local_dimension_from_measure,
    lyapunov_birkhoff, lyapunov_from_ball_returns, Estimate,
};
use recurrence::experiment::{
    derive_seeds, run_experiment, Budgets, ExperimentConfig, MapSpec, Quantity,
};
use recurrence::maps::make_builtin_map;
use recurrence::returns::{scan_scales, SeriesKind};
use recurrence::selftest::check_cylinder_oracle;
use recurrence::symbolic::{
    cylinder_return_time, encode_orbit, encode_orbit_by_branch, generate_bernoulli_word,
    Admissibility, Partition, SymbolSequence,
};

const LN_2: f64 = std::f64::consts::LN_2;

fn geometric_grid(exp_start: f64, exp_step: f64, count: usize) -> Vec<f64> {
    (0..count).map(|k| 10f64.powf(exp_start - exp_step * k as f64)).collect()
}

#[test]
fn criterion_01_cylinder_return_oracle_equivalence() {
    let result = check_cylinder_oracle(14, 10_000);
    println!(
        "[criterion 01] {}: fast vs brute-force cylinder returns, {}",
        if result.passed { "PASS" } else { "FAIL" },
        result.detail
    );
    assert!(result.passed, "{}", result.detail);
}

#[test]
fn criterion_02_cylinder_return_ratio_band() {
    let full = Admissibility::FullShift;
    let seeds = derive_seeds(0x02, 100);
    let mut mean30 = 0.0;
    let mut mean100 = 0.0;
    for &seed in &seeds {
        let word = generate_bernoulli_word(&[0.5, 0.5], 100, seed).unwrap();
        let tau30 = cylinder_return_time(&word.prefix(30), &full).unwrap();
        let tau100 = cylinder_return_time(&word, &full).unwrap();
        let ratio30 = tau30 as f64 / 30.0;
        let ratio100 = tau100 as f64 / 100.0;
        assert!(ratio30 <= 1.0, "ratio {} above 1 at n=30", ratio30);
        assert!(ratio100 <= 1.0, "ratio {} above 1 at n=100", ratio100);
        mean30 += ratio30 / seeds.len() as f64;
        mean100 += ratio100 / seeds.len() as f64;
    }
    let pass = mean30 >= 0.9 && (1.0 - mean100) <= (1.0 - mean30);
    println!(
        "[criterion 02] {}: mean ratio {:.4} at n=30 (>= 0.9), {:.4} at n=100 (deficit shrinks)",
        if pass { "PASS" } else { "FAIL" },
        mean30,
        mean100
    );
    assert!(mean30 >= 0.9, "mean ratio at n=30 is {}", mean30);
    assert!(
        (1.0 - mean100) <= (1.0 - mean30),
        "deficit grew: {} at n=30, {} at n=100",
        1.0 - mean30,
        1.0 - mean100
    );
}

#[test]
fn criterion_03_golden_rotation_strictly_interior_band() {
    let alpha = (5f64.sqrt() - 1.0) / 2.0;
    let rot = make_builtin_map("rotation", &[alpha]).unwrap();
    let partition = Partition::new(vec![0.5]);
    let full = Admissibility::FullShift;
    let seeds = derive_seeds(0x03, 32);
    let mut means = Vec::new();
    for &n in &[100usize, 1000] {
        let mut mean = 0.0;
        for &seed in &seeds {
            let x = rot.sample_initial_point(seed).unwrap();
            let orbit = rot.orbit(x, n).unwrap();
            let word = encode_orbit(&orbit, &partition);
            let tau = cylinder_return_time(&word.prefix(n), &full).unwrap();
            mean += tau as f64 / n as f64 / seeds.len() as f64;
        }
        means.push((n, mean));
    }
    let pass = means.iter().all(|&(_, m)| m > 0.05 && m < 0.95);
    println!(
        "[criterion 03] {}: golden-rotation mean ratios {:?} all inside (0.05, 0.95)",
        if pass { "PASS" } else { "FAIL" },
        means
    );
    for (n, m) in means {
        assert!(m > 0.05 && m < 0.95, "mean ratio {} at n={} not strictly interior", m, n);
    }
}

#[test]
fn criterion_04_ornstein_weiss_entropy_bernoulli() {
    let n = 18usize;
    let len = 10_000_000usize;
    let seeds = derive_seeds(0x04, 32);
    let words: Vec<SymbolSequence> = seeds
        .iter()
        .map(|&s| generate_bernoulli_word(&[0.5, 0.5], len, s).unwrap())
        .collect();
    let agg = entropy_ow(&words, &[n], (len - n) as u64).unwrap();
    let rel = (agg.mean - LN_2).abs() / LN_2;
    let pass = rel < 0.10 && agg.failures == 0;
    println!(
        "[criterion 04] {}: mean log R_18/18 = {:.4} nats vs log 2 = {:.4} (rel err {:.3})",
        if pass { "PASS" } else { "FAIL" },
        agg.mean,
        LN_2,
        rel
    );
    assert_eq!(agg.failures, 0);
    assert!(rel < 0.10, "relative error {}", rel);
}

#[test]
fn criterion_05_lyapunov_from_ball_returns_tripling() {
    let trip = make_builtin_map("tripling", &[]).unwrap();
    let grid = geometric_grid(-1.5, 0.5, 8);
    let seeds = derive_seeds(0x05, 32);
    let mut values = Vec::new();
    for &seed in &seeds {
        let x = trip.sample_initial_point(seed).unwrap();
        let series = scan_scales(SeriesKind::BallSetReturn, &trip, x, &grid, 1.0);
        values.push(lyapunov_from_ball_returns(&series).unwrap().value);
    }
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    let target = 3f64.ln();
    let rel = (mean - target).abs() / target;
    let pass = rel < 0.10;
    println!(
        "[criterion 05] {}: ensemble lambda = {:.4} vs log 3 = {:.4} (rel err {:.3})",
        if pass { "PASS" } else { "FAIL" },
        mean,
        target,
        rel
    );
    assert!(pass, "relative error {}", rel);
}

fn dimension_ensemble(map_name: &str, master: u64) -> (f64, usize) {
    let map = make_builtin_map(map_name, &[]).unwrap();
    let grid = geometric_grid(-1.5, 0.5, 8);
    let seeds = derive_seeds(master, 32);
    let mut values = Vec::new();
    let mut failures = 0usize;
    for &seed in &seeds {
        let x = map.sample_initial_point(seed).unwrap();
        let series = scan_scales(SeriesKind::PointReturn, &map, x, &grid, 1.0);
        match dimension_from_point_returns(&series) {
            Ok(e) => values.push(e.value),
            Err(_) => failures += 1,
        }
    }
    (values.iter().sum::<f64>() / values.len() as f64, failures)
}

#[test]
fn criterion_06_dimension_from_point_returns() {
    let (trip_mean, trip_failures) = dimension_ensemble("tripling", 0x06);
    let (gauss_mean, gauss_failures) = dimension_ensemble("gauss", 0x66);
    let pass = (trip_mean - 1.0).abs() < 0.10 && (gauss_mean - 1.0).abs() < 0.10;
    println!(
        "[criterion 06] {}: dimension tripling {:.4} ({} failed seeds), gauss {:.4} ({} failed seeds), target 1",
        if pass { "PASS" } else { "FAIL" },
        trip_mean,
        trip_failures,
        gauss_mean,
        gauss_failures
    );
    assert!((trip_mean - 1.0).abs() < 0.10, "tripling dimension {}", trip_mean);
    assert!((gauss_mean - 1.0).abs() < 0.10, "gauss dimension {}", gauss_mean);
}

#[test]
fn criterion_07_hofbauer_crosscheck_gauss() {
    let gauss = make_builtin_map("gauss", &[]).unwrap();
    let target_lambda = PI * PI / (6.0 * LN_2);
    let seeds = derive_seeds(0x07, 32);

    let lambda = lyapunov_birkhoff(&gauss, &seeds, 100_000).unwrap();
    let lambda_rel = (lambda.mean - target_lambda).abs() / target_lambda;

    // Entropy via repetition times on the countable-partition coding.
    let mut words = Vec::new();
    let mut word_failures = 0usize;
    for &seed in &seeds {
        let x = gauss.sample_initial_point(seed).unwrap();
        match gauss.orbit(x, 100_000) {
            Ok(orbit) => words.push(encode_orbit_by_branch(&gauss, &orbit).unwrap()),
            Err(_) => word_failures += 1,
        }
    }
    let entropy = entropy_ow(&words, &[3, 4], 99_000).unwrap();

    let (dim_mean, _) = dimension_ensemble("gauss", 0x77);
    let wrap = |value: f64, method: &str| Estimate {
        value,
        method: method.into(),
        fit: None,
        lower_envelope: None,
        scale_min: 0.0,
        scale_max: 0.0,
        n_samples: seeds.len(),
    };
    let report = hofbauer_crosscheck(
        &wrap(entropy.mean, "entropy-ornstein-weiss"),
        &wrap(lambda.mean, "lyapunov-birkhoff"),
        &wrap(dim_mean, "dimension-point-returns"),
        0.15,
    )
    .unwrap();
    let pass = lambda_rel < 0.05 && report.within_tolerance;
    println!(
        "[criterion 07] {}: gauss lambda {:.4} (target {:.4}, rel {:.3}), h {:.4}, d {:.4}, |d - h/lambda| = {:.4} ({} orbit failures)",
        if pass { "PASS" } else { "FAIL" },
        lambda.mean,
        target_lambda,
        lambda_rel,
        entropy.mean,
        dim_mean,
        report.discrepancy.abs(),
        word_failures
    );
    assert!(lambda_rel < 0.05, "lambda relative error {}", lambda_rel);
    assert!(report.within_tolerance, "discrepancy {}", report.discrepancy);
}

#[test]
fn criterion_08_local_dimension_from_measure_logistic() {
    let log4 = make_builtin_map("logistic", &[4.0]).unwrap();
    let x0 = log4.sample_initial_point(0x08).unwrap();
    let orbit = log4.orbit(x0, 10_000_000).unwrap();

    let interior = geometric_grid(-2.0, 0.5, 7);
    let center = local_dimension_from_measure(&log4, &orbit, 0.5, &interior).unwrap();

    let endpoint_scales = geometric_grid(-2.0, 1.0, 7);
    let endpoint = local_dimension_from_measure(&log4, &orbit, 0.0, &endpoint_scales).unwrap();

    let pass = (center.value - 1.0).abs() < 0.10 && (endpoint.value - 0.5).abs() < 0.15 * 0.5;
    println!(
        "[criterion 08] {}: logistic(4) slope {:.4} at x=0.5 (target 1), {:.4} at x=0 (target 0.5)",
        if pass { "PASS" } else { "FAIL" },
        center.value,
        endpoint.value
    );
    assert!((center.value - 1.0).abs() < 0.10, "slope at 0.5 is {}", center.value);
    assert!(
        (endpoint.value - 0.5).abs() < 0.15 * 0.5,
        "slope at 0 is {}",
        endpoint.value
    );
}

#[test]
fn criterion_09_lz76_complexity_rate() {
    let fair = generate_bernoulli_word(&[0.5, 0.5], 1_000_000, 0x09).unwrap();
    let fair_rate = complexity_rate(&fair).rate_nats;
    let rel = (fair_rate - LN_2).abs() / LN_2;

    let periodic = SymbolSequence::new((0..100_000).map(|i| (i % 2) as u32).collect());
    let periodic_rate = complexity_rate(&periodic).rate_nats;

    let pass = rel < 0.10 && periodic_rate < 0.02;
    println!(
        "[criterion 09] {}: fair-bit rate {:.4} nats (target log 2, rel {:.3}), periodic rate {:.5} (< 0.02)",
        if pass { "PASS" } else { "FAIL" },
        fair_rate,
        rel,
        periodic_rate
    );
    assert!(rel < 0.10, "fair-bit rate {}", fair_rate);
    assert!(periodic_rate < 0.02, "periodic rate {}", periodic_rate);
}

#[test]
fn criterion_10_repetition_compression_bound() {
    let total = 10_000usize;
    let bound = 10.0 * (total as f64).log2();
    let seeds = derive_seeds(0x0A, 1000);
    let mut worst = 0usize;
    for (i, &seed) in seeds.iter().enumerate() {
        let len = 1 + (i % 500);
        let prefix = generate_bernoulli_word(&[0.5, 0.5], len, seed).unwrap();
        let report = repetition_bound_check(&prefix, total);
        worst = worst.max(report.added_phrases);
        assert!(
            (report.added_phrases as f64) <= bound,
            "prefix length {} added {} phrases, bound {}",
            len,
            report.added_phrases,
            bound
        );
    }
    println!(
        "[criterion 10] PASS: periodic extension to {} added at most {} phrases across 1000 prefixes (bound {:.1})",
        total, worst, bound
    );
}

#[test]
fn criterion_11_experiment_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let config = |out: std::path::PathBuf| ExperimentConfig {
        map: MapSpec { name: "tripling".into(), params: vec![] },
        seeds: 8,
        master_seed: 7,
        r_grid: geometric_grid(-2.0, 0.5, 5),
        n_grid: vec![2, 4, 6, 8],
        budgets: Budgets { orbit_len: 20_000, birkhoff_n: 20_000, ..Budgets::default() },
        out_dir: out,
        quantities: vec![
            Quantity::CylinderReturn,
            Quantity::PointReturn,
            Quantity::BallReturn,
            Quantity::Repetition,
            Quantity::Complexity,
            Quantity::Lyapunov,
            Quantity::Dimension,
            Quantity::Entropy,
            Quantity::Crosscheck,
        ],
    };
    let a = run_experiment(&config(dir.path().join("a"))).unwrap();
    let b = run_experiment(&config(dir.path().join("b"))).unwrap();
    assert_eq!(a.files, b.files);
    let mut compared = 0usize;
    for name in &a.files {
        // The manifest embeds wall-clock time; every payload file must be
        // byte-identical.
        if name == "manifest.json" {
            continue;
        }
        let bytes_a = std::fs::read(a.out_dir.join(name)).unwrap();
        let bytes_b = std::fs::read(b.out_dir.join(name)).unwrap();
        assert_eq!(bytes_a, bytes_b, "file {} differs between reruns", name);
        compared += 1;
    }
    println!(
        "[criterion 11] PASS: {} artifact files byte-identical across reruns",
        compared
    );
}
