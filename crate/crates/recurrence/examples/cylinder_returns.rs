//! Exact Poincaré return times of cylinder sets.
//!
//! The return time of the cylinder around a word's first `n` symbols is a
//! pure word statistic: the minimal period of the prefix (plus an
//! admissibility completion for Markov shifts). For typical words of a
//! positive-entropy source the ratio tau/n climbs toward 1; for a
//! zero-entropy rotation coding it stalls strictly below 1.
//!
//! Run with: cargo run --example cylinder_returns

use recurrence::maps::make_builtin_map;
use recurrence::symbolic::{
    cylinder_return_time, encode_orbit, generate_bernoulli_word, Admissibility, Partition,
};

fn main() -> recurrence::Result<()> {
    let full = Admissibility::FullShift;

    println!("fair-bit words (doubling-map symbolic model), 20 seeds:");
    println!("{:>6} {:>10} {:>10}", "n", "mean tau", "mean tau/n");
    for n in [10usize, 30, 100, 300] {
        let mut mean_tau = 0.0;
        let mut mean_ratio = 0.0;
        for seed in 0..20 {
            let word = generate_bernoulli_word(&[0.5, 0.5], n, seed)?;
            let tau = cylinder_return_time(&word, &full)? as f64;
            mean_tau += tau / 20.0;
            mean_ratio += tau / n as f64 / 20.0;
        }
        println!("{:>6} {:>10.1} {:>10.3}", n, mean_tau, mean_ratio);
    }

    let alpha = (5f64.sqrt() - 1.0) / 2.0;
    let rot = make_builtin_map("rotation", &[alpha])?;
    let partition = Partition::new(vec![0.5]);
    println!();
    println!("golden rotation coded over {{[0,1/2), [1/2,1)}}, 20 seeds:");
    println!("{:>6} {:>10}", "n", "mean tau/n");
    for n in [100usize, 300, 1000] {
        let mut mean_ratio = 0.0;
        for seed in 0..20 {
            let x = rot.sample_initial_point(seed)?;
            let word = encode_orbit(&rot.orbit(x, n)?, &partition).prefix(n);
            let tau = cylinder_return_time(&word, &full)? as f64;
            mean_ratio += tau / n as f64 / 20.0;
        }
        println!("{:>6} {:>10.3}", n, mean_ratio);
    }
    println!();
    println!("positive entropy pushes the ratio toward 1; zero entropy pins it below.");
    Ok(())
}
