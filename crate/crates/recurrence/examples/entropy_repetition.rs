//! Metric entropy from repetition times (Ornstein-Weiss).
//!
//! R_n is the first shift at which a word's length-n prefix reoccurs;
//! log R_n / n converges to the entropy of the source. Fair bits give
//! log 2; a biased coin gives its binary entropy.
//!
//! Run with: cargo run --example entropy_repetition --release

use recurrence::estimators::entropy_ow;
use recurrence::experiment::derive_seeds;
use recurrence::symbolic::generate_bernoulli_word;

fn binary_entropy(p: f64) -> f64 {
    -p * p.ln() - (1.0 - p) * (1.0 - p).ln()
}

fn main() -> recurrence::Result<()> {
    let len = 1_000_000usize;
    let seeds = derive_seeds(2, 16);

    println!("{:<18} {:>4} {:>12} {:>10}", "source", "n", "log R_n / n", "h exact");
    for &p in &[0.5f64, 0.7, 0.9] {
        let words = seeds
            .iter()
            .map(|&s| generate_bernoulli_word(&[p, 1.0 - p], len, s))
            .collect::<recurrence::Result<Vec<_>>>()?;
        for &n in &[8usize, 14] {
            let agg = entropy_ow(&words, &[n], (len - n) as u64)?;
            println!(
                "Bernoulli({:.1},{:.1}) {:>4} {:>12.4} {:>10.4}",
                p,
                1.0 - p,
                n,
                agg.mean,
                binary_entropy(p)
            );
        }
    }
    println!();
    println!("the estimate is biased low by ~gamma/n nats; larger n needs longer words.");
    Ok(())
}
