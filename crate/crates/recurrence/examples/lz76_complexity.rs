//! LZ76 phrase complexity as a computable entropy surrogate.
//!
//! The exhaustive-history parse splits a word into shortest-new phrases;
//! the normalized phrase count c(n) log2(n) / n converges to the source
//! entropy for ergodic sources, and collapses for periodic words. Repeating
//! a prefix out to length n costs only O(log n) extra phrases, the
//! compression fact behind the cylinder-return inequality.
//!
//! Run with: cargo run --example lz76_complexity --release

use recurrence::complexity::{complexity_rate, lz76_parse, repetition_bound_check};
use recurrence::symbolic::{generate_bernoulli_word, SymbolSequence};

fn main() -> recurrence::Result<()> {
    let short = SymbolSequence::new(vec![0, 1, 0, 1, 1, 0, 1, 1, 1, 0]);
    let parse = lz76_parse(&short);
    println!("parse of {:?}:", short.symbols());
    for &(start, len) in &parse.phrases {
        println!("  phrase {:?}", &short.symbols()[start..start + len]);
    }

    println!();
    println!("{:<28} {:>10} {:>12}", "word (length 1e6)", "phrases", "rate nats");
    for &(label, p) in &[("fair bits", 0.5f64), ("Bernoulli(0.9, 0.1)", 0.9)] {
        let word = generate_bernoulli_word(&[p, 1.0 - p], 1_000_000, 5)?;
        let report = complexity_rate(&word);
        println!("{:<28} {:>10} {:>12.4}", label, report.phrase_count, report.rate_nats);
    }
    let periodic = SymbolSequence::new((0..1_000_000).map(|i| (i % 2) as u32).collect());
    let report = complexity_rate(&periodic);
    println!("{:<28} {:>10} {:>12.4}", "periodic 0101...", report.phrase_count, report.rate_nats);
    println!("(log 2 = {:.4}; H(0.9) = {:.4})", std::f64::consts::LN_2, {
        let p: f64 = 0.9;
        -p * p.ln() - (1.0 - p) * (1.0 - p).ln()
    });

    println!();
    let prefix = generate_bernoulli_word(&[0.5, 0.5], 200, 6)?;
    let bound = repetition_bound_check(&prefix, 100_000);
    println!(
        "repeating a {}-symbol random prefix to length {}: {} -> {} phrases (+{})",
        bound.prefix_length,
        bound.total_length,
        bound.prefix_phrases,
        bound.extension_phrases,
        bound.added_phrases
    );
    Ok(())
}
