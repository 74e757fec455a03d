//! Local dimension of an invariant measure, two ways.
//!
//! The pointwise dimension d(x) is the slope of log mu(B_r(x)) against
//! log r. For logistic(4) the invariant density is the arcsine law
//! 1/(pi sqrt(x(1-x))): dimension 1 in the interior, but 1/2 at the
//! endpoint x = 0 where mu(B_r) ~ sqrt(r). The same exponent also falls
//! out of point return times via tau_r ~ r^{-d}.
//!
//! Run with: cargo run --example local_dimension --release

use recurrence::estimators::{dimension_from_point_returns, local_dimension_from_measure};
use recurrence::maps::make_builtin_map;
use recurrence::returns::{scan_scales, SeriesKind};

fn main() -> recurrence::Result<()> {
    let log4 = make_builtin_map("logistic", &[4.0])?;
    let orbit = log4.orbit(log4.sample_initial_point(3)?, 2_000_000)?;

    let interior: Vec<f64> = (0..6).map(|k| 10f64.powf(-2.0 - 0.5 * k as f64)).collect();
    let endpoint: Vec<f64> = (0..6).map(|k| 10f64.powf(-2.0 - k as f64)).collect();

    println!("empirical measure of balls along a 2e6-point orbit:");
    let center = local_dimension_from_measure(&log4, &orbit, 0.5, &interior)?;
    let edge = local_dimension_from_measure(&log4, &orbit, 0.0, &endpoint)?;
    println!("  d(0.5) = {:.4}   (expected 1: finite density)", center.value);
    println!("  d(0)   = {:.4}   (expected 0.5: density blows up like x^-1/2)", edge.value);

    println!();
    println!("point returns on the tripling map (Lebesgue, d = 1 a.e.):");
    let trip = make_builtin_map("tripling", &[])?;
    let grid: Vec<f64> = (0..8).map(|k| 10f64.powf(-1.5 - 0.5 * k as f64)).collect();
    let x = trip.sample_initial_point(3)?;
    let series = scan_scales(SeriesKind::PointReturn, &trip, x, &grid, 1.0);
    let est = dimension_from_point_returns(&series)?;
    println!(
        "  slope of log tau_r vs -log r at x = {:.4}: {:.4}",
        x, est.value
    );
    Ok(())
}
