//! The square-root radius law: curve radius against delta over two decades
//! of k1, with the log-log fit recovering the exponent 1/2.
//!
//! ```bash
//! cargo run --release --example radius_scaling
//! ```

use hypercycle::curve::{sweep_scaling, SweepOptions};
use hypercycle::model::Params;

fn main() {
    let grid = [0.001, 0.002, 0.005, 0.01, 0.02, 0.05, 0.1];
    let base = Params::with_k1(0.05).unwrap();
    println!("sweeping k1 over {grid:?} (k2 = k3 = k4 = 1)...\n");

    let fit = sweep_scaling(&base, &grid, &SweepOptions::default()).unwrap();

    println!("{:>8} {:>12} {:>14} {:>12} {:>14}", "k1", "delta", "radius", "rot/delta", "class");
    for pt in &fit.points {
        if let Some(e) = &pt.estimate {
            println!(
                "{:>8} {:>12.6} {:>14.8} {:>12.6} {:>14}",
                pt.k1,
                pt.delta,
                e.radius_mean,
                e.rotation / pt.delta,
                pt.note
            );
        }
    }
    println!("\nlog radius vs log delta:");
    println!("  slope     = {:.5}   (square-root law: 0.5)", fit.slope);
    println!("  intercept = {:.5}   (radius ~ {:.4} sqrt(delta))", fit.intercept, fit.intercept.exp());
    println!("  r^2       = {:.6}", fit.r_squared);
}
