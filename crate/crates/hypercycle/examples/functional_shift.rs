//! The functional shift k1 -> 0: the interior fixed point collides with
//! the corner Q = (0,0,0,1) (transcritical), the invariant curve collapses,
//! and for k1 <= 0 every interior orbit drains to Q.
//!
//! ```bash
//! cargo run --release --example functional_shift
//! ```

use hypercycle::curve::{converge_to_corner, single_point_estimate, SweepOptions};
use hypercycle::model::{interior_fixed_point, Params, SimplexPoint, Q_CORNER};

fn main() {
    println!("transcritical collision P -> Q as k1 -> 0+ (k2 = k3 = k4 = 1):");
    println!("{:>8} {:>14} {:>14}", "k1", "||P - Q||", "bound 2 k1 M2");
    for k1 in [0.1, 0.05, 0.02, 0.01, 0.005, 0.002, 0.001] {
        let p = Params::with_k1(k1).unwrap();
        let fp = interior_fixed_point(&p).unwrap();
        let dist = fp.max_distance(&Q_CORNER);
        println!("{k1:>8} {dist:>14.8} {:>14.8}", 2.0 * k1 * p.m2());
    }

    println!("\ncurve radius collapses with the same square-root speed:");
    let opts = SweepOptions { n: 4_000, ..Default::default() };
    for k1 in [0.05, 0.02, 0.01] {
        let p = Params::with_k1(k1).unwrap();
        let e = single_point_estimate(&p, &opts).unwrap();
        println!(
            "  k1 = {k1:>5}: radius = {:.6} = {:.4} sqrt(delta)   [{}]",
            e.radius_mean,
            e.radius_mean / e.delta.sqrt(),
            e.classification
        );
    }

    // On the degenerate side the corner attracts the whole interior, but
    // only algebraically (~1.1/n): each decade of accuracy costs a decade
    // of iterations.
    println!("\ndegenerate side: interior orbits drain to Q = (0,0,0,1):");
    for k1 in [0.0, -0.05, -0.1] {
        let p = Params::with_k1(k1).unwrap();
        let record = converge_to_corner(&p, &SimplexPoint::center(), 1e-5, 2_000_000).unwrap();
        println!(
            "  k1 = {k1:>5}: ||x - Q|| <= 1e-5 after {:>7} iterations (n * dist = {:.3})",
            record.iterations,
            record.iterations as f64 * record.final_distance
        );
    }
}
