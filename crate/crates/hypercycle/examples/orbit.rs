//! Orbits of the hypercycle map: unstable spiral away from P, and the
//! one-step Euler relation with the continuous-time replicator field.
//!
//! ```bash
//! cargo run --release --example orbit
//! ```

use hypercycle::model::{flux, iterate, map_step, vector_field, Params, SimplexPoint};

fn main() {
    let p = Params::new([1.0, 1.0, 1.0, 1.0]).unwrap();

    // Start near the interior fixed point; |lambda_1| > 1 pushes the orbit
    // away along the center plane.
    let x0 = SimplexPoint::new([0.26, 0.25, 0.24, 0.25]).unwrap();
    println!("orbit from {:?} (k = 1,1,1,1):", x0.coords());
    for (i, x) in iterate(&x0, &p, 8, 0).unwrap().iter().enumerate() {
        let c = x.coords();
        println!("  step {:>2}: [{:.6}, {:.6}, {:.6}, {:.6}]", i + 1, c[0], c[1], c[2], c[3]);
    }
    let far = iterate(&x0, &p, 1, 400).unwrap()[0];
    println!("  step 401 distance from P: {:.4}", far.max_distance(&[0.25; 4]));

    // One map step is an Euler step of the replicator field:
    // (F(x) - x)(1 + phi(x)) = x_i (k_i x_{i-1} - phi(x)).
    let x = SimplexPoint::new([0.4, 0.3, 0.2, 0.1]).unwrap();
    let image = map_step(&x, &p).unwrap();
    let field = vector_field(&x, &p);
    let phi = flux(&x, &p);
    println!("\nEuler relation at {:?} (phi = {phi:.4}):", x.coords());
    for i in 0..4 {
        let lhs = (image.get(i) - x.get(i)) * (1.0 + phi);
        println!("  component {}: (F-x)(1+phi) = {lhs:+.8}, field = {:+.8}", i + 1, field[i]);
    }
}
