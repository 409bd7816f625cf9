//! Fixed points of the hypercycle map across parameter regimes.
//!
//! ```bash
//! cargo run --release --example fixed_points
//! ```

use hypercycle::model::{
    self, closed_form_spectrum, interior_fixed_point, is_fixed_point, Params, SimplexPoint,
};

fn main() {
    // Cooperative regime: a unique interior fixed point P with
    // p_i = 1/(k_{i+1} M1).
    for k in [[1.0, 1.0, 1.0, 1.0], [1.0, 2.0, 4.0, 4.0], [0.3, 0.8, 1.5, 2.0]] {
        let p = Params::new(k).unwrap();
        let fp = interior_fixed_point(&p).unwrap();
        let spectrum = closed_form_spectrum(&p).unwrap();
        println!("k = {k:?}");
        println!("  P = {:?}", fp.coords());
        println!(
            "  map defect ||F(P) - P|| = {:.2e}",
            fp.max_distance(&model::map_step(&fp, &p).unwrap().coords())
        );
        println!("  eigenvalues at P:");
        for (e, m) in spectrum.eigenvalues.iter().zip(&spectrum.moduli) {
            println!("    {e:.6}  (modulus {m:.6})");
        }
        println!();
    }

    // The boundary carries whole segments of fixed points.
    let p = Params::new([1.0, 2.0, 3.0, 4.0]).unwrap();
    for (name, point) in [
        ("(0.3, 0, 0.7, 0)", [0.3, 0.0, 0.7, 0.0]),
        ("(0, 0.5, 0, 0.5)", [0.0, 0.5, 0.0, 0.5]),
        ("(0.3, 0, 0, 0.7)", [0.3, 0.0, 0.0, 0.7]),
    ] {
        let x = SimplexPoint::new(point).unwrap();
        let check = is_fixed_point(&x, &p, 1e-12);
        println!("{name} fixed for k1 = 1?   {}", check.is_fixed);
    }
    let p0 = Params::new([0.0, 2.0, 3.0, 4.0]).unwrap();
    let x = SimplexPoint::new([0.3, 0.0, 0.0, 0.7]).unwrap();
    println!(
        "(0.3, 0, 0, 0.7) fixed for k1 = 0?   {} (the extra segment exists only at k1 = 0)",
        is_fixed_point(&x, &p0, 1e-12).is_fixed
    );

    // Degenerate and shifted regimes.
    println!();
    match interior_fixed_point(&Params::new([0.0, 1.0, 1.0, 1.0]).unwrap()) {
        Err(e) => println!("k1 = 0:    {e}"),
        Ok(_) => unreachable!(),
    }
    match interior_fixed_point(&Params::new([-0.2, 1.0, 1.0, 1.0]).unwrap()) {
        Err(e) => println!("k1 = -0.2: {e}"),
        Ok(_) => unreachable!(),
    }
}
