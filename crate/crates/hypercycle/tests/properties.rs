//! Module invariants: algebraic laws checked exactly with proptest, and
//! numeric invariants checked over seeded random draws.

use hypercycle::coords::{self, BarycentricPoint, ReducedState};
use hypercycle::curve::{self, Classification};
use hypercycle::jets::{ExactComplex, Jet3, JetMap3};
use hypercycle::model::{self, Params, SimplexPoint};
use proptest::prelude::*;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_point(rng: &mut ChaCha8Rng) -> SimplexPoint {
    let e: [f64; 4] = std::array::from_fn(|_| -(1.0 - rng.random::<f64>()).ln());
    let s: f64 = e.iter().sum();
    SimplexPoint::new(std::array::from_fn(|i| e[i] / s)).unwrap()
}

fn random_boundary_point(rng: &mut ChaCha8Rng, zeros: usize) -> SimplexPoint {
    let mut e: [f64; 4] = std::array::from_fn(|_| -(1.0 - rng.random::<f64>()).ln());
    let mut idx = [0usize, 1, 2, 3];
    for i in 0..4 {
        let j = rng.random_range(i..4);
        idx.swap(i, j);
    }
    for &i in idx.iter().take(zeros) {
        e[i] = 0.0;
    }
    let s: f64 = e.iter().sum();
    SimplexPoint::new(std::array::from_fn(|i| e[i] / s)).unwrap()
}

fn random_positive_params(rng: &mut ChaCha8Rng) -> Params {
    Params::new([
        rng.random_range(1e-3..1.0),
        rng.random_range(0.5..2.0),
        rng.random_range(0.5..2.0),
        rng.random_range(0.5..2.0),
    ])
    .unwrap()
}

// ---------------------------------------------------------------------------
// model
// ---------------------------------------------------------------------------

#[test]
fn simplex_preservation_on_random_samples() {
    let mut rng = rng(11);
    for _ in 0..10_000 {
        let p = random_positive_params(&mut rng);
        let x = random_point(&mut rng);
        let image = model::map_step(&x, &p).unwrap();
        let sum: f64 = image.coords().iter().sum();
        assert!((sum - 1.0).abs() <= 1e-14);
        assert!(image.coords().iter().all(|&v| v >= 0.0));
    }
}

#[test]
fn vector_field_conserves_total_population() {
    let mut rng = rng(12);
    let p = Params::new([1.0, 2.0, 3.0, 4.0]).unwrap();
    for _ in 0..1_000 {
        let x = random_point(&mut rng);
        let sum: f64 = model::vector_field(&x, &p).iter().sum();
        assert!(sum.abs() <= 1e-15, "conservation violated: {sum:e}");
    }
    for _ in 0..1_000 {
        let p = random_positive_params(&mut rng);
        let x = random_point(&mut rng);
        let sum: f64 = model::vector_field(&x, &p).iter().sum();
        assert!(sum.abs() <= 1e-15);
    }
}

#[test]
fn fixed_point_clauses_agree_on_random_points() {
    let mut rng = rng(13);
    for trial in 0..10_000 {
        let p = random_positive_params(&mut rng);
        let x = match trial % 4 {
            0 => random_point(&mut rng),
            1 => random_boundary_point(&mut rng, 1),
            2 => random_boundary_point(&mut rng, 2),
            _ => random_boundary_point(&mut rng, 3),
        };
        let check = model::is_fixed_point(&x, &p, 1e-12);
        assert_eq!(
            check.algebraic_ok, check.map_ok,
            "clauses disagree at {:?} (field {:.2e}, map {:.2e})",
            x.coords(),
            check.max_field_residual,
            check.max_map_defect
        );
    }
}

#[test]
fn transcritical_collision_bound() {
    // ||P(k1) - Q|| <= 2 k1 M2 for small k1 with unit tail rates.
    for k1 in [0.1, 0.05, 0.02, 0.01, 0.005, 0.001] {
        let p = Params::with_k1(k1).unwrap();
        let fp = model::interior_fixed_point(&p).unwrap();
        let dist = fp.max_distance(&model::Q_CORNER);
        assert!(dist <= 2.0 * k1 * p.m2(), "k1 = {k1}: distance {dist}");
    }
}

// ---------------------------------------------------------------------------
// coords: the pipeline map equals the algebraic closed form in z-coordinates
// ---------------------------------------------------------------------------

/// Independent oracle: the one-step map written directly in centered
/// 4-d coordinates,
/// `F_i(z) = z_i + (z_{i-1} - sum_j z_j z_{j-1}) (z_i + 1/4) / W(z)` with
/// `W(z) = N(z) + sum_j z_{j-1} z_j + 1/4` and
/// `N(z) = sum_j z_j / k_{j+1} + M1/4`.
fn closed_form_reduced_map(zr: &ReducedState, p: &Params) -> [f64; 3] {
    let z = coords::embed(zr);
    let k = p.k();
    let w_of = |i: usize| k[(i + 1) % 4];
    let m1 = p.m1().unwrap();
    let n: f64 = (0..4).map(|j| z[j] / w_of(j)).sum::<f64>() + m1 / 4.0;
    let cross: f64 = (0..4).map(|j| z[(j + 3) % 4] * z[j]).sum();
    let w = n + cross + 0.25;
    let step: [f64; 4] =
        std::array::from_fn(|i| z[i] + (z[(i + 3) % 4] - cross) * (z[i] + 0.25) / w);
    [step[0], step[2], step[3]]
}

#[test]
fn reduced_map_matches_algebraic_closed_form() {
    let mut rng = rng(21);
    for _ in 0..2_000 {
        let p = random_positive_params(&mut rng);
        let zr = ReducedState::new(std::array::from_fn(|_| rng.random_range(-0.08..0.08)));
        let via_pipeline = coords::reduced_map(&zr, &p).unwrap();
        let via_formula = closed_form_reduced_map(&zr, &p);
        for i in 0..3 {
            assert!(
                (via_pipeline.z[i] - via_formula[i]).abs() <= 1e-13,
                "component {i}: pipeline {} vs formula {}",
                via_pipeline.z[i],
                via_formula[i]
            );
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1024))]

    #[test]
    fn embed_center_roundtrip_is_exact(
        z1 in -0.2f64..0.2,
        z3 in -0.2f64..0.2,
        z4 in -0.2f64..0.2,
    ) {
        let zr = ReducedState::new([z1, z3, z4]);
        let back = coords::center_and_reduce(&coords::uncenter(&zr));
        for i in 0..3 {
            prop_assert!((back.z[i] - zr.z[i]).abs() <= 1e-15);
        }
        // The embedding sums to zero up to roundoff.
        let sum: f64 = coords::embed(&zr).iter().sum();
        prop_assert!(sum.abs() <= 1e-15);
    }

    #[test]
    fn barycentric_roundtrip_on_simplex_points(
        seed in 0u64..1_000_000,
        k1 in 0.02f64..1.0,
    ) {
        let mut rng = rng(seed);
        let p = Params::new([k1, rng.random_range(0.5..2.0), rng.random_range(0.5..2.0), rng.random_range(0.5..2.0)]).unwrap();
        let x = random_point(&mut rng);
        let y = coords::to_barycentric(&x, &p).unwrap();
        let back = coords::from_barycentric(&y, &p).unwrap();
        prop_assert!(back.max_distance(&x.coords()) <= 1e-12);
        let y2 = BarycentricPoint::new(y.coords()).unwrap();
        prop_assert_eq!(y2.coords(), y.coords());
    }
}

// ---------------------------------------------------------------------------
// jets: exact ring laws
// ---------------------------------------------------------------------------

fn small_coeff() -> impl Strategy<Value = ExactComplex> {
    (-9i64..10, 1i64..7, -9i64..10, 1i64..7)
        .prop_map(|(p, q, r, s)| ExactComplex::ratio_pair(p, q, r, s))
}

fn small_jet(degree: u32) -> impl Strategy<Value = Jet3> {
    let monomials: Vec<[u8; 3]> = {
        let mut v = Vec::new();
        for a in 0..=degree as u8 {
            for b in 0..=degree as u8 - a {
                for c in 0..=degree as u8 - a - b {
                    v.push([a, b, c]);
                }
            }
        }
        v
    };
    proptest::collection::vec((proptest::sample::select(monomials), small_coeff()), 0..8)
        .prop_map(move |terms| {
            let mut jet = Jet3::zero(degree);
            for (m, c) in terms {
                jet.add_term(m, c);
            }
            jet
        })
}

fn zero_constant_map(degree: u32) -> impl Strategy<Value = JetMap3> {
    [small_jet(degree), small_jet(degree), small_jet(degree)].prop_map(move |comps| {
        let stripped = comps.map(|jet| {
            let mut out = Jet3::zero(degree);
            for (m, c) in jet.terms() {
                if *m != [0, 0, 0] {
                    out.add_term(*m, c.clone());
                }
            }
            out
        });
        JetMap3::new(stripped)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn jet_ring_axioms(a in small_jet(3), b in small_jet(3), c in small_jet(3)) {
        // Associativity and distributivity, exactly.
        let ab_c = a.try_mul(&b).unwrap().try_mul(&c).unwrap();
        let a_bc = a.try_mul(&b.try_mul(&c).unwrap()).unwrap();
        prop_assert_eq!(ab_c, a_bc);
        let left = a.try_mul(&(&b + &c)).unwrap();
        let right = &a.try_mul(&b).unwrap() + &a.try_mul(&c).unwrap();
        prop_assert_eq!(left, right);
        let comm = a.try_mul(&b).unwrap();
        prop_assert_eq!(comm, b.try_mul(&a).unwrap());
    }

    #[test]
    fn substitution_is_functorial(a in small_jet(3), b in small_jet(3), m in zero_constant_map(3)) {
        // (a * b) ∘ m = (a ∘ m) * (b ∘ m), exactly, at matching truncation.
        let product_then_subst = a.try_mul(&b).unwrap().substitute(&m).unwrap();
        let subst_then_product =
            a.substitute(&m).unwrap().try_mul(&b.substitute(&m).unwrap()).unwrap();
        // Truncation commutes with substitution only when the inner map has
        // no constant term and we compare below the bound; both sides here
        // are full degree-3 jets of the same function.
        prop_assert_eq!(product_then_subst, subst_then_product);
    }

    #[test]
    fn truncated_inverse_multiplies_back(m in zero_constant_map(3)) {
        // Keep only the quadratic-and-up part of each component.
        let degree = 3;
        let h_tilde = JetMap3::new(std::array::from_fn(|i| {
            let mut out = Jet3::zero(degree);
            for (mono, coeff) in m.components()[i].terms() {
                if (mono[0] + mono[1] + mono[2]) >= 2 {
                    out.add_term(*mono, coeff.clone());
                }
            }
            out
        }));
        let inv = hypercycle::jets::truncated_inverse_jacobian(&h_tilde).unwrap();
        let dh = (&JetMap3::identity(degree) + &h_tilde).jacobian();
        let product = inv.matmul(&dh).unwrap().truncate_content(degree - 2);
        let id = hypercycle::jets::JetMatrix3::identity(degree).truncate_content(degree - 2);
        prop_assert_eq!(product, id);
    }
}

// ---------------------------------------------------------------------------
// curve
// ---------------------------------------------------------------------------

#[test]
fn rotation_tracks_delta_for_small_k1() {
    for k1 in [0.01, 0.005] {
        let p = Params::with_k1(k1).unwrap();
        let burn = curve::auto_burn(p.delta());
        let orbit = curve::attract_orbit(&p, None, burn, 4_000, 0).unwrap();
        let estimate = curve::estimate_curve(&orbit).unwrap();
        assert_eq!(estimate.classification, Classification::ClosedCurve);
        let ratio = estimate.rotation / p.delta();
        assert!(
            (ratio - 1.0).abs() <= 0.2,
            "k1 = {k1}: rotation/delta = {ratio}"
        );
    }
}

#[test]
fn curve_attracts_nearby_starts() {
    let p = Params::with_k1(0.05).unwrap();
    let burn = curve::auto_burn(p.delta());
    let z0 = curve::default_start(&p);
    let z1 = ReducedState::new([1.2 * z0.z[0], 0.0, 0.0]);
    let e0 = curve::estimate_curve(&curve::attract_orbit(&p, Some(z0), burn, 4_000, 0).unwrap())
        .unwrap();
    let e1 = curve::estimate_curve(&curve::attract_orbit(&p, Some(z1), burn, 4_000, 0).unwrap())
        .unwrap();
    let rel = (e0.radius_mean - e1.radius_mean).abs() / e0.radius_mean;
    assert!(rel <= 0.01, "radii differ by {:.3}%", 100.0 * rel);
}

#[test]
fn random_starts_land_on_the_same_curve() {
    let p = Params::with_k1(0.05).unwrap();
    let burn = curve::auto_burn(p.delta());
    let reference =
        curve::estimate_curve(&curve::attract_orbit(&p, None, burn, 4_000, 0).unwrap()).unwrap();
    for seed in [1u64, 2, 3] {
        let z0 = curve::random_start(&p, seed);
        let estimate =
            curve::estimate_curve(&curve::attract_orbit(&p, Some(z0), burn, 4_000, seed).unwrap())
                .unwrap();
        let rel = (estimate.radius_mean - reference.radius_mean).abs() / reference.radius_mean;
        assert!(rel <= 0.01, "seed {seed}: radii differ by {:.3}%", 100.0 * rel);
    }
}

#[test]
fn refined_curve_is_pointwise_invariant() {
    let p = Params::with_k1(0.05).unwrap();
    let burn = curve::auto_burn(p.delta());
    let orbit = curve::attract_orbit(&p, None, burn, curve::DEFAULT_SAMPLES, 0).unwrap();
    let refined = curve::refine_curve(&p, &orbit, 32).unwrap();
    assert!(refined.residual < 1e-10);
    // The image of any curve point lies back on the curve within 1e-9.
    for j in 0..1_000 {
        let theta = 2.0 * std::f64::consts::PI * (j as f64) / 1_000.0;
        let image = coords::reduced_map(&refined.evaluate(theta), &p).unwrap();
        let shifted = refined.evaluate(theta + refined.rho);
        for d in 0..3 {
            assert!(
                (image.z[d] - shifted.z[d]).abs() < 1e-9,
                "angle {theta}: defect {:e}",
                (image.z[d] - shifted.z[d]).abs()
            );
        }
    }
}

#[test]
fn radius_collapses_monotonically() {
    // Radius shrinks with k1 within estimation noise over a quick decade.
    let mut estimates = Vec::new();
    for k1 in [0.01, 0.02, 0.05, 0.1] {
        let p = Params::with_k1(k1).unwrap();
        let burn = curve::auto_burn(p.delta());
        let orbit = curve::attract_orbit(&p, None, burn, 4_000, 0).unwrap();
        estimates.push(curve::estimate_curve(&orbit).unwrap());
    }
    for pair in estimates.windows(2) {
        let (lo, hi) = (&pair[0], &pair[1]);
        assert!(
            hi.radius_mean > lo.radius_mean - 2.0 * (lo.radius_std + hi.radius_std),
            "radius not monotone within noise: {lo:?} vs {hi:?}"
        );
    }
    let first = estimates.first().unwrap();
    let last = estimates.last().unwrap();
    assert!(last.radius_mean > 2.0 * first.radius_mean);
}
