//! Acceptance checks, runnable as a library call, from the `verify` CLI
//! subcommand, or through the `acceptance` integration-test target.
//!
//! Each criterion pins its tolerance in code and reports one line. The
//! degenerate-side criterion (7) states its cap and tolerance exactly as
//! given even though the corner approach is algebraic (`~1.1/n`), so it
//! reports the live-measured decay law alongside its verdict; see the
//! repository notes for the analysis.

use crate::coords::{self, ReducedState};
use crate::curve::{self, SweepOptions};
use crate::jets::{ExactComplex, Jet3};
use crate::model::{self, Params, SimplexPoint};
use crate::normalform;
use crate::rng::SplitMix64;
use std::fmt::Write as _;
use std::time::{Duration, Instant};

/// Outcome of one acceptance criterion.
#[derive(Debug, Clone)]
pub struct Criterion {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    pub elapsed: Duration,
    pub detail: String,
}

impl Criterion {
    pub fn report_line(&self) -> String {
        format!(
            "criterion {} [{}]: {} ({:.2} s) — {}",
            self.id,
            self.name,
            if self.passed { "PASS" } else { "FAIL" },
            self.elapsed.as_secs_f64(),
            self.detail
        )
    }
}

/// Runs all nine criteria in order.
pub fn run_all() -> Vec<Criterion> {
    vec![
        criterion_1_resonant_coefficient(),
        criterion_2_kill_table(),
        criterion_3_diagonalization(),
        criterion_4_jet_cross_check(),
        criterion_5_fixed_point_spectrum(),
        criterion_6_radius_law(),
        criterion_7_degenerate_side(),
        criterion_8_invariance_refinement(),
        criterion_9_identities(),
    ]
}

fn finish(
    id: u32,
    name: &'static str,
    started: Instant,
    budget: Option<Duration>,
    mut passed: bool,
    mut detail: String,
) -> Criterion {
    let elapsed = started.elapsed();
    if let Some(budget) = budget {
        if elapsed > budget {
            passed = false;
            let _ = write!(detail, "; exceeded runtime budget of {:.0} s", budget.as_secs_f64());
        }
    }
    Criterion { id, name, passed, elapsed, detail }
}

/// Criterion 1: The full pipeline yields `alpha_1 = -16/5 - 48/5 i` and the
/// `nu`-resonant coefficient `64/5`, bit-exactly, in under a second.
pub fn criterion_1_resonant_coefficient() -> Criterion {
    let t = Instant::now();
    let (passed, detail) = match normalform::derive() {
        Ok(d) => {
            let alpha_ok = d.result.alpha1 == normalform::known_alpha1();
            let nu_ok = d.result.nu_resonant == normalform::known_nu_resonant();
            let mirror_ok =
                d.g2.component(1).get([1, 2, 0]) == normalform::known_alpha1().conj();
            (
                alpha_ok && nu_ok && mirror_ok,
                format!(
                    "alpha_1 = {} (exact match: {alpha_ok}), nu = {} (exact match: {nu_ok}), \
                     conjugate mirror: {mirror_ok}",
                    d.result.alpha1, d.result.nu_resonant
                ),
            )
        }
        Err(e) => (false, format!("derivation failed: {e}")),
    };
    finish(1, "resonant coefficient, exact", t, Some(Duration::from_secs(1)), passed, detail)
}

/// Criterion 2: All 18 quadratic-kill coefficients match their closed forms and the
/// transformed quadratic part is exactly zero.
pub fn criterion_2_kill_table() -> Criterion {
    let t = Instant::now();
    let (passed, detail) = match normalform::derive() {
        Ok(d) => {
            let expected = normalform::known_kill_table();
            let mut mismatches = Vec::new();
            for comp in 0..3 {
                for slot in 0..6 {
                    if d.kill.coeffs[comp][slot] != expected[comp][slot] {
                        mismatches.push(normalform::QuadraticKill::name(comp, slot));
                    }
                }
            }
            let quad_zero =
                (0..3).all(|c| d.g2.component(c).degree_part(2).is_zero());
            (
                mismatches.is_empty() && quad_zero,
                if mismatches.is_empty() {
                    format!("all 18 coefficients exact; transformed quadratic part zero: {quad_zero}")
                } else {
                    format!("mismatched coefficients: {mismatches:?}")
                },
            )
        }
        Err(e) => (false, format!("derivation failed: {e}")),
    };
    finish(2, "quadratic-kill table, exact", t, None, passed, detail)
}

/// Criterion 3: `Cinv Dg(0) C = diag(i, -i, -1)` exactly, with `Dg(0)` taken from the
/// pipeline's jet.
pub fn criterion_3_diagonalization() -> Criterion {
    let t = Instant::now();
    let es = normalform::build_eigenstructure();
    let dg0 = coords::g_jet(3).linear_part();
    let diag = es.cinv.matmul(&dg0).matmul(&es.c);
    let mut passed = es.cinv.matmul(&es.c).is_identity();
    for r in 0..3 {
        for c in 0..3 {
            let expect = if r == c { es.spectrum[r].clone() } else { ExactComplex::zero() };
            passed &= diag.entries[r][c] == expect;
        }
    }
    let detail = format!(
        "Cinv C = Id and Cinv Dg(0) C = diag({}, {}, {}) exactly: {passed}",
        es.spectrum[0], es.spectrum[1], es.spectrum[2]
    );
    finish(3, "diagonalization, exact", t, None, passed, detail)
}

/// Criterion 4: Degree-2/3 jets of the reduced field match the factored homogeneous
/// parts, coefficient by coefficient.
pub fn criterion_4_jet_cross_check() -> Criterion {
    let t = Instant::now();
    let jet = coords::g_jet(3);
    let expected = factored_homogeneous_parts();
    let mut failures = Vec::new();
    for (comp, (lin, quad, cub)) in expected.into_iter().enumerate() {
        if jet.component(comp).degree_part(1) != lin {
            failures.push(format!("component {} degree 1", comp + 1));
        }
        if jet.component(comp).degree_part(2) != quad {
            failures.push(format!("component {} degree 2", comp + 1));
        }
        if jet.component(comp).degree_part(3) != cub {
            failures.push(format!("component {} degree 3", comp + 1));
        }
    }
    let passed = failures.is_empty();
    let detail = if passed {
        "all homogeneous parts (degrees 1-3, three components) match the factored forms exactly"
            .to_string()
    } else {
        format!("mismatches: {failures:?}")
    };
    finish(4, "jet cross-check, exact", t, None, passed, detail)
}

/// The factored closed forms of the homogeneous parts of `g`, built
/// independently through jet arithmetic: for each component the linear,
/// quadratic and cubic parts.
fn factored_homogeneous_parts() -> [(Jet3, Jet3, Jet3); 3] {
    let d = 3;
    let z1 = || Jet3::var(d, 0);
    let z3 = || Jet3::var(d, 1);
    let z4 = || Jet3::var(d, 2);
    let scale = |j: &Jet3, n: i64| j.scale(&ExactComplex::from_int(n));
    let mul = |a: &Jet3, b: &Jet3| a.try_mul(b).expect("matching bounds");

    let s = &z1() + &z3();
    let s2 = mul(&s, &s);
    let total = &s + &z4(); // z1 + z3 + z4
    let s_plus_2z4 = &s + &scale(&z4(), 2);
    let s_minus_2z4 = &s - &scale(&z4(), 2);

    // degree-1 parts
    let l1 = z4();
    let l2 = -&total;
    let l3 = z3();

    // degree-2 parts
    let q1 = &(&scale(&mul(&z4(), &z1()), 4) - &scale(&mul(&z4(), &z4()), 4)) + &s2;
    let q2 = &(&scale(&mul(&z4(), &total), 4) - &scale(&mul(&z3(), &total), 4)) + &s2;
    let q3 = s2.clone();

    // degree-3 parts
    let c1 = scale(&mul(&mul(&(&z1() - &z4()), &s_plus_2z4), &s_minus_2z4), 4);
    let c2 = scale(&mul(&(&z3() - &z4()), &mul(&s_plus_2z4, &s_plus_2z4)), 4);
    let c3 = Jet3::zero(d);

    [(l1, q1, c1), (l2, q2, c2), (l3, q3, c3)]
}

fn random_params(rng: &mut SplitMix64) -> Params {
    let k1 = rng.range(f64::EPSILON, 1.0);
    let k = [k1, rng.range(0.5, 2.0), rng.range(0.5, 2.0), rng.range(0.5, 2.0)];
    Params::new(k).expect("positive k1 draws are admissible")
}

fn random_simplex_point(rng: &mut SplitMix64) -> SimplexPoint {
    let mut e = [0.0; 4];
    for v in e.iter_mut() {
        *v = -(1.0 - rng.next_f64()).ln();
    }
    let s: f64 = e.iter().sum();
    SimplexPoint::new(std::array::from_fn(|i| e[i] / s)).expect("normalised positives")
}

/// Criterion 5: `||F(P) - P|| < 1e-12`, and the numeric Jacobian spectrum at `P`
/// realises the in-simplex eigenvalues `1 + omega^j/(M1+1)` within 1e-8
/// (the transversal direction carries a second copy of the real
/// contracting one), with `|lambda_1|^2 = 1 + 1/(M1+1)^2` within 1e-10.
/// 100 random admissible draws, under 5 s.
pub fn criterion_5_fixed_point_spectrum() -> Criterion {
    let t = Instant::now();
    let mut rng = SplitMix64::new(0x51EC7);
    let mut worst_fp = 0.0_f64;
    let mut worst_match = 0.0_f64;
    let mut worst_modulus = 0.0_f64;
    let mut failures = 0u32;
    for _ in 0..100 {
        let p = random_params(&mut rng);
        let fp = match model::interior_fixed_point(&p) {
            Ok(fp) => fp,
            Err(_) => {
                failures += 1;
                continue;
            }
        };
        let image = model::map_step(&fp, &p).expect("P is in the map's domain");
        worst_fp = worst_fp.max(fp.max_distance(&image.coords()));

        let closed = model::closed_form_spectrum(&p).expect("k1 > 0");
        let targets = [closed.eigenvalues[1], closed.eigenvalues[2], closed.eigenvalues[3]];
        let numeric = crate::eigen::eigenvalues_4x4(&model::jacobian(&fp, &p).expect("domain"));
        // Every in-simplex eigenvalue is realised ...
        for target in targets {
            let best = numeric.iter().map(|e| (e - target).norm()).fold(f64::INFINITY, f64::min);
            worst_match = worst_match.max(best);
        }
        // ... and every numeric eigenvalue is one of them.
        for e in numeric {
            let best = targets.iter().map(|t| (e - t).norm()).fold(f64::INFINITY, f64::min);
            worst_match = worst_match.max(best);
        }
        // Modulus identity on the expanding pair.
        let lambda1 = targets[0];
        let matched = numeric
            .iter()
            .min_by(|a, b| (*a - lambda1).norm().total_cmp(&(*b - lambda1).norm()))
            .expect("four eigenvalues");
        let m1 = p.m1().expect("k1 > 0");
        let expect_sq = 1.0 + 1.0 / ((m1 + 1.0) * (m1 + 1.0));
        worst_modulus = worst_modulus.max((matched.norm_sqr() - expect_sq).abs());
    }
    let passed = failures == 0 && worst_fp < 1e-12 && worst_match < 1e-8 && worst_modulus < 1e-10;
    let detail = format!(
        "100 draws: max ||F(P)-P|| = {worst_fp:.2e} (< 1e-12), max eigenvalue mismatch = \
         {worst_match:.2e} (< 1e-8), max | |l1|^2 - (1 + 1/(M1+1)^2) | = {worst_modulus:.2e} (< 1e-10)"
    );
    finish(5, "fixed point and spectrum, numeric", t, Some(Duration::from_secs(5)), passed, detail)
}

/// Criterion 6: Radius law: log-log fit of curve radius against `delta` over
/// `k_1 in {0.001, ..., 0.1}` gives slope 0.5 +- 0.1 with r^2 >= 0.98,
/// within 3 minutes.
pub fn criterion_6_radius_law() -> Criterion {
    let t = Instant::now();
    let grid = [0.001, 0.002, 0.005, 0.01, 0.02, 0.05, 0.1];
    let base = Params::with_k1(0.05).expect("unit tail rates");
    let opts = SweepOptions::default();
    let (passed, detail) = match curve::sweep_scaling(&base, &grid, &opts) {
        Ok(fit) => {
            let used = fit.points.iter().filter(|pt| pt.used).count();
            let ok = (fit.slope - 0.5).abs() <= 0.1 && fit.r_squared >= 0.98;
            (
                ok,
                format!(
                    "slope = {:.4} (target 0.5 +- 0.1), r^2 = {:.6} (>= 0.98), {used}/{} points used",
                    fit.slope,
                    fit.r_squared,
                    grid.len()
                ),
            )
        }
        Err(e) => (false, format!("sweep failed: {e}")),
    };
    finish(6, "radius law", t, Some(Duration::from_secs(180)), passed, detail)
}

/// Criterion 7: Degenerate side: for `k_1 in {0, -0.05, -0.1}` and the interior
/// start `(1/4,1/4,1/4,1/4)`, orbits must reach `||x - Q|| < 1e-8` within
/// 1e6 iterations. The corner approach is algebraic (`~1.1/n`), so the
/// runner also reports the measured decay exponent and the projected
/// crossing iteration.
pub fn criterion_7_degenerate_side() -> Criterion {
    let t = Instant::now();
    let mut passed = true;
    let mut detail = String::new();
    for (idx, k1) in [0.0, -0.05, -0.1].into_iter().enumerate() {
        let p = Params::with_k1(k1).expect("admissible");
        // One pass recording the distance a decade before the cap, for the
        // live decay-law diagnostic.
        let mut x = SimplexPoint::center().coords();
        let mut d_at_1e5 = f64::NAN;
        let mut converged_at = None;
        let cap = 1_000_000u64;
        let mut dist = curve::distance_to_corner(&x);
        for n in 1..=cap {
            x = match model::map_step_raw(&x, &p) {
                Ok(next) => next,
                Err(e) => {
                    passed = false;
                    let _ = write!(detail, "k1 = {k1}: map error {e}; ");
                    break;
                }
            };
            dist = curve::distance_to_corner(&x);
            if n == cap / 10 {
                d_at_1e5 = dist;
            }
            if dist < 1e-8 {
                converged_at = Some(n);
                break;
            }
        }
        if idx > 0 {
            let _ = write!(detail, "; ");
        }
        match converged_at {
            Some(n) => {
                let _ = write!(detail, "k1 = {k1}: reached 1e-8 at iteration {n}");
            }
            None => {
                passed = false;
                let exponent = (d_at_1e5 / dist).ln() / 10f64.ln();
                let projected = cap as f64 * (dist / 1e-8).powf(1.0 / exponent.max(1e-6));
                let _ = write!(
                    detail,
                    "k1 = {k1}: ||x - Q|| = {dist:.3e} at 1e6 iterations (decay exponent \
                     {exponent:.3}, projected 1e-8 crossing ~ {projected:.2e} iterations)"
                );
            }
        }
    }
    finish(7, "degenerate side", t, Some(Duration::from_secs(30)), passed, detail)
}

/// Criterion 8: Fourier-Newton refinement at `k_1 = 0.05`: residual below 1e-10 and
/// rotation number within 2% of the orbit estimate, within 30 s.
pub fn criterion_8_invariance_refinement() -> Criterion {
    let t = Instant::now();
    let p = Params::with_k1(0.05).expect("admissible");
    let run = || -> Result<(f64, f64, f64, f64), curve::CurveError> {
        let burn = curve::auto_burn(p.delta());
        let orbit = curve::attract_orbit(&p, None, burn, curve::DEFAULT_SAMPLES, 0)?;
        let estimate = curve::estimate_curve(&orbit)?;
        let refined = curve::refine_curve(&p, &orbit, 32)?;
        let rel_rotation = (refined.rho - estimate.rotation).abs() / estimate.rotation.abs();
        let rel_radius =
            (refined.mean_xi_radius(1024) - estimate.radius_mean).abs() / estimate.radius_mean;
        Ok((refined.residual, refined.rho, rel_rotation, rel_radius))
    };
    let (passed, detail) = match run() {
        Ok((residual, rho, rel_rotation, rel_radius)) => (
            residual < 1e-10 && rel_rotation <= 0.02,
            format!(
                "residual = {residual:.2e} (< 1e-10), rho = {rho:.6}, rotation agrees with the \
                 orbit estimate to {:.3}% (<= 2%), refined radius within {:.2}% of the orbit mean",
                100.0 * rel_rotation,
                100.0 * rel_radius
            ),
        ),
        Err(e) => (false, format!("refinement failed: {e}")),
    };
    finish(8, "invariance refinement", t, Some(Duration::from_secs(30)), passed, detail)
}

/// Criterion 9: Identity and round-trip properties: the Euler identity to 1e-14
/// relative on 1e4 random samples, the barycentric round trip to 1e-12 on
/// 1e4 samples, and the reduced-map remainder scaling as `delta^2`
/// (ratio in [3.5, 4.5] per halving).
pub fn criterion_9_identities() -> Criterion {
    let t = Instant::now();
    let mut rng = SplitMix64::new(0xE0C1D);

    // Euler identity: (F_i - x_i)(1 + phi) = x_i (k_i x_{i-1} - phi).
    let mut worst_euler = 0.0_f64;
    for _ in 0..10_000 {
        let p = random_params(&mut rng);
        let x = random_simplex_point(&mut rng);
        let xs = x.coords();
        let phi = model::flux(&x, &p);
        let image = model::map_step(&x, &p).expect("interior points are in-domain");
        let k = p.k();
        for i in 0..4 {
            let lhs = (image.get(i) - xs[i]) * (1.0 + phi);
            let rhs = xs[i] * (k[i] * xs[(i + 3) % 4] - phi);
            // Relative to the operand size: the left side is the difference
            // of x_i (1 + k_i x_{i-1}) and x_i (1 + phi), so roundoff lives
            // at x_i (1 + |k_i x_{i-1}| + |phi|) regardless of how far the
            // two sides cancel.
            let scale = xs[i] * (1.0 + (k[i] * xs[(i + 3) % 4]).abs() + phi.abs());
            let err = (lhs - rhs).abs() / scale.max(1e-300);
            worst_euler = worst_euler.max(err);
        }
    }
    let euler_ok = worst_euler <= 1e-14;

    // Barycentric round trip on the sum-one hyperplane, mixed-sign k1.
    let mut worst_roundtrip = 0.0_f64;
    let mut trips = 0usize;
    while trips < 10_000 {
        let sign = if rng.next_f64() < 0.5 { -1.0 } else { 1.0 };
        let k1 = sign * rng.range(0.01, 1.0);
        let p = match Params::new([
            k1,
            rng.range(0.5, 2.0),
            rng.range(0.5, 2.0),
            rng.range(0.5, 2.0),
        ]) {
            Ok(p) => p,
            Err(_) => continue,
        };
        let y = random_simplex_point(&mut rng).coords();
        let x = match coords::from_barycentric_raw(&y, &p) {
            Ok(x) => x,
            Err(_) => continue, // vanished N(y), possible for k1 < 0
        };
        let back = match coords::to_barycentric_raw(&x, &p) {
            Ok(b) => b,
            Err(_) => continue,
        };
        for i in 0..4 {
            worst_roundtrip = worst_roundtrip.max((back[i] - y[i]).abs());
        }
        trips += 1;
    }
    let roundtrip_ok = worst_roundtrip <= 1e-12;

    // Remainder order: ||G(z) - z - delta g(z)|| scales as delta^2.
    let z = ReducedState::new([0.03, -0.02, 0.03]);
    let remainder = |delta: f64| -> f64 {
        let k1 = delta / (1.0 - 4.0 * delta); // unit tail rates: delta = k1/(1+4k1)
        let p = Params::with_k1(k1).expect("admissible");
        let image = coords::reduced_map(&z, &p).expect("inside the domain");
        let g = coords::g_exact(&z).expect("away from the pole");
        (0..3)
            .map(|i| (image.z[i] - z.z[i] - p.delta() * g[i]).abs())
            .fold(0.0, f64::max)
    };
    let r0 = remainder(0.05);
    let r1 = remainder(0.025);
    let r2 = remainder(0.0125);
    let ratio1 = r0 / r1;
    let ratio2 = r1 / r2;
    let remainder_ok = (3.5..=4.5).contains(&ratio1) && (3.5..=4.5).contains(&ratio2);

    let passed = euler_ok && roundtrip_ok && remainder_ok;
    let detail = format!(
        "Euler identity worst relative error = {worst_euler:.2e} (<= 1e-14); barycentric round \
         trip worst error = {worst_roundtrip:.2e} (<= 1e-12); remainder halving ratios = \
         {ratio1:.3}, {ratio2:.3} (in [3.5, 4.5])"
    );
    finish(9, "identity and round-trip properties", t, None, passed, detail)
}
