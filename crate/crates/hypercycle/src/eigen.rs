//! Eigenvalues of small dense real matrices.
//!
//! Complex shifted QR iteration on the Hessenberg form, specialised to the
//! 4x4 Jacobians this crate produces. Those matrices are well conditioned,
//! so plain Givens-based sweeps with a Wilkinson shift converge in a handful
//! of iterations to ~1e-14; the callers only need 1e-10.

use num_complex::Complex64;

type C = Complex64;
type Mat = [[C; 4]; 4];

const N: usize = 4;
const MAX_SWEEPS: usize = 200;

/// All four eigenvalues of a real 4x4 matrix, in deflation order.
pub fn eigenvalues_4x4(a: &[[f64; 4]; 4]) -> [Complex64; 4] {
    let mut h = hessenberg(complexify(a));
    let scale = frobenius(&h).max(f64::MIN_POSITIVE);
    let mut eigs = [C::new(0.0, 0.0); 4];
    let mut found = 0usize;
    let mut hi = N - 1;
    let mut sweeps = 0usize;
    loop {
        clean_subdiagonal(&mut h, scale);
        if hi == 0 {
            eigs[found] = h[0][0];
            found += 1;
            break;
        }
        if h[hi][hi - 1].norm() == 0.0 {
            eigs[found] = h[hi][hi];
            found += 1;
            hi -= 1;
            continue;
        }
        if hi == 1 || h[hi - 1][hi - 2].norm() == 0.0 {
            let (l1, l2) = eig2(h[hi - 1][hi - 1], h[hi - 1][hi], h[hi][hi - 1], h[hi][hi]);
            eigs[found] = l1;
            eigs[found + 1] = l2;
            found += 2;
            if hi == 1 {
                break;
            }
            hi -= 2;
            continue;
        }
        let mut lo = hi;
        while lo > 0 && h[lo][lo - 1].norm() != 0.0 {
            lo -= 1;
        }
        shifted_qr_sweep(&mut h, lo, hi);
        sweeps += 1;
        if sweeps > MAX_SWEEPS {
            // Does not happen for the matrices produced here; fall back to
            // the diagonal so callers see a finite (if inaccurate) answer.
            for i in 0..=hi {
                if found < N {
                    eigs[found] = h[i][i];
                    found += 1;
                }
            }
            break;
        }
    }
    debug_assert_eq!(found, N);
    eigs
}

fn complexify(a: &[[f64; 4]; 4]) -> Mat {
    let mut m = [[C::new(0.0, 0.0); 4]; 4];
    for i in 0..N {
        for j in 0..N {
            m[i][j] = C::new(a[i][j], 0.0);
        }
    }
    m
}

fn frobenius(a: &Mat) -> f64 {
    let mut s = 0.0;
    for row in a {
        for e in row {
            s += e.norm_sqr();
        }
    }
    s.sqrt()
}

/// A Givens rotation [[c, s], [-conj(s), c]] with real c that maps (f, g)
/// to (r, 0).
fn givens(f: C, g: C) -> (f64, C) {
    let fa = f.norm();
    let ga = g.norm();
    if ga == 0.0 {
        return (1.0, C::new(0.0, 0.0));
    }
    if fa == 0.0 {
        return (0.0, g.conj() / ga);
    }
    let r = (fa * fa + ga * ga).sqrt();
    (fa / r, (f / fa) * g.conj() / r)
}

fn rotate_rows(a: &mut Mat, i: usize, k: usize, c: f64, s: C) {
    for j in 0..N {
        let ai = a[i][j];
        let ak = a[k][j];
        a[i][j] = c * ai + s * ak;
        a[k][j] = -s.conj() * ai + c * ak;
    }
}

fn rotate_cols(a: &mut Mat, i: usize, k: usize, c: f64, s: C) {
    for j in 0..N {
        let ai = a[j][i];
        let ak = a[j][k];
        a[j][i] = c * ai + s.conj() * ak;
        a[j][k] = -s * ai + c * ak;
    }
}

/// Similarity reduction to upper Hessenberg form via Givens pairs.
fn hessenberg(mut a: Mat) -> Mat {
    for col in 0..N - 2 {
        for row in col + 2..N {
            let (c, s) = givens(a[col + 1][col], a[row][col]);
            rotate_rows(&mut a, col + 1, row, c, s);
            rotate_cols(&mut a, col + 1, row, c, s);
            a[row][col] = C::new(0.0, 0.0);
        }
    }
    a
}

fn clean_subdiagonal(h: &mut Mat, scale: f64) {
    for i in 1..N {
        let local = h[i - 1][i - 1].norm() + h[i][i].norm();
        let tol = f64::EPSILON * if local > 0.0 { local } else { scale };
        if h[i][i - 1].norm() <= tol {
            h[i][i - 1] = C::new(0.0, 0.0);
        }
    }
}

/// Eigenvalues of [[a, b], [c, d]] by the quadratic formula.
fn eig2(a: C, b: C, c: C, d: C) -> (C, C) {
    let tr = a + d;
    let det = a * d - b * c;
    let disc = (tr * tr - 4.0 * det).sqrt();
    ((tr + disc) * 0.5, (tr - disc) * 0.5)
}

fn wilkinson_shift(h: &Mat, hi: usize) -> C {
    let (l1, l2) = eig2(h[hi - 1][hi - 1], h[hi - 1][hi], h[hi][hi - 1], h[hi][hi]);
    let target = h[hi][hi];
    if (l1 - target).norm() <= (l2 - target).norm() {
        l1
    } else {
        l2
    }
}

/// One explicit-shift QR step on the active window [lo, hi].
fn shifted_qr_sweep(h: &mut Mat, lo: usize, hi: usize) {
    let sigma = wilkinson_shift(h, hi);
    for i in lo..=hi {
        h[i][i] -= sigma;
    }
    let mut rotations = Vec::with_capacity(hi - lo);
    for k in lo..hi {
        let (c, s) = givens(h[k][k], h[k + 1][k]);
        rotate_rows(h, k, k + 1, c, s);
        h[k + 1][k] = C::new(0.0, 0.0);
        rotations.push((k, c, s));
    }
    for (k, c, s) in rotations {
        rotate_cols(h, k, k + 1, c, s);
    }
    for i in lo..=hi {
        h[i][i] += sigma;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sort_key(z: &Complex64) -> (i64, i64) {
        ((z.re * 1e9).round() as i64, (z.im * 1e9).round() as i64)
    }

    fn assert_spectrum(a: [[f64; 4]; 4], expected: [Complex64; 4], tol: f64) {
        let mut got = eigenvalues_4x4(&a).to_vec();
        let mut want = expected.to_vec();
        got.sort_by_key(sort_key);
        want.sort_by_key(sort_key);
        for (g, w) in got.iter().zip(&want) {
            assert!((g - w).norm() < tol, "eigenvalue {g} vs expected {w}");
        }
    }

    #[test]
    fn diagonal_matrix() {
        let a = [
            [3.0, 0.0, 0.0, 0.0],
            [0.0, -1.0, 0.0, 0.0],
            [0.0, 0.0, 0.5, 0.0],
            [0.0, 0.0, 0.0, 2.0],
        ];
        assert_spectrum(
            a,
            [
                Complex64::new(3.0, 0.0),
                Complex64::new(-1.0, 0.0),
                Complex64::new(0.5, 0.0),
                Complex64::new(2.0, 0.0),
            ],
            1e-13,
        );
    }

    #[test]
    fn rotation_blocks_give_complex_pairs() {
        // Block diag of two rotation-scalings: eigenvalues a +- b i, c +- d i.
        let a = [
            [1.0, -2.0, 0.0, 0.0],
            [2.0, 1.0, 0.0, 0.0],
            [0.0, 0.0, 0.3, 0.7],
            [0.0, 0.0, -0.7, 0.3],
        ];
        assert_spectrum(
            a,
            [
                Complex64::new(1.0, 2.0),
                Complex64::new(1.0, -2.0),
                Complex64::new(0.3, 0.7),
                Complex64::new(0.3, -0.7),
            ],
            1e-12,
        );
    }

    #[test]
    fn companion_matrix_of_known_quartic() {
        // p(x) = (x-1)(x-2)(x-3)(x-4) = x^4 - 10x^3 + 35x^2 - 50x + 24
        let a = [
            [10.0, -35.0, 50.0, -24.0],
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 1.0, 0.0, 0.0],
            [0.0, 0.0, 1.0, 0.0],
        ];
        assert_spectrum(
            a,
            [
                Complex64::new(1.0, 0.0),
                Complex64::new(2.0, 0.0),
                Complex64::new(3.0, 0.0),
                Complex64::new(4.0, 0.0),
            ],
            1e-10,
        );
    }

    #[test]
    fn trace_and_determinant_match_on_dense_matrices() {
        // Deterministic dense samples; the product/sum of eigenvalues must
        // reproduce det/trace to near machine precision.
        let mut seed = 0x9E3779B97F4A7C15u64;
        let mut next = move || {
            seed ^= seed << 13;
            seed ^= seed >> 7;
            seed ^= seed << 17;
            (seed >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
        };
        for _ in 0..50 {
            let mut a = [[0.0; 4]; 4];
            for row in a.iter_mut() {
                for e in row.iter_mut() {
                    *e = next();
                }
            }
            let eigs = eigenvalues_4x4(&a);
            let trace: f64 = (0..4).map(|i| a[i][i]).sum();
            let sum: Complex64 = eigs.iter().sum();
            assert!((sum.re - trace).abs() < 1e-10, "trace mismatch: {sum} vs {trace}");
            assert!(sum.im.abs() < 1e-10);
            let det = det4(&a);
            let prod: Complex64 = eigs.iter().product();
            assert!((prod.re - det).abs() < 1e-9 * (1.0 + det.abs()));
            assert!(prod.im.abs() < 1e-9);
        }
    }

    fn det4(a: &[[f64; 4]; 4]) -> f64 {
        // Laplace expansion along the first row.
        fn det3(m: [[f64; 3]; 3]) -> f64 {
            m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
                - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
        }
        let mut d = 0.0;
        for j in 0..4 {
            let mut minor = [[0.0; 3]; 3];
            for (mi, i) in (1..4).enumerate() {
                let mut mj = 0;
                for jj in 0..4 {
                    if jj == j {
                        continue;
                    }
                    minor[mi][mj] = a[i][jj];
                    mj += 1;
                }
            }
            d += if j % 2 == 0 { 1.0 } else { -1.0 } * a[0][j] * det3(minor);
        }
        d
    }
}
