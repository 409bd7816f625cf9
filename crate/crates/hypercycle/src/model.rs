//! The discrete hypercycle map on the 4-simplex.
//!
//! Four species in a catalytic cycle: species `i-1` catalyses the
//! replication of species `i` with strength `k_i` (indices cyclic, so
//! species 4 catalyses species 1 with strength `k_1`). With the total
//! population normalised to 1 the one-generation update is
//!
//! ```text
//! F_i(x) = (1 + k_i x_{i-1}) x_i / (1 + phi(x)),
//! phi(x) = sum_i k_i x_i x_{i-1},
//! ```
//!
//! an Euler-like step of the continuous replicator field
//! `x_i (k_i x_{i-1} - phi(x))`. All arithmetic here is binary64; exact
//! arithmetic is reserved for the [`crate::jets`] / [`crate::normalform`]
//! modules.
//!
//! Indexing note: arrays are 0-based, so `x[i]` is the fraction of species
//! `i+1` and the predecessor of `x[i]` is `x[(i+3) % 4]`.

use crate::eigen;
use num_complex::Complex64;
use thiserror::Error;

/// Number of species. The analysis in this crate is specific to four.
pub const N: usize = 4;

/// The corner `Q = (0,0,0,1)` that the interior fixed point collides with
/// at `k_1 = 0`.
pub const Q_CORNER: [f64; 4] = [0.0, 0.0, 0.0, 1.0];

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("invalid rate coefficients: {reason}")]
    InvalidParams { reason: String },
    #[error("not a simplex point: {reason}")]
    InvalidPoint { reason: String },
    #[error("map undefined here: {reason}")]
    Domain { reason: String },
    #[error("degenerate parameter: {reason}")]
    DegenerateParameter { reason: String },
    #[error("interior fixed-point formula leaves the simplex (k1 < 0); coordinates {coords:?}")]
    OutsideSimplex { coords: [f64; 4] },
    #[error("iteration {step} failed: {source}")]
    Iteration {
        step: usize,
        #[source]
        source: Box<ModelError>,
    },
}

/// The four rate coefficients `k_1..k_4`, validated.
///
/// The admissible range keeps `k_2, k_3, k_4 > 0` and `k_1 > k1_star`,
/// where `k1_star = -1/M2` and `M2 = 1/k_2 + 1/k_3 + 1/k_4`. Within that
/// range `k_1` may be negative or zero (the functional-shift regime).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Params {
    k: [f64; 4],
}

impl Params {
    pub fn new(k: [f64; 4]) -> Result<Self, ModelError> {
        if k.iter().any(|v| !v.is_finite()) {
            return Err(ModelError::InvalidParams { reason: format!("non-finite entry in {k:?}") });
        }
        for (i, &v) in k.iter().enumerate().skip(1) {
            if v <= 0.0 {
                return Err(ModelError::InvalidParams {
                    reason: format!("k{} = {v} must be positive", i + 1),
                });
            }
        }
        let m2 = 1.0 / k[1] + 1.0 / k[2] + 1.0 / k[3];
        let k1_star = -1.0 / m2;
        if k[0] <= k1_star {
            return Err(ModelError::InvalidParams {
                reason: format!("k1 = {} must exceed k1* = {k1_star}", k[0]),
            });
        }
        Ok(Self { k })
    }

    /// Symmetric parameters `(kappa, 1, 1, 1)` — the standard slice used in
    /// the bifurcation study, where only `k_1` varies.
    pub fn with_k1(k1: f64) -> Result<Self, ModelError> {
        Self::new([k1, 1.0, 1.0, 1.0])
    }

    pub fn k(&self) -> [f64; 4] {
        self.k
    }

    pub fn k1(&self) -> f64 {
        self.k[0]
    }

    /// `k_i` with cyclic index (`k_0 = k_4`, `k_5 = k_1`), 0-based.
    pub fn k_cyclic(&self, i: usize) -> f64 {
        self.k[i % N]
    }

    /// `M1 = sum_j 1/k_j`; undefined when `k_1 = 0`.
    pub fn m1(&self) -> Option<f64> {
        if self.k[0] == 0.0 {
            None
        } else {
            Some(1.0 / self.k[0] + self.m2())
        }
    }

    /// `M2 = 1/k_2 + 1/k_3 + 1/k_4`.
    pub fn m2(&self) -> f64 {
        1.0 / self.k[1] + 1.0 / self.k[2] + 1.0 / self.k[3]
    }

    /// Lower end of the admissible `k_1` range.
    pub fn k1_star(&self) -> f64 {
        -1.0 / self.m2()
    }

    /// The effective small parameter `delta = k_1 / (1 + k_1 (1 + M2))`.
    ///
    /// For `k_1 > 0` this equals `1/(M1 + 1)`; it plays the role of the
    /// bifurcation parameter `epsilon` in the invariant-curve analysis and
    /// shares the sign of `k_1` wherever its denominator is positive
    /// (always true for `k_1 > -1/(1 + M2)`, which covers every regime the
    /// curve analysis touches).
    pub fn delta(&self) -> f64 {
        self.k[0] / (1.0 + self.k[0] * (1.0 + self.m2()))
    }
}

/// A population state: four nonnegative fractions summing to one.
///
/// Construction enforces the invariants up to a tolerance (default 1e-12):
/// each coordinate is at least `-tol` and the total is within `tol` of 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimplexPoint {
    x: [f64; 4],
}

impl SimplexPoint {
    pub const DEFAULT_TOL: f64 = 1e-12;

    pub fn new(x: [f64; 4]) -> Result<Self, ModelError> {
        Self::with_tol(x, Self::DEFAULT_TOL)
    }

    pub fn with_tol(x: [f64; 4], tol: f64) -> Result<Self, ModelError> {
        if x.iter().any(|v| !v.is_finite()) {
            return Err(ModelError::InvalidPoint { reason: format!("non-finite entry in {x:?}") });
        }
        if let Some((i, &v)) = x.iter().enumerate().find(|(_, &v)| v < -tol) {
            return Err(ModelError::InvalidPoint {
                reason: format!("coordinate {} is {v}, below -tol = {}", i + 1, -tol),
            });
        }
        let sum: f64 = x.iter().sum();
        if (sum - 1.0).abs() > tol {
            return Err(ModelError::InvalidPoint {
                reason: format!("coordinates sum to {sum}, not 1 within {tol}"),
            });
        }
        Ok(Self { x })
    }

    pub fn coords(&self) -> [f64; 4] {
        self.x
    }

    pub fn get(&self, i: usize) -> f64 {
        self.x[i]
    }

    /// The barycenter `(1/4, 1/4, 1/4, 1/4)`.
    pub fn center() -> Self {
        Self { x: [0.25; 4] }
    }

    /// The vertex `q^(m)` (0-based `m`), always a fixed point of the map.
    pub fn vertex(m: usize) -> Self {
        let mut x = [0.0; 4];
        x[m] = 1.0;
        Self { x }
    }

    /// True when every coordinate is strictly positive.
    pub fn is_interior(&self) -> bool {
        self.x.iter().all(|&v| v > 0.0)
    }

    pub fn max_distance(&self, other: &[f64; 4]) -> f64 {
        self.x
            .iter()
            .zip(other)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

impl std::ops::Index<usize> for SimplexPoint {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.x[i]
    }
}

/// Eigenvalue report for a fixed point.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumReport {
    pub eigenvalues: [Complex64; 4],
    pub moduli: [f64; 4],
    /// Index of the eigenvalue whose (right) eigenvector is `(1,1,1,1)`,
    /// when one is identifiable.
    pub transversal_index: Option<usize>,
}

impl SpectrumReport {
    fn from_eigenvalues(eigenvalues: [Complex64; 4], transversal_index: Option<usize>) -> Self {
        let moduli = [
            eigenvalues[0].norm(),
            eigenvalues[1].norm(),
            eigenvalues[2].norm(),
            eigenvalues[3].norm(),
        ];
        Self { eigenvalues, moduli, transversal_index }
    }
}

pub(crate) fn flux_raw(x: &[f64; 4], p: &Params) -> f64 {
    let k = p.k();
    let mut phi = 0.0;
    for i in 0..N {
        phi += k[i] * x[i] * x[(i + 3) % N];
    }
    phi
}

/// The flux `phi(x) = sum_i k_i x_i x_{i-1}` that keeps the total
/// population constant.
pub fn flux(x: &SimplexPoint, p: &Params) -> f64 {
    flux_raw(&x.coords(), p)
}

/// One map step on raw coordinates of the `sum = 1` hyperplane. Checks the
/// map's own preconditions (positive per-species factors and denominator)
/// but not simplex membership, so the reduced-coordinate pipeline can pass
/// through states slightly outside the simplex.
pub(crate) fn map_step_raw(x: &[f64; 4], p: &Params) -> Result<[f64; 4], ModelError> {
    let k = p.k();
    let phi = flux_raw(x, p);
    let denom = 1.0 + phi;
    if denom <= 0.0 {
        return Err(ModelError::Domain {
            reason: format!("1 + phi = {denom} is not positive"),
        });
    }
    let mut out = [0.0; 4];
    for i in 0..N {
        let growth = 1.0 + k[i] * x[(i + 3) % N];
        if growth <= 0.0 {
            return Err(ModelError::Domain {
                reason: format!(
                    "1 + k{} x{} = {growth} is not positive (population would not stay positive)",
                    i + 1,
                    (i + 3) % N + 1
                ),
            });
        }
        out[i] = growth * x[i] / denom;
    }
    Ok(out)
}

/// One generation of the hypercycle map. The image is validated as a
/// simplex point with the given tolerance.
pub fn map_step_with_tol(x: &SimplexPoint, p: &Params, tol: f64) -> Result<SimplexPoint, ModelError> {
    SimplexPoint::with_tol(map_step_raw(&x.coords(), p)?, tol)
}

/// One generation of the hypercycle map with the default tolerance.
pub fn map_step(x: &SimplexPoint, p: &Params) -> Result<SimplexPoint, ModelError> {
    map_step_with_tol(x, p, SimplexPoint::DEFAULT_TOL)
}

/// The continuous-time replicator field `x_i (k_i x_{i-1} - phi(x))`.
/// Components sum to zero up to roundoff on the simplex.
pub fn vector_field(x: &SimplexPoint, p: &Params) -> [f64; 4] {
    let k = p.k();
    let xs = x.coords();
    let phi = flux_raw(&xs, p);
    std::array::from_fn(|i| xs[i] * (k[i] * xs[(i + 3) % N] - phi))
}

/// Discards `burn` iterates, then returns the next `n`. Errors carry the
/// 0-based index (counted from the start, burn included) of the failing step.
pub fn iterate(
    x0: &SimplexPoint,
    p: &Params,
    n: usize,
    burn: usize,
) -> Result<Vec<SimplexPoint>, ModelError> {
    let mut x = x0.coords();
    for step in 0..burn {
        x = map_step_raw(&x, p).map_err(|e| ModelError::Iteration { step, source: Box::new(e) })?;
    }
    let mut out = Vec::with_capacity(n);
    for step in 0..n {
        x = map_step_raw(&x, p).map_err(|e| ModelError::Iteration {
            step: burn + step,
            source: Box::new(e),
        })?;
        out.push(SimplexPoint::with_tol(x, SimplexPoint::DEFAULT_TOL).map_err(|e| {
            ModelError::Iteration { step: burn + step, source: Box::new(e) }
        })?);
    }
    Ok(out)
}

/// The unique interior fixed point `P`, with `p_i = 1/(k_{i+1} M1)`
/// (cyclic `k_5 = k_1`). Exists only for `k_1 > 0`: at `k_1 = 0` it has
/// collided with the corner `Q`, and for `k1* < k_1 < 0` the formula
/// leaves the simplex (returned as a diagnostic payload).
pub fn interior_fixed_point(p: &Params) -> Result<SimplexPoint, ModelError> {
    let k1 = p.k1();
    if k1 == 0.0 {
        return Err(ModelError::DegenerateParameter {
            reason: "k1 = 0: P coincides with the corner Q = (0,0,0,1), and the segment \
                     {(a,0,0,1-a)} consists of fixed points"
                .into(),
        });
    }
    let m1 = p.m1().expect("k1 != 0 here");
    let coords: [f64; 4] = std::array::from_fn(|i| 1.0 / (p.k_cyclic(i + 1) * m1));
    if k1 < 0.0 {
        return Err(ModelError::OutsideSimplex { coords });
    }
    SimplexPoint::new(coords)
}

/// Closed-form spectrum at the interior fixed point `P`:
/// `lambda_j = 1 + omega^j / (M1 + 1)` for `j = 0..3`, where `omega = i`
/// (the primitive fourth root of unity with positive imaginary part).
/// `lambda_0` is reported with eigenvector `(1,1,1,1)`, transversal to the
/// simplex; the dynamics inside the simplex is governed by
/// `lambda_1, lambda_2, lambda_3`.
pub fn closed_form_spectrum(p: &Params) -> Result<SpectrumReport, ModelError> {
    if p.k1() <= 0.0 {
        return Err(ModelError::DegenerateParameter {
            reason: format!("closed-form spectrum needs k1 > 0, got {}", p.k1()),
        });
    }
    let m1 = p.m1().expect("k1 > 0 here");
    let d = 1.0 / (m1 + 1.0);
    let omega = [
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, 1.0),
        Complex64::new(-1.0, 0.0),
        Complex64::new(0.0, -1.0),
    ];
    let eigenvalues = std::array::from_fn(|j| Complex64::new(1.0, 0.0) + d * omega[j]);
    Ok(SpectrumReport::from_eigenvalues(eigenvalues, Some(0)))
}

/// Analytic Jacobian of the map (quotient rule), evaluated anywhere the map
/// is defined. Finite differences are used only as a test oracle.
pub fn jacobian(x: &SimplexPoint, p: &Params) -> Result<[[f64; 4]; 4], ModelError> {
    jacobian_raw(&x.coords(), p)
}

pub(crate) fn jacobian_raw(x: &[f64; 4], p: &Params) -> Result<[[f64; 4]; 4], ModelError> {
    // Validate the same preconditions as the map itself.
    map_step_raw(x, p)?;
    let k = p.k();
    let phi = flux_raw(x, p);
    let denom = 1.0 + phi;
    // d phi / d x_j picks up the two flux terms containing x_j.
    let dphi: [f64; 4] = std::array::from_fn(|j| {
        k[j] * x[(j + 3) % N] + k[(j + 1) % N] * x[(j + 1) % N]
    });
    let mut jac = [[0.0; 4]; 4];
    for i in 0..N {
        let prev = (i + 3) % N;
        let growth = 1.0 + k[i] * x[prev];
        for j in 0..N {
            let mut num = 0.0;
            if j == i {
                num += growth;
            }
            if j == prev {
                num += k[i] * x[i];
            }
            jac[i][j] = num / denom - growth * x[i] * dphi[j] / (denom * denom);
        }
    }
    Ok(jac)
}

/// Numeric spectrum of the Jacobian at `x`. The transversal index is set
/// only when `(1,1,1,1)` is verifiably a right eigenvector of the matrix.
pub fn numeric_spectrum(x: &SimplexPoint, p: &Params) -> Result<SpectrumReport, ModelError> {
    let jac = jacobian(x, p)?;
    let eigenvalues = eigen::eigenvalues_4x4(&jac);
    let ones_image: [f64; 4] = std::array::from_fn(|i| jac[i].iter().sum());
    let scale: f64 = jac.iter().flatten().map(|v| v.abs()).fold(0.0, f64::max);
    let transversal = eigenvalues.iter().position(|l| {
        ones_image
            .iter()
            .map(|row| (Complex64::new(*row, 0.0) - l).norm())
            .fold(0.0, f64::max)
            <= 1e-9 * (1.0 + scale)
    });
    Ok(SpectrumReport::from_eigenvalues(eigenvalues, transversal))
}

/// Certificate returned by [`is_fixed_point`]: the algebraic fixed-point
/// characterization (`x_i (k_i x_{i-1} - phi) = 0` for all `i`, i.e. the
/// replicator field vanishes) and the direct map test `F(x) = x`, reported
/// separately so a failure names the clause that broke.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedPointCheck {
    pub is_fixed: bool,
    /// `max_i |x_i (k_i x_{i-1} - phi(x))| <= tol`
    pub algebraic_ok: bool,
    /// `||F(x) - x||_inf <= tol`
    pub map_ok: bool,
    pub max_field_residual: f64,
    pub max_map_defect: f64,
    /// `max_i |k_i x_i x_{i-1}|`; zero exactly on the boundary fixed-point
    /// segments, and equal to `phi(x) x_i`-weighted flux at interior `P`.
    pub max_boundary_product: f64,
}

/// Decides whether `x` is a fixed point, checking the algebraic
/// characterization and the direct `F(x) = x` test against `tol`.
pub fn is_fixed_point(x: &SimplexPoint, p: &Params, tol: f64) -> FixedPointCheck {
    let field = vector_field(x, p);
    let max_field_residual = field.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let algebraic_ok = max_field_residual <= tol;

    let max_map_defect = match map_step_raw(&x.coords(), p) {
        Ok(image) => x.max_distance(&image),
        Err(_) => f64::INFINITY,
    };
    let map_ok = max_map_defect <= tol;

    let k = p.k();
    let xs = x.coords();
    let max_boundary_product = (0..N)
        .map(|i| (k[i] * xs[i] * xs[(i + 3) % N]).abs())
        .fold(0.0, f64::max);

    FixedPointCheck {
        is_fixed: algebraic_ok && map_ok,
        algebraic_ok,
        map_ok,
        max_field_residual,
        max_map_defect,
        max_boundary_product,
    }
}
