//! Coordinate changes that uncouple the two bifurcations.
//!
//! The interior fixed point `P` collides with the corner `Q = (0,0,0,1)` as
//! `k_1 -> 0+`, which entangles a Neimark-Sacker bifurcation with a
//! transcritical one. The weighted barycentric change
//!
//! ```text
//! y_i = k_{i+1} x_i / sum_j k_{j+1} x_j        (cyclic, k_5 = k_1)
//! ```
//!
//! pins `P` at the simplex center `(1/4,1/4,1/4,1/4)` for every `k_1 > 0`,
//! at the price of being singular at `k_1 = 0`. Translating by `-1/4` and
//! eliminating `z_2 = -z_1 - z_3 - z_4` leaves a three-dimensional map
//!
//! ```text
//! G(z) = z + delta * g(z) + O(delta^2) O(|z|^2),
//! ```
//!
//! whose leading field `g` is known in closed rational form. `g` is stored
//! exactly here (the geometric factor `1/(1+4 z_4)` is not truncated);
//! truncation happens only in [`g_jet`], which hands exact rational Taylor
//! data to the normal-form machinery.
//!
//! Reduced coordinates are ordered `(z_1, z_3, z_4)`; component `i` of `g`
//! drives coordinate `i` in that ordering.

use crate::jets::{ExactComplex, Jet3, JetMap3};
use crate::model::{self, ModelError, Params, SimplexPoint};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CoordsError {
    #[error("the barycentric change is singular at k1 = 0")]
    SingularTransform,
    #[error("degenerate denominator in the barycentric change: {value}")]
    DegenerateDenominator { value: f64 },
    #[error("pole of the reduced field at z4 = -1/4 (got z4 = {z4})")]
    Pole { z4: f64 },
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// A point in weighted barycentric coordinates; coordinates sum to one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BarycentricPoint {
    y: [f64; 4],
}

impl BarycentricPoint {
    pub const SUM_TOL: f64 = 1e-12;

    pub fn new(y: [f64; 4]) -> Result<Self, CoordsError> {
        let sum: f64 = y.iter().sum();
        if !sum.is_finite() || (sum - 1.0).abs() > Self::SUM_TOL {
            return Err(CoordsError::DegenerateDenominator { value: sum });
        }
        Ok(Self { y })
    }

    pub(crate) fn new_unchecked(y: [f64; 4]) -> Self {
        Self { y }
    }

    pub fn coords(&self) -> [f64; 4] {
        self.y
    }
}

/// Centered reduced state `(z_1, z_3, z_4)`; `z_2 = -z_1 - z_3 - z_4` is
/// implicit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedState {
    pub z: [f64; 3],
}

impl ReducedState {
    pub fn new(z: [f64; 3]) -> Self {
        Self { z }
    }

    pub fn origin() -> Self {
        Self { z: [0.0; 3] }
    }

    pub fn norm_inf(&self) -> f64 {
        self.z.iter().map(|v| v.abs()).fold(0.0, f64::max)
    }

    pub fn norm(&self) -> f64 {
        self.z.iter().map(|v| v * v).sum::<f64>().sqrt()
    }
}

fn weights(p: &Params) -> Result<[f64; 4], CoordsError> {
    if p.k1() == 0.0 {
        return Err(CoordsError::SingularTransform);
    }
    Ok(std::array::from_fn(|i| p.k_cyclic(i + 1)))
}

/// A sum that has cancelled down to rounding noise counts as vanished.
fn vanished(sum: f64, gross: f64) -> bool {
    !sum.is_finite() || sum.abs() <= 16.0 * f64::EPSILON * gross
}

pub(crate) fn to_barycentric_raw(x: &[f64; 4], p: &Params) -> Result<[f64; 4], CoordsError> {
    let w = weights(p)?;
    let s: f64 = (0..4).map(|i| w[i] * x[i]).sum();
    let gross: f64 = (0..4).map(|i| (w[i] * x[i]).abs()).sum();
    if vanished(s, gross) {
        return Err(CoordsError::DegenerateDenominator { value: s });
    }
    Ok(std::array::from_fn(|i| w[i] * x[i] / s))
}

pub(crate) fn from_barycentric_raw(y: &[f64; 4], p: &Params) -> Result<[f64; 4], CoordsError> {
    let w = weights(p)?;
    let n: f64 = (0..4).map(|j| y[j] / w[j]).sum();
    let gross: f64 = (0..4).map(|j| (y[j] / w[j]).abs()).sum();
    if vanished(n, gross) {
        return Err(CoordsError::DegenerateDenominator { value: n });
    }
    Ok(std::array::from_fn(|i| y[i] / (n * w[i])))
}

/// The weighted barycentric change `y_i = k_{i+1} x_i / sum_j k_{j+1} x_j`.
pub fn to_barycentric(x: &SimplexPoint, p: &Params) -> Result<BarycentricPoint, CoordsError> {
    Ok(BarycentricPoint::new_unchecked(to_barycentric_raw(&x.coords(), p)?))
}

/// Inverse change `x_i = y_i / (N(y) k_{i+1})` with `N(y) = sum_j y_j / k_{j+1}`.
pub fn from_barycentric(y: &BarycentricPoint, p: &Params) -> Result<SimplexPoint, CoordsError> {
    let x = from_barycentric_raw(&y.coords(), p)?;
    Ok(SimplexPoint::new(x)?)
}

/// Translation `z_i = y_i - 1/4` followed by dropping `z_2`.
pub fn center_and_reduce(y: &BarycentricPoint) -> ReducedState {
    let c = y.coords();
    ReducedState::new([c[0] - 0.25, c[2] - 0.25, c[3] - 0.25])
}

/// The reduced state embedded back into centered 4-d coordinates
/// `(z_1, -z_1-z_3-z_4, z_3, z_4)`.
pub fn embed(zr: &ReducedState) -> [f64; 4] {
    let [z1, z3, z4] = zr.z;
    [z1, -z1 - z3 - z4, z3, z4]
}

/// The reduced state back in barycentric coordinates (`embed` plus `1/4`).
pub fn uncenter(zr: &ReducedState) -> BarycentricPoint {
    let e = embed(zr);
    BarycentricPoint::new_unchecked(std::array::from_fn(|i| e[i] + 0.25))
}

/// The exact conjugated map `G` in reduced coordinates: embed, uncenter,
/// invert the barycentric change, apply one hypercycle step, and transform
/// back. The origin is the image of the interior fixed point (k_1 > 0).
pub fn reduced_map(zr: &ReducedState, p: &Params) -> Result<ReducedState, CoordsError> {
    let y = uncenter(zr).coords();
    let x = from_barycentric_raw(&y, p)?;
    let fx = model::map_step_raw(&x, p).map_err(CoordsError::Model)?;
    let fy = to_barycentric_raw(&fx, p)?;
    Ok(ReducedState::new([fy[0] - 0.25, fy[2] - 0.25, fy[3] - 0.25]))
}

/// Analytic Jacobian of [`reduced_map`], chained through the coordinate
/// pipeline. Used by the invariant-curve Newton solver.
pub fn reduced_map_jacobian(zr: &ReducedState, p: &Params) -> Result<[[f64; 3]; 3], CoordsError> {
    let w = weights(p)?;
    let y = uncenter(zr).coords();

    // x = y / (N(y) w), with dx_i/dy_j = delta_ij/(N w_i) - y_i/(w_i N^2 w_j).
    let n: f64 = (0..4).map(|j| y[j] / w[j]).sum();
    let gross_n: f64 = (0..4).map(|j| (y[j] / w[j]).abs()).sum();
    if vanished(n, gross_n) {
        return Err(CoordsError::DegenerateDenominator { value: n });
    }
    let x: [f64; 4] = std::array::from_fn(|i| y[i] / (n * w[i]));
    let mut dx_dy = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            let mut v = -y[i] / (w[i] * n * n * w[j]);
            if i == j {
                v += 1.0 / (n * w[i]);
            }
            dx_dy[i][j] = v;
        }
    }

    let df = model::jacobian_raw(&x, p).map_err(CoordsError::Model)?;
    let fx = model::map_step_raw(&x, p).map_err(CoordsError::Model)?;

    // y' = w .* F / S, with dy'_i/dF_j = w_i delta_ij / S - w_i F_i w_j / S^2.
    let s: f64 = (0..4).map(|i| w[i] * fx[i]).sum();
    let gross_s: f64 = (0..4).map(|i| (w[i] * fx[i]).abs()).sum();
    if vanished(s, gross_s) {
        return Err(CoordsError::DegenerateDenominator { value: s });
    }
    let mut dyp_df = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            let mut v = -w[i] * fx[i] * w[j] / (s * s);
            if i == j {
                v += w[i] / s;
            }
            dyp_df[i][j] = v;
        }
    }

    // Chain: rows select (y1, y3, y4); columns come from the embedding
    // (z1, -z1-z3-z4, z3, z4).
    let mut m = [[0.0; 4]; 4]; // dyp/dy
    for i in 0..4 {
        for j in 0..4 {
            let mut acc = 0.0;
            for a in 0..4 {
                for b in 0..4 {
                    acc += dyp_df[i][a] * df[a][b] * dx_dy[b][j];
                }
            }
            m[i][j] = acc;
        }
    }
    let embed_cols = [[1.0, 0.0, 0.0], [-1.0, -1.0, -1.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
    let rows = [0usize, 2, 3];
    let mut out = [[0.0; 3]; 3];
    for (ri, &row) in rows.iter().enumerate() {
        for cj in 0..3 {
            let mut acc = 0.0;
            for b in 0..4 {
                acc += m[row][b] * embed_cols[b][cj];
            }
            out[ri][cj] = acc;
        }
    }
    Ok(out)
}

/// The exact reduced field `g` in closed rational form:
///
/// ```text
/// g_1 = (1 + 4 z1) (z4 + (z1+z3)^2) / (1 + 4 z4)
/// g_2 = (1 + 4 z3) (-z1 - z3 - z4 + (z1+z3)^2) / (1 + 4 z4)
/// g_3 = z3 + (z1+z3)^2
/// ```
///
/// The third component is exactly polynomial; the others have a pole at
/// `z4 = -1/4`.
pub fn g_exact(zr: &ReducedState) -> Result<[f64; 3], CoordsError> {
    let [z1, z3, z4] = zr.z;
    let denom = 1.0 + 4.0 * z4;
    if denom == 0.0 {
        return Err(CoordsError::Pole { z4 });
    }
    let s = z1 + z3;
    let s2 = s * s;
    Ok([
        (1.0 + 4.0 * z1) * (z4 + s2) / denom,
        (1.0 + 4.0 * z3) * (-z1 - z3 - z4 + s2) / denom,
        z3 + s2,
    ])
}

/// Exact rational Taylor data of [`g_exact`] at the origin, truncated at
/// `degree`. The geometric factor expands as the Neumann series
/// `1 - 4 z4 + 16 z4^2 - ...`; every coefficient is an exact rational.
///
/// Component labels follow the reduced ordering `(z1, z3, z4)`.
pub fn g_jet(degree: u32) -> JetMap3 {
    let z1 = Jet3::var(degree, 0);
    let z3 = Jet3::var(degree, 1);
    let z4 = Jet3::var(degree, 2);
    let one = Jet3::constant(degree, ExactComplex::one());
    let four = ExactComplex::from_int(4);

    let s = &z1 + &z3;
    let s2 = s.try_mul(&s).expect("shared degree bound");

    // 1/(1 + 4 z4) as a truncated Neumann series.
    let mut geom = Jet3::zero(degree);
    let mut pow = one.clone();
    let minus_4z4 = z4.scale(&ExactComplex::from_int(-4));
    for _ in 0..=degree {
        geom = &geom + &pow;
        pow = pow.try_mul(&minus_4z4).expect("shared degree bound");
    }

    let lead1 = &one + &z1.scale(&four);
    let lead2 = &one + &z3.scale(&four);
    let inner1 = &z4 + &s2;
    let inner2 = &(&(&(-&z1) - &z3) - &z4) + &s2;

    let g1 = lead1
        .try_mul(&inner1)
        .and_then(|j| j.try_mul(&geom))
        .expect("shared degree bound");
    let g2 = lead2
        .try_mul(&inner2)
        .and_then(|j| j.try_mul(&geom))
        .expect("shared degree bound");
    let g3 = &z3 + &s2;

    JetMap3::new([g1, g2, g3]).with_labels(["z1", "z3", "z4"])
}
