//! Discrete-time hypercycle dynamics on the 4-simplex.
//!
//! This crate implements the four-species discrete hypercycle map
//!
//! ```text
//! F_i(x) = (1 + k_i x_{i-1}) x_i / (1 + phi(x)),   phi(x) = sum_i k_i x_i x_{i-1},
//! ```
//!
//! together with the machinery needed to analyse the bifurcation that occurs
//! when the catalytic coefficient `k_1` crosses zero (a functional shift of
//! species 4 from cooperator to degrader):
//!
//! * [`model`] — the map on the simplex, its continuous-time companion
//!   field, fixed points and spectra;
//! * [`coords`] — the singular barycentric change that pins the interior
//!   fixed point at the simplex center, the reduction to three coordinates,
//!   and the exact reduced field `g`;
//! * [`jets`] — exact truncated polynomial algebra over complex rationals;
//! * [`normalform`] — diagonalization, quadratic-kill change and the
//!   resonant cubic coefficient `alpha_1 = -16/5 - 48/5 i`, all bit-exact;
//! * [`curve`] — numerical detection and Fourier refinement of the
//!   attracting invariant curve of radius `O(sqrt(k_1))`, the radius scaling
//!   law, and the collapse to the corner `Q = (0,0,0,1)` for `k_1 <= 0`;
//! * [`verify`] — the acceptance checks, runnable via the `verify`
//!   subcommand of the bundled CLI or the `acceptance` test target.
//!
//! The examples directory is the front door; each file demonstrates one
//! capability end to end:
//!
//! ```bash
//! cargo run --release --example fixed_points     # P, spectra, boundary segments
//! cargo run --release --example orbit            # iteration and the Euler relation
//! cargo run --release --example normal_form      # the exact derivation, all stages
//! cargo run --release --example invariant_curve  # detection + Fourier refinement
//! cargo run --release --example radius_scaling   # the sqrt(delta) radius law
//! cargo run --release --example functional_shift # collision with Q, drain for k1 <= 0
//! ```
//!
//! A thin `hypercycle` binary exposes the same analyses as subcommands
//! (`fixed-points`, `spectrum`, `simulate`, `normal-form`, `curve`,
//! `sweep`, `verify`); see [`cli`].

pub mod cli;
pub mod coords;
pub mod curve;
pub mod eigen;
pub mod jets;
mod linsolve;
pub mod model;
pub mod normalform;
mod rng;
pub mod verify;
