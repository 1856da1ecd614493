//! Position/wavevector uncertainty relations for electromagnetic fields.
//!
//! The electromagnetic field is handled through the Riemann–Silberstein
//! vector `F = D/√(2ε₀) + iB/√(2μ₀)`, a complex 3-vector obeying
//! `i∂ₜF = c∇×F`. The crate computes the second moments `Δr²` (position,
//! weighted by the energy density `F*·F`) and `Δk²` (wavevector), checks the
//! sharp bound `ΔrΔk ≥ 5/2`, evaluates the fields that saturate it in closed
//! form, solves the radial eigenvalue problem behind the bound and verifies
//! the quadratic spreading law of wave packets.
//!
//! Units: `c = 1` throughout. Lengths are in units of a caller-chosen scale;
//! the product `ΔrΔk` is dimensionless.
//!
//! Moments are taken about the coordinate origin, not about the centroid of
//! the energy density. Translating a field changes `Δr²`.

pub mod analytic_fields;
pub mod eigensolver;
mod error;
pub mod kspace;
pub mod moments;
pub mod propagator;
pub mod quadrature;
pub mod specfun;
mod sum;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// Complex 3-vector, the value type of the RS field at one point.
pub type CVec3 = [Complex64; 3];
