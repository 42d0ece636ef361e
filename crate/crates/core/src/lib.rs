//! Exact arithmetic in Carlitz prime-power torsion fields over `F_q(θ)`.
//!
//! The crate constructs the cyclotomic tower `K_n(ζ) = K(ζ)[x_n]/(Φ)` for a
//! monic irreducible `𝔭` and realizes, as exact field elements, the
//! hyperderivative values of the Anderson-Thakur function at the roots of
//! `𝔭`, their Galois action, their valuations at the primes above `𝔭`, the
//! digit-derivative integral basis, the field normal basis, and the matrix
//! L-values attached to Pellarin's L-series. A truncated-Laurent-series
//! model at the infinite place provides an independent analytic cross-check
//! of the symbolic layer.

pub mod algebra;
pub mod analytic;
pub mod basis;
pub mod carlitz;
pub mod error;
pub mod laurent;
pub mod linalg;
pub mod lvalues;
pub mod omega;
pub mod report;
pub mod torsion;
pub mod valuation;
pub mod verify;

pub use error::{Error, Result};
