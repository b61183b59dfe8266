//! Exact and numerical machinery for the Rumin complex on Heisenberg groups.
//!
//! The crate is organised in two layers.
//!
//! The exact layer works over the rationals and builds the group `ℍⁿ`
//! ([`heis`]), the weighted exterior algebra over its left-invariant coframe
//! ([`exterior`]), the algebraic operator `d₀` with its pseudo-inverse and the
//! spaces `E₀ʰ` ([`projections`]), differential forms with polynomial
//! coefficients together with `d`, `Π_E`, `d_c` and dilation pullbacks
//! ([`forms`]), and constant-coefficient operator matrices (`d_c`, `d_c*`,
//! Rumin Laplacians) over the enveloping algebra of left-invariant derivatives
//! ([`operators`], [`fields`]).
//!
//! The numerical layer ([`numerics`]) provides the averaged cone homotopy on
//! convex sets by quadrature, the intrinsic homotopy
//! `K = Π_{E₀} Π_E K_Euc Π_E`, homotopy and integration-by-parts residuals,
//! empirical Poincaré ratios, the sub-Laplacian fundamental-solution check and
//! the annulus-admissibility geometry.

pub mod error;
pub mod exterior;
pub mod fields;
pub mod forms;
pub mod heis;
pub mod leibniz;
pub mod numerics;
pub mod operators;
pub mod poly;
pub mod projections;
pub mod qlinalg;
pub mod sampling;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::Rat;
