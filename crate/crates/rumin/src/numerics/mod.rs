//! Numerical layer: quadrature homotopy operators, residual checks, Poincaré
//! ratio estimation, the fundamental-solution residual and annulus geometry.

pub mod annulus;
pub mod bump;
pub mod byparts;
pub mod callable;
pub mod domain;
pub mod fd;
pub mod fundsol;
pub mod gauss;
pub mod homotopy;
pub mod keuc;
pub mod poincare;
pub mod quad;
