//! Spectral solver for the anisotropic fractional Poisson equation on the
//! unit disk.
//!
//! The equation -div (-Lap)^{(alpha-2)/2} K grad u~ = f, with
//! K = diag(k1, k2) and u~ = (1-r^2)^{alpha/2} u vanishing outside the disk,
//! diagonalizes block-by-block in the weighted basis
//! {V_{l,mu}(x) P_n^{(alpha/2, l)}(2r^2-1)} of solid harmonics times Jacobi
//! polynomials. This crate provides:
//!
//! - [`jacobi`]: Jacobi polynomial evaluation, norms, derivatives, and
//!   Gauss–Jacobi quadrature;
//! - [`basis`]: the disk basis, coefficient fields, projection, and the
//!   coefficient CSV format;
//! - [`operators`]: closed-form actions of the Riesz potential, the weighted
//!   gradient, and the full forward operator in coefficient space;
//! - [`solver`]: the exact coefficient-space solve via rescaling, chain
//!   renumbering, and decoupled symmetric tridiagonal blocks;
//! - [`regularity`]: weighted-Besov norms and coefficient-decay diagnostics;
//! - [`oracle`]: independent numerical ground truth (singular-kernel
//!   quadrature, finite differences, dense factorizations);
//! - [`verify`]: runnable property suites wiring implementations against the
//!   oracles.

pub mod basis;
pub mod error;
pub mod gamma;
pub mod jacobi;
pub mod linalg;
pub mod operators;
pub mod oracle;
pub mod regularity;
pub mod solver;
pub mod verify;

pub use basis::{
    eval_expansion, eval_solid_harmonic, project, read_coefficients, write_coefficients,
    BasisIndex, CoefficientField, L0Convention, Mu, Point, ProjectionGrid,
};
pub use error::{Error, Result};
pub use operators::{
    apply_forward, frac_laplacian_eigenvalue, grad_unweighted, grad_weighted, riesz_action,
    riesz_grad, GradientPair, OperatorParams,
};
pub use solver::{assemble_block, gershgorin_bounds, renumber, solve, solve_block, ChainBlock};
