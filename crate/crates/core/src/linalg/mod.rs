//! Numerical building blocks: quadrature, sparse storage, banded factorization
//! and the symmetric eigensolver.

pub mod band;
pub mod eigen;
pub mod quadrature;
pub mod sparse;
pub mod tridiagonal;

pub use eigen::{eigen_solve, eigen_solve_with, EigenOptions, EigenPairs};
pub use sparse::CsrMatrix;
