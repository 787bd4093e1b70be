//! The open Toda lattice viewed as a coadjoint orbit of the lower-triangular
//! group, and its quantization.
//!
//! - [`toda`]: Flaschka and canonical coordinates, the Lax matrix, energies.
//! - [`dynamics`]: Störmer–Verlet flow and conservation diagnostics.
//! - [`orbit`]: group action, orbit tangent space, symplectic form, brackets,
//!   polarization conditions.
//! - [`quantization`]: polarized sections, the weighted inner product, the
//!   induced action, prequantum and Schrödinger operators, box spectra.
//! - [`coherent`]: Hermite-in-log basis, truncated coherent states, kernel.
//! - [`finrep`]: polynomial representations and a non-unitarity witness.
//! - [`verify`], [`report`], [`cli`]: invariant suites, canonical JSON and the
//!   `toda-quant` command line.

pub mod cli;
pub mod coherent;
pub mod dynamics;
pub mod error;
pub mod finrep;
pub mod linalg;
pub mod orbit;
pub mod quantization;
pub mod report;
pub mod sampling;
pub mod toda;
pub mod verify;

pub use error::{Error, Result};
