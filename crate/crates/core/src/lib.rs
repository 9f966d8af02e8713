//! Numerical toolkit for discrete phase-space quantum mechanics over Galois
//! fields: generalized displacement operators, mutually unbiased bases,
//! discrete Wigner operator families with machine-checked acceptability, the
//! factorisability of composite-system Wigner families, and simulated quantum
//! state tomography (MUB projective measurements and SIC POVMs) with exact and
//! finite-shot linear-inversion reconstruction.
//!
//! The crate is organized in six modules:
//!
//! - [`field`]: exact GF(p^m) arithmetic tables, additive characters, and
//!   quadratic extensions;
//! - [`mat`]: a dense complex matrix kernel for small dimensions;
//! - [`weyl`]: displacement operators, commuting families, and the phase
//!   conventions that close them into groups;
//! - [`wigner`]: Wigner (phase-point) operator families, their acceptability
//!   verifier, line averages, MUB extraction, and state distributions;
//! - [`factor`]: factorisability scans and constructions for composite
//!   systems (two- and three-qubit products, odd-prime-power quadratic
//!   extensions, coprime modular dimensions);
//! - [`tomo`]: tomography protocols and their finite-shot simulation.

pub mod factor;
pub mod field;
pub mod mat;
pub mod tomo;
pub mod weyl;
pub mod wigner;

pub use field::{
    build_field, build_quadratic_extension, FieldElement, FieldTables, PrimePower, QuadExtension,
};
pub use mat::{CMatrix, DensityMatrix};
pub use weyl::{CommutingFamily, DisplacementIndex, PhaseConvention};
pub use wigner::{LineSpec, MubSet, WeylDistribution, WignerDistribution, WignerFamily};
