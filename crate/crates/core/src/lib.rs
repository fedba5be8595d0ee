//! Spectral analysis of Hill's equation `-u'' + Q u = λ u` with a 1-periodic
//! real potential `Q`.
//!
//! The crate computes the fundamental solutions `s`, `c` and their
//! λ-derivatives, the discriminant `Δ(λ) = s'(1;λ) + c(1;λ)`, Dirichlet
//! eigenvalues, band edges and closed-gap classification, and it provides a
//! numerical certification toolkit for the Herglotz functions
//! `h±(z) = -(Δ(z) ± 2) / s(1;z)` that govern the oscillation of `Δ`.
//! Three independent oracles (plane-wave Bloch matrices, a finite-difference
//! whole-line chain and exact discrete Jacobi cells) cross-check the results.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;
#[cfg(test)]
#[macro_use]
extern crate std;

pub mod discriminant;
mod entire;
pub mod error;
pub mod fundamental;
pub mod herglotz;
pub mod linalg;
pub mod oracles;
pub mod potential;
#[cfg(test)]
mod properties;
pub mod roots;
pub mod spectrum;

pub use num_complex::Complex64 as C64;

pub use discriminant::{DiscriminantValue, Hill, Route, Sign, WeylMatrix};
pub use error::{Error, Result};
pub use fundamental::{IntegratorOptions, MonodromyData};
pub use potential::{Interpolation, PotentialSpec};
pub use spectrum::{BandStructure, ClosureType, DirichletEigenvalue, Gap};
