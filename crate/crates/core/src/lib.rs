//! Spectral polynomials of the quasi-exactly solvable quartic oscillator.
//!
//! The crate computes the spectral matrices and their eigenvalues, the exact
//! spectral, discriminant and Yablonskii–Vorob'ev polynomials, limiting
//! root-counting measures of the associated recurrences, critical graphs of
//! the accompanying quadratic differentials, the branching set over the
//! parameter plane and eigenvalue monodromy along loops in that plane.

pub mod bkw;
pub mod branching;
pub mod cache;
pub mod cli;
pub mod error;
pub mod exactpoly;
pub mod monodromy;
pub mod numeric;
pub mod pointset;
pub mod quaddiff;
pub mod spectral;
pub mod yv;
pub mod zcase;

pub use error::{Error, Result};
