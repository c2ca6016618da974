//! Floating-point building blocks: dense eigenvalues, multiprecision
//! simultaneous root refinement, low-degree polynomial roots, quadrature and
//! optimal assignment.

pub mod aberth;
pub mod assign;
pub mod eigen;
pub mod poly;
pub mod quad;
