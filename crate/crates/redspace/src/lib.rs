//! Reduced-space calculus for frustration-free Hamiltonians.
//!
//! This crate computes k-particle reduced spaces (the ranges of k-particle
//! reduced density matrices) of subspaces of an n-particle Hilbert space,
//! the join-semilattice they form under componentwise subspace sum, maximal
//! pre-images under the reduction map, and the dual picture: k-local
//! frustration-free Hamiltonians, their ground spaces, and the
//! meet-semilattice structure of those.

// Force the BLAS backend to link; ndarray's `blas` feature and
// ndarray-linalg's LAPACK routines both resolve against it.
extern crate blas_src;
extern crate openblas_src;

pub mod error;
pub mod ffham;
pub mod fixtures;
pub mod hilbert;
pub mod io;
pub mod linalg;
pub mod oracle;
pub mod reduced;
pub mod sampling;
pub mod semilattice;
pub mod subspace;

pub use error::{Error, Result};
