//! Lattice W_m-algebras, two ways.
//!
//! This crate implements the multiplicative (r-matrix) Poisson structure on
//! N-periodic pseudo-difference operators and the discrete Drinfeld-Sokolov
//! style reduction on matrix sequences, together with the dictionary between
//! difference operators and twisted polygons that connects them. Everything
//! is generic over an exact-rational or floating scalar field, so the
//! structural identities (bracket tables, Poisson submanifolds, the X^f = Y^f
//! equivalence of the two constructions) can be checked with zero tolerance.

pub mod error;
pub mod scalar;
pub mod seq;
pub mod matrix;
pub mod op;
pub mod looprep;
pub mod functional;
pub mod poisson;
pub mod polygon;
pub mod w2;
pub mod ds;
pub mod json;
pub mod sample;

pub use error::{Error, Result};
pub use matrix::SquareMatrix;
pub use op::LaurentOperator;
pub use scalar::{Dual, Rat, Scalar};
pub use seq::{site, PeriodicSequence, QuasiPeriodicSequence};
