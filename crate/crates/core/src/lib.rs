//! Exact computations around growth of generating sets in SL_n(F_p):
//! word balls and triple products, conjugacy invariants and maximal tori,
//! trace-tuple statistics, Vandermonde identities and additive energy.

pub mod energy;
pub mod error;
pub mod field_matrix;
pub mod growth;
pub mod runner;
pub mod torus;
pub mod trace_lab;
pub mod vandermonde;

pub use error::{Error, Result};
pub use field_matrix::{Fp, KappaVector, PrimeField, SemisimplicityClass, SquareMatrix};
pub use growth::{Budget, ElementSet};
