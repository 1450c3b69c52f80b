//! Rank-2 Dieudonne O-modules over truncated Witt rings.
//!
//! The crate computes Lie types, a-types and Newton points of modules
//! presented by slot matrices, builds the standard explicit families, and
//! checks the accompanying stratification combinatorics and a Hecke
//! enumeration against brute force.

pub mod arith;
pub mod constructions;
pub mod dieudonne;
pub mod error;
pub mod heckeprobe;
pub mod invariants;
pub mod strata;
pub mod verify;

pub use error::{Error, Result};
