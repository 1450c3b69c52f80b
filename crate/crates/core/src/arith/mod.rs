//! Exact arithmetic: F_q, truncated Witt vectors with Frobenius, and the
//! totally ramified extension with its pi-adic valuation.

mod fp_poly;
mod ram;
mod tower;
mod witt;
pub mod zmod;

pub use ram::{RamElem, RamRing, Val};
pub use tower::{CoeffTower, TowerSpec};
pub use witt::{WittElem, WittRing};
