//! Exact-arithmetic engine for higher adeles on desk-scale schemes.
//!
//! The crate builds Beilinson-style adele modules over semilocal curves,
//! assembles their semi-cosimplicial and cubical diagrams, and mechanically
//! verifies the module-level identities, limit comparisons, and K0/K1
//! descent consequences. All arithmetic is exact: big rationals over Z,
//! rational functions over F_p, no floating point anywhere.

pub mod adele;
pub mod error;
pub mod matrix;
pub mod poly;
pub mod report;
pub mod ring;
pub mod scalar;
pub mod snf;

pub mod module;
pub mod sample;
pub mod scheme;
pub mod verify;
pub use error::{Error, Result};
