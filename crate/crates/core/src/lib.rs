//! Exact measurement engine for linear automorphisms of smooth projective
//! hypersurfaces over finite fields.
//!
//! The crate enumerates hypersurfaces of fixed degree over a finite field,
//! decides smoothness by an exact Macaulay-matrix saturation test, computes
//! stabilizers under the PGL action, and compares the measured counts with
//! closed-form bounds, identities and density limits. Everything is exact:
//! field arithmetic is table-driven, linear algebra is fraction-free, and
//! all report quantities are integers or reduced rationals.

pub mod bounds;
pub mod census;
pub mod cli;
pub mod config;
pub mod error;
pub mod fixedspace;
pub mod gf;
pub mod group;
pub mod linalg;
pub mod polyspace;
pub mod smooth;

pub use config::Budgets;
pub use error::{Error, Result};
