//! Exact computations with A∞ and L∞ algebras over the rationals: identity
//! checkers, homotopy transfer, universal enveloping A∞ algebras and the
//! rational-homotopy models extracted from them.

pub mod cli;
pub mod constructions;
pub mod envelope;
pub mod error;
pub mod format;
pub mod homotopy;
pub mod linalg;
pub mod models;
pub mod multiop;
pub mod perm;
pub mod scalar;
pub mod space;
pub mod transfer;

pub use error::{Error, Result};
pub use multiop::{MultiOp, Operations, Truncation};
pub use perm::Permutation;
pub use scalar::Q;
pub use space::{Element, GradedSpace, LinearMap};
