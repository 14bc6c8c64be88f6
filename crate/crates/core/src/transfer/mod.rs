//! Contractions, homology splittings, perturbation and the recursive
//! homotopy transfer of A∞ and L∞ structures.

mod contraction;
mod recursion;

pub use contraction::{
    homology_contraction, perturb_contraction, splitting_from_contraction, ChainComplex, Contraction,
    ContractionOptions, ContractionReport, Splitting,
};
pub use recursion::{projection_ainf, transfer_ainf, transfer_linf, AInfProjection};

use crate::error::Result;
use crate::multiop::Operations;
use crate::space::{Element, LinearMap};

/// The complex `(A, op_1)` underlying an operation family.
pub fn underlying_complex(ops: &impl Operations) -> Result<ChainComplex> {
    let space = ops.space().clone();
    let cols = (0..space.dim())
        .map(|i| ops.op_basis(1, &[i]))
        .collect::<Result<Vec<Element>>>()?;
    ChainComplex::new(space, LinearMap::new(-1, cols))
}
