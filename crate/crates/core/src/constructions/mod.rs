//! Tensor algebras, free Lie algebras, Quillen's functors and universal
//! enveloping algebras in PBW normal form.

mod chains;
mod free_lie;
mod pbw;
mod tensor;

pub(crate) use chains::combinations;
pub use chains::{chains_morphism, quillen_chains, suspended_letters};
pub use free_lie::{quillen_lie, FreeLie};
pub use pbw::{pbw_normal_form, symmetric_monomials, universal_envelope_dgl, PBWAlgebra};
pub use tensor::TensorAlgebra;
