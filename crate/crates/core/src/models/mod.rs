//! Rational homotopy: the example catalog, Sullivan and Quillen models read
//! off an envelope, and the Whitehead/Massey–Pontryagin certificate.

mod catalog;
mod quillen;
mod sullivan;
mod whitehead;

pub use catalog::{example, Example};
pub use quillen::{quillen_model, quillen_model_of, QuillenModel};
pub use sullivan::{sullivan_from_pairing, sullivan_model, SullivanModel};
pub use whitehead::{whitehead_massey_certificate, WhiteheadCertificate};
