//! Numerical laboratory for selfadjoint contractive extensions of Hermitian
//! contractions in finite dimensions.

pub mod error;
pub mod exitspace;
pub mod extensions;
pub mod functions;
pub mod json;
pub mod numcore;
pub mod random;
pub mod realization;
pub mod relations;
pub mod shorted;
pub mod verify;

pub use error::{Error, Result};
pub use numcore::{ComplexMatrix, ComplexVector, Subspace, Tolerance, C64};
