pub mod base;
pub mod dedekind;
pub mod error;
pub mod extension;
pub mod freeness;
pub mod hopf;
pub mod integral;
pub mod lattice;
pub mod linalg;
pub mod radical;

pub use base::{BaseElem, BaseField};
pub use error::{Error, Result};
pub use extension::{LElem, RadicandContext};
pub use lattice::IntegerLattice;
