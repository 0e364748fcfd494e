//! Finite-dimensional Hopf C*-algebras as complex matrix models.
//!
//! Every algebra here is a unital *-closed subspace of some `M_n`, so
//! multiplier algebras coincide with the algebras themselves and all
//! identities can be checked by direct computation.

pub mod algebra;
pub mod convolution;
pub mod corep;
pub mod crossed;
pub mod error;
pub mod groups;
pub mod hopf;
pub mod multunitary;
pub mod suites;
pub mod tensor;

pub use error::{Error, Result};
pub use tensor::{CMatrix, C64, DEFAULT_TOL};
