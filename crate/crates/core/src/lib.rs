//! Exact computations with finite-dimensional weak bialgebras, Takeuchi
//! ×_R-products and Morita base change.

pub mod algebra;
pub mod bimodule;
pub mod duality;
pub mod error;
pub mod frobenius;
pub mod io;
pub mod linalg;
pub mod morita;
pub mod report;
pub mod scalar;
pub mod takeuchi;
pub mod towers;
pub mod weak;

pub use error::{Error, Result};
pub use scalar::Scalar;
