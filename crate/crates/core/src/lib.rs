//! Poisson geometry on coordinate charts: modular vector fields, Poisson maps,
//! cotangent paths, linear holonomy of Poisson submanifolds and reduction.

pub mod error;
pub mod expr;
pub mod holonomy;
pub mod linalg;
pub mod maps;
pub mod mvf;
pub mod paths;
pub mod poisson;
pub mod reduction;
pub mod witness;

pub use error::{Error, Result, Witness};
pub use expr::{Chart, Expr};

#[cfg(test)]
pub(crate) mod testutil;
