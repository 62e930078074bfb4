pub mod abel_jacobi;
pub mod arith;
pub mod chain;
pub mod cli;
pub mod curve;
pub mod error;
pub mod homology;
pub mod jacobian;
pub mod poly;
pub mod snf;
pub mod zonotope;

pub use error::{Error, Result};
