//! Exact finite element exterior calculus on simplices: barycentric forms,
//! Whitney and trimmed polynomial spaces, their resolutions, degrees of
//! freedom, metric data from edge lengths and polynomial bases.
//!
//! All arithmetic is over arbitrary precision rationals.

pub mod bases;
pub mod cli;
pub mod complex;
pub mod dofs;
pub mod error;
pub mod forms;
pub mod linalg;
pub mod metric;
pub mod rational;
pub mod resolve;
pub mod whitney;

pub use error::{Error, Result};
pub use linalg::RatMatrix;
pub use rational::Rational;
