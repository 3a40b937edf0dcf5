//! Exact Bell and Stirling combinatorics, arbitrary-precision special
//! functions with rigorous error bounds, and certified numerical checks of
//! an explicit formula expressing Bell numbers through Stirling numbers of
//! the second kind and Kummer's confluent hypergeometric function.

pub mod bigmath;
pub mod cli;
pub mod combinat;
pub mod error;
pub mod quadrature;
pub mod specfun;
pub mod theorem;

pub use error::{Error, Result};
