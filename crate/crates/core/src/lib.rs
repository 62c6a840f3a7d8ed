//! Real logarithms of real matrices and the linear maps that preserve them.
//!
//! * [`membership`] decides whether a matrix has a principal logarithm
//!   (the set `K`), some real logarithm (`K*`), or lies in their closure.
//! * [`functions`] computes `expm`, real square roots and real logarithms.
//! * [`maps`] and [`preserver`] represent linear maps on matrix space and
//!   decide whether one maps `K*` onto itself.
//! * [`constructions`] holds the explicit 2x2 gadgets and the density witness.

pub mod cli;
pub mod constructions;
pub mod error;
pub mod functions;
pub mod json;
pub mod linalg;
pub mod maps;
pub mod membership;
pub mod preserver;
pub mod sampling;

pub use error::{Error, Result};
pub use linalg::{Matrix, Tolerances};
