//! Exact computation of the Euler-Poincaré, Dirac-index and elliptic pairings
//! for equal-rank real reductive pairs, together with an algebraic Fredholm-pair
//! index calculus and explicit matrix models for sl(2,R) and su(2,1).

pub mod elliptic;
pub mod error;
pub mod exec;
pub mod fredholm;
pub mod lab;
pub mod linalg;
pub mod spin;
pub mod weights;

pub use error::{Error, Result};
