//! Finite-category engine for relative adjunctions, relative monads, their
//! algebra categories, weighted (co)limits and relative monadicity.
//!
//! Composition is written diagrammatically throughout: `f;g` is "f then g".

pub mod alg;
pub mod budget;
pub mod colim;
pub mod corpus;
pub mod error;
pub mod fincat;
pub mod monadicity;
pub mod prof;
pub mod reladj;
pub mod relmon;
pub mod solve;
pub mod suite;
#[cfg(test)]
mod testcats;

pub use budget::Budget;
pub use error::{Error, Result};
pub use fincat::{Functor, FinCategory, Mor, NatTrans, Obj};
