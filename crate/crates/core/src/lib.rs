//! Exact combinatorics of Stirling permutations on a multiset.
//!
//! * [`stirling`]: Stirling permutations, lexicographic enumeration, statistics.
//! * [`tree`]: Gessel trees and the bijection with Stirling permutations.
//! * [`action`]: the Foata-Strehl action, canonical trees, pruned trees.
//! * [`poly`], [`gamma`], [`eulerian`]: exact polynomials, partial
//!   gamma-expansions, and the counting interpretations of their coefficients.
//! * [`grammar`]: formal derivatives of context-free grammars.
//! * [`harness`]: verification campaigns and the worked examples.

pub mod action;
pub mod error;
pub mod eulerian;
pub mod gamma;
pub mod grammar;
pub mod harness;
pub mod multiset;
pub mod poly;
pub mod stirling;
pub mod tree;

pub use error::{Error, GammaError, Result};
pub use gamma::GammaTable;
pub use multiset::Multiset;
pub use poly::{Poly3, Vars};
pub use stirling::{StatProfile, StirlingPermutation};
pub use tree::{GesselTree, LeafCensus, Node};
