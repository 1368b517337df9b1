use thiserror::Error;

use crate::tree::Violation;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("cannot parse `{token}`: {reason}")]
    Parse { token: String, reason: String },

    #[error("word is not a Stirling permutation of {multiset}: {reason}")]
    NotStirling { multiset: String, reason: String },

    #[error("value {0} does not occur")]
    ValueAbsent(u32),

    #[error("vertex {0} is not an internal vertex of the tree")]
    NoSuchVertex(u32),

    #[error("tree syntax error at byte {pos}: {msg}")]
    TreeSyntax { pos: usize, msg: String },

    #[error("invalid Gessel tree: {}", format_violations(.0))]
    InvalidTree(Vec<Violation>),

    #[error("vertex {vertex} has a y-leaf but no x-leaf, so the (u,v)-weight is undefined")]
    NotCanonical { vertex: u32 },

    #[error("multiset {0} is not of the form [n]_2")]
    NotTernary(String),

    #[error("operation needs a nonempty multiset")]
    EmptyMultiset,

    #[error("variable signature mismatch: expected {expected}, found {found}")]
    SignatureMismatch { expected: String, found: String },

    #[error(transparent)]
    Gamma(#[from] GammaError),

    #[error("unknown check `{0}`")]
    UnknownCheck(String),

    #[error("family too large: {cost} permutations exceeds the cap of {cap}")]
    FamilyTooLarge { cost: u128, cap: u128 },
}

fn format_violations(v: &[Violation]) -> String {
    v.iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

/// Failure modes of the partial gamma-expansion.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GammaError {
    #[error("polynomial is not symmetric in x and y (term x^{a} y^{b} z^{c})")]
    Asymmetric { a: u32, b: u32, c: u32 },

    #[error("z^{i} slice is not homogeneous of degree {expected} in x,y (found degree {found})")]
    NonHomogeneous { i: u32, expected: u32, found: u32 },

    #[error("not partial-gamma-positive at (i={i}, j={j}): coefficient {value}")]
    NonPositive { i: u32, j: u32, value: String },

    #[error("nonzero residue in z^{i} slice past j={j}: coefficient {value}")]
    Residue { i: u32, j: u32, value: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
