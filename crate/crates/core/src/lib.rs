//! Exact computations around root data with pinned automorphisms, elliptic
//! real tori and their double covers, twisted character formulas, Galois
//! cohomology of tori, and endoscopic transfer factors.
//!
//! Everything that can be kept exact is kept exact: torus coordinates are
//! rational angles, character values are roots of unity, and floating point
//! enters only when a Weyl-type sum is finally divided out.

pub mod characters;
pub mod cohomology;
pub mod covers;
pub mod endoscopy;
pub mod exactnum;
pub mod lab;
pub mod linalg;
pub mod realstructure;
pub mod rootdata;

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid root datum: {0}")]
    InvalidDatum(String),
    #[error("automorphism does not preserve the based structure: {0}")]
    NotPinned(String),
    #[error("parameter is singular: {0}")]
    Singular(String),
    #[error("not stable under the twist: {0}")]
    NotFixed(String),
    #[error("element fails the regularity requirement: {0}")]
    NotRegular(String),
    #[error("cocycle condition violated: {0}")]
    Cocycle(String),
    #[error("unsupported configuration: {0}")]
    Unsupported(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, Error>;
