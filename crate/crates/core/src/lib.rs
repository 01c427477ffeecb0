//! A workbench for right-angled Coxeter systems: the word problem,
//! Cayley-graph geometry, a brute-force ball oracle, separator detection,
//! a boundary local-connectivity classifier, and filter diagrams between
//! diverging geodesic rays.
//!
//! All values are immutable after construction and every operation is pure
//! and deterministic, so the whole API is safe for unrestricted concurrent
//! use.

pub mod align;
pub mod classify;
pub mod cli;
pub mod error;
pub mod filter;
pub mod fixtures;
pub mod graph;
pub mod oracle;
pub mod parse;
pub mod rng;
pub mod separators;
pub mod word;

pub use error::{Error, Result};
pub use graph::{Generator, PresentationGraph, VertexSet};
pub use word::{Letter, NormalForm, Word};
