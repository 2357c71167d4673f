//! Weighted graph homomorphism numbers and the regression models built on
//! top of them.
//!
//! The crate has three layers:
//!
//! * counting — [`graph`] holds dense weighted digraphs, [`pattern`] the
//!   atlas of small simple digraphs that index features (with [`decomp`]
//!   providing their minimal-width tree decompositions), and [`hom`] the
//!   two engines (brute-force oracle, tree-decomposition DP) for weighted
//!   homomorphism numbers and their k-labeled variants;
//! * modeling — [`model`] featurizes graphs by shifted homomorphism
//!   numbers, fits linear coefficients by least squares (invariant and
//!   equivariant tasks), and searches for a pattern separating two graphs;
//! * continuum — [`graphon`] mirrors the same quantities for step-function
//!   graphons: homomorphism densities, cut-norm, cut-distance, and
//!   W-random sampling.
//!
//! Runnable walkthroughs live in `examples/`; the `ghm` binary wraps every
//! operation behind stable JSON file formats (see [`format`]).

pub mod decomp;
pub mod error;
pub mod format;
pub mod graph;
pub mod graphon;
pub mod hom;
pub mod model;
pub mod pattern;

pub use error::{Caps, Error, Result};
