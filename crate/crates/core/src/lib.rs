//! Corpus similarity and register-variation analysis.
//!
//! Corpora are normalized into word streams, cut into fixed-size contiguous
//! sub-corpora and represented as frequency vectors over a fixed top-k n-gram
//! vocabulary chosen from an independent background corpus. Two sub-corpora
//! are compared with Spearman's rho; raw values are standardized against a
//! per-language benchmark of same-register and cross-register pairs. On top
//! of that sit threshold-based validation, homogeneity estimates, register
//! profiles and Ward clustering.

pub mod analysis;
pub mod cli;
pub mod config;
pub mod corpus;
pub mod error;
pub mod features;
pub mod normalize;
pub mod plot;
pub mod report;
pub mod similarity;
pub mod synthetic;
pub mod validation;

pub use error::{Error, Result};
