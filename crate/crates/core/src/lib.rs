//! Generators, label oracles and scoring for Chinese NLI challenge sets.
//!
//! The crate is organised around one record type, [`NliPair`], which every
//! generator emits and the scorer consumes:
//!
//! - [`hans`] instantiates feature-constrained templates into lexical-overlap
//!   and subsequence pairs; [`heuristics`] detects both heuristics and scans
//!   labeled corpora for their label distribution.
//! - [`stress`] perturbs seed pairs (distraction, antonym, synonym, spelling)
//!   and [`numeric`] builds numerical-reasoning triples checked by an interval
//!   oracle.
//! - [`fragments`] generates the six logic fragments and verifies every label
//!   with a three-valued world-sketch oracle, cross-checked by exhaustive
//!   enumeration.
//! - [`diagnostics`] validates hand-written diagnostic files, and [`score`]
//!   computes accuracy decompositions, the Δ metric and annotator agreement.
//!
//! All randomness flows from a single `u64` seed through [`seed`], so every
//! dataset is byte-for-byte reproducible.

pub mod dataset;
pub mod diagnostics;
pub mod error;
pub mod fragments;
pub mod hans;
pub mod heuristics;
pub mod numeric;
pub mod resources;
pub mod score;
pub mod seed;
pub mod stress;

pub use dataset::{Dataset, Label, NliPair};
pub use error::{Error, Result};

/// Version string recorded in every generated dataset's metadata.
pub const GENERATOR_VERSION: &str = concat!("nli-forge ", env!("CARGO_PKG_VERSION"));
