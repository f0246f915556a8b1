//! Joint temporal-causal relation inference over event graphs.
//!
//! Given per-pair confidence scores for the temporal relations between
//! events and time expressions in a document (and optionally for the
//! causal direction between event pairs), this crate finds the globally
//! best label assignment under the constraints inherent to time and
//! causality: symmetry, transitivity, date-determined timex relations,
//! high-precision rule pins, and the requirement that a cause precedes
//! its effect.
//!
//! Modules:
//! - [`algebra`]: the six-label temporal relation set, causal labels,
//!   Allen interval relations and their reduction, and the transitivity
//!   table that drives all consistency reasoning.
//! - [`model`]: documents, nodes, pair ids, score tables, relation
//!   graphs, and their JSON (de)serialization.
//! - [`scoring`]: a multi-class averaged perceptron and soft-max
//!   scoring, for producing the confidence tables from feature vectors.
//! - [`inference`]: the joint optimization model, an exact
//!   branch-and-bound solver, a brute-force oracle, and the local
//!   (per-pair argmax) baseline.
//! - [`evaluation`]: graph closure, constraint validation, the
//!   closure-based precision/recall metric, causal direction accuracy,
//!   and McNemar's significance test.
//! - [`synth`]: seeded synthetic document generation from random
//!   interval models.
//! - [`ablation`]: the preset ladder that adds one constraint family at
//!   a time and evaluates each step.

pub mod ablation;
pub mod algebra;
pub mod error;
pub mod evaluation;
pub mod inference;
pub mod model;
pub mod scoring;
pub mod synth;

pub use error::Error;
