//! Incremental learning over data streams.
//!
//! The crate is organised around three contracts defined in [`base`]:
//! [`Stream`] produces [`Instance`]s on request, [`Classifier`] learns from
//! them one batch at a time, and [`DriftDetector`] watches a scalar signal
//! (usually a model's error indicator) for change. The [`evaluation`] module
//! wires streams and classifiers together using the prequential
//! (test-then-train) and periodic holdout protocols.

// `!(x > 0.0)` style checks are used on purpose so NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod base;
pub mod cli;
pub mod drift;
pub mod error;
pub mod evaluation;
pub mod generators;
pub mod learners;
pub mod rng;

pub use base::{
    ClassDistribution, Classifier, DetectionStatus, DriftDetector, Instance, Layout, Remaining,
    Stream, StreamSchema,
};
pub use error::{Error, Result};
