//! Toolkit for validating and probing span-annotated multiple-choice
//! reading comprehension datasets.
//!
//! The STARC answer scheme gives every question four role-tagged answers
//! (A correct, B a misreading of the critical span, C anchored in a
//! distractor span, D plausible but unsupported) plus character-offset span
//! annotations. This crate parses such corpora, lints them against the
//! authoring rules, produces component and span ablations of every
//! question-passage instance, runs native and external answer-selection
//! backends over those ablations, and aggregates the results into quality
//! reports: accuracy and per-role choice-rate grids, ceiling estimates from
//! human validity judgments, readability statistics, significance tests and
//! pilot flagging.
//!
//! Start from the runnable programs in `examples/`, one per capability.

pub mod ablate;
pub mod answer;
pub mod corpus;
pub mod error;
pub mod lexicon;
pub mod lint;
pub mod pilot;
pub mod probe;
pub mod report;
pub mod stats;
pub mod synth;

pub use corpus::{Dataset, DatasetFormat, Level, Passage, Question, Role, Span};
pub use error::{Error, Result};
