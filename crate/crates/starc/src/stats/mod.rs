//! Quantitative analyses over response data: accuracies, choice rates,
//! validity ceilings, significance tests and corpus readability.

pub mod ceiling;
pub mod metrics;
pub mod readability;
pub mod response;
pub mod significance;

pub use ceiling::{
    approximate_ceiling, consensus_invalid_rate, InvalidPolicy, ValidityJudgment, Verdict,
};
pub use metrics::{accuracy, choice_distribution, guess_overlap, ChoiceRates, GroupField, GroupKey, RateCell};
pub use readability::{readability, syllables, MeanSd, ReadabilityStats};
pub use response::{ResponseRecord, ResponseSet};
pub use significance::{mcnemar, mcnemar_with_method, proportion_test, McNemarMethod, McNemarResult, ProportionTest};
