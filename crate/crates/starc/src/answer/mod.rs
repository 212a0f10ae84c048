//! Answer-selection backends.
//!
//! Every backend consumes a [`Presentation`] (an ablated instance with its
//! answers shuffled into presented positions) and yields a [`Choice`] whose
//! selected position is mapped back to an answer role through the recorded
//! permutation.

pub mod external;
pub mod oracle;
pub mod presentation;
pub mod random;
pub mod sliding_window;

pub use external::{HttpBackend, SubprocessBackend, WireBackend, WireRequest, WireResponse};
pub use oracle::SpanOracle;
pub use presentation::{Choice, Presentation};
pub use random::random_answer;
pub use sliding_window::{sliding_window_answer, tune_window};
