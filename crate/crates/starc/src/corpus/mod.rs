//! Corpus parsing, representation and segmentation.

pub mod format;
pub mod model;
pub mod segment;

pub use format::{detect_format, parse_dataset, parse_dataset_file, serialize_dataset, DatasetFormat};
pub use model::{
    char_slice, span_text, Answer, Dataset, Interval, Level, Passage, PassageKey, Question, Role,
    Span, SpanPair,
};
pub use segment::segment;
