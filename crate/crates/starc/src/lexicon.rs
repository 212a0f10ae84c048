//! Fixed lexical resources shared by the linter and the lexical baselines.

use crate::corpus::model::char_slice;
use crate::corpus::segment::segment;

/// The 50-word function-word list used to strip non-content tokens before
/// lexical matching. Fixed by contract; changing it changes baseline scores.
pub const STOPWORDS: [&str; 50] = [
    "the", "a", "an", "and", "or", "but", "if", "then", "than", "that", "this", "these", "those",
    "of", "in", "on", "at", "by", "for", "with", "from", "to", "into", "over", "under", "about",
    "as", "is", "are", "was", "were", "be", "been", "being", "it", "its", "he", "she", "they",
    "them", "his", "her", "their", "we", "you", "i", "not", "no", "do", "did",
];

pub fn is_stopword(word: &str) -> bool {
    STOPWORDS.contains(&word)
}

/// Case-folded token strings of `text`, in order.
pub fn folded_tokens(text: &str) -> Vec<String> {
    let (_, toks) = segment(text);
    toks.iter()
        .map(|iv| {
            char_slice(text, iv.start, iv.end)
                .unwrap_or("")
                .to_lowercase()
        })
        .collect()
}

/// Case-folded tokens with stopwords removed.
pub fn content_tokens(text: &str) -> Vec<String> {
    folded_tokens(text)
        .into_iter()
        .filter(|t| !is_stopword(t))
        .collect()
}

/// Collapse whitespace runs to single spaces and trim the ends.
pub fn normalize_ws(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}
