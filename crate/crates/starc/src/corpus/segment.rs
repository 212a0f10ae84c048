//! Deterministic sentence and token segmentation.
//!
//! The rules are intentionally simple and fully specified so that corpus
//! statistics are reproducible:
//!
//! * tokens are maximal runs of letters/digits, plus apostrophes and hyphens
//!   when surrounded by letters/digits on both sides;
//! * sentences end at a run of `.`, `!` or `?` followed by whitespace and a
//!   capital letter, unless the word before a period is a guarded
//!   abbreviation or a single letter (initials, "e.g.").
//!
//! All offsets are char offsets.

use super::model::Interval;

/// Words that do not end a sentence when followed by a period.
const ABBREVIATIONS: &[&str] = &[
    "mr", "mrs", "ms", "dr", "prof", "st", "jr", "sr", "vs", "etc", "inc", "ltd", "co", "no",
    "fig", "gen", "sen", "rep", "capt", "col", "sgt", "ave", "blvd", "dept", "est", "univ",
    "vol", "approx",
];

/// Segment `text` into sentence and token char intervals.
///
/// Empty input yields empty segmentations. The two interval lists are each
/// sorted, non-overlapping and within text bounds.
pub fn segment(text: &str) -> (Vec<Interval>, Vec<Interval>) {
    let chars: Vec<char> = text.chars().collect();
    (sentences(&chars), tokens(&chars))
}

fn is_token_char(chars: &[char], i: usize) -> bool {
    let c = chars[i];
    if c.is_alphanumeric() {
        return true;
    }
    if c == '\'' || c == '\u{2019}' || c == '-' {
        let prev_ok = i > 0 && chars[i - 1].is_alphanumeric();
        let next_ok = i + 1 < chars.len() && chars[i + 1].is_alphanumeric();
        return prev_ok && next_ok;
    }
    false
}

fn tokens(chars: &[char]) -> Vec<Interval> {
    let mut out = Vec::new();
    let mut i = 0usize;
    while i < chars.len() {
        if is_token_char(chars, i) {
            let start = i;
            while i < chars.len() && is_token_char(chars, i) {
                i += 1;
            }
            out.push(Interval::new(start, i));
        } else {
            i += 1;
        }
    }
    out
}

/// Word (letter run) immediately before position `i`, lowercased.
fn word_before(chars: &[char], i: usize) -> String {
    let mut start = i;
    while start > 0 && chars[start - 1].is_alphabetic() {
        start -= 1;
    }
    chars[start..i].iter().collect::<String>().to_lowercase()
}

fn is_terminator(c: char) -> bool {
    matches!(c, '.' | '!' | '?')
}

fn sentences(chars: &[char]) -> Vec<Interval> {
    let mut out = Vec::new();
    let n = chars.len();
    let mut start = 0usize;
    // skip leading whitespace of the first sentence
    while start < n && chars[start].is_whitespace() {
        start += 1;
    }
    let mut i = start;
    while i < n {
        if is_terminator(chars[i]) {
            let term_start = i;
            while i < n && is_terminator(chars[i]) {
                i += 1;
            }
            let guarded = chars[term_start] == '.'
                && i - term_start == 1
                && is_guarded(&word_before(chars, term_start));
            let mut j = i;
            while j < n && chars[j].is_whitespace() {
                j += 1;
            }
            let splits = !guarded && j > i && j < n && chars[j].is_uppercase();
            if splits {
                out.push(Interval::new(start, i));
                start = j;
                i = j;
            }
        } else {
            i += 1;
        }
    }
    // trailing sentence: up to the last non-whitespace char
    let mut end = n;
    while end > start && chars[end - 1].is_whitespace() {
        end -= 1;
    }
    if end > start {
        out.push(Interval::new(start, end));
    }
    out
}

fn is_guarded(word: &str) -> bool {
    word.chars().count() == 1 || ABBREVIATIONS.contains(&word)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn token_strs(text: &str) -> Vec<String> {
        let chars: Vec<char> = text.chars().collect();
        tokens(&chars)
            .iter()
            .map(|iv| chars[iv.start..iv.end].iter().collect())
            .collect()
    }

    fn sentence_strs(text: &str) -> Vec<String> {
        let chars: Vec<char> = text.chars().collect();
        sentences(&chars)
            .iter()
            .map(|iv| chars[iv.start..iv.end].iter().collect())
            .collect()
    }

    #[test]
    fn empty_text_has_empty_segmentations() {
        assert_eq!(segment(""), (vec![], vec![]));
        assert_eq!(segment("   \n\t "), (vec![], vec![]));
    }

    // Hand-count over the stated rule set: "Dr." is guarded so the text has
    // two sentences; the tokens are Dr, Smith, left, He, ran.
    #[test]
    fn abbreviation_guard_oracle() {
        let text = "Dr. Smith left. He ran.";
        let (sents, toks) = segment(text);
        assert_eq!(sents.len(), 2);
        assert_eq!(toks.len(), 5);
        assert_eq!(
            sentence_strs(text),
            vec!["Dr. Smith left.", "He ran."]
        );
        assert_eq!(token_strs(text), vec!["Dr", "Smith", "left", "He", "ran"]);
    }

    #[test]
    fn internal_apostrophes_and_hyphens_join_tokens() {
        assert_eq!(
            token_strs("don't use state-of-the-art - alone"),
            vec!["don't", "use", "state-of-the-art", "alone"]
        );
    }

    #[test]
    fn trailing_apostrophe_is_not_token_char() {
        assert_eq!(token_strs("the cats' toys"), vec!["the", "cats", "toys"]);
    }

    #[test]
    fn lowercase_after_period_does_not_split() {
        assert_eq!(sentence_strs("He saw v. lowercase next. Then stop."),
            vec!["He saw v. lowercase next.", "Then stop."]);
    }

    #[test]
    fn single_letter_guard_covers_initials() {
        assert_eq!(
            sentence_strs("J. Smith wrote it. We read it."),
            vec!["J. Smith wrote it.", "We read it."]
        );
    }

    #[test]
    fn exclamation_and_question_split() {
        assert_eq!(
            sentence_strs("Really?! Yes. And then?"),
            vec!["Really?!", "Yes.", "And then?"]
        );
    }

    #[test]
    fn unterminated_tail_is_a_sentence() {
        assert_eq!(
            sentence_strs("First one. second half still here"),
            vec!["First one. second half still here"]
        );
        assert_eq!(sentence_strs("no stop at all"), vec!["no stop at all"]);
    }

    #[test]
    fn unicode_offsets_are_char_based() {
        let text = "Héllo wörld. Next öne.";
        let (sents, toks) = segment(text);
        assert_eq!(sents.len(), 2);
        assert_eq!(toks.len(), 4);
        assert_eq!(token_strs(text), vec!["Héllo", "wörld", "Next", "öne"]);
    }
}
