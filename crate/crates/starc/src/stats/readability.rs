//! Corpus readability statistics: word/sentence counts, Flesch-Kincaid
//! grade and SMOG.
//!
//! Syllables come from a fixed heuristic: count vowel-letter runs
//! (`aeiouy`), subtract a silent final `e` (a trailing run that is exactly
//! one `e`), minimum one syllable per word. The heuristic is deliberately
//! simple; downstream tolerances absorb its error.

use serde::{Deserialize, Serialize};

use crate::corpus::model::{char_slice, Passage};
use crate::error::{Error, Result};

fn is_vowel(c: char) -> bool {
    matches!(c, 'a' | 'e' | 'i' | 'o' | 'u' | 'y')
}

/// Heuristic syllable count of one word.
pub fn syllables(word: &str) -> usize {
    let lower = word.to_lowercase();
    let chars: Vec<char> = lower.chars().collect();
    let mut runs: Vec<(usize, usize)> = Vec::new();
    let mut i = 0usize;
    while i < chars.len() {
        if is_vowel(chars[i]) {
            let start = i;
            while i < chars.len() && is_vowel(chars[i]) {
                i += 1;
            }
            runs.push((start, i));
        } else {
            i += 1;
        }
    }
    let mut count = runs.len();
    // silent final e: the word ends in 'e' and that 'e' is its own vowel run
    if let Some(&(start, end)) = runs.last() {
        if count > 1 && end == chars.len() && end - start == 1 && chars[start] == 'e' {
            count -= 1;
        }
    }
    count.max(1)
}

/// Words of three or more syllables count as polysyllables for SMOG.
pub fn is_polysyllable(word: &str) -> bool {
    syllables(word) >= 3
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanSd {
    pub mean: f64,
    pub sd: f64,
}

fn mean_sd(values: &[f64]) -> MeanSd {
    if values.is_empty() {
        return MeanSd { mean: 0.0, sd: 0.0 };
    }
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / values.len() as f64;
    MeanSd { mean, sd: var.sqrt() }
}

/// Readability profile of one corpus slice (typically one difficulty level).
///
/// `words_per_sentence`, `flesch_kincaid` and `smog` means come from corpus
/// totals (so words/sentence times sentences/passage equals words/passage
/// exactly); their sd fields describe the per-passage spread.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReadabilityStats {
    pub passages: usize,
    pub words_per_passage: MeanSd,
    pub sentences_per_passage: MeanSd,
    pub words_per_sentence: MeanSd,
    pub flesch_kincaid: MeanSd,
    pub smog: MeanSd,
}

fn fk_grade(words: f64, sentences: f64, syllable_count: f64) -> f64 {
    0.39 * (words / sentences) + 11.8 * (syllable_count / words) - 15.59
}

fn smog_grade(polysyllables: f64, sentences: f64) -> f64 {
    1.0430 * (polysyllables * 30.0 / sentences).sqrt() + 3.1291
}

/// Compute readability statistics over a non-empty set of passages.
pub fn readability(passages: &[&Passage]) -> Result<ReadabilityStats> {
    if passages.is_empty() {
        return Err(Error::Parameter("readability needs at least one passage".into()));
    }
    let mut total_words = 0usize;
    let mut total_sentences = 0usize;
    let mut total_syllables = 0usize;
    let mut total_poly = 0usize;
    let mut per_words = Vec::new();
    let mut per_sentences = Vec::new();
    let mut per_wps = Vec::new();
    let mut per_fk = Vec::new();
    let mut per_smog = Vec::new();

    for p in passages {
        let words = p.tokens.len();
        let sentences = p.sentences.len();
        let mut syl = 0usize;
        let mut poly = 0usize;
        for iv in &p.tokens {
            let tok = char_slice(&p.text, iv.start, iv.end).unwrap_or("");
            let s = syllables(tok);
            syl += s;
            if s >= 3 {
                poly += 1;
            }
        }
        total_words += words;
        total_sentences += sentences;
        total_syllables += syl;
        total_poly += poly;
        per_words.push(words as f64);
        per_sentences.push(sentences as f64);
        if sentences > 0 && words > 0 {
            per_wps.push(words as f64 / sentences as f64);
            per_fk.push(fk_grade(words as f64, sentences as f64, syl as f64));
            per_smog.push(smog_grade(poly as f64, sentences as f64));
        }
    }

    if total_words == 0 || total_sentences == 0 {
        return Err(Error::Parameter("corpus has no words or no sentences".into()));
    }

    let w = total_words as f64;
    let s = total_sentences as f64;
    Ok(ReadabilityStats {
        passages: passages.len(),
        words_per_passage: mean_sd(&per_words),
        sentences_per_passage: mean_sd(&per_sentences),
        words_per_sentence: MeanSd {
            mean: w / s,
            sd: mean_sd(&per_wps).sd,
        },
        flesch_kincaid: MeanSd {
            mean: fk_grade(w, s, total_syllables as f64),
            sd: mean_sd(&per_fk).sd,
        },
        smog: MeanSd {
            mean: smog_grade(total_poly as f64, s),
            sd: mean_sd(&per_smog).sd,
        },
    })
}
