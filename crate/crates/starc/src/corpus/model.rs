//! Core corpus types: spans, passages, questions, datasets.
//!
//! All offsets are in unicode scalar values (chars), never bytes, so span
//! annotations survive re-encoding. Intervals are half-open `[start, end)`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Half-open char interval `[start, end)` into a passage text.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(from = "(usize, usize)", into = "(usize, usize)")]
pub struct Interval {
    pub start: usize,
    pub end: usize,
}

impl Interval {
    pub fn new(start: usize, end: usize) -> Self {
        Interval { start, end }
    }

    pub fn len(&self) -> usize {
        self.end.saturating_sub(self.start)
    }

    pub fn is_empty(&self) -> bool {
        self.end <= self.start
    }

    pub fn overlaps(&self, other: &Interval) -> bool {
        self.start < other.end && other.start < self.end
    }

    pub fn contains(&self, other: &Interval) -> bool {
        self.start <= other.start && other.end <= self.end
    }
}

impl From<(usize, usize)> for Interval {
    fn from((start, end): (usize, usize)) -> Self {
        Interval { start, end }
    }
}

impl From<Interval> for (usize, usize) {
    fn from(i: Interval) -> Self {
        (i.start, i.end)
    }
}

/// A possibly non-contiguous region of a passage: ordered, pairwise
/// disjoint char intervals.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Span {
    pub fragments: Vec<Interval>,
}

impl Span {
    pub fn new(fragments: Vec<Interval>) -> Self {
        Span { fragments }
    }

    /// Single contiguous fragment.
    pub fn contiguous(start: usize, end: usize) -> Self {
        Span {
            fragments: vec![Interval::new(start, end)],
        }
    }

    /// Total chars covered by the span.
    pub fn covered_chars(&self) -> usize {
        self.fragments.iter().map(Interval::len).sum()
    }

    pub fn overlaps(&self, other: &Span) -> bool {
        self.fragments
            .iter()
            .any(|a| other.fragments.iter().any(|b| a.overlaps(b)))
    }

    /// Character-level Jaccard similarity between two spans.
    pub fn char_jaccard(&self, other: &Span) -> f64 {
        let inter: usize = self
            .fragments
            .iter()
            .map(|a| {
                other
                    .fragments
                    .iter()
                    .map(|b| a.end.min(b.end).saturating_sub(a.start.max(b.start)))
                    .sum::<usize>()
            })
            .sum();
        let union = self.covered_chars() + other.covered_chars() - inter;
        if union == 0 {
            return 0.0;
        }
        inter as f64 / union as f64
    }

    /// Fragments non-empty, each start < end, sorted ascending, pairwise
    /// non-overlapping, all within `text_len`.
    pub fn validate(&self, text_len: usize, scope: &str) -> Result<()> {
        if self.fragments.is_empty() {
            return Err(Error::schema(scope, "span has no fragments"));
        }
        let mut prev_end = 0usize;
        for (i, frag) in self.fragments.iter().enumerate() {
            if frag.start >= frag.end {
                return Err(Error::schema(
                    scope,
                    format!("span fragment {i} is empty or inverted ({}..{})", frag.start, frag.end),
                ));
            }
            if frag.end > text_len {
                return Err(Error::schema(
                    scope,
                    format!("span out of bounds: fragment {i} ends at {} but text has {text_len} chars", frag.end),
                ));
            }
            if i > 0 && frag.start < prev_end {
                return Err(Error::schema(
                    scope,
                    format!("span fragments unsorted or overlapping at fragment {i}"),
                ));
            }
            prev_end = frag.end;
        }
        Ok(())
    }
}

/// Text difficulty level of a passage version.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
pub enum Level {
    #[serde(rename = "ele")]
    Elementary,
    #[serde(rename = "int")]
    Intermediate,
    #[serde(rename = "adv")]
    Advanced,
    #[serde(rename = "unleveled")]
    Unleveled,
}

impl Level {
    pub const LEVELED: [Level; 3] = [Level::Elementary, Level::Intermediate, Level::Advanced];

    pub fn key(&self) -> &'static str {
        match self {
            Level::Elementary => "ele",
            Level::Intermediate => "int",
            Level::Advanced => "adv",
            Level::Unleveled => "unleveled",
        }
    }

    pub fn parse_key(s: &str) -> Option<Level> {
        match s {
            "ele" => Some(Level::Elementary),
            "int" => Some(Level::Intermediate),
            "adv" => Some(Level::Advanced),
            "unleveled" => Some(Level::Unleveled),
            _ => None,
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

/// Answer role. A is the unique correct answer; B, C, D are distractors
/// of decreasing anchoring in the passage.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
pub enum Role {
    A,
    B,
    C,
    D,
}

impl Role {
    pub const ALL: [Role; 4] = [Role::A, Role::B, Role::C, Role::D];

    pub fn index(&self) -> usize {
        match self {
            Role::A => 0,
            Role::B => 1,
            Role::C => 2,
            Role::D => 3,
        }
    }

    pub fn from_index(i: usize) -> Option<Role> {
        Role::ALL.get(i).copied()
    }

    pub fn letter(&self) -> char {
        match self {
            Role::A => 'A',
            Role::B => 'B',
            Role::C => 'C',
            Role::D => 'D',
        }
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

/// One role-tagged answer option.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Answer {
    pub role: Role,
    pub text: String,
}

/// Critical/distractor span pair for one level of a question's paragraph.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct SpanPair {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub critical: Option<Span>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub distractor: Option<Span>,
}

/// One paragraph version at one difficulty level, with derived segmentation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Passage {
    pub article_id: String,
    pub level: Level,
    pub paragraph_index: u32,
    pub text: String,
    /// Sentence char intervals, derived deterministically from `text`.
    pub sentences: Vec<Interval>,
    /// Token char intervals, derived deterministically from `text`.
    pub tokens: Vec<Interval>,
}

impl Passage {
    /// Build a passage, running segmentation on the text.
    pub fn new(
        article_id: impl Into<String>,
        level: Level,
        paragraph_index: u32,
        text: impl Into<String>,
    ) -> Self {
        let text = text.into();
        let (sentences, tokens) = super::segment::segment(&text);
        Passage {
            article_id: article_id.into(),
            level,
            paragraph_index,
            text,
            sentences,
            tokens,
        }
    }

    pub fn key(&self) -> PassageKey {
        PassageKey {
            article_id: self.article_id.clone(),
            paragraph_index: self.paragraph_index,
            level: self.level,
        }
    }

    pub fn char_len(&self) -> usize {
        self.text.chars().count()
    }

    /// Token texts (owned) in order.
    pub fn token_texts(&self) -> Vec<&str> {
        self.tokens
            .iter()
            .map(|iv| char_slice(&self.text, iv.start, iv.end).unwrap_or(""))
            .collect()
    }
}

/// Lookup key for one passage version.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PassageKey {
    pub article_id: String,
    pub paragraph_index: u32,
    pub level: Level,
}

/// A question bound to one paragraph of one article, with per-level spans.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Question {
    pub question_id: String,
    pub article_id: String,
    pub paragraph_index: u32,
    pub stem: String,
    /// Exactly four answers covering roles A-D in well-formed data; kept as
    /// a list so that linting can detect violations in constructed data.
    pub answers: Vec<Answer>,
    /// Span annotations keyed by level. Empty for span-free corpora.
    pub spans: BTreeMap<Level, SpanPair>,
}

impl Question {
    pub fn answer(&self, role: Role) -> Option<&str> {
        self.answers
            .iter()
            .find(|a| a.role == role)
            .map(|a| a.text.as_str())
    }

    /// True when every level present carries both a critical and a
    /// distractor span.
    pub fn has_spans(&self) -> bool {
        !self.spans.is_empty()
            && self
                .spans
                .values()
                .all(|sp| sp.critical.is_some() && sp.distractor.is_some())
    }

    pub fn span_pair(&self, level: Level) -> Option<&SpanPair> {
        self.spans.get(&level)
    }
}

/// A parsed corpus: passages plus the questions bound to them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dataset {
    pub name: String,
    pub passages: BTreeMap<PassageKey, Passage>,
    pub questions: BTreeMap<String, Question>,
}

impl Dataset {
    pub fn new(name: impl Into<String>) -> Self {
        Dataset {
            name: name.into(),
            passages: BTreeMap::new(),
            questions: BTreeMap::new(),
        }
    }

    pub fn passage(&self, article_id: &str, paragraph_index: u32, level: Level) -> Option<&Passage> {
        self.passages.get(&PassageKey {
            article_id: article_id.to_string(),
            paragraph_index,
            level,
        })
    }

    /// Levels present for a given paragraph, in canonical order.
    pub fn levels_of(&self, article_id: &str, paragraph_index: u32) -> Vec<Level> {
        self.passages
            .keys()
            .filter(|k| k.article_id == article_id && k.paragraph_index == paragraph_index)
            .map(|k| k.level)
            .collect()
    }

    /// Distinct article ids in canonical order.
    pub fn article_ids(&self) -> Vec<String> {
        let mut ids: Vec<String> = self
            .passages
            .keys()
            .map(|k| k.article_id.clone())
            .collect();
        ids.dedup();
        ids
    }

    /// All levels that occur anywhere in the dataset.
    pub fn levels(&self) -> Vec<Level> {
        let mut seen: Vec<Level> = Vec::new();
        for k in self.passages.keys() {
            if !seen.contains(&k.level) {
                seen.push(k.level);
            }
        }
        seen.sort();
        seen
    }

    /// True when every question carries complete span annotations.
    pub fn is_span_annotated(&self) -> bool {
        !self.questions.is_empty() && self.questions.values().all(Question::has_spans)
    }

    /// Passages of one question, one per level, in canonical order.
    pub fn passages_of(&self, q: &Question) -> Vec<&Passage> {
        self.passages
            .values()
            .filter(|p| p.article_id == q.article_id && p.paragraph_index == q.paragraph_index)
            .collect()
    }

    /// Validate every type invariant; returns a schema error naming the
    /// offending question and rule otherwise.
    pub fn validate(&self) -> Result<()> {
        for (key, passage) in &self.passages {
            if *key != passage.key() {
                return Err(Error::schema(
                    format!("passage {}#{}", key.article_id, key.paragraph_index),
                    "passage stored under mismatched key",
                ));
            }
            validate_tiling(&passage.sentences, passage.char_len(), "sentences")?;
            validate_tiling(&passage.tokens, passage.char_len(), "tokens")?;
        }
        for (qid, q) in &self.questions {
            if *qid != q.question_id {
                return Err(Error::schema(qid, "question stored under mismatched id"));
            }
            let scope = format!("question {qid}");
            let mut seen = [false; 4];
            for ans in &q.answers {
                if seen[ans.role.index()] {
                    return Err(Error::schema(&scope, format!("duplicate answer role {}", ans.role)));
                }
                seen[ans.role.index()] = true;
            }
            if q.answers.len() != 4 || seen.iter().any(|s| !s) {
                return Err(Error::schema(&scope, "answers must cover roles A-D exactly once"));
            }
            let levels = self.levels_of(&q.article_id, q.paragraph_index);
            if levels.is_empty() {
                return Err(Error::Binding(format!(
                    "question {qid} binds to missing paragraph {}#{}",
                    q.article_id, q.paragraph_index
                )));
            }
            for (level, pair) in &q.spans {
                let passage = self
                    .passage(&q.article_id, q.paragraph_index, *level)
                    .ok_or_else(|| {
                        Error::schema(
                            &scope,
                            format!("spans reference level {level} with no passage"),
                        )
                    })?;
                let text_len = passage.char_len();
                if let Some(c) = &pair.critical {
                    c.validate(text_len, &format!("{scope} critical span ({level})"))?;
                }
                if let Some(d) = &pair.distractor {
                    d.validate(text_len, &format!("{scope} distractor span ({level})"))?;
                }
            }
        }
        Ok(())
    }
}

fn validate_tiling(intervals: &[Interval], text_len: usize, what: &str) -> Result<()> {
    let mut prev_end = 0usize;
    for (i, iv) in intervals.iter().enumerate() {
        if iv.start >= iv.end || iv.end > text_len || (i > 0 && iv.start < prev_end) {
            return Err(Error::Offset(format!(
                "{what} interval {i} ({}..{}) breaks tiling over {text_len} chars",
                iv.start, iv.end
            )));
        }
        prev_end = iv.end;
    }
    Ok(())
}

/// Slice `text` by char offsets; `None` when out of bounds.
pub fn char_slice(text: &str, start: usize, end: usize) -> Option<&str> {
    if start > end {
        return None;
    }
    let mut byte_start = None;
    let mut byte_end = None;
    let mut count = 0usize;
    for (bi, _) in text.char_indices() {
        if count == start {
            byte_start = Some(bi);
        }
        if count == end {
            byte_end = Some(bi);
        }
        count += 1;
    }
    if count == start {
        byte_start = Some(text.len());
    }
    if count == end {
        byte_end = Some(text.len());
    }
    match (byte_start, byte_end) {
        (Some(s), Some(e)) => Some(&text[s..e]),
        _ => None,
    }
}

/// Extract the text a span covers: fragment substrings joined by one space.
pub fn span_text(p: &Passage, s: &Span) -> Result<String> {
    let mut parts = Vec::with_capacity(s.fragments.len());
    for frag in &s.fragments {
        let piece = char_slice(&p.text, frag.start, frag.end).ok_or_else(|| {
            Error::Offset(format!(
                "span fragment {}..{} outside passage of {} chars",
                frag.start,
                frag.end,
                p.char_len()
            ))
        })?;
        parts.push(piece);
    }
    Ok(parts.join(" "))
}
