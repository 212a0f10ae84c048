//! Deterministic synthetic corpus generation.
//!
//! Builds fully span-annotated datasets whose surface statistics (passage
//! and sentence counts, word/sentence lengths, syllable densities, answer
//! lengths, span structure) hit configurable targets exactly, from fixed
//! word banks with known syllable counts. Useful as a lint- and
//! probe-clean reference corpus, for benchmarking, and for exercising the
//! whole pipeline at realistic scale without shipping source texts.
//!
//! Generation is a pure function of the profile: no RNG. Counts are spread
//! with integer Bresenham interleaving so corpus-level means match the
//! profile to within one unit.
//!
//! Every question's answers carry a controlled lexical footprint: each
//! answer borrows a few adjacent passage words ("markers", each unique
//! within its passage) from the region its role is anchored to: A and B
//! from the critical span, C from the distractor span, D from a neutral
//! sentence. One role per question gets a three-marker run and therefore
//! wins any window-based lexical matcher; the winner rotates A,B,C,D with
//! role A winning 4 of every 15 questions, so lexical baselines land near
//! chance.

use std::collections::BTreeMap;

use crate::corpus::model::{
    Answer, Dataset, Interval, Level, Passage, Question, Role, Span, SpanPair,
};

// ============================================================================
// Word banks (syllable counts verified against the readability heuristic)
// ============================================================================

const MONO_FILL: &[&str] = &[
    "the", "and", "with", "from", "this", "that", "when", "then", "still", "front", "branch",
    "plan", "work", "town", "road", "rain", "farm", "hill", "lake", "park", "test", "week",
    "year", "term",
];

const DUO_FILL: &[&str] = &[
    "water", "market", "garden", "window", "river", "valley", "winter", "summer", "harvest",
    "record", "signal", "council",
];

const POLY_FILL: &[&str] = &[
    "important", "consider", "general", "different", "industry", "property", "capital",
    "hospital", "minister", "visitor", "festival", "calendar",
];

/// Monosyllabic content words used as unique in-passage anchors.
const MARKERS: &[&str] = &[
    "cliff", "stone", "wheat", "barge", "dock", "forge", "kiln", "loom", "flax", "chalk",
    "slate", "brick", "crane", "rope", "sail", "mast", "keel", "hull", "wharf", "tide", "reef",
    "dune", "marsh", "gorge", "ridge", "peak", "glen", "moor", "heath", "fern", "moss", "pine",
    "oak", "elm", "birch", "thorn", "vine", "reed", "sedge", "grove", "trail", "ledge", "cave",
    "spring", "brook", "pond", "frost", "hail", "gust", "cloud", "storm", "flame", "spark",
    "ash", "coal", "ore", "zinc", "salt", "clay", "silt",
];

/// Words that appear only in stems and answers, never in passages.
const ANSWER_FILL: &[&str] = &[
    "claim", "view", "stance", "belief", "notion", "motive", "intent", "purpose", "reason",
    "account", "version", "detail", "aspect", "factor", "context", "meaning", "message",
    "insight", "finding", "result", "outcome", "effect", "impact", "idea",
];

const STEM_TEMPLATES: [&str; 3] = [
    "Which claim does the opening account support about the stated aim?",
    "Which version of the intent does the passage actually put forward?",
    "Which reading of the closing detail matches the stated purpose here?",
];

/// Winner rotation: the role whose answer gets the three-marker run.
/// A and B and C win 4 of every 15 questions, D wins 3.
const WINNER_PATTERN: [Role; 15] = [
    Role::A, Role::B, Role::C, Role::D, Role::A, Role::B, Role::C, Role::D, Role::A, Role::B,
    Role::C, Role::D, Role::A, Role::B, Role::C,
];

// ============================================================================
// Profiles
// ============================================================================

/// Per-level text generation budget. Fractions are numerators over 10,000,
/// spread across sentences (or paragraphs, for `six_fraction`) by Bresenham
/// interleaving.
#[derive(Debug, Clone)]
pub struct LevelGen {
    pub level: Level,
    /// Base words per sentence and fractional extra per sentence.
    pub base_words: usize,
    pub extra_word_frac: u64,
    /// Base polysyllables (3-syllable words) per sentence plus fraction.
    pub base_poly: usize,
    pub extra_poly_frac: u64,
    /// Base two-syllable words per sentence plus fraction.
    pub base_duo: usize,
    pub extra_duo_frac: u64,
    /// Fraction of paragraphs that get a sixth sentence (rest have five).
    pub six_frac: u64,
}

/// Whole-corpus generation profile.
#[derive(Debug, Clone)]
pub struct SynthProfile {
    pub name: String,
    /// Paragraph count per article.
    pub article_sizes: Vec<usize>,
    pub levels: Vec<LevelGen>,
}

impl SynthProfile {
    /// A 30-article, 162-paragraph, 486-question corpus with three parallel
    /// difficulty levels whose length and readability statistics match a
    /// OneStopQA-scale benchmark profile.
    pub fn one_stop_scale() -> Self {
        let article_sizes = vec![
            5, 6, 4, 5, 7, 5, 6, 5, 5, 6, 5, 5, 7, 5, 6, 5, 4, 6, 5, 5, 6, 5, 6, 7, 5, 6, 5, 4,
            5, 6,
        ];
        SynthProfile {
            name: "synth-onestop-scale".into(),
            article_sizes,
            levels: vec![
                LevelGen {
                    level: Level::Elementary,
                    base_words: 20,
                    extra_word_frac: 7200,
                    base_poly: 1,
                    extra_poly_frac: 5713,
                    base_duo: 2,
                    extra_duo_frac: 1780,
                    six_frac: 4198, // 68 of 162 paragraphs
                },
                LevelGen {
                    level: Level::Intermediate,
                    base_words: 23,
                    extra_word_frac: 5300,
                    base_poly: 2,
                    extra_poly_frac: 960,
                    base_duo: 2,
                    extra_duo_frac: 8130,
                    six_frac: 4013, // 65 of 162
                },
                LevelGen {
                    level: Level::Advanced,
                    base_words: 25,
                    extra_word_frac: 8400,
                    base_poly: 2,
                    extra_poly_frac: 5260,
                    base_duo: 3,
                    extra_duo_frac: 2970,
                    six_frac: 3581, // 58 of 162
                },
            ],
        }
    }

    /// Two articles, five paragraphs, all three levels: fast enough for
    /// unit tests while exercising every structural feature.
    pub fn tiny() -> Self {
        let mut profile = Self::one_stop_scale();
        profile.name = "synth-tiny".into();
        profile.article_sizes = vec![3, 2];
        profile
    }

    pub fn paragraph_count(&self) -> usize {
        self.article_sizes.iter().sum()
    }

    pub fn question_count(&self) -> usize {
        3 * self.paragraph_count()
    }
}

// ============================================================================
// Generation
// ============================================================================

/// Integer Bresenham: 1 extra unit on steps where `frac`/10000 accumulates
/// past the next integer.
fn bres(step: usize, frac: u64) -> usize {
    let s = step as u64;
    (((s + 1) * frac) / 10_000 - (s * frac) / 10_000) as usize
}

/// Marker borrow counts per role for one question: the winner gets a run of
/// three, the remaining roles get 2, 2, 1 in cyclic order after the winner.
fn borrow_counts(question_global: usize) -> [usize; 4] {
    let winner = WINNER_PATTERN[question_global % WINNER_PATTERN.len()];
    let mut counts = [0usize; 4];
    counts[winner.index()] = 3;
    let rest = [2usize, 2, 1];
    for (offset, count) in rest.iter().enumerate() {
        let role = Role::ALL[(winner.index() + 1 + offset) % 4];
        counts[role.index()] = *count;
    }
    counts
}

/// Marker words of one paragraph: a rotating 24-word window over the bank,
/// sliced per question and role in fixed order.
struct ParagraphMarkers {
    /// `per_question[k][role] -> marker words`
    per_question: [[Vec<String>; 4]; 3],
}

impl ParagraphMarkers {
    fn new(paragraph_global: usize) -> Self {
        let start = (paragraph_global * 29) % MARKERS.len();
        let mut cursor = 0usize;
        let mut take = |n: usize| -> Vec<String> {
            let words: Vec<String> = (0..n)
                .map(|i| MARKERS[(start + cursor + i) % MARKERS.len()].to_string())
                .collect();
            cursor += n;
            words
        };
        let mut per_question: [[Vec<String>; 4]; 3] = Default::default();
        for (k, slot) in per_question.iter_mut().enumerate() {
            let counts = borrow_counts(paragraph_global * 3 + k);
            for role in Role::ALL {
                slot[role.index()] = take(counts[role.index()]);
            }
        }
        ParagraphMarkers { per_question }
    }

    fn of(&self, question: usize, role: Role) -> &[String] {
        &self.per_question[question][role.index()]
    }
}

/// Cyclic cursor over a word bank.
struct BankCursor {
    bank: &'static [&'static str],
    pos: usize,
}

impl BankCursor {
    fn new(bank: &'static [&'static str]) -> Self {
        BankCursor { bank, pos: 0 }
    }

    fn next_word(&mut self) -> String {
        let w = self.bank[self.pos % self.bank.len()];
        self.pos += 1;
        w.to_string()
    }
}

struct SentenceBudget {
    words: usize,
    poly: usize,
    duo: usize,
}

/// Streams word-class budgets for one level's sentences.
struct LevelCursor {
    gen: LevelGen,
    sentence_index: usize,
    mono: BankCursor,
    duo: BankCursor,
    poly: BankCursor,
}

impl LevelCursor {
    fn new(gen: LevelGen) -> Self {
        LevelCursor {
            gen,
            sentence_index: 0,
            mono: BankCursor::new(MONO_FILL),
            duo: BankCursor::new(DUO_FILL),
            poly: BankCursor::new(POLY_FILL),
        }
    }

    fn next_budget(&mut self) -> SentenceBudget {
        let s = self.sentence_index;
        self.sentence_index += 1;
        SentenceBudget {
            words: self.gen.base_words + bres(s, self.gen.extra_word_frac),
            poly: self.gen.base_poly + bres(s, self.gen.extra_poly_frac),
            duo: self.gen.base_duo + bres(s, self.gen.extra_duo_frac),
        }
    }
}

/// Passage text under construction, with char-offset bookkeeping.
struct TextBuilder {
    text: String,
    char_pos: usize,
    /// Word intervals of the sentence being built.
    current_words: Vec<Interval>,
    /// (sentence interval, word intervals) per finished sentence.
    sentences: Vec<(Interval, Vec<Interval>)>,
    sentence_start: usize,
}

impl TextBuilder {
    fn new() -> Self {
        TextBuilder {
            text: String::new(),
            char_pos: 0,
            current_words: Vec::new(),
            sentences: Vec::new(),
            sentence_start: 0,
        }
    }

    fn push_word(&mut self, word: &str) {
        let first_in_sentence = self.current_words.is_empty();
        if first_in_sentence {
            if !self.text.is_empty() {
                self.text.push(' ');
                self.char_pos += 1;
            }
            self.sentence_start = self.char_pos;
        } else {
            self.text.push(' ');
            self.char_pos += 1;
        }
        let mut w = word.to_string();
        if first_in_sentence {
            let mut chars = w.chars();
            if let Some(c) = chars.next() {
                w = c.to_uppercase().collect::<String>() + chars.as_str();
            }
        }
        let len = w.chars().count();
        self.text.push_str(&w);
        self.current_words.push(Interval::new(self.char_pos, self.char_pos + len));
        self.char_pos += len;
    }

    fn end_sentence(&mut self) {
        self.text.push('.');
        self.char_pos += 1;
        let interval = Interval::new(self.sentence_start, self.char_pos);
        let words = std::mem::take(&mut self.current_words);
        self.sentences.push((interval, words));
    }
}

/// Spans of one paragraph at one level.
struct LevelSpans {
    /// Shared by the paragraph's first two questions: sentences 1-2.
    critical_pair: Span,
    /// Third question's distinct span: sentence 3.
    critical_third: Span,
    /// Fifteen words inside sentence 4.
    distractor: Span,
}

const DISTRACTOR_WORDS: usize = 15;
const DISTRACTOR_LEAD: usize = 2;

/// Emit one paragraph's text at one level and compute its spans.
fn build_paragraph_text(
    cursor: &mut LevelCursor,
    markers: &ParagraphMarkers,
    six_sentences: bool,
) -> (String, LevelSpans) {
    let mut tb = TextBuilder::new();
    let n_sentences = if six_sentences { 6 } else { 5 };

    for sentence in 0..n_sentences {
        let budget = cursor.next_budget();
        let mut words: Vec<String> = Vec::with_capacity(budget.words);

        // marker runs anchored to this sentence
        let mut marker_words: Vec<String> = Vec::new();
        match sentence {
            0 => {
                for k in 0..3 {
                    marker_words.extend_from_slice(markers.of(k, Role::D));
                }
            }
            1..=3 => {
                let k = sentence - 1;
                marker_words.extend_from_slice(markers.of(k, Role::A));
                marker_words.extend_from_slice(markers.of(k, Role::B));
            }
            _ => {}
        }

        if sentence == 4 {
            // lead-in, then the distractor region, then a mono tail
            for _ in 0..DISTRACTOR_LEAD {
                words.push(cursor.mono.next_word());
            }
            let mut span_words: Vec<String> = Vec::new();
            for k in 0..3 {
                span_words.extend_from_slice(markers.of(k, Role::C));
            }
            for _ in 0..budget.poly {
                span_words.push(cursor.poly.next_word());
            }
            for _ in 0..budget.duo {
                span_words.push(cursor.duo.next_word());
            }
            while span_words.len() < DISTRACTOR_WORDS {
                span_words.push(cursor.mono.next_word());
            }
            debug_assert!(span_words.len() == DISTRACTOR_WORDS);
            words.extend(span_words);
            while words.len() < budget.words {
                words.push(cursor.mono.next_word());
            }
        } else {
            words.extend(marker_words);
            for _ in 0..budget.poly {
                words.push(cursor.poly.next_word());
            }
            for _ in 0..budget.duo {
                words.push(cursor.duo.next_word());
            }
            while words.len() < budget.words {
                words.push(cursor.mono.next_word());
            }
        }

        for w in &words {
            tb.push_word(w);
        }
        tb.end_sentence();
    }

    let spans = LevelSpans {
        critical_pair: Span::contiguous(tb.sentences[1].0.start, tb.sentences[2].0.end),
        critical_third: Span::contiguous(tb.sentences[3].0.start, tb.sentences[3].0.end),
        distractor: {
            let words = &tb.sentences[4].1;
            Span::contiguous(
                words[DISTRACTOR_LEAD].start,
                words[DISTRACTOR_LEAD + DISTRACTOR_WORDS - 1].end,
            )
        },
    };
    (tb.text, spans)
}

fn answer_length(question_global: usize, role: Role) -> usize {
    match role {
        Role::A => 7 + usize::from(question_global % 4 == 2),
        Role::B => 7 + question_global % 2,
        Role::C => 8 + usize::from(question_global % 4 == 3),
        Role::D => 7,
    }
}

/// Interleave answer-pool fillers with this answer's markers so that no two
/// markers are adjacent (markers sit at odd positions).
fn build_answer(question_global: usize, role: Role, markers: &[String]) -> String {
    let len = answer_length(question_global, role);
    let filler_base = (question_global * 4 + role.index()) * 3;
    let mut fillers = (0..len).map(|i| ANSWER_FILL[(filler_base + i) % ANSWER_FILL.len()]);
    let mut words: Vec<String> = Vec::with_capacity(len);
    let mut marker_iter = markers.iter();
    for slot in 0..len {
        if slot % 2 == 1 {
            if let Some(m) = marker_iter.next() {
                words.push(m.clone());
                continue;
            }
        }
        words.push(fillers.next().expect("filler cycle is infinite").to_string());
    }
    words.join(" ")
}

/// Generate the full dataset described by `profile`.
pub fn generate(profile: &SynthProfile) -> Dataset {
    let mut d = Dataset::new(profile.name.clone());

    // per-level cursors so sentence budgets accumulate corpus-wide
    let mut cursors: Vec<LevelCursor> = profile
        .levels
        .iter()
        .map(|lg| LevelCursor::new(lg.clone()))
        .collect();

    let mut paragraph_global = 0usize;
    for (article_idx, size) in profile.article_sizes.iter().enumerate() {
        let article_id = format!("art{article_idx:02}");
        for paragraph_index in 0..*size {
            let markers = ParagraphMarkers::new(paragraph_global);
            let mut spans_by_level: BTreeMap<Level, LevelSpans> = BTreeMap::new();

            for cursor in cursors.iter_mut() {
                let six = bres(paragraph_global, cursor.gen.six_frac) == 1;
                let (text, spans) = build_paragraph_text(cursor, &markers, six);
                let passage = Passage::new(
                    &article_id,
                    cursor.gen.level,
                    paragraph_index as u32,
                    text,
                );
                spans_by_level.insert(cursor.gen.level, spans);
                d.passages.insert(passage.key(), passage);
            }

            for (k, stem) in STEM_TEMPLATES.iter().enumerate() {
                let g = paragraph_global * 3 + k;
                let question_id = format!("{article_id}-p{paragraph_index}-q{}", k + 1);
                let answers: Vec<Answer> = Role::ALL
                    .iter()
                    .map(|role| Answer {
                        role: *role,
                        text: build_answer(g, *role, markers.of(k, *role)),
                    })
                    .collect();
                let spans: BTreeMap<Level, SpanPair> = spans_by_level
                    .iter()
                    .map(|(level, ls)| {
                        let critical = if k < 2 {
                            ls.critical_pair.clone()
                        } else {
                            ls.critical_third.clone()
                        };
                        (
                            *level,
                            SpanPair {
                                critical: Some(critical),
                                distractor: Some(ls.distractor.clone()),
                            },
                        )
                    })
                    .collect();
                let q = Question {
                    question_id: question_id.clone(),
                    article_id: article_id.clone(),
                    paragraph_index: paragraph_index as u32,
                    stem: stem.to_string(),
                    answers,
                    spans,
                };
                d.questions.insert(question_id, q);
            }
            paragraph_global += 1;
        }
    }
    debug_assert!(d.validate().is_ok());
    d
}

/// Generate a span-free, unleveled corpus with the same question machinery
/// (answers still carry their lexical footprint, but no spans are recorded).
pub fn generate_plain(name: &str, articles: usize, paragraphs_per_article: usize) -> Dataset {
    let mut profile = SynthProfile::one_stop_scale();
    profile.name = name.to_string();
    profile.article_sizes = vec![paragraphs_per_article; articles];
    profile.levels = vec![LevelGen {
        level: Level::Unleveled,
        base_words: 18,
        extra_word_frac: 4000,
        base_poly: 1,
        extra_poly_frac: 3000,
        base_duo: 2,
        extra_duo_frac: 2000,
        six_frac: 3000,
    }];
    let mut d = generate(&profile);
    for q in d.questions.values_mut() {
        q.spans.clear();
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::model::span_text;
    use crate::lexicon::{content_tokens, is_stopword};
    use crate::stats::readability::syllables;
    use std::collections::BTreeSet;

    #[test]
    fn banks_are_disjoint_and_not_stopwords_where_required() {
        let mono: BTreeSet<&str> = MONO_FILL.iter().copied().collect();
        let duo: BTreeSet<&str> = DUO_FILL.iter().copied().collect();
        let poly: BTreeSet<&str> = POLY_FILL.iter().copied().collect();
        let markers: BTreeSet<&str> = MARKERS.iter().copied().collect();
        let answers: BTreeSet<&str> = ANSWER_FILL.iter().copied().collect();
        assert_eq!(markers.len(), MARKERS.len());
        let pools = [&mono, &duo, &poly, &markers, &answers];
        for (i, a) in pools.iter().enumerate() {
            for b in pools.iter().skip(i + 1) {
                assert!(a.is_disjoint(b), "pools overlap: {:?}", a.intersection(b).collect::<Vec<_>>());
            }
        }
        for m in MARKERS {
            assert!(!is_stopword(m), "marker {m} is a stopword");
        }
        for a in ANSWER_FILL {
            assert!(!is_stopword(a), "answer filler {a} is a stopword");
        }
    }

    #[test]
    fn bank_syllable_annotations_match_the_heuristic() {
        for w in MONO_FILL.iter().chain(MARKERS) {
            assert_eq!(syllables(w), 1, "word {w}");
        }
        for w in DUO_FILL {
            assert_eq!(syllables(w), 2, "word {w}");
        }
        for w in POLY_FILL {
            assert_eq!(syllables(w), 3, "word {w}");
        }
    }

    #[test]
    fn one_stop_scale_has_the_right_shape() {
        let profile = SynthProfile::one_stop_scale();
        assert_eq!(profile.article_sizes.len(), 30);
        assert_eq!(profile.paragraph_count(), 162);
        assert_eq!(profile.question_count(), 486);
        assert!(profile.article_sizes.iter().all(|s| (4..=7).contains(s)));
    }

    #[test]
    fn tiny_corpus_is_valid_and_span_complete() {
        let d = generate(&SynthProfile::tiny());
        d.validate().unwrap();
        assert_eq!(d.passages.len(), 5 * 3);
        assert_eq!(d.questions.len(), 15);
        assert!(d.is_span_annotated());
    }

    #[test]
    fn markers_are_unique_within_their_passage() {
        let d = generate(&SynthProfile::tiny());
        for p in d.passages.values() {
            let toks = content_tokens(&p.text);
            let marker_set: BTreeSet<&str> = MARKERS.iter().copied().collect();
            let mut seen = BTreeSet::new();
            for t in &toks {
                if marker_set.contains(t.as_str()) {
                    assert!(seen.insert(t.clone()), "marker {t} repeats in passage {:?}", p.key());
                }
            }
        }
    }

    #[test]
    fn winner_markers_sit_in_their_role_region() {
        let d = generate(&SynthProfile::tiny());
        let marker_set: BTreeSet<&str> = MARKERS.iter().copied().collect();
        let tokens_of = |text: &str| -> BTreeSet<String> {
            content_tokens(text).into_iter().collect()
        };
        for q in d.questions.values() {
            for p in d.passages_of(q) {
                let pair = q.span_pair(p.level).unwrap();
                let crit = tokens_of(&span_text(p, pair.critical.as_ref().unwrap()).unwrap());
                let dist = tokens_of(&span_text(p, pair.distractor.as_ref().unwrap()).unwrap());
                let passage = tokens_of(&p.text);
                let borrowed = |role: Role| -> Vec<String> {
                    content_tokens(q.answer(role).unwrap())
                        .into_iter()
                        .filter(|t| marker_set.contains(t.as_str()))
                        .collect()
                };
                for m in borrowed(Role::A).iter().chain(borrowed(Role::B).iter()) {
                    assert!(crit.contains(m), "marker {m} missing from critical span");
                }
                for m in borrowed(Role::C) {
                    assert!(dist.contains(&m), "marker {m} missing from distractor span");
                }
                for m in borrowed(Role::D) {
                    assert!(
                        passage.contains(&m) && !crit.contains(&m) && !dist.contains(&m),
                        "D marker {m} must sit outside both spans"
                    );
                }
            }
        }
    }

    #[test]
    fn borrow_counts_rotate_and_sum_to_eight() {
        let mut a_wins = 0usize;
        for g in 0..60 {
            let counts = borrow_counts(g);
            assert_eq!(counts.iter().sum::<usize>(), 8);
            assert_eq!(counts.iter().filter(|c| **c == 3).count(), 1);
            if counts[Role::A.index()] == 3 {
                a_wins += 1;
            }
        }
        assert_eq!(a_wins, 16); // 4 in 15
    }

    #[test]
    fn plain_corpus_has_no_spans_and_single_level() {
        let d = generate_plain("plain-test", 3, 4);
        d.validate().unwrap();
        assert_eq!(d.passages.len(), 12);
        assert_eq!(d.questions.len(), 36);
        assert!(!d.is_span_annotated());
        assert_eq!(d.levels(), vec![Level::Unleveled]);
    }
}
