//! Authoring-rule checks for STARC-style datasets.
//!
//! Linting is pure: the same dataset and configuration always yield the same
//! report, with findings sorted by (question, rule). Every rule can be
//! suppressed individually by id.
//!
//! Rule set:
//!
//! | id | severity | checks |
//! |----|----------|--------|
//! | R1 | error    | span annotations present for every level of the question's paragraph (span-annotated mode only) |
//! | R2 | warning  | correct answer appears verbatim (case-folded 4-token run) inside the critical span |
//! | R3 | warning  | longest/shortest answer word-count ratio exceeds a threshold |
//! | R4 | warning  | answer C shares no content token with the distractor span |
//! | R5 | warning  | too many of answer D's content tokens appear in the passage |
//! | R6 | warning  | per paragraph, critical spans must form one overlapping pair plus one distinct span |
//! | R7 | warning  | mean answer length of one role drifts from the other roles |
//! | R8 | error    | answers do not cover roles A-D exactly once |

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::corpus::model::{span_text, Dataset, Level, Passage, Question, Role, Span};
use crate::error::{Error, Result};
use crate::lexicon::{content_tokens, folded_tokens};

/// All registered rule ids with a one-line description.
pub const RULES: &[(&str, &str)] = &[
    ("R1", "missing span annotations (span-annotated mode)"),
    ("R2", "correct answer appears verbatim in the critical span"),
    ("R3", "answer lengths are imbalanced within the question"),
    ("R4", "answer C has no content-token anchor in the distractor span"),
    ("R5", "answer D is substantially supported by the passage"),
    ("R6", "critical spans do not pair as expected within the paragraph"),
    ("R7", "mean answer length drifts across roles"),
    ("R8", "answers do not cover roles A-D exactly once"),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

/// One lint finding, citing the rule that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Finding {
    /// Offending question, or `None` for dataset-level findings.
    pub question_id: Option<String>,
    pub rule_id: String,
    pub severity: Severity,
    pub message: String,
    /// Numeric payload (a ratio, a Jaccard value, ...) when the rule has one.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub evidence: Option<f64>,
}

/// Thresholds and switches for the rule set.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LintConfig {
    /// Force span-annotated mode on or off; `None` infers it from the data
    /// (leveled passages or any span annotation present).
    pub starc_mode: Option<bool>,
    /// Token n-gram length for the verbatim-answer rule (R2).
    pub verbatim_ngram: usize,
    /// Max allowed ratio of longest to shortest answer word count (R3).
    pub length_ratio: f64,
    /// Character-Jaccard threshold for "substantially overlapping" spans (R6).
    pub jaccard_threshold: f64,
    /// Max allowed drift of one role's mean answer length, in words (R7).
    pub role_drift: f64,
    /// Fraction of D's content tokens found in the passage that triggers R5.
    pub d_leak_fraction: f64,
    /// Rule ids whose findings are dropped from the report.
    pub suppress: BTreeSet<String>,
}

impl Default for LintConfig {
    fn default() -> Self {
        LintConfig {
            starc_mode: None,
            verbatim_ngram: 4,
            length_ratio: 3.0,
            jaccard_threshold: 0.5,
            role_drift: 2.0,
            d_leak_fraction: 0.5,
            suppress: BTreeSet::new(),
        }
    }
}

/// Aggregated lint result for one dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LintReport {
    pub dataset: String,
    pub questions_checked: usize,
    pub findings: Vec<Finding>,
}

impl LintReport {
    pub fn error_count(&self) -> usize {
        self.findings
            .iter()
            .filter(|f| f.severity == Severity::Error)
            .count()
    }

    pub fn warning_count(&self) -> usize {
        self.findings
            .iter()
            .filter(|f| f.severity == Severity::Warning)
            .count()
    }

    pub fn has_errors(&self) -> bool {
        self.error_count() > 0
    }

    /// Aligned-column text rendering.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "lint {}: {} questions checked, {} errors, {} warnings",
            self.dataset,
            self.questions_checked,
            self.error_count(),
            self.warning_count()
        );
        if self.findings.is_empty() {
            out.push_str("no findings\n");
            return out;
        }
        let idw = self
            .findings
            .iter()
            .map(|f| f.question_id.as_deref().unwrap_or("(dataset)").len())
            .max()
            .unwrap_or(9)
            .max(9);
        for f in &self.findings {
            let sev = match f.severity {
                Severity::Error => "error",
                Severity::Warning => "warning",
            };
            let _ = writeln!(
                out,
                "{:idw$}  {:3}  {:7}  {}",
                f.question_id.as_deref().unwrap_or("(dataset)"),
                f.rule_id,
                sev,
                f.message,
            );
        }
        out
    }
}

fn finding(
    question_id: Option<&str>,
    rule_id: &str,
    severity: Severity,
    message: String,
    evidence: Option<f64>,
) -> Finding {
    Finding {
        question_id: question_id.map(str::to_string),
        rule_id: rule_id.to_string(),
        severity,
        message,
        evidence,
    }
}

fn infer_starc_mode(d: &Dataset) -> bool {
    d.passages.keys().any(|k| k.level != Level::Unleveled)
        || d.questions.values().any(|q| !q.spans.is_empty())
}

/// Answers cover A-D exactly once?
fn answers_well_formed(q: &Question) -> bool {
    let mut seen = [0usize; 4];
    for a in &q.answers {
        seen[a.role.index()] += 1;
    }
    q.answers.len() == 4 && seen.iter().all(|&c| c == 1)
}

fn word_count(text: &str) -> usize {
    folded_tokens(text).len()
}

/// Consecutive-run containment: does any `n`-gram of `needle` occur as a
/// consecutive run in `hay`?
fn has_shared_ngram(needle: &[String], hay: &[String], n: usize) -> bool {
    if needle.len() < n || hay.len() < n {
        return false;
    }
    needle.windows(n).any(|w| hay.windows(n).any(|h| h == w))
}

/// Lint a single question against the passages it binds to.
///
/// `passages` must hold the question's paragraph at every level being
/// checked; an empty slice is a binding error.
pub fn lint_question(
    q: &Question,
    passages: &[&Passage],
    config: &LintConfig,
    starc_mode: bool,
) -> Result<Vec<Finding>> {
    if passages.is_empty() {
        return Err(Error::Binding(format!(
            "question {} has no bound passages",
            q.question_id
        )));
    }
    let qid = Some(q.question_id.as_str());
    let mut out = Vec::new();

    if !answers_well_formed(q) {
        out.push(finding(
            qid,
            "R8",
            Severity::Error,
            format!(
                "answers must cover roles A-D exactly once (got {} answers)",
                q.answers.len()
            ),
            None,
        ));
        // role-based rules are meaningless on malformed answer sets
        return Ok(out);
    }

    // R1: spans present for every level of the paragraph.
    if starc_mode {
        let mut missing: Vec<String> = Vec::new();
        for p in passages {
            match q.span_pair(p.level) {
                Some(pair) => {
                    if pair.critical.is_none() {
                        missing.push(format!("critical@{}", p.level));
                    }
                    if pair.distractor.is_none() {
                        missing.push(format!("distractor@{}", p.level));
                    }
                }
                None => missing.push(format!("both@{}", p.level)),
            }
        }
        if !missing.is_empty() {
            out.push(finding(
                qid,
                "R1",
                Severity::Error,
                format!("missing span annotations: {}", missing.join(", ")),
                None,
            ));
        }
    }

    // R2: verbatim correct answer inside the critical span.
    if let Some(a_text) = q.answer(Role::A) {
        let a_toks = folded_tokens(a_text);
        let mut hits: Vec<String> = Vec::new();
        for p in passages {
            if let Some(crit) = q.span_pair(p.level).and_then(|sp| sp.critical.as_ref()) {
                let span_toks = folded_tokens(&span_text(p, crit)?);
                if has_shared_ngram(&a_toks, &span_toks, config.verbatim_ngram) {
                    hits.push(p.level.to_string());
                }
            }
        }
        if !hits.is_empty() {
            out.push(finding(
                qid,
                "R2",
                Severity::Warning,
                format!(
                    "correct answer appears verbatim ({}+ tokens) in the critical span at {}",
                    config.verbatim_ngram,
                    hits.join(", ")
                ),
                None,
            ));
        }
    }

    // R3: answer length imbalance.
    let counts: Vec<usize> = Role::ALL
        .iter()
        .map(|r| word_count(q.answer(*r).unwrap_or("")))
        .collect();
    let max = *counts.iter().max().unwrap();
    let min = *counts.iter().min().unwrap();
    if min == 0 {
        if max > 0 {
            out.push(finding(
                qid,
                "R3",
                Severity::Warning,
                "an answer has no words while another does".to_string(),
                None,
            ));
        }
    } else {
        let ratio = max as f64 / min as f64;
        if ratio > config.length_ratio {
            out.push(finding(
                qid,
                "R3",
                Severity::Warning,
                format!("answer word counts range {min}-{max}, ratio {ratio:.2}"),
                Some(ratio),
            ));
        }
    }

    // R4: C must anchor in the distractor span.
    if let Some(c_text) = q.answer(Role::C) {
        let c_toks: BTreeSet<String> = content_tokens(c_text).into_iter().collect();
        let mut unanchored: Vec<String> = Vec::new();
        for p in passages {
            if let Some(dist) = q.span_pair(p.level).and_then(|sp| sp.distractor.as_ref()) {
                let span_toks: BTreeSet<String> =
                    content_tokens(&span_text(p, dist)?).into_iter().collect();
                if c_toks.is_disjoint(&span_toks) {
                    unanchored.push(p.level.to_string());
                }
            }
        }
        if !unanchored.is_empty() {
            out.push(finding(
                qid,
                "R4",
                Severity::Warning,
                format!(
                    "answer C shares no content token with the distractor span at {}",
                    unanchored.join(", ")
                ),
                None,
            ));
        }
    }

    // R5: D should have no support in the passage.
    if let Some(d_text) = q.answer(Role::D) {
        let d_toks = content_tokens(d_text);
        if !d_toks.is_empty() {
            let mut worst: Option<(f64, Level)> = None;
            for p in passages {
                let p_toks: BTreeSet<String> = content_tokens(&p.text).into_iter().collect();
                let present = d_toks.iter().filter(|t| p_toks.contains(*t)).count();
                let frac = present as f64 / d_toks.len() as f64;
                if worst.is_none_or(|(w, _)| frac > w) {
                    worst = Some((frac, p.level));
                }
            }
            if let Some((frac, level)) = worst {
                if frac > config.d_leak_fraction {
                    out.push(finding(
                        qid,
                        "R5",
                        Severity::Warning,
                        format!(
                            "{:.0}% of answer D's content tokens appear in the {level} passage",
                            frac * 100.0
                        ),
                        Some(frac),
                    ));
                }
            }
        }
    }

    Ok(out)
}

/// Critical spans of one paragraph's questions at one level.
fn critical_spans_at<'a>(questions: &[&'a Question], level: Level) -> Option<Vec<&'a Span>> {
    let mut spans = Vec::with_capacity(questions.len());
    for q in questions {
        spans.push(q.span_pair(level)?.critical.as_ref()?);
    }
    Some(spans)
}

/// Lint the whole dataset: per-question rules plus R6/R7.
pub fn lint_dataset(d: &Dataset, config: &LintConfig) -> Result<LintReport> {
    let starc_mode = config.starc_mode.unwrap_or_else(|| infer_starc_mode(d));
    let mut findings: Vec<Finding> = Vec::new();

    for q in d.questions.values() {
        let passages = d.passages_of(q);
        findings.extend(lint_question(q, &passages, config, starc_mode)?);
    }

    // R6: critical-span pairing per paragraph (span-annotated mode only).
    if starc_mode {
        let mut paragraphs: Vec<(String, u32)> = d
            .questions
            .values()
            .map(|q| (q.article_id.clone(), q.paragraph_index))
            .collect();
        paragraphs.sort();
        paragraphs.dedup();
        for (article_id, paragraph_index) in paragraphs {
            let qs: Vec<&Question> = d
                .questions
                .values()
                .filter(|q| q.article_id == article_id && q.paragraph_index == paragraph_index)
                .collect();
            if qs.len() != 3 {
                continue;
            }
            for level in d.levels_of(&article_id, paragraph_index) {
                let Some(spans) = critical_spans_at(&qs, level) else {
                    continue; // R1 already reports missing spans
                };
                let j01 = spans[0].char_jaccard(spans[1]);
                let j02 = spans[0].char_jaccard(spans[2]);
                let j12 = spans[1].char_jaccard(spans[2]);
                let th = config.jaccard_threshold;
                let pairings = [
                    j01 >= th && j02 < th && j12 < th,
                    j02 >= th && j01 < th && j12 < th,
                    j12 >= th && j01 < th && j02 < th,
                ];
                if pairings.iter().filter(|ok| **ok).count() != 1 {
                    findings.push(finding(
                        None,
                        "R6",
                        Severity::Warning,
                        format!(
                            "paragraph {article_id}#{paragraph_index} ({level}): critical spans do not form one overlapping pair plus one distinct span (jaccard {j01:.2}/{j02:.2}/{j12:.2})",
                        ),
                        None,
                    ));
                }
            }
        }
    }

    // R7: per-role mean answer length drift.
    let well_formed: Vec<&Question> = d
        .questions
        .values()
        .filter(|q| answers_well_formed(q))
        .collect();
    if !well_formed.is_empty() {
        let mut means = [0.0f64; 4];
        for role in Role::ALL {
            let total: usize = well_formed
                .iter()
                .map(|q| word_count(q.answer(role).unwrap_or("")))
                .sum();
            means[role.index()] = total as f64 / well_formed.len() as f64;
        }
        for role in Role::ALL {
            let own = means[role.index()];
            let others: f64 = Role::ALL
                .iter()
                .filter(|r| **r != role)
                .map(|r| means[r.index()])
                .sum::<f64>()
                / 3.0;
            let drift = (own - others).abs();
            if drift > config.role_drift {
                findings.push(finding(
                    None,
                    "R7",
                    Severity::Warning,
                    format!(
                        "role {role} mean answer length {own:.1} words drifts {drift:.1} from the other roles' {others:.1}",
                    ),
                    Some(drift),
                ));
            }
        }
    }

    findings.retain(|f| !config.suppress.contains(&f.rule_id));
    findings.sort_by(|a, b| {
        (a.question_id.as_deref().unwrap_or(""), &a.rule_id, &a.message).cmp(&(
            b.question_id.as_deref().unwrap_or(""),
            &b.rule_id,
            &b.message,
        ))
    });

    Ok(LintReport {
        dataset: d.name.clone(),
        questions_checked: d.questions.len(),
        findings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::model::{Answer, Passage, SpanPair};
    use std::collections::BTreeMap;

    fn passage(text: &str) -> Passage {
        Passage::new("a1", Level::Advanced, 0, text)
    }

    fn question(answers: [&str; 4], critical: Option<Span>, distractor: Option<Span>) -> Question {
        let mut spans = BTreeMap::new();
        if critical.is_some() || distractor.is_some() {
            spans.insert(Level::Advanced, SpanPair { critical, distractor });
        }
        Question {
            question_id: "q1".into(),
            article_id: "a1".into(),
            paragraph_index: 0,
            stem: "What happened first?".into(),
            answers: Role::ALL
                .iter()
                .zip(answers)
                .map(|(r, t)| Answer { role: *r, text: t.into() })
                .collect(),
            spans,
        }
    }

    const TEXT: &str = "The harbor crane lifted the sealed crate slowly. Workers watched the tide charts with great care.";

    #[test]
    fn verbatim_answer_triggers_r2() {
        let p = passage(TEXT);
        // critical span covers the full first sentence
        let q = question(
            [
                "harbor crane lifted the sealed crate",
                "the crate was lowered quickly",
                "workers consulted tide charts",
                "the ship sailed at dawn",
            ],
            Some(Span::contiguous(0, 48)),
            Some(Span::contiguous(49, 97)),
        );
        let f = lint_question(&q, &[&p], &LintConfig::default(), true).unwrap();
        assert!(f.iter().any(|f| f.rule_id == "R2"), "{f:?}");
    }

    #[test]
    fn length_imbalance_ratio_is_reported() {
        let p = passage(TEXT);
        let q = question(
            [
                "two words",
                "this answer runs to nine entire words in total",
                "workers charts here",
                "dawn sail",
            ],
            Some(Span::contiguous(0, 48)),
            Some(Span::contiguous(49, 97)),
        );
        let f = lint_question(&q, &[&p], &LintConfig::default(), true).unwrap();
        let r3 = f.iter().find(|f| f.rule_id == "R3").expect("R3 expected");
        assert!((r3.evidence.unwrap() - 4.5).abs() < 1e-9);
    }

    #[test]
    fn missing_span_is_r1_error_in_starc_mode_only() {
        let p = passage(TEXT);
        let q = question(
            ["one answer here", "two answer here", "charts answer here", "four answer here"],
            None,
            None,
        );
        let f = lint_question(&q, &[&p], &LintConfig::default(), true).unwrap();
        assert!(f.iter().any(|f| f.rule_id == "R1" && f.severity == Severity::Error));
        let f = lint_question(&q, &[&p], &LintConfig::default(), false).unwrap();
        assert!(f.iter().all(|f| f.rule_id != "R1"));
    }

    #[test]
    fn duplicate_role_is_r8_and_suppresses_role_rules() {
        let p = passage(TEXT);
        let mut q = question(
            ["one answer here", "two answer here", "charts answer here", "four answer here"],
            None,
            None,
        );
        q.answers[3].role = Role::B;
        let f = lint_question(&q, &[&p], &LintConfig::default(), true).unwrap();
        assert_eq!(f.len(), 1);
        assert_eq!(f[0].rule_id, "R8");
        assert_eq!(f[0].severity, Severity::Error);
    }

    #[test]
    fn unanchored_c_triggers_r4() {
        let p = passage(TEXT);
        let q = question(
            [
                "crane lifted it slowly",
                "crate fell without warning",
                "nothing from that region",
                "sailors left port",
            ],
            Some(Span::contiguous(0, 48)),
            Some(Span::contiguous(49, 97)),
        );
        let f = lint_question(&q, &[&p], &LintConfig::default(), true).unwrap();
        assert!(f.iter().any(|f| f.rule_id == "R4"));
    }

    #[test]
    fn d_leakage_triggers_r5() {
        let p = passage(TEXT);
        let q = question(
            [
                "crane lifted it slowly",
                "crate fell without warning",
                "workers watched charts",
                "harbor crane crate workers", // fully supported by the passage
            ],
            Some(Span::contiguous(0, 48)),
            Some(Span::contiguous(49, 97)),
        );
        let f = lint_question(&q, &[&p], &LintConfig::default(), true).unwrap();
        assert!(f.iter().any(|f| f.rule_id == "R5"));
    }

    fn three_question_dataset(critical_spans: [Span; 3]) -> Dataset {
        let mut d = Dataset::new("t");
        let p = passage(TEXT);
        d.passages.insert(p.key(), p);
        for (i, crit) in critical_spans.into_iter().enumerate() {
            let mut q = question(
                ["alpha beta gamma", "delta epsilon zeta", "charts shown here", "omega psi chi"],
                Some(crit),
                Some(Span::contiguous(49, 97)),
            );
            q.question_id = format!("q{i}");
            d.questions.insert(q.question_id.clone(), q);
        }
        d
    }

    #[test]
    fn disjoint_critical_spans_trigger_r6() {
        let d = three_question_dataset([
            Span::contiguous(0, 20),
            Span::contiguous(21, 40),
            Span::contiguous(49, 70),
        ]);
        let report = lint_dataset(&d, &LintConfig::default()).unwrap();
        assert!(report.findings.iter().any(|f| f.rule_id == "R6"));
    }

    #[test]
    fn paired_critical_spans_pass_r6() {
        let d = three_question_dataset([
            Span::contiguous(0, 40),
            Span::contiguous(0, 40),
            Span::contiguous(49, 70),
        ]);
        let report = lint_dataset(&d, &LintConfig::default()).unwrap();
        assert!(report.findings.iter().all(|f| f.rule_id != "R6"), "{report:?}");
    }

    #[test]
    fn equal_role_means_have_no_r7() {
        let d = three_question_dataset([
            Span::contiguous(0, 40),
            Span::contiguous(0, 40),
            Span::contiguous(49, 70),
        ]);
        let report = lint_dataset(&d, &LintConfig::default()).unwrap();
        assert!(report.findings.iter().all(|f| f.rule_id != "R7"));
    }

    #[test]
    fn suppression_removes_exactly_that_rule() {
        let d = three_question_dataset([
            Span::contiguous(0, 20),
            Span::contiguous(21, 40),
            Span::contiguous(49, 70),
        ]);
        let mut config = LintConfig::default();
        let with = lint_dataset(&d, &config).unwrap();
        config.suppress.insert("R6".into());
        let without = lint_dataset(&d, &config).unwrap();
        assert!(with.findings.iter().any(|f| f.rule_id == "R6"));
        assert!(without.findings.iter().all(|f| f.rule_id != "R6"));
        let with_rest: Vec<_> = with.findings.iter().filter(|f| f.rule_id != "R6").collect();
        let without_rest: Vec<_> = without.findings.iter().collect();
        assert_eq!(with_rest, without_rest);
    }

    #[test]
    fn lint_is_deterministic() {
        let d = three_question_dataset([
            Span::contiguous(0, 20),
            Span::contiguous(21, 40),
            Span::contiguous(49, 70),
        ]);
        let a = lint_dataset(&d, &LintConfig::default()).unwrap();
        let b = lint_dataset(&d, &LintConfig::default()).unwrap();
        assert_eq!(a, b);
    }
}
