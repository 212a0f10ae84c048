//! Component and span ablations of question-passage instances.
//!
//! Full-component ablations withhold the question, the passage or both and
//! apply to any multiple-choice corpus. Span ablations rewrite the passage
//! according to the critical/distractor span annotations and therefore
//! require span-annotated data.

use std::collections::BTreeMap;
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::corpus::model::{span_text, Dataset, Interval, Level, Passage, Question, Role, Span};
use crate::error::{Error, Result};
use crate::lexicon::normalize_ws;

/// The ablation grid: which parts of the instance the answerer gets to see.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AblationKind {
    Full,
    NoPassage,
    NoQuestion,
    NoQuestionNoPassage,
    OnlyCriticalSpan,
    NoDistractorSpan,
    NoCriticalSpan,
}

impl AblationKind {
    pub const ALL: [AblationKind; 7] = [
        AblationKind::Full,
        AblationKind::NoPassage,
        AblationKind::NoQuestion,
        AblationKind::NoQuestionNoPassage,
        AblationKind::OnlyCriticalSpan,
        AblationKind::NoDistractorSpan,
        AblationKind::NoCriticalSpan,
    ];

    /// The four kinds that apply to corpora without span annotations.
    pub const FULL_COMPONENT: [AblationKind; 4] = [
        AblationKind::Full,
        AblationKind::NoPassage,
        AblationKind::NoQuestion,
        AblationKind::NoQuestionNoPassage,
    ];

    pub fn requires_spans(&self) -> bool {
        matches!(
            self,
            AblationKind::OnlyCriticalSpan
                | AblationKind::NoDistractorSpan
                | AblationKind::NoCriticalSpan
        )
    }

    pub fn name(&self) -> &'static str {
        match self {
            AblationKind::Full => "full",
            AblationKind::NoPassage => "no-passage",
            AblationKind::NoQuestion => "no-question",
            AblationKind::NoQuestionNoPassage => "no-question-no-passage",
            AblationKind::OnlyCriticalSpan => "only-critical-span",
            AblationKind::NoDistractorSpan => "no-distractor-span",
            AblationKind::NoCriticalSpan => "no-critical-span",
        }
    }

    pub fn parse_name(s: &str) -> Option<AblationKind> {
        AblationKind::ALL.into_iter().find(|k| k.name() == s)
    }
}

impl std::fmt::Display for AblationKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Where an ablated instance came from and what was cut.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub level: Level,
    /// Char intervals of the original passage that were removed.
    pub removed: Vec<Interval>,
    /// True when critical and distractor spans overlap in the source.
    pub spans_overlap: bool,
}

/// One question paired with a transformed view of its passage.
///
/// `passage` and `question` are `None` when that component is withheld;
/// a `Some("")` passage is a passage that became empty under span removal.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AblatedInstance {
    pub question_id: String,
    pub level: Level,
    pub kind: AblationKind,
    pub passage: Option<String>,
    pub question: Option<String>,
    /// Answers keyed by role, always all four, in role order.
    pub answers: BTreeMap<Role, String>,
    pub provenance: Provenance,
}

impl AblatedInstance {
    /// Stable identifier for matching responses to instances.
    pub fn instance_id(&self) -> String {
        format!("{}/{}/{}", self.question_id, self.level, self.kind)
    }

    pub fn answer(&self, role: Role) -> &str {
        self.answers.get(&role).map(String::as_str).unwrap_or("")
    }

    /// Answer texts in role order A-D.
    pub fn answers_in_role_order(&self) -> [&str; 4] {
        [
            self.answer(Role::A),
            self.answer(Role::B),
            self.answer(Role::C),
            self.answer(Role::D),
        ]
    }
}

/// Remove `cuts` (sorted, disjoint char intervals) from `text`, then
/// collapse whitespace. Each removed region leaves a single separating
/// space so that text on either side of a cut never fuses into one token;
/// normalization then collapses any resulting runs.
fn remove_intervals(text: &str, cuts: &[Interval]) -> String {
    let chars: Vec<char> = text.chars().collect();
    let mut segments: Vec<String> = Vec::with_capacity(cuts.len() + 1);
    let mut pos = 0usize;
    for cut in cuts {
        segments.push(chars[pos..cut.start.min(chars.len())].iter().collect());
        pos = cut.end.min(chars.len());
    }
    segments.push(chars[pos.min(chars.len())..].iter().collect());
    normalize_ws(&segments.join(" "))
}

/// Subtract `minus` from each interval in `base`, keeping order.
fn subtract_intervals(base: &[Interval], minus: &[Interval]) -> Vec<Interval> {
    let mut out = Vec::new();
    for iv in base {
        let mut pieces = vec![*iv];
        for m in minus {
            let mut next = Vec::new();
            for p in pieces {
                if !p.overlaps(m) {
                    next.push(p);
                    continue;
                }
                if p.start < m.start {
                    next.push(Interval::new(p.start, m.start));
                }
                if m.end < p.end {
                    next.push(Interval::new(m.end, p.end));
                }
            }
            pieces = next;
        }
        out.extend(pieces);
    }
    out
}

/// Intervals of `[0, len)` not covered by the sorted, disjoint `cover`.
fn complement_intervals(cover: &[Interval], len: usize) -> Vec<Interval> {
    let mut out = Vec::new();
    let mut pos = 0usize;
    for iv in cover {
        if iv.start > pos {
            out.push(Interval::new(pos, iv.start));
        }
        pos = pos.max(iv.end);
    }
    if pos < len {
        out.push(Interval::new(pos, len));
    }
    out
}

fn require_span<'a>(
    q: &'a Question,
    level: Level,
    kind: AblationKind,
    which: &str,
    get: impl Fn(&'a crate::corpus::model::SpanPair) -> Option<&'a Span>,
) -> Result<&'a Span> {
    q.span_pair(level).and_then(get).ok_or_else(|| {
        Error::Capability(format!(
            "ablation {kind} needs a {which} span for question {} at level {level}",
            q.question_id
        ))
    })
}

/// Produce one ablated view of a question-passage instance.
pub fn ablate(q: &Question, p: &Passage, kind: AblationKind) -> Result<AblatedInstance> {
    let answers: BTreeMap<Role, String> = Role::ALL
        .iter()
        .map(|r| (*r, q.answer(*r).unwrap_or("").to_string()))
        .collect();
    let len = p.char_len();
    let spans_overlap = match q.span_pair(p.level) {
        Some(pair) => match (&pair.critical, &pair.distractor) {
            (Some(c), Some(d)) => c.overlaps(d),
            _ => false,
        },
        None => false,
    };

    let (passage, question, removed) = match kind {
        AblationKind::Full => (Some(p.text.clone()), Some(q.stem.clone()), vec![]),
        AblationKind::NoPassage => {
            let removed = if len > 0 { vec![Interval::new(0, len)] } else { vec![] };
            (None, Some(q.stem.clone()), removed)
        }
        AblationKind::NoQuestion => (Some(p.text.clone()), None, vec![]),
        AblationKind::NoQuestionNoPassage => {
            let removed = if len > 0 { vec![Interval::new(0, len)] } else { vec![] };
            (None, None, removed)
        }
        AblationKind::OnlyCriticalSpan => {
            let crit = require_span(q, p.level, kind, "critical", |sp| sp.critical.as_ref())?;
            let removed = complement_intervals(&crit.fragments, len);
            (Some(span_text(p, crit)?), Some(q.stem.clone()), removed)
        }
        AblationKind::NoDistractorSpan => {
            let dist = require_span(q, p.level, kind, "distractor", |sp| sp.distractor.as_ref())?;
            // keep any characters shared with the critical span so the
            // instance stays answerable; the overlap is recorded
            let cuts = match q.span_pair(p.level).and_then(|sp| sp.critical.as_ref()) {
                Some(crit) => subtract_intervals(&dist.fragments, &crit.fragments),
                None => dist.fragments.clone(),
            };
            (
                Some(remove_intervals(&p.text, &cuts)),
                Some(q.stem.clone()),
                cuts,
            )
        }
        AblationKind::NoCriticalSpan => {
            let crit = require_span(q, p.level, kind, "critical", |sp| sp.critical.as_ref())?;
            (
                Some(remove_intervals(&p.text, &crit.fragments)),
                Some(q.stem.clone()),
                crit.fragments.clone(),
            )
        }
    };

    Ok(AblatedInstance {
        question_id: q.question_id.clone(),
        level: p.level,
        kind,
        passage,
        question,
        answers,
        provenance: Provenance {
            level: p.level,
            removed,
            spans_overlap,
        },
    })
}

/// Enumerate the ablation grid over a dataset, ordered by
/// (question_id, level, kind); cardinality is questions x levels x kinds.
pub fn ablation_suite(
    d: &Dataset,
    kinds: &[AblationKind],
    levels: &[Level],
) -> Result<Vec<AblatedInstance>> {
    if kinds.is_empty() {
        return Err(Error::Parameter("no ablation kinds requested".into()));
    }
    if levels.is_empty() {
        return Err(Error::Parameter("no levels requested".into()));
    }
    if !d.is_span_annotated() {
        let offending: Vec<&str> = kinds
            .iter()
            .filter(|k| k.requires_spans())
            .map(|k| k.name())
            .collect();
        if !offending.is_empty() {
            return Err(Error::Capability(format!(
                "span ablations are undefined for span-free datasets: {}",
                offending.join(", ")
            )));
        }
    }
    let available = d.levels();
    for level in levels {
        if !available.contains(level) {
            return Err(Error::Capability(format!(
                "dataset {} has no {level} passages",
                d.name
            )));
        }
    }

    let mut kinds = kinds.to_vec();
    kinds.sort();
    kinds.dedup();
    let mut levels = levels.to_vec();
    levels.sort();
    levels.dedup();

    let mut out = Vec::with_capacity(d.questions.len() * levels.len() * kinds.len());
    for q in d.questions.values() {
        for level in &levels {
            let p = d
                .passage(&q.article_id, q.paragraph_index, *level)
                .ok_or_else(|| {
                    Error::Binding(format!(
                        "question {} has no {level} passage",
                        q.question_id
                    ))
                })?;
            for kind in &kinds {
                out.push(ablate(q, p, *kind)?);
            }
        }
    }
    Ok(out)
}

/// Write instances as newline-delimited JSON, one record per line.
pub fn write_ndjson<W: Write>(instances: &[AblatedInstance], mut w: W) -> Result<()> {
    for inst in instances {
        serde_json::to_writer(&mut w, inst)
            .map_err(|e| Error::schema("ndjson", e.to_string()))?;
        w.write_all(b"\n")?;
    }
    Ok(())
}

/// Read instances back from newline-delimited JSON.
pub fn read_ndjson<R: BufRead>(r: R) -> Result<Vec<AblatedInstance>> {
    let mut out = Vec::new();
    for (i, line) in r.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let inst: AblatedInstance = serde_json::from_str(&line).map_err(|e| Error::Parse {
            line: i + 1,
            column: e.column(),
            message: e.to_string(),
        })?;
        out.push(inst);
    }
    Ok(out)
}
