//! Probe result aggregation and rendering.
//!
//! JSON output keeps full precision; the text table shows one decimal
//! place per cell and `NA` where a backend failure touched the cell.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::ablate::AblationKind;
use crate::corpus::model::{Level, Role};

/// One accuracy cell: counts plus any backend failures that hit it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct CellValue {
    pub correct: usize,
    pub total: usize,
    pub failures: usize,
}

impl CellValue {
    /// Accuracy percent; `None` when empty or contaminated by failures.
    pub fn percent(&self) -> Option<f64> {
        if self.total == 0 || self.failures > 0 {
            None
        } else {
            Some(100.0 * self.correct as f64 / self.total as f64)
        }
    }
}

/// Tuned window chosen on one cross-validation fold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TunedFold {
    pub fold: usize,
    pub window: usize,
}

/// One (backend, ablation) row of the probe grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeRow {
    pub source: String,
    pub kind: AblationKind,
    pub per_level: BTreeMap<Level, CellValue>,
    pub all: CellValue,
    /// Percent of choices falling on each role, over all levels.
    pub choice_percents: [f64; 4],
    /// Count of argmax ties broken by position.
    pub ties: usize,
    /// Two-proportion test of this row's accuracy against chance (25%).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p_vs_chance: Option<f64>,
}

/// Full probe output: the grid plus run metadata.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QualityReport {
    pub dataset: String,
    pub seed: u64,
    pub levels: Vec<Level>,
    pub kinds: Vec<AblationKind>,
    pub instances: usize,
    /// Whether backends were fixed or retrained per ablation.
    pub backend_regime: String,
    pub rows: Vec<ProbeRow>,
    /// Per-source tuned windows, when cross-validated tuning ran.
    #[serde(skip_serializing_if = "BTreeMap::is_empty", default)]
    pub tuned_windows: BTreeMap<String, Vec<TunedFold>>,
    /// Human-readable backend failure notes.
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub failures: Vec<String>,
}

impl QualityReport {
    pub fn row(&self, source: &str, kind: AblationKind) -> Option<&ProbeRow> {
        self.rows
            .iter()
            .find(|r| r.source == source && r.kind == kind)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// Aligned-column grid: rows are source x ablation, columns are
    /// per-level accuracy, overall accuracy, distractor choice rates and
    /// the chance-test p-value.
    pub fn to_table(&self) -> String {
        fn cell(v: Option<f64>) -> String {
            match v {
                Some(v) => format!("{v:6.1}"),
                None => format!("{:>6}", "NA"),
            }
        }
        let mut out = String::new();
        let _ = writeln!(
            out,
            "probe {}: {} instances, seed {}, {}",
            self.dataset, self.instances, self.seed, self.backend_regime
        );
        let src_w = self
            .rows
            .iter()
            .map(|r| r.source.len())
            .max()
            .unwrap_or(6)
            .max(6);
        let kind_w = self
            .kinds
            .iter()
            .map(|k| k.name().len())
            .max()
            .unwrap_or(8)
            .max(8);
        let mut header = format!("{:src_w$}  {:kind_w$}", "source", "ablation");
        for level in &self.levels {
            let _ = write!(header, "  {:>6}", level.key());
        }
        let _ = write!(header, "  {:>6}", "all");
        for role in [Role::B, Role::C, Role::D] {
            let _ = write!(header, "  {:>6}", role.letter());
        }
        let _ = write!(header, "  {:>9}", "p~chance");
        let _ = writeln!(out, "{header}");
        for row in &self.rows {
            let mut line = format!("{:src_w$}  {:kind_w$}", row.source, row.kind.name());
            for level in &self.levels {
                let v = row.per_level.get(level).and_then(CellValue::percent);
                let _ = write!(line, "  {}", cell(v));
            }
            let _ = write!(line, "  {}", cell(row.all.percent()));
            for role in [Role::B, Role::C, Role::D] {
                let _ = write!(line, "  {:6.1}", row.choice_percents[role.index()]);
            }
            match row.p_vs_chance {
                Some(p) => {
                    let _ = write!(line, "  {p:9.3}");
                }
                None => {
                    let _ = write!(line, "  {:>9}", "NA");
                }
            }
            let _ = writeln!(out, "{line}");
        }
        if !self.tuned_windows.is_empty() {
            for (source, folds) in &self.tuned_windows {
                let desc: Vec<String> = folds
                    .iter()
                    .map(|t| format!("fold {} -> {}", t.fold, t.window))
                    .collect();
                let _ = writeln!(out, "tuned windows [{source}]: {}", desc.join(", "));
            }
        }
        for failure in &self.failures {
            let _ = writeln!(out, "failure: {failure}");
        }
        out
    }
}

/// Aligned-column readability table, one row per labelled corpus slice.
/// Grades below zero clamp to zero for display; JSON keeps raw values.
pub fn readability_table(rows: &[(String, crate::stats::readability::ReadabilityStats)]) -> String {
    let mut out = String::new();
    let label_w = rows.iter().map(|(l, _)| l.len()).max().unwrap_or(5).max(5);
    let _ = writeln!(
        out,
        "{:label_w$}  {:>9}  {:>10}  {:>10}  {:>10}  {:>8}  {:>8}",
        "slice", "passages", "words/psg", "sents/psg", "words/sent", "fk", "smog"
    );
    for (label, stats) in rows {
        let _ = writeln!(
            out,
            "{:label_w$}  {:>9}  {:>10.2}  {:>10.2}  {:>10.2}  {:>8.2}  {:>8.2}",
            label,
            stats.passages,
            stats.words_per_passage.mean,
            stats.sentences_per_passage.mean,
            stats.words_per_sentence.mean,
            stats.flesch_kincaid.mean.max(0.0),
            stats.smog.mean.max(0.0),
        );
    }
    out
}
