//! Response records from machine backends or human cohorts, plus ingestion
//! of the shared human-response format.
//!
//! The ingestion format is CSV or JSON with the columns
//! `question_id, respondent_id, experiment, payload` and an optional
//! `level`. `experiment` is one of `qa`, `guess`, `judge`. For `qa` and
//! `guess` the payload is the selected role letter; for `judge` it is
//! `one:<role>`, `multiple:<role>,<role>[,...]` or `none`.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Read;

use serde::{Deserialize, Serialize};

use crate::ablate::AblationKind;
use crate::answer::presentation::Choice;
use crate::corpus::model::{Level, Role};
use crate::error::{Error, Result};
use crate::stats::ceiling::{ValidityJudgment, Verdict};

/// One answer selection, already mapped back to a role.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResponseRecord {
    pub question_id: String,
    pub level: Level,
    pub kind: AblationKind,
    /// Respondent id for human data; `None` for deterministic backends.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub respondent: Option<String>,
    pub selected: Role,
}

/// Answer selections from one source (a backend name or a human cohort).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResponseSet {
    pub source: String,
    pub records: Vec<ResponseRecord>,
}

impl ResponseSet {
    pub fn new(source: impl Into<String>) -> Self {
        ResponseSet {
            source: source.into(),
            records: Vec::new(),
        }
    }

    pub fn from_choices(source: impl Into<String>, choices: &[Choice]) -> Self {
        ResponseSet {
            source: source.into(),
            records: choices
                .iter()
                .map(|c| ResponseRecord {
                    question_id: c.question_id.clone(),
                    level: c.level,
                    kind: c.kind,
                    respondent: None,
                    selected: c.mapped_role,
                })
                .collect(),
        }
    }

    /// At most one record per (question, level, kind, respondent).
    pub fn validate(&self) -> Result<()> {
        let mut seen = BTreeSet::new();
        for r in &self.records {
            let key = (
                r.question_id.clone(),
                r.level,
                r.kind,
                r.respondent.clone(),
            );
            if !seen.insert(key) {
                return Err(Error::Data(format!(
                    "duplicate record for question {} ({}, {}, respondent {:?}) in source {}",
                    r.question_id, r.level, r.kind, r.respondent, self.source
                )));
            }
        }
        Ok(())
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }
}

fn parse_role(s: &str) -> Result<Role> {
    match s.trim().to_uppercase().as_str() {
        "A" => Ok(Role::A),
        "B" => Ok(Role::B),
        "C" => Ok(Role::C),
        "D" => Ok(Role::D),
        other => Err(Error::Data(format!("unknown role {other:?}"))),
    }
}

fn parse_verdict(payload: &str) -> Result<Verdict> {
    let p = payload.trim().to_lowercase();
    if p == "none" {
        return Ok(Verdict::NoneCorrect);
    }
    if let Some(role) = p.strip_prefix("one:") {
        return Ok(Verdict::OneCorrect(parse_role(role)?));
    }
    if let Some(roles) = p.strip_prefix("multiple:") {
        let set: Result<BTreeSet<Role>> = roles.split(',').map(parse_role).collect();
        let set = set?;
        if set.len() < 2 {
            return Err(Error::Data(format!(
                "multiple verdict needs at least two distinct roles: {payload:?}"
            )));
        }
        return Ok(Verdict::Multiple(set));
    }
    Err(Error::Data(format!("unknown judge payload {payload:?}")))
}

#[derive(Debug, Deserialize)]
struct RawRow {
    question_id: String,
    respondent_id: String,
    experiment: String,
    payload: String,
    #[serde(default)]
    level: Option<String>,
}

fn row_level(raw: &Option<String>) -> Result<Level> {
    match raw.as_deref().map(str::trim) {
        None | Some("") => Ok(Level::Unleveled),
        Some(s) => {
            Level::parse_key(s).ok_or_else(|| Error::Data(format!("unknown level {s:?}")))
        }
    }
}

fn rows_from_csv<R: Read>(reader: R) -> Result<Vec<RawRow>> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let mut rows = Vec::new();
    for (i, row) in rdr.deserialize::<RawRow>().enumerate() {
        rows.push(row.map_err(|e| Error::Parse {
            line: i + 2, // header is line 1
            column: 0,
            message: e.to_string(),
        })?);
    }
    Ok(rows)
}

fn rows_from_json<R: Read>(mut reader: R) -> Result<Vec<RawRow>> {
    let mut buf = String::new();
    reader.read_to_string(&mut buf)?;
    serde_json::from_str(&buf).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

fn rows_from_path(path: &std::path::Path) -> Result<Vec<RawRow>> {
    let file = std::fs::File::open(path)?;
    if path.extension().and_then(|e| e.to_str()) == Some("json") {
        rows_from_json(file)
    } else {
        rows_from_csv(file)
    }
}

/// Load `qa` or `guess` rows from a human-response file as one ResponseSet.
pub fn read_responses(path: &std::path::Path, experiment: &str, source: &str) -> Result<ResponseSet> {
    if experiment != "qa" && experiment != "guess" {
        return Err(Error::Parameter(format!(
            "experiment must be qa or guess, got {experiment:?}"
        )));
    }
    let mut set = ResponseSet::new(source);
    for row in rows_from_path(path)? {
        if row.experiment != experiment {
            continue;
        }
        set.records.push(ResponseRecord {
            question_id: row.question_id,
            level: row_level(&row.level)?,
            kind: if experiment == "guess" {
                AblationKind::NoPassage
            } else {
                AblationKind::Full
            },
            respondent: Some(row.respondent_id),
            selected: parse_role(&row.payload)?,
        });
    }
    set.validate()?;
    Ok(set)
}

/// Load `judge` rows from a human-response file.
pub fn read_judgments(path: &std::path::Path) -> Result<Vec<ValidityJudgment>> {
    let mut out = Vec::new();
    for row in rows_from_path(path)? {
        if row.experiment != "judge" {
            continue;
        }
        out.push(ValidityJudgment {
            question_id: row.question_id,
            respondent: row.respondent_id,
            verdict: parse_verdict(&row.payload)?,
        });
    }
    Ok(out)
}

/// Group records of several sets by their source label.
pub fn by_source(sets: &[ResponseSet]) -> BTreeMap<&str, &ResponseSet> {
    sets.iter().map(|s| (s.source.as_str(), s)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    const CSV: &str = "question_id,respondent_id,experiment,payload,level\n\
                       q1,r1,qa,A,adv\n\
                       q1,r2,qa,b,adv\n\
                       q1,r1,guess,D,adv\n\
                       q1,r1,judge,one:A,adv\n\
                       q1,r2,judge,\"multiple:B,C\",adv\n\
                       q1,r3,judge,none,adv\n";

    fn write_tmp(content: &str, ext: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::Builder::new().suffix(ext).tempfile().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f
    }

    #[test]
    fn csv_ingestion_splits_experiments() {
        let f = write_tmp(CSV, ".csv");
        let qa = read_responses(f.path(), "qa", "prolific").unwrap();
        assert_eq!(qa.len(), 2);
        assert_eq!(qa.records[0].selected, Role::A);
        assert_eq!(qa.records[1].selected, Role::B);
        assert_eq!(qa.records[0].kind, AblationKind::Full);
        let guess = read_responses(f.path(), "guess", "prolific").unwrap();
        assert_eq!(guess.len(), 1);
        assert_eq!(guess.records[0].kind, AblationKind::NoPassage);
    }

    #[test]
    fn judge_payloads_parse_into_verdicts() {
        let f = write_tmp(CSV, ".csv");
        let judgments = read_judgments(f.path()).unwrap();
        assert_eq!(judgments.len(), 3);
        assert_eq!(judgments[0].verdict, Verdict::OneCorrect(Role::A));
        assert_eq!(
            judgments[1].verdict,
            Verdict::Multiple([Role::B, Role::C].into_iter().collect())
        );
        assert_eq!(judgments[2].verdict, Verdict::NoneCorrect);
    }

    #[test]
    fn json_rows_are_accepted() {
        let json = r#"[
            {"question_id":"q1","respondent_id":"r1","experiment":"qa","payload":"A","level":"ele"}
        ]"#;
        let f = write_tmp(json, ".json");
        let qa = read_responses(f.path(), "qa", "h").unwrap();
        assert_eq!(qa.len(), 1);
        assert_eq!(qa.records[0].level, Level::Elementary);
    }

    #[test]
    fn duplicate_records_are_rejected() {
        let dup = "question_id,respondent_id,experiment,payload\nq1,r1,qa,A\nq1,r1,qa,B\n";
        let f = write_tmp(dup, ".csv");
        assert!(matches!(
            read_responses(f.path(), "qa", "h"),
            Err(Error::Data(_))
        ));
    }

    #[test]
    fn bad_payloads_are_data_errors() {
        assert!(parse_verdict("multiple:A").is_err());
        assert!(parse_verdict("sometimes").is_err());
        assert!(parse_role("E").is_err());
    }
}
