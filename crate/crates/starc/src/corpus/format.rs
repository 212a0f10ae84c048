//! On-disk corpus formats: `starc-json` (leveled, span-annotated) and
//! `plain-mcq-json` (span-free, single unleveled text per paragraph).
//!
//! Parsing is lossless: re-serializing a parsed dataset yields the canonical
//! form (sorted articles/paragraphs/questions, fixed key order, two-space
//! indent), and parsing that form back reproduces the dataset exactly.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::model::{Answer, Dataset, Level, Passage, Question, Role, SpanPair};
use crate::error::{Error, Result};

/// Supported corpus file formats.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DatasetFormat {
    #[serde(rename = "starc-json")]
    StarcJson,
    #[serde(rename = "plain-mcq-json")]
    PlainMcqJson,
}

impl DatasetFormat {
    pub fn name(&self) -> &'static str {
        match self {
            DatasetFormat::StarcJson => "starc-json",
            DatasetFormat::PlainMcqJson => "plain-mcq-json",
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StarcFile {
    name: String,
    articles: Vec<StarcArticle>,
    questions: Vec<StarcQuestion>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StarcArticle {
    article_id: String,
    paragraphs: Vec<StarcParagraph>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StarcParagraph {
    paragraph_index: u32,
    levels: BTreeMap<Level, LevelText>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LevelText {
    text: String,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StarcQuestion {
    question_id: String,
    article_id: String,
    paragraph_index: u32,
    stem: String,
    answers: AnswerMap,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    spans: BTreeMap<Level, SpanPair>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AnswerMap {
    #[serde(rename = "A")]
    a: String,
    #[serde(rename = "B")]
    b: String,
    #[serde(rename = "C")]
    c: String,
    #[serde(rename = "D")]
    d: String,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PlainFile {
    name: String,
    articles: Vec<PlainArticle>,
    questions: Vec<PlainQuestion>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PlainArticle {
    article_id: String,
    paragraphs: Vec<PlainParagraph>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PlainParagraph {
    paragraph_index: u32,
    text: String,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PlainQuestion {
    question_id: String,
    article_id: String,
    paragraph_index: u32,
    stem: String,
    answers: AnswerMap,
}

fn syntax_error(e: &serde_json::Error) -> Error {
    Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    }
}

/// Parse a corpus from raw bytes in the declared format.
pub fn parse_dataset(raw: &[u8], format: DatasetFormat) -> Result<Dataset> {
    let text = std::str::from_utf8(raw).map_err(|e| Error::Parse {
        line: 0,
        column: e.valid_up_to(),
        message: format!("input is not valid UTF-8: {e}"),
    })?;
    match format {
        DatasetFormat::StarcJson => {
            let file: StarcFile = serde_json::from_str(text).map_err(|e| syntax_error(&e))?;
            dataset_from_starc(file)
        }
        DatasetFormat::PlainMcqJson => {
            let file: PlainFile = serde_json::from_str(text).map_err(|e| syntax_error(&e))?;
            dataset_from_plain(file)
        }
    }
}

/// Parse a corpus file, detecting the format when `format` is `None`.
pub fn parse_dataset_file(path: &Path, format: Option<DatasetFormat>) -> Result<Dataset> {
    let raw = std::fs::read(path)?;
    let format = match format {
        Some(f) => f,
        None => detect_format(&raw)?,
    };
    parse_dataset(&raw, format)
}

/// Guess the format from structure: paragraphs with a `levels` object are
/// starc-json, paragraphs with a bare `text` are plain-mcq-json.
pub fn detect_format(raw: &[u8]) -> Result<DatasetFormat> {
    let value: serde_json::Value =
        serde_json::from_slice(raw).map_err(|e| syntax_error(&e))?;
    let para = value
        .get("articles")
        .and_then(|a| a.as_array())
        .and_then(|a| a.first())
        .and_then(|a| a.get("paragraphs"))
        .and_then(|p| p.as_array())
        .and_then(|p| p.first());
    match para {
        Some(p) if p.get("levels").is_some() => Ok(DatasetFormat::StarcJson),
        Some(p) if p.get("text").is_some() => Ok(DatasetFormat::PlainMcqJson),
        _ => Err(Error::schema(
            "dataset",
            "cannot detect format: no paragraph with `levels` or `text`",
        )),
    }
}

fn answers_from_map(m: AnswerMap) -> Vec<Answer> {
    vec![
        Answer { role: Role::A, text: m.a },
        Answer { role: Role::B, text: m.b },
        Answer { role: Role::C, text: m.c },
        Answer { role: Role::D, text: m.d },
    ]
}

fn dataset_from_starc(file: StarcFile) -> Result<Dataset> {
    let mut d = Dataset::new(file.name);
    for article in file.articles {
        for para in article.paragraphs {
            if para.levels.is_empty() {
                return Err(Error::schema(
                    format!("paragraph {}#{}", article.article_id, para.paragraph_index),
                    "paragraph has no levels",
                ));
            }
            for (level, lt) in para.levels {
                if level == Level::Unleveled {
                    return Err(Error::schema(
                        format!("paragraph {}#{}", article.article_id, para.paragraph_index),
                        "starc-json paragraphs must use ele/int/adv levels",
                    ));
                }
                let p = Passage::new(&article.article_id, level, para.paragraph_index, lt.text);
                if d.passages.insert(p.key(), p).is_some() {
                    return Err(Error::schema(
                        format!("paragraph {}#{}", article.article_id, para.paragraph_index),
                        format!("duplicate passage at level {level}"),
                    ));
                }
            }
        }
    }
    for q in file.questions {
        let question = Question {
            question_id: q.question_id.clone(),
            article_id: q.article_id,
            paragraph_index: q.paragraph_index,
            stem: q.stem,
            answers: answers_from_map(q.answers),
            spans: q.spans,
        };
        if d.questions.insert(q.question_id.clone(), question).is_some() {
            return Err(Error::schema(
                format!("question {}", q.question_id),
                "duplicate question_id",
            ));
        }
    }
    d.validate()?;
    Ok(d)
}

fn dataset_from_plain(file: PlainFile) -> Result<Dataset> {
    let mut d = Dataset::new(file.name);
    for article in file.articles {
        for para in article.paragraphs {
            let p = Passage::new(
                &article.article_id,
                Level::Unleveled,
                para.paragraph_index,
                para.text,
            );
            if d.passages.insert(p.key(), p).is_some() {
                return Err(Error::schema(
                    format!("paragraph {}#{}", article.article_id, para.paragraph_index),
                    "duplicate paragraph",
                ));
            }
        }
    }
    for q in file.questions {
        let question = Question {
            question_id: q.question_id.clone(),
            article_id: q.article_id,
            paragraph_index: q.paragraph_index,
            stem: q.stem,
            answers: answers_from_map(q.answers),
            spans: BTreeMap::new(),
        };
        if d.questions.insert(q.question_id.clone(), question).is_some() {
            return Err(Error::schema(
                format!("question {}", q.question_id),
                "duplicate question_id",
            ));
        }
    }
    d.validate()?;
    Ok(d)
}

fn answers_to_map(q: &Question) -> Result<AnswerMap> {
    let get = |r: Role| {
        q.answer(r).map(str::to_string).ok_or_else(|| {
            Error::schema(format!("question {}", q.question_id), format!("missing answer {r}"))
        })
    };
    Ok(AnswerMap {
        a: get(Role::A)?,
        b: get(Role::B)?,
        c: get(Role::C)?,
        d: get(Role::D)?,
    })
}

/// Serialize a dataset to its canonical JSON form in the given format.
pub fn serialize_dataset(d: &Dataset, format: DatasetFormat) -> Result<String> {
    let json = match format {
        DatasetFormat::StarcJson => {
            let mut articles: Vec<StarcArticle> = Vec::new();
            for p in d.passages.values() {
                if p.level == Level::Unleveled {
                    return Err(Error::Capability(
                        "unleveled passages cannot be written as starc-json".into(),
                    ));
                }
                if articles.last().map(|a| a.article_id.as_str()) != Some(p.article_id.as_str()) {
                    articles.push(StarcArticle {
                        article_id: p.article_id.clone(),
                        paragraphs: Vec::new(),
                    });
                }
                let article = articles.last_mut().unwrap();
                if article
                    .paragraphs
                    .last()
                    .map(|pp| pp.paragraph_index)
                    != Some(p.paragraph_index)
                {
                    article.paragraphs.push(StarcParagraph {
                        paragraph_index: p.paragraph_index,
                        levels: BTreeMap::new(),
                    });
                }
                article
                    .paragraphs
                    .last_mut()
                    .unwrap()
                    .levels
                    .insert(p.level, LevelText { text: p.text.clone() });
            }
            let questions = d
                .questions
                .values()
                .map(|q| {
                    Ok(StarcQuestion {
                        question_id: q.question_id.clone(),
                        article_id: q.article_id.clone(),
                        paragraph_index: q.paragraph_index,
                        stem: q.stem.clone(),
                        answers: answers_to_map(q)?,
                        spans: q.spans.clone(),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            serde_json::to_string_pretty(&StarcFile {
                name: d.name.clone(),
                articles,
                questions,
            })
        }
        DatasetFormat::PlainMcqJson => {
            let mut articles: Vec<PlainArticle> = Vec::new();
            for p in d.passages.values() {
                if articles.last().map(|a| a.article_id.as_str()) != Some(p.article_id.as_str()) {
                    articles.push(PlainArticle {
                        article_id: p.article_id.clone(),
                        paragraphs: Vec::new(),
                    });
                }
                articles.last_mut().unwrap().paragraphs.push(PlainParagraph {
                    paragraph_index: p.paragraph_index,
                    text: p.text.clone(),
                });
            }
            let questions = d
                .questions
                .values()
                .map(|q| {
                    Ok(PlainQuestion {
                        question_id: q.question_id.clone(),
                        article_id: q.article_id.clone(),
                        paragraph_index: q.paragraph_index,
                        stem: q.stem.clone(),
                        answers: answers_to_map(q)?,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            serde_json::to_string_pretty(&PlainFile {
                name: d.name.clone(),
                articles,
                questions,
            })
        }
    };
    let mut out = json.map_err(|e| Error::schema("dataset", e.to_string()))?;
    out.push('\n');
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::model::{Interval, Span};

    pub(crate) const MINIMAL_STARC: &str = r#"{
  "name": "mini",
  "articles": [
    {
      "article_id": "art1",
      "paragraphs": [
        {
          "paragraph_index": 0,
          "levels": {
            "adv": { "text": "The yearly fair opened on Monday. Crowds filled the town square quickly." }
          }
        }
      ]
    }
  ],
  "questions": [
    {
      "question_id": "art1-0-q1",
      "article_id": "art1",
      "paragraph_index": 0,
      "stem": "When did the fair open?",
      "answers": { "A": "At the start of the week", "B": "At the end of the week", "C": "When the square was full", "D": "After a public vote" },
      "spans": {
        "adv": { "critical": [[0, 33]], "distractor": [[34, 72]] }
      }
    }
  ]
}"#;

    #[test]
    fn minimal_starc_file_parses() {
        let d = parse_dataset(MINIMAL_STARC.as_bytes(), DatasetFormat::StarcJson).unwrap();
        assert_eq!(d.passages.len(), 1);
        assert_eq!(d.questions.len(), 1);
        let q = d.questions.values().next().unwrap();
        assert!(q.has_spans());
    }

    #[test]
    fn span_end_beyond_text_is_schema_error() {
        let bad = MINIMAL_STARC.replace("[[0, 33]]", "[[0, 3300]]");
        let err = parse_dataset(bad.as_bytes(), DatasetFormat::StarcJson).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("span out of bounds"), "{msg}");
        assert!(msg.contains("art1-0-q1"), "{msg}");
    }

    #[test]
    fn malformed_json_reports_line_and_column() {
        let err = parse_dataset(b"{\n  \"name\": oops\n}", DatasetFormat::StarcJson).unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other}"),
        }
    }

    #[test]
    fn unknown_field_is_rejected() {
        let bad = MINIMAL_STARC.replace("\"name\": \"mini\",", "\"name\": \"mini\", \"extra\": 1,");
        assert!(parse_dataset(bad.as_bytes(), DatasetFormat::StarcJson).is_err());
    }

    #[test]
    fn unbound_question_is_binding_error() {
        let bad = MINIMAL_STARC.replace("\"article_id\": \"art1\",\n      \"paragraph_index\": 0,", "\"article_id\": \"ghost\",\n      \"paragraph_index\": 9,");
        let err = parse_dataset(bad.as_bytes(), DatasetFormat::StarcJson).unwrap_err();
        assert!(matches!(err, Error::Binding(_)), "{err}");
    }

    #[test]
    fn round_trip_is_canonical_fixed_point() {
        let d = parse_dataset(MINIMAL_STARC.as_bytes(), DatasetFormat::StarcJson).unwrap();
        let s1 = serialize_dataset(&d, DatasetFormat::StarcJson).unwrap();
        let d2 = parse_dataset(s1.as_bytes(), DatasetFormat::StarcJson).unwrap();
        assert_eq!(d, d2);
        let s2 = serialize_dataset(&d2, DatasetFormat::StarcJson).unwrap();
        assert_eq!(s1, s2);
    }

    #[test]
    fn plain_format_round_trips_and_detects() {
        let mut d = Dataset::new("plain");
        let p = Passage::new("r1", Level::Unleveled, 0, "A fact sits here. Another one follows.");
        d.passages.insert(p.key(), p);
        d.questions.insert(
            "r1-q0".into(),
            Question {
                question_id: "r1-q0".into(),
                article_id: "r1".into(),
                paragraph_index: 0,
                stem: "Which fact sits here?".into(),
                answers: vec![
                    Answer { role: Role::A, text: "the first".into() },
                    Answer { role: Role::B, text: "the second".into() },
                    Answer { role: Role::C, text: "the third".into() },
                    Answer { role: Role::D, text: "none".into() },
                ],
                spans: BTreeMap::new(),
            },
        );
        let s = serialize_dataset(&d, DatasetFormat::PlainMcqJson).unwrap();
        assert_eq!(detect_format(s.as_bytes()).unwrap(), DatasetFormat::PlainMcqJson);
        let d2 = parse_dataset(s.as_bytes(), DatasetFormat::PlainMcqJson).unwrap();
        assert_eq!(d, d2);
        assert_eq!(
            detect_format(MINIMAL_STARC.as_bytes()).unwrap(),
            DatasetFormat::StarcJson
        );
    }

    #[test]
    fn multi_fragment_spans_serialize_as_pair_lists() {
        let mut d = parse_dataset(MINIMAL_STARC.as_bytes(), DatasetFormat::StarcJson).unwrap();
        let q = d.questions.values_mut().next().unwrap();
        q.spans.get_mut(&Level::Advanced).unwrap().critical =
            Some(Span::new(vec![Interval::new(0, 9), Interval::new(11, 15)]));
        let s = serialize_dataset(&d, DatasetFormat::StarcJson).unwrap();
        let value: serde_json::Value = serde_json::from_str(&s).unwrap();
        let critical = &value["questions"][0]["spans"]["adv"]["critical"];
        assert_eq!(critical, &serde_json::json!([[0, 9], [11, 15]]));
        let d2 = parse_dataset(s.as_bytes(), DatasetFormat::StarcJson).unwrap();
        assert_eq!(d, d2);
    }
}
