//! Question-validity judgments, consensus-invalid rate and the approximate
//! performance ceiling they imply.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::corpus::model::Role;
use crate::error::{Error, Result};

/// One respondent's verdict on whether a question has a unique correct answer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    /// The question has exactly one correct answer (the chosen role).
    OneCorrect(Role),
    /// More than one answer is correct.
    Multiple(BTreeSet<Role>),
    /// No answer is correct.
    NoneCorrect,
}

impl Verdict {
    /// Number of answers this verdict considers correct; a no-correct-answer
    /// verdict counts as all four being equally (in)defensible.
    pub fn answers_considered_correct(&self) -> usize {
        match self {
            Verdict::OneCorrect(_) => 1,
            Verdict::Multiple(set) => set.len(),
            Verdict::NoneCorrect => 4,
        }
    }

    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::OneCorrect(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidityJudgment {
    pub question_id: String,
    pub respondent: String,
    pub verdict: Verdict,
}

/// What makes a question invalid when scoring the ceiling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InvalidPolicy {
    /// Every judge denied a unique correct answer.
    Unanimous,
    /// A strict majority of judges denied a unique correct answer.
    Majority,
}

fn validate_verdicts(judgments: &[ValidityJudgment]) -> Result<()> {
    for j in judgments {
        if let Verdict::Multiple(set) = &j.verdict {
            if set.len() < 2 {
                return Err(Error::Data(format!(
                    "question {}: multiple-answers verdict with fewer than 2 roles",
                    j.question_id
                )));
            }
        }
    }
    Ok(())
}

fn group_by_question(
    judgments: &[ValidityJudgment],
) -> BTreeMap<&str, Vec<&ValidityJudgment>> {
    let mut groups: BTreeMap<&str, Vec<&ValidityJudgment>> = BTreeMap::new();
    for j in judgments {
        groups.entry(j.question_id.as_str()).or_default().push(j);
    }
    groups
}

/// Fraction of questions whose every verdict denies a unique correct answer.
///
/// Every question must carry exactly `judges_per_question` judgments.
pub fn consensus_invalid_rate(
    judgments: &[ValidityJudgment],
    judges_per_question: usize,
) -> Result<f64> {
    if judges_per_question == 0 {
        return Err(Error::Parameter("judges_per_question must be positive".into()));
    }
    validate_verdicts(judgments)?;
    let groups = group_by_question(judgments);
    if groups.is_empty() {
        return Err(Error::Completeness("no judgments given".into()));
    }
    for (qid, group) in &groups {
        if group.len() != judges_per_question {
            return Err(Error::Completeness(format!(
                "question {qid} has {} judgments, expected {judges_per_question}",
                group.len()
            )));
        }
    }
    let invalid = groups
        .values()
        .filter(|g| g.iter().all(|j| !j.verdict.is_valid()))
        .count();
    Ok(invalid as f64 / groups.len() as f64)
}

/// Expected best-possible accuracy (in percent) implied by the judgments.
///
/// A question judged valid under `policy` scores 1. An invalid question
/// scores 1 divided by the mean number of answers its respondents considered
/// correct (averaged over all of the question's respondents). The ceiling is
/// 100 times the mean question score.
pub fn approximate_ceiling(
    judgments: &[ValidityJudgment],
    policy: InvalidPolicy,
) -> Result<f64> {
    validate_verdicts(judgments)?;
    let groups = group_by_question(judgments);
    if groups.is_empty() {
        return Err(Error::Completeness("no judgments given".into()));
    }
    let expected = groups.values().next().unwrap().len();
    for (qid, group) in &groups {
        if group.len() != expected {
            return Err(Error::Completeness(format!(
                "question {qid} has {} judgments while others have {expected}",
                group.len()
            )));
        }
    }

    let mut total = 0.0f64;
    for group in groups.values() {
        let invalid_votes = group.iter().filter(|j| !j.verdict.is_valid()).count();
        let invalid = match policy {
            InvalidPolicy::Unanimous => invalid_votes == group.len(),
            InvalidPolicy::Majority => 2 * invalid_votes > group.len(),
        };
        let score = if invalid {
            let mean_correct: f64 = group
                .iter()
                .map(|j| j.verdict.answers_considered_correct() as f64)
                .sum::<f64>()
                / group.len() as f64;
            1.0 / mean_correct
        } else {
            1.0
        };
        total += score;
    }
    Ok(100.0 * total / groups.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn judgment(qid: &str, resp: &str, verdict: Verdict) -> ValidityJudgment {
        ValidityJudgment {
            question_id: qid.into(),
            respondent: resp.into(),
            verdict,
        }
    }

    fn multiple(roles: &[Role]) -> Verdict {
        Verdict::Multiple(roles.iter().copied().collect())
    }

    #[test]
    fn all_valid_means_zero_invalid_and_full_ceiling() {
        let j: Vec<_> = (0..3)
            .flat_map(|q| {
                (0..3).map(move |r| {
                    judgment(&format!("q{q}"), &format!("r{r}"), Verdict::OneCorrect(Role::A))
                })
            })
            .collect();
        assert_eq!(consensus_invalid_rate(&j, 3).unwrap(), 0.0);
        assert_eq!(approximate_ceiling(&j, InvalidPolicy::Unanimous).unwrap(), 100.0);
    }

    #[test]
    fn one_of_two_unanimously_multiple_is_half_invalid() {
        let mut j = vec![
            judgment("q1", "r1", Verdict::OneCorrect(Role::A)),
            judgment("q1", "r2", Verdict::OneCorrect(Role::A)),
            judgment("q1", "r3", Verdict::OneCorrect(Role::B)),
        ];
        for r in 1..=3 {
            j.push(judgment("q2", &format!("r{r}"), multiple(&[Role::A, Role::B])));
        }
        assert_eq!(consensus_invalid_rate(&j, 3).unwrap(), 0.5);
    }

    // Hand evaluation of the scoring rule: one valid question scores 1,
    // one unanimously-multiple question with sets of size 2 scores 1/2,
    // so the ceiling is (1 + 0.5) / 2 = 75.0.
    #[test]
    fn hand_computed_ceiling_is_75() {
        let mut j = vec![
            judgment("q1", "r1", Verdict::OneCorrect(Role::A)),
            judgment("q1", "r2", Verdict::OneCorrect(Role::A)),
            judgment("q1", "r3", Verdict::OneCorrect(Role::A)),
        ];
        for r in 1..=3 {
            j.push(judgment("q2", &format!("r{r}"), multiple(&[Role::A, Role::B])));
        }
        let ceiling = approximate_ceiling(&j, InvalidPolicy::Unanimous).unwrap();
        assert!((ceiling - 75.0).abs() < 1e-12);
    }

    #[test]
    fn all_none_bottoms_out_at_25() {
        let j: Vec<_> = (1..=3)
            .map(|r| judgment("q1", &format!("r{r}"), Verdict::NoneCorrect))
            .collect();
        let ceiling = approximate_ceiling(&j, InvalidPolicy::Unanimous).unwrap();
        assert!((ceiling - 25.0).abs() < 1e-12);
    }

    #[test]
    fn majority_policy_flags_two_of_three() {
        let j = vec![
            judgment("q1", "r1", Verdict::NoneCorrect),
            judgment("q1", "r2", multiple(&[Role::A, Role::C])),
            judgment("q1", "r3", Verdict::OneCorrect(Role::A)),
        ];
        // unanimous: valid (one judge said OneCorrect) -> 100
        assert_eq!(approximate_ceiling(&j, InvalidPolicy::Unanimous).unwrap(), 100.0);
        // majority: invalid; mean correct = (4 + 2 + 1) / 3 = 7/3
        let expected = 100.0 * 3.0 / 7.0;
        let got = approximate_ceiling(&j, InvalidPolicy::Majority).unwrap();
        assert!((got - expected).abs() < 1e-9);
    }

    #[test]
    fn incomplete_judgments_error() {
        let j = vec![
            judgment("q1", "r1", Verdict::OneCorrect(Role::A)),
            judgment("q1", "r2", Verdict::OneCorrect(Role::A)),
            judgment("q2", "r1", Verdict::OneCorrect(Role::A)),
        ];
        assert!(matches!(
            consensus_invalid_rate(&j, 2),
            Err(Error::Completeness(_))
        ));
        assert!(matches!(
            approximate_ceiling(&j, InvalidPolicy::Unanimous),
            Err(Error::Completeness(_))
        ));
    }
}
