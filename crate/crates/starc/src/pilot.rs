//! Balanced pilot-experiment lists and post-pilot flagging.
//!
//! The pilot design crosses 3 question slots with 2 difficulty levels
//! (Elementary, Advanced), giving six conditions per paragraph. Six
//! participant lists are generated so that every paragraph contributes each
//! condition to exactly one list, and every list sees the conditions in
//! balanced proportions.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::corpus::model::{Level, Role};
use crate::error::{Error, Result};
use crate::stats::response::ResponseSet;

/// One of the six pilot conditions: which of the paragraph's three
/// questions is asked, and which text level is shown.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PilotCondition {
    /// Question slot within the paragraph, 1-3.
    pub question_index: u8,
    /// Elementary or Advanced.
    pub level: Level,
}

impl PilotCondition {
    pub const ALL: [PilotCondition; 6] = [
        PilotCondition { question_index: 1, level: Level::Elementary },
        PilotCondition { question_index: 1, level: Level::Advanced },
        PilotCondition { question_index: 2, level: Level::Elementary },
        PilotCondition { question_index: 2, level: Level::Advanced },
        PilotCondition { question_index: 3, level: Level::Elementary },
        PilotCondition { question_index: 3, level: Level::Advanced },
    ];
}

/// One participant-facing trial.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PilotTrial {
    pub paragraph_id: String,
    pub condition: PilotCondition,
}

/// One experimental list: trials in presentation order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PilotList {
    pub index: usize,
    /// Seed used for this list's trial-order shuffle, for reproducibility.
    pub shuffle_seed: u64,
    pub trials: Vec<PilotTrial>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PilotLists {
    pub seed: u64,
    pub lists: Vec<PilotList>,
}

/// Assign conditions to six lists in a cyclic Latin-square design.
///
/// For every paragraph the six lists collectively cover all six conditions
/// exactly once, and within each list the condition counts across paragraphs
/// differ by at most one. Deterministic per seed.
pub fn latin_square_lists(
    paragraph_ids: &[String],
    n_lists: usize,
    seed: u64,
) -> Result<PilotLists> {
    if n_lists != 6 {
        return Err(Error::Parameter(format!(
            "the pilot design is 3 questions x 2 levels and needs exactly 6 lists, got {n_lists}"
        )));
    }
    if paragraph_ids.is_empty() {
        return Err(Error::Parameter("no paragraphs given".into()));
    }
    let mut ids = paragraph_ids.to_vec();
    ids.sort();
    ids.dedup();
    if ids.len() != paragraph_ids.len() {
        return Err(Error::Parameter("duplicate paragraph ids".into()));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut conditions = PilotCondition::ALL;
    conditions.shuffle(&mut rng);

    let mut lists: Vec<PilotList> = (0..6)
        .map(|index| PilotList {
            index,
            shuffle_seed: seed.wrapping_add(index as u64 + 1),
            trials: Vec::with_capacity(paragraph_ids.len()),
        })
        .collect();

    // cyclic fill keeps within-list condition counts balanced to within 1
    for (i, paragraph_id) in paragraph_ids.iter().enumerate() {
        for (l, list) in lists.iter_mut().enumerate() {
            list.trials.push(PilotTrial {
                paragraph_id: paragraph_id.clone(),
                condition: conditions[(i + l) % 6],
            });
        }
    }
    for list in &mut lists {
        let mut list_rng = ChaCha8Rng::seed_from_u64(list.shuffle_seed);
        list.trials.shuffle(&mut list_rng);
    }
    Ok(PilotLists { seed, lists })
}

/// Self-check of the Latin-square balance conditions.
pub fn verify_balance(lists: &PilotLists, paragraph_ids: &[String]) -> Result<()> {
    if lists.lists.len() != 6 {
        return Err(Error::Data(format!("expected 6 lists, got {}", lists.lists.len())));
    }
    let mut per_paragraph: BTreeMap<&str, Vec<PilotCondition>> = BTreeMap::new();
    for list in &lists.lists {
        if list.trials.len() != paragraph_ids.len() {
            return Err(Error::Data(format!(
                "list {} has {} trials for {} paragraphs",
                list.index,
                list.trials.len(),
                paragraph_ids.len()
            )));
        }
        let mut counts: BTreeMap<PilotCondition, usize> = BTreeMap::new();
        for t in &list.trials {
            *counts.entry(t.condition).or_default() += 1;
            per_paragraph
                .entry(t.paragraph_id.as_str())
                .or_default()
                .push(t.condition);
        }
        let max = counts.values().copied().max().unwrap_or(0);
        let min = PilotCondition::ALL
            .iter()
            .map(|c| counts.get(c).copied().unwrap_or(0))
            .min()
            .unwrap_or(0);
        if max - min > 1 {
            return Err(Error::Data(format!(
                "list {} condition counts spread {min}..{max}",
                list.index
            )));
        }
    }
    for id in paragraph_ids {
        let mut conds = per_paragraph
            .remove(id.as_str())
            .ok_or_else(|| Error::Data(format!("paragraph {id} missing from lists")))?;
        conds.sort();
        if conds != PilotCondition::ALL.to_vec() {
            return Err(Error::Data(format!(
                "paragraph {id} does not cover the 6 conditions exactly once"
            )));
        }
    }
    Ok(())
}

/// Per-question pilot outcome rates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuestionPilotStats {
    pub question_id: String,
    /// Choice rate of A before reading (guessing phase).
    pub pre_rate_a: f64,
    /// Post-reading choice rate per role, summing to 1.
    pub post_rates: [f64; 4],
    /// Post-reading choice rate of A per level shown.
    pub post_rate_a_by_level: BTreeMap<Level, f64>,
}

/// Why a question gets flagged for editing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FlagCriterion {
    /// A chosen before reading more than 60% of the time.
    Guessable,
    /// A chosen after reading less than 50% of the time.
    WeakKey,
    /// A chosen after reading more than 95% of the time.
    TooEasy,
    /// A distractor chosen after reading more than 30% of the time.
    StrongDistractor(Role),
    /// Post-reading accuracy differs across levels by more than 30 points.
    LevelSkew,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Flag {
    pub question_id: String,
    pub criterion: FlagCriterion,
    pub value: f64,
}

fn check_rate(name: &str, qid: &str, rate: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&rate) {
        return Err(Error::Data(format!(
            "question {qid}: {name} rate {rate} outside [0, 1]"
        )));
    }
    Ok(())
}

/// Apply the flagging thresholds to one question's pilot stats.
///
/// All comparisons are strict, so values exactly at a threshold do not flag.
pub fn pilot_flags(stats: &QuestionPilotStats) -> Result<Vec<Flag>> {
    let qid = &stats.question_id;
    check_rate("pre A", qid, stats.pre_rate_a)?;
    for (i, r) in stats.post_rates.iter().enumerate() {
        check_rate(&format!("post {}", Role::ALL[i]), qid, *r)?;
    }
    let sum: f64 = stats.post_rates.iter().sum();
    if (sum - 1.0).abs() > 1e-6 {
        return Err(Error::Data(format!(
            "question {qid}: post rates sum to {sum}, expected 1"
        )));
    }
    for rate in stats.post_rate_a_by_level.values() {
        check_rate("post A by level", qid, *rate)?;
    }

    let mut flags = Vec::new();
    let mut push = |criterion, value| {
        flags.push(Flag {
            question_id: qid.clone(),
            criterion,
            value,
        })
    };
    if stats.pre_rate_a > 0.60 {
        push(FlagCriterion::Guessable, stats.pre_rate_a);
    }
    let post_a = stats.post_rates[Role::A.index()];
    if post_a < 0.50 {
        push(FlagCriterion::WeakKey, post_a);
    }
    if post_a > 0.95 {
        push(FlagCriterion::TooEasy, post_a);
    }
    for role in [Role::B, Role::C, Role::D] {
        let rate = stats.post_rates[role.index()];
        if rate > 0.30 {
            push(FlagCriterion::StrongDistractor(role), rate);
        }
    }
    if let (Some(ele), Some(adv)) = (
        stats.post_rate_a_by_level.get(&Level::Elementary),
        stats.post_rate_a_by_level.get(&Level::Advanced),
    ) {
        let skew = (ele - adv).abs();
        if skew > 0.30 {
            push(FlagCriterion::LevelSkew, skew);
        }
    }
    Ok(flags)
}

/// Aggregate pre (guessing) and post (reading) responses into per-question
/// pilot stats. Every question must appear in both phases.
pub fn compute_pilot_stats(
    pre: &ResponseSet,
    post: &ResponseSet,
) -> Result<Vec<QuestionPilotStats>> {
    let mut pre_counts: BTreeMap<&str, (usize, usize)> = BTreeMap::new();
    for r in &pre.records {
        let e = pre_counts.entry(r.question_id.as_str()).or_default();
        e.1 += 1;
        if r.selected == Role::A {
            e.0 += 1;
        }
    }
    // per question: selections by role, plus (A, total) per level
    type PostCounts = ([usize; 4], BTreeMap<Level, (usize, usize)>);
    let mut post_counts: BTreeMap<&str, PostCounts> = BTreeMap::new();
    for r in &post.records {
        let e = post_counts.entry(r.question_id.as_str()).or_default();
        e.0[r.selected.index()] += 1;
        let lv = e.1.entry(r.level).or_default();
        lv.1 += 1;
        if r.selected == Role::A {
            lv.0 += 1;
        }
    }

    let mut out = Vec::new();
    for (qid, (by_role, by_level)) in &post_counts {
        let (pre_a, pre_n) = pre_counts.get(qid).copied().ok_or_else(|| {
            Error::Completeness(format!("question {qid} has post data but no pre data"))
        })?;
        let total: usize = by_role.iter().sum();
        let mut post_rates = [0.0f64; 4];
        for i in 0..4 {
            post_rates[i] = by_role[i] as f64 / total as f64;
        }
        out.push(QuestionPilotStats {
            question_id: qid.to_string(),
            pre_rate_a: pre_a as f64 / pre_n as f64,
            post_rates,
            post_rate_a_by_level: by_level
                .iter()
                .map(|(lvl, (a, n))| (*lvl, *a as f64 / *n as f64))
                .collect(),
        });
    }
    for qid in pre_counts.keys() {
        if !post_counts.contains_key(qid) {
            return Err(Error::Completeness(format!(
                "question {qid} has pre data but no post data"
            )));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ids(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("p{i:03}")).collect()
    }

    #[test]
    fn six_paragraphs_give_one_of_each_condition_per_list() {
        let ids = ids(6);
        let lists = latin_square_lists(&ids, 6, 9).unwrap();
        verify_balance(&lists, &ids).unwrap();
        for list in &lists.lists {
            let mut conds: Vec<_> = list.trials.iter().map(|t| t.condition).collect();
            conds.sort();
            assert_eq!(conds, PilotCondition::ALL.to_vec());
        }
    }

    #[test]
    fn single_paragraph_spreads_conditions_across_lists() {
        let ids = ids(1);
        let lists = latin_square_lists(&ids, 6, 0).unwrap();
        verify_balance(&lists, &ids).unwrap();
        let mut conds: Vec<_> = lists
            .lists
            .iter()
            .map(|l| l.trials[0].condition)
            .collect();
        conds.sort();
        assert_eq!(conds, PilotCondition::ALL.to_vec());
    }

    #[test]
    fn wrong_list_count_is_parameter_error() {
        assert!(matches!(
            latin_square_lists(&ids(4), 4, 0),
            Err(Error::Parameter(_))
        ));
    }

    #[test]
    fn generation_is_deterministic_per_seed() {
        let ids = ids(11);
        assert_eq!(
            latin_square_lists(&ids, 6, 5).unwrap(),
            latin_square_lists(&ids, 6, 5).unwrap()
        );
        assert_ne!(
            latin_square_lists(&ids, 6, 5).unwrap(),
            latin_square_lists(&ids, 6, 6).unwrap()
        );
    }

    fn stats(pre: f64, post: [f64; 4]) -> QuestionPilotStats {
        QuestionPilotStats {
            question_id: "q1".into(),
            pre_rate_a: pre,
            post_rates: post,
            post_rate_a_by_level: BTreeMap::new(),
        }
    }

    #[test]
    fn guessable_above_sixty_percent_pre() {
        let flags = pilot_flags(&stats(0.65, [0.7, 0.1, 0.1, 0.1])).unwrap();
        assert!(flags.iter().any(|f| f.criterion == FlagCriterion::Guessable));
        // exactly at the threshold does not flag
        let flags = pilot_flags(&stats(0.60, [0.7, 0.1, 0.1, 0.1])).unwrap();
        assert!(flags.iter().all(|f| f.criterion != FlagCriterion::Guessable));
    }

    #[test]
    fn too_easy_only_for_near_perfect_post() {
        let flags = pilot_flags(&stats(0.2, [0.97, 0.01, 0.01, 0.01])).unwrap();
        assert_eq!(flags.len(), 1);
        assert_eq!(flags[0].criterion, FlagCriterion::TooEasy);
    }

    #[test]
    fn strong_distractor_names_the_role() {
        let flags = pilot_flags(&stats(0.2, [0.55, 0.35, 0.05, 0.05])).unwrap();
        assert!(flags
            .iter()
            .any(|f| f.criterion == FlagCriterion::StrongDistractor(Role::B)));
    }

    // Hand evaluation of the level-skew rule: |0.90 - 0.55| = 0.35 > 0.30.
    #[test]
    fn level_skew_flags_when_levels_diverge() {
        let mut s = stats(0.2, [0.7, 0.1, 0.1, 0.1]);
        s.post_rate_a_by_level.insert(Level::Elementary, 0.90);
        s.post_rate_a_by_level.insert(Level::Advanced, 0.55);
        let flags = pilot_flags(&s).unwrap();
        let skew = flags
            .iter()
            .find(|f| f.criterion == FlagCriterion::LevelSkew)
            .expect("skew flag");
        assert!((skew.value - 0.35).abs() < 1e-12);
    }

    #[test]
    fn out_of_range_rates_are_data_errors() {
        assert!(pilot_flags(&stats(1.2, [0.7, 0.1, 0.1, 0.1])).is_err());
        assert!(pilot_flags(&stats(0.2, [0.9, 0.2, 0.1, 0.1])).is_err());
    }

    #[test]
    fn raising_pre_rate_never_removes_guessable() {
        let mut last = false;
        for i in 0..=20 {
            let pre = i as f64 / 20.0;
            let flags = pilot_flags(&stats(pre, [0.7, 0.1, 0.1, 0.1])).unwrap();
            let now = flags.iter().any(|f| f.criterion == FlagCriterion::Guessable);
            assert!(now || !last, "guessable flag vanished as pre rate rose");
            last = now;
        }
    }
}
