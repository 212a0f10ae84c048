//! Accuracy, per-role choice rates and guess overlap.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::ablate::AblationKind;
use crate::corpus::model::{Level, Role};
use crate::error::{Error, Result};
use crate::stats::response::ResponseSet;

/// Dimensions a metric can be grouped by.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GroupField {
    Level,
    Kind,
    Source,
}

/// Key of one metric group; ungrouped dimensions stay `None`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct GroupKey {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kind: Option<AblationKind>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub level: Option<Level>,
}

impl GroupKey {
    fn for_record(
        group_by: &[GroupField],
        source: &str,
        level: Level,
        kind: AblationKind,
    ) -> GroupKey {
        GroupKey {
            source: group_by
                .contains(&GroupField::Source)
                .then(|| source.to_string()),
            kind: group_by.contains(&GroupField::Kind).then_some(kind),
            level: group_by.contains(&GroupField::Level).then_some(level),
        }
    }
}

/// Correct/total counts with derived rates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct RateCell {
    pub correct: usize,
    pub total: usize,
}

impl RateCell {
    pub fn fraction(&self) -> f64 {
        if self.total == 0 {
            0.0
        } else {
            self.correct as f64 / self.total as f64
        }
    }

    pub fn percent(&self) -> f64 {
        100.0 * self.fraction()
    }
}

/// Fraction of records selecting role A, per group. Groups with zero
/// records do not appear.
pub fn accuracy(sets: &[&ResponseSet], group_by: &[GroupField]) -> BTreeMap<GroupKey, RateCell> {
    let mut out: BTreeMap<GroupKey, RateCell> = BTreeMap::new();
    for set in sets {
        for r in &set.records {
            let key = GroupKey::for_record(group_by, &set.source, r.level, r.kind);
            let cell = out.entry(key).or_default();
            cell.total += 1;
            if r.selected == Role::A {
                cell.correct += 1;
            }
        }
    }
    out
}

/// Per-role selection counts for one group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ChoiceRates {
    pub counts: [usize; 4],
    pub total: usize,
}

impl ChoiceRates {
    pub fn percent(&self, role: Role) -> f64 {
        if self.total == 0 {
            0.0
        } else {
            100.0 * self.counts[role.index()] as f64 / self.total as f64
        }
    }

    /// All four rates, in role order; sums to 100 up to float epsilon.
    pub fn percents(&self) -> [f64; 4] {
        [
            self.percent(Role::A),
            self.percent(Role::B),
            self.percent(Role::C),
            self.percent(Role::D),
        ]
    }
}

/// How often each role was selected, per group.
pub fn choice_distribution(
    sets: &[&ResponseSet],
    group_by: &[GroupField],
) -> BTreeMap<GroupKey, ChoiceRates> {
    let mut out: BTreeMap<GroupKey, ChoiceRates> = BTreeMap::new();
    for set in sets {
        for r in &set.records {
            let key = GroupKey::for_record(group_by, &set.source, r.level, r.kind);
            let cell = out.entry(key).or_default();
            cell.counts[r.selected.index()] += 1;
            cell.total += 1;
        }
    }
    out
}

type InstanceKey = (String, Level, AblationKind);

/// A key counts as correct when a strict majority of its records select A.
fn correct_keys(set: &ResponseSet) -> BTreeMap<InstanceKey, bool> {
    let mut tally: BTreeMap<InstanceKey, (usize, usize)> = BTreeMap::new();
    for r in &set.records {
        let e = tally
            .entry((r.question_id.clone(), r.level, r.kind))
            .or_default();
        e.1 += 1;
        if r.selected == Role::A {
            e.0 += 1;
        }
    }
    tally
        .into_iter()
        .map(|(k, (correct, total))| (k, 2 * correct > total))
        .collect()
}

/// Fraction of shared instance keys answered correctly by both sources.
pub fn guess_overlap(a: &ResponseSet, b: &ResponseSet) -> Result<f64> {
    let ka = correct_keys(a);
    let kb = correct_keys(b);
    let shared: Vec<_> = ka.keys().filter(|k| kb.contains_key(*k)).collect();
    if shared.is_empty() {
        return Err(Error::Parameter(format!(
            "response sets {} and {} share no instance keys",
            a.source, b.source
        )));
    }
    let both = shared
        .iter()
        .filter(|k| ka[**k] && kb[**k])
        .count();
    Ok(both as f64 / shared.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::response::ResponseRecord;

    fn set(source: &str, picks: &[(&str, Role)]) -> ResponseSet {
        ResponseSet {
            source: source.into(),
            records: picks
                .iter()
                .map(|(qid, role)| ResponseRecord {
                    question_id: qid.to_string(),
                    level: Level::Advanced,
                    kind: AblationKind::Full,
                    respondent: None,
                    selected: *role,
                })
                .collect(),
        }
    }

    #[test]
    fn all_a_is_hundred_percent() {
        let s = set("m", &[("q1", Role::A), ("q2", Role::A)]);
        let acc = accuracy(&[&s], &[]);
        assert_eq!(acc[&GroupKey::default()].percent(), 100.0);
    }

    #[test]
    fn half_correct_is_fifty() {
        let s = set(
            "m",
            &[("q1", Role::A), ("q2", Role::A), ("q3", Role::B), ("q4", Role::C)],
        );
        let acc = accuracy(&[&s], &[]);
        assert_eq!(acc[&GroupKey::default()].percent(), 50.0);
    }

    #[test]
    fn grouping_by_source_separates_sets() {
        let s1 = set("m1", &[("q1", Role::A)]);
        let s2 = set("m2", &[("q1", Role::B)]);
        let acc = accuracy(&[&s1, &s2], &[GroupField::Source]);
        assert_eq!(acc.len(), 2);
        let k1 = GroupKey { source: Some("m1".into()), ..Default::default() };
        assert_eq!(acc[&k1].percent(), 100.0);
    }

    #[test]
    fn choice_rates_sum_to_hundred() {
        let s = set(
            "m",
            &[("q1", Role::A), ("q2", Role::B), ("q3", Role::B), ("q4", Role::D)],
        );
        let dist = choice_distribution(&[&s], &[]);
        let rates = dist[&GroupKey::default()].percents();
        assert!((rates.iter().sum::<f64>() - 100.0).abs() < 1e-9);
        assert_eq!(rates[1], 50.0);
        assert_eq!(rates[2], 0.0);
    }

    #[test]
    fn all_a_distribution_is_degenerate() {
        let s = set("m", &[("q1", Role::A), ("q2", Role::A)]);
        let dist = choice_distribution(&[&s], &[]);
        assert_eq!(dist[&GroupKey::default()].percents(), [100.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn overlap_of_identical_and_disjoint_sets() {
        let a = set("a", &[("q1", Role::A), ("q2", Role::A)]);
        let b = set("b", &[("q1", Role::A), ("q2", Role::A)]);
        assert_eq!(guess_overlap(&a, &b).unwrap(), 1.0);
        let c = set("c", &[("q1", Role::B), ("q2", Role::B)]);
        assert_eq!(guess_overlap(&a, &c).unwrap(), 0.0);
        let half = set("h", &[("q1", Role::A), ("q2", Role::C)]);
        assert_eq!(guess_overlap(&a, &half).unwrap(), 0.5);
    }

    #[test]
    fn accuracy_is_order_invariant() {
        let mut picks = vec![("q1", Role::A), ("q2", Role::B), ("q3", Role::A)];
        let forward = accuracy(&[&set("m", &picks)], &[]);
        picks.reverse();
        let backward = accuracy(&[&set("m", &picks)], &[]);
        assert_eq!(forward, backward);
    }
}
