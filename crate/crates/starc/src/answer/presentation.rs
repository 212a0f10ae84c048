//! Answer-order permutation and the backend choice record.
//!
//! Permuting the presented answer order prevents backends from exploiting
//! position bias (and exposes it when they have one). The permutation is
//! derived deterministically from the run seed and the instance id, so a
//! suite can be re-presented identically regardless of iteration order.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::ablate::{AblatedInstance, AblationKind};
use crate::corpus::model::{Level, Role};

/// Stable per-instance RNG: mixes the run seed with the instance id.
pub(crate) fn instance_rng(seed: u64, instance_id: &str) -> ChaCha8Rng {
    // FNV-1a over the id, folded into the run seed
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in instance_id.as_bytes() {
        h ^= u64::from(*b);
        h = h.wrapping_mul(0x100_0000_01b3);
    }
    ChaCha8Rng::seed_from_u64(seed ^ h)
}

/// An ablated instance with its answers arranged in presented order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Presentation {
    pub instance_id: String,
    pub question_id: String,
    pub level: Level,
    pub kind: AblationKind,
    pub passage: Option<String>,
    pub question: Option<String>,
    /// `options[pos]` is the answer text shown at position `pos`.
    pub options: [String; 4],
    /// `permutation[role.index()]` is the presented position of that role.
    pub permutation: [usize; 4],
    pub seed: u64,
}

impl Presentation {
    /// Shuffle the answers of `inst` with the deterministic per-instance RNG.
    pub fn new(inst: &AblatedInstance, seed: u64) -> Self {
        let mut positions = [0usize, 1, 2, 3];
        positions.shuffle(&mut instance_rng(seed, &inst.instance_id()));
        Self::with_permutation(inst, positions, seed)
    }

    /// Present answers in role order (A at position 0). Useful for tests
    /// and for backends that are provably order-invariant.
    pub fn identity(inst: &AblatedInstance, seed: u64) -> Self {
        Self::with_permutation(inst, [0, 1, 2, 3], seed)
    }

    pub fn with_permutation(inst: &AblatedInstance, permutation: [usize; 4], seed: u64) -> Self {
        let mut options: [String; 4] = Default::default();
        for role in Role::ALL {
            options[permutation[role.index()]] = inst.answer(role).to_string();
        }
        Presentation {
            instance_id: inst.instance_id(),
            question_id: inst.question_id.clone(),
            level: inst.level,
            kind: inst.kind,
            passage: inst.passage.clone(),
            question: inst.question.clone(),
            options,
            permutation,
            seed,
        }
    }

    /// Role shown at presented position `pos`.
    pub fn role_at(&self, pos: usize) -> Role {
        for role in Role::ALL {
            if self.permutation[role.index()] == pos {
                return role;
            }
        }
        unreachable!("permutation is a bijection over 0..4")
    }

    pub fn position_of(&self, role: Role) -> usize {
        self.permutation[role.index()]
    }

    /// Build a choice from a selected position.
    pub fn choice_at(&self, selected: usize, scores: Option<[f64; 4]>, tie: bool) -> Choice {
        Choice {
            instance_id: self.instance_id.clone(),
            question_id: self.question_id.clone(),
            level: self.level,
            kind: self.kind,
            scores,
            selected,
            mapped_role: self.role_at(selected),
            tie,
        }
    }

    /// Build a choice from per-position scores: argmax, ties broken by the
    /// lowest position with the tie flag set.
    pub fn choice_from_scores(&self, scores: [f64; 4]) -> Choice {
        let (selected, tie) = argmax_with_tie(&scores);
        self.choice_at(selected, Some(scores), tie)
    }
}

pub(crate) fn argmax_with_tie(scores: &[f64; 4]) -> (usize, bool) {
    let mut best = 0usize;
    for i in 1..4 {
        if scores[i] > scores[best] {
            best = i;
        }
    }
    let tie = scores.iter().filter(|s| **s == scores[best]).count() > 1;
    (best, tie)
}

/// One backend decision for one presented instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Choice {
    pub instance_id: String,
    pub question_id: String,
    pub level: Level,
    pub kind: AblationKind,
    /// Scores by presented position, when the backend produced any.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scores: Option<[f64; 4]>,
    /// Selected presented position.
    pub selected: usize,
    /// The role that position carried.
    pub mapped_role: Role,
    /// Set when the selection was an argmax tie broken by position.
    pub tie: bool,
}

impl Choice {
    pub fn is_correct(&self) -> bool {
        self.mapped_role == Role::A
    }
}
