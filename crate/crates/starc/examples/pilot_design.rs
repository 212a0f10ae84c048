//! Build the six counterbalanced pilot lists for a paragraph set and apply
//! the flagging thresholds to pilot results.
//!
//! ```sh
//! cargo run --example pilot_design
//! ```

use std::collections::BTreeMap;

use starc::corpus::model::Level;
use starc::pilot::{latin_square_lists, pilot_flags, verify_balance, QuestionPilotStats};

fn main() -> anyhow::Result<()> {
    let paragraph_ids: Vec<String> = (0..8).map(|i| format!("art00#{i}")).collect();
    let lists = latin_square_lists(&paragraph_ids, 6, 42)?;
    verify_balance(&lists, &paragraph_ids)?;
    for list in &lists.lists {
        let head: Vec<String> = list
            .trials
            .iter()
            .take(4)
            .map(|t| format!("{} q{}@{}", t.paragraph_id, t.condition.question_index, t.condition.level))
            .collect();
        println!("list {} (shuffle seed {}): {} ...", list.index, list.shuffle_seed, head.join(", "));
    }

    // flagging: a guessable question and a level-skewed one
    let stats = [
        QuestionPilotStats {
            question_id: "art00#0-q1".into(),
            pre_rate_a: 0.72,
            post_rates: [0.80, 0.10, 0.05, 0.05],
            post_rate_a_by_level: BTreeMap::new(),
        },
        QuestionPilotStats {
            question_id: "art00#0-q2".into(),
            pre_rate_a: 0.30,
            post_rates: [0.70, 0.12, 0.10, 0.08],
            post_rate_a_by_level: [(Level::Elementary, 0.92), (Level::Advanced, 0.48)]
                .into_iter()
                .collect(),
        },
    ];
    for s in &stats {
        for flag in pilot_flags(s)? {
            println!("{}: {:?} ({:.2})", flag.question_id, flag.criterion, flag.value);
        }
    }
    Ok(())
}
