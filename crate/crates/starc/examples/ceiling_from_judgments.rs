//! Turn question-validity judgments into a consensus-invalid rate and an
//! approximate performance ceiling.
//!
//! ```sh
//! cargo run --example ceiling_from_judgments
//! ```

use starc::corpus::model::Role;
use starc::stats::ceiling::{
    approximate_ceiling, consensus_invalid_rate, InvalidPolicy, ValidityJudgment, Verdict,
};

fn judge(qid: &str, resp: &str, verdict: Verdict) -> ValidityJudgment {
    ValidityJudgment {
        question_id: qid.into(),
        respondent: resp.into(),
        verdict,
    }
}

fn main() -> anyhow::Result<()> {
    // four questions, three judges each: two clean, one contested, one
    // unanimously broken
    let mut judgments = Vec::new();
    for q in ["q1", "q2"] {
        for r in ["r1", "r2", "r3"] {
            judgments.push(judge(q, r, Verdict::OneCorrect(Role::A)));
        }
    }
    judgments.push(judge("q3", "r1", Verdict::OneCorrect(Role::A)));
    judgments.push(judge("q3", "r2", Verdict::Multiple([Role::A, Role::B].into_iter().collect())));
    judgments.push(judge("q3", "r3", Verdict::Multiple([Role::A, Role::C].into_iter().collect())));
    for r in ["r1", "r2", "r3"] {
        judgments.push(judge("q4", r, Verdict::NoneCorrect));
    }

    let invalid = consensus_invalid_rate(&judgments, 3)?;
    println!("consensus-invalid rate: {:.1}%", 100.0 * invalid);

    for policy in [InvalidPolicy::Unanimous, InvalidPolicy::Majority] {
        let ceiling = approximate_ceiling(&judgments, policy)?;
        println!("approximate ceiling ({policy:?}): {ceiling:.1}");
    }
    Ok(())
}
