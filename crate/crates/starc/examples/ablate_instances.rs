//! Produce the ablation grid for a corpus and stream it as NDJSON.
//!
//! ```sh
//! cargo run --example ablate_instances
//! ```

use starc::ablate::{ablate, ablation_suite, AblationKind};
use starc::corpus::model::Level;
use starc::synth::{generate, SynthProfile};

fn main() -> anyhow::Result<()> {
    let d = generate(&SynthProfile::tiny());

    // single instance, every kind
    let q = d.questions.values().next().unwrap();
    let p = d.passage(&q.article_id, q.paragraph_index, Level::Advanced).unwrap();
    for kind in AblationKind::ALL {
        let inst = ablate(q, p, kind)?;
        println!(
            "{:22} passage: {:60} question: {:?}",
            kind.name(),
            match &inst.passage {
                Some(t) if t.chars().count() > 57 =>
                    format!("{}...", t.chars().take(57).collect::<String>()),
                Some(t) => t.clone(),
                None => "(withheld)".into(),
            },
            inst.question.as_deref().map(|s| &s[..s.len().min(30)]),
        );
    }

    // the full grid, as the NDJSON records answerer backends consume
    let suite = ablation_suite(
        &d,
        &[AblationKind::Full, AblationKind::NoPassage, AblationKind::OnlyCriticalSpan],
        &[Level::Elementary, Level::Advanced],
    )?;
    println!("\nsuite: {} instances; first two records:", suite.len());
    let mut buf = Vec::new();
    starc::ablate::write_ndjson(&suite[..2], &mut buf)?;
    print!("{}", String::from_utf8(buf)?);
    Ok(())
}
