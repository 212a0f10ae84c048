//! Run the lexical sliding-window baseline, including cross-validated
//! window tuning by article.
//!
//! ```sh
//! cargo run --release --example sliding_window_baseline
//! ```

use starc::ablate::{ablation_suite, AblationKind};
use starc::answer::presentation::Presentation;
use starc::answer::sliding_window::{sliding_window_answer, tune_window};
use starc::corpus::model::Level;
use starc::probe::{run_probe, BackendSpec, ProbeConfig};
use starc::synth::{generate, SynthProfile};

fn main() -> anyhow::Result<()> {
    let d = generate(&SynthProfile::tiny());

    // score one instance by hand to see the moving parts
    let suite = ablation_suite(&d, &[AblationKind::Full], &[Level::Advanced])?;
    let pres = Presentation::new(&suite[0], 1);
    let choice = sliding_window_answer(&pres, None)?;
    println!(
        "instance {}: selected position {} -> role {} (scores {:?})",
        pres.instance_id,
        choice.selected,
        choice.mapped_role,
        choice.scores.map(|s| s.map(|v| (v * 100.0).round() / 100.0)),
    );

    // tune the window on the same data
    let presentations: Vec<Presentation> =
        suite.iter().map(|i| Presentation::new(i, 1)).collect();
    let best = tune_window(&presentations, &[3, 5, 8, 13])?;
    println!("tuned window over {} instances: {best}", presentations.len());

    // full cross-validated run at benchmark scale
    let bench = generate(&SynthProfile::one_stop_scale());
    let config = ProbeConfig::new(
        vec![AblationKind::Full],
        Level::LEVELED.to_vec(),
        vec![BackendSpec::SlidingWindow { window: None, tune: true }],
    );
    let report = run_probe(&bench, &config)?;
    print!("{}", report.to_table());
    Ok(())
}
