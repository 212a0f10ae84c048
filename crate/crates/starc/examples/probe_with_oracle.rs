//! Probe a corpus with the span-oracle and random backends and print the
//! ablation quality grid.
//!
//! The span-oracle row is the annotation-quality signature: near-perfect
//! accuracy wherever the critical span survives the ablation, chance where
//! it does not. A corpus whose oracle rows do not show this split has spans
//! that fail to carry the answer-critical information.
//!
//! ```sh
//! cargo run --release --example probe_with_oracle
//! ```

use starc::ablate::AblationKind;
use starc::corpus::model::Level;
use starc::probe::{run_probe, BackendSpec, ProbeConfig};
use starc::synth::{generate, SynthProfile};

fn main() -> anyhow::Result<()> {
    let d = generate(&SynthProfile::one_stop_scale());
    let mut config = ProbeConfig::new(
        vec![
            AblationKind::Full,
            AblationKind::NoPassage,
            AblationKind::NoQuestion,
            AblationKind::NoQuestionNoPassage,
            AblationKind::OnlyCriticalSpan,
            AblationKind::NoDistractorSpan,
            AblationKind::NoCriticalSpan,
        ],
        Level::LEVELED.to_vec(),
        vec![BackendSpec::SpanOracle, BackendSpec::Random],
    );
    config.seed = 7;
    let report = run_probe(&d, &config)?;
    print!("{}", report.to_table());
    Ok(())
}
