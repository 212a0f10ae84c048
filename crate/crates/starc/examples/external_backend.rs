//! Drive an out-of-process answerer over the line protocol.
//!
//! The example spawns itself as the backend child: run with
//! `STARC_EXAMPLE_ROLE=backend` it reads request records from stdin and
//! writes score records to stdout, one JSON object per line. Any program in
//! any language that speaks this protocol can sit on the other side; the
//! same record shape is accepted at the HTTP POST endpoint backend.
//!
//! ```sh
//! cargo run --example external_backend
//! ```

use std::io::BufRead;

use starc::ablate::AblationKind;
use starc::answer::external::{WireRequest, WireResponse};
use starc::corpus::model::Level;
use starc::probe::{run_probe, BackendSpec, ProbeConfig};
use starc::synth::{generate, SynthProfile};

/// Child mode: score options by naive overlap with the passage text.
fn run_backend() -> anyhow::Result<()> {
    let stdin = std::io::stdin();
    for line in stdin.lock().lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let req: WireRequest = serde_json::from_str(&line)?;
        let passage = req.passage.unwrap_or_default().to_lowercase();
        let scores: Vec<f64> = req
            .options
            .iter()
            .map(|opt| {
                opt.to_lowercase()
                    .split_whitespace()
                    .filter(|w| passage.contains(*w))
                    .count() as f64
            })
            .collect();
        let resp = WireResponse {
            id: req.id,
            scores: Some(scores),
            choice: None,
        };
        println!("{}", serde_json::to_string(&resp)?);
    }
    Ok(())
}

fn main() -> anyhow::Result<()> {
    if std::env::var("STARC_EXAMPLE_ROLE").as_deref() == Ok("backend") {
        return run_backend();
    }

    let me = std::env::current_exe()?;
    std::env::set_var("STARC_EXAMPLE_ROLE", "backend");
    let d = generate(&SynthProfile::tiny());
    let config = ProbeConfig::new(
        vec![AblationKind::Full, AblationKind::NoPassage],
        vec![Level::Advanced],
        vec![BackendSpec::Subprocess {
            command: me.to_string_lossy().into_owned(),
            args: vec![],
        }],
    );
    let report = run_probe(&d, &config)?;
    print!("{}", report.to_table());
    Ok(())
}
