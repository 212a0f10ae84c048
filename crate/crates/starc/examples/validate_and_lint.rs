//! Parse a dataset file, validate it, and run the authoring-rule linter.
//!
//! ```sh
//! cargo run --example validate_and_lint [path/to/dataset.json]
//! ```
//!
//! Without an argument, a small synthetic corpus is generated, written to a
//! temp file and used as the input.

use starc::corpus::{parse_dataset_file, serialize_dataset, DatasetFormat};
use starc::lint::{lint_dataset, LintConfig};
use starc::synth::{generate, SynthProfile};

fn main() -> anyhow::Result<()> {
    let arg = std::env::args().nth(1);
    let (path, _guard) = match arg {
        Some(p) => (std::path::PathBuf::from(p), None),
        None => {
            let dir = tempfile::tempdir()?;
            let path = dir.path().join("demo.json");
            let d = generate(&SynthProfile::tiny());
            std::fs::write(&path, serialize_dataset(&d, DatasetFormat::StarcJson)?)?;
            println!("wrote demo corpus to {}", path.display());
            (path, Some(dir))
        }
    };

    let dataset = parse_dataset_file(&path, None)?;
    println!(
        "parsed {}: {} passages, {} questions, span annotated: {}",
        dataset.name,
        dataset.passages.len(),
        dataset.questions.len(),
        dataset.is_span_annotated()
    );

    let report = lint_dataset(&dataset, &LintConfig::default())?;
    print!("{}", report.to_table());

    // individual rules can be suppressed
    let mut relaxed = LintConfig::default();
    relaxed.suppress.insert("R7".into());
    let relaxed_report = lint_dataset(&dataset, &relaxed)?;
    println!(
        "with R7 suppressed: {} findings",
        relaxed_report.findings.len()
    );
    Ok(())
}
