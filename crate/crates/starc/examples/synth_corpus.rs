//! Generate the benchmark-scale synthetic corpus and write it as
//! starc-json.
//!
//! ```sh
//! cargo run --example synth_corpus [out.json]
//! ```

use starc::corpus::{serialize_dataset, DatasetFormat};
use starc::synth::{generate, SynthProfile};

fn main() -> anyhow::Result<()> {
    let profile = SynthProfile::one_stop_scale();
    let d = generate(&profile);
    println!(
        "generated {}: {} articles, {} passages across {:?}, {} questions",
        d.name,
        d.article_ids().len(),
        d.passages.len(),
        d.levels(),
        d.questions.len()
    );
    let json = serialize_dataset(&d, DatasetFormat::StarcJson)?;
    match std::env::args().nth(1) {
        Some(path) => {
            std::fs::write(&path, &json)?;
            println!("wrote {} bytes to {path}", json.len());
        }
        None => println!("pass an output path to write the corpus ({} bytes)", json.len()),
    }
    Ok(())
}
