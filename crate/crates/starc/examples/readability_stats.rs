//! Per-level corpus readability: word and sentence counts, Flesch-Kincaid
//! grade and SMOG.
//!
//! ```sh
//! cargo run --example readability_stats
//! ```

use starc::corpus::model::Level;
use starc::report::readability_table;
use starc::stats::readability::{readability, syllables};
use starc::synth::{generate, SynthProfile};

fn main() -> anyhow::Result<()> {
    for word in ["go", "water", "important", "calendar"] {
        println!("syllables({word}) = {}", syllables(word));
    }
    println!();

    let d = generate(&SynthProfile::one_stop_scale());
    let mut rows = Vec::new();
    for level in Level::LEVELED {
        let passages: Vec<_> = d.passages.values().filter(|p| p.level == level).collect();
        rows.push((level.key().to_string(), readability(&passages)?));
    }
    print!("{}", readability_table(&rows));
    Ok(())
}
