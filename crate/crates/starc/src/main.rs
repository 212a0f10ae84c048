//! Thin command-line front end over the library.
//!
//! Exit codes: 0 ok, 1 findings or operational failure, 2 usage error.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use starc::ablate::{ablation_suite, write_ndjson, AblationKind};
use starc::corpus::{parse_dataset_file, Dataset, DatasetFormat, Level};
use starc::lint::{lint_dataset, LintConfig};
use starc::pilot::{compute_pilot_stats, latin_square_lists, pilot_flags, verify_balance};
use starc::probe::{run_probe, BackendSpec, ProbeConfig};
use starc::report::readability_table;
use starc::stats::ceiling::{approximate_ceiling, consensus_invalid_rate, InvalidPolicy};
use starc::stats::readability::readability;
use starc::stats::response::{read_judgments, read_responses};

/// Environment variable that overrides the URL of any `http:` backend.
const BACKEND_ENV: &str = "STARC_BACKEND";

#[derive(Parser)]
#[command(name = "starc", version, about = "Validate, lint and probe span-annotated multiple-choice reading comprehension datasets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Json,
    Table,
}

#[derive(Args)]
struct Common {
    /// Output format.
    #[arg(long, value_enum, default_value = "table")]
    format: OutputFormat,
    /// Seed for any randomized step (permutations, guessing, shuffles).
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a dataset file and report its shape.
    Validate {
        path: PathBuf,
        /// Input format; detected from the file when omitted.
        #[arg(long)]
        input_format: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Check a dataset against the authoring rules.
    Lint {
        path: PathBuf,
        /// Force span-annotated mode on or off (default: infer).
        #[arg(long)]
        starc_mode: Option<bool>,
        /// Rule ids to suppress, comma separated (e.g. R2,R7).
        #[arg(long, value_delimiter = ',')]
        suppress: Vec<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Emit ablated instances as newline-delimited JSON.
    Ablate {
        path: PathBuf,
        /// Ablation kinds, comma separated (default: all applicable).
        #[arg(long, value_delimiter = ',')]
        kind: Vec<String>,
        /// Levels, comma separated (default: all present).
        #[arg(long, value_delimiter = ',')]
        level: Vec<String>,
        /// Output file (stdout when omitted).
        #[arg(short, long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Run answerer backends over the ablation grid and report the quality grid.
    Probe {
        path: PathBuf,
        /// Probe configuration file (JSON); flags given on the command
        /// line override its fields.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Backends: random, sliding-window[:cv|:w=N], span-oracle,
        /// http:<url>, subprocess:<command> (repeatable).
        #[arg(long = "backend", required_unless_present = "config")]
        backends: Vec<String>,
        #[arg(long, value_delimiter = ',')]
        kind: Vec<String>,
        #[arg(long, value_delimiter = ',')]
        level: Vec<String>,
        /// Cross-validation folds for window tuning (by article).
        #[arg(long)]
        folds: Option<usize>,
        /// Window candidates for tuning, comma separated.
        #[arg(long, value_delimiter = ',')]
        windows: Vec<usize>,
        /// Fail on the first backend error instead of marking cells NA.
        #[arg(long)]
        strict: bool,
        /// HTTP timeout in seconds.
        #[arg(long)]
        timeout: Option<u64>,
        /// Output format.
        #[arg(long, value_enum, default_value = "table")]
        format: OutputFormat,
        /// Seed for permutations and guessing.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Approximate ceiling and consensus-invalid rate from validity judgments.
    Ceiling {
        /// Judgments file (CSV or JSON rows with experiment=judge).
        path: PathBuf,
        /// What makes a question invalid for the ceiling score.
        #[arg(long, default_value = "unanimous")]
        policy: String,
        /// Expected judgments per question for the consensus rate.
        #[arg(long, default_value_t = 3)]
        judges: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Generate the six balanced pilot lists for a dataset's paragraphs.
    PilotLists {
        path: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Evaluate the pilot flagging criteria on pilot response data.
    PilotFlags {
        /// Responses file with guess (pre) and qa (post) rows.
        path: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Corpus readability statistics per level.
    Stats {
        path: PathBuf,
        #[arg(long, value_delimiter = ',')]
        level: Vec<String>,
        #[command(flatten)]
        common: Common,
    },
}

fn parse_levels(names: &[String], d: &Dataset) -> Result<Vec<Level>> {
    if names.is_empty() {
        return Ok(d.levels());
    }
    names
        .iter()
        .map(|n| Level::parse_key(n).ok_or_else(|| usage(format!("unknown level {n:?}"))))
        .collect()
}

fn parse_kinds(names: &[String], d: &Dataset) -> Result<Vec<AblationKind>> {
    if names.is_empty() {
        return Ok(if d.is_span_annotated() {
            AblationKind::ALL.to_vec()
        } else {
            AblationKind::FULL_COMPONENT.to_vec()
        });
    }
    names
        .iter()
        .map(|n| {
            AblationKind::parse_name(n).ok_or_else(|| usage(format!("unknown ablation kind {n:?}")))
        })
        .collect()
}

fn parse_backend(spec: &str) -> Result<BackendSpec> {
    let endpoint_override = std::env::var(BACKEND_ENV).ok();
    if spec == "random" {
        return Ok(BackendSpec::Random);
    }
    if spec == "span-oracle" {
        return Ok(BackendSpec::SpanOracle);
    }
    if spec == "sliding-window" {
        return Ok(BackendSpec::SlidingWindow { window: None, tune: false });
    }
    if spec == "sliding-window:cv" {
        return Ok(BackendSpec::SlidingWindow { window: None, tune: true });
    }
    if let Some(w) = spec.strip_prefix("sliding-window:w=") {
        let window: usize = w
            .parse()
            .map_err(|_| usage(format!("bad window in backend spec {spec:?}")))?;
        return Ok(BackendSpec::SlidingWindow { window: Some(window), tune: false });
    }
    if let Some(url) = spec.strip_prefix("http:") {
        let url = endpoint_override.unwrap_or_else(|| {
            if url.starts_with("//") {
                format!("http:{url}")
            } else {
                url.to_string()
            }
        });
        return Ok(BackendSpec::Http { url });
    }
    if let Some(cmd) = spec.strip_prefix("subprocess:") {
        let mut parts = cmd.split_whitespace().map(str::to_string);
        let command = parts
            .next()
            .ok_or_else(|| usage("empty subprocess backend command"))?;
        return Ok(BackendSpec::Subprocess { command, args: parts.collect() });
    }
    Err(usage(format!("unknown backend spec {spec:?}")))
}

fn parse_input_format(name: &Option<String>) -> Result<Option<DatasetFormat>> {
    match name.as_deref() {
        None => Ok(None),
        Some("starc-json") => Ok(Some(DatasetFormat::StarcJson)),
        Some("plain-mcq-json") => Ok(Some(DatasetFormat::PlainMcqJson)),
        Some(other) => Err(usage(format!("unknown input format {other:?}"))),
    }
}

/// Marker for exit-code-2 errors.
fn usage(msg: impl std::fmt::Display) -> anyhow::Error {
    anyhow!("usage: {msg}")
}

fn write_output(out: &Option<PathBuf>, content: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, content).with_context(|| format!("writing {path:?}")),
        None => {
            std::io::stdout().write_all(content.as_bytes())?;
            Ok(())
        }
    }
}

/// Returns the process exit code.
fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Validate { path, input_format, common } => {
            let format = parse_input_format(&input_format)?;
            let d = parse_dataset_file(&path, format)?;
            let levels = d.levels();
            let per_level: Vec<(String, usize)> = levels
                .iter()
                .map(|l| {
                    (
                        l.key().to_string(),
                        d.passages.keys().filter(|k| k.level == *l).count(),
                    )
                })
                .collect();
            match common.format {
                OutputFormat::Json => {
                    let summary = serde_json::json!({
                        "name": d.name,
                        "valid": true,
                        "passages": d.passages.len(),
                        "paragraphs_per_level": per_level.iter().cloned().collect::<std::collections::BTreeMap<_,_>>(),
                        "questions": d.questions.len(),
                        "span_annotated": d.is_span_annotated(),
                    });
                    println!("{}", serde_json::to_string_pretty(&summary)?);
                }
                OutputFormat::Table => {
                    println!("dataset {} is valid", d.name);
                    for (level, count) in &per_level {
                        println!("  {level}: {count} paragraphs");
                    }
                    println!("  questions: {}", d.questions.len());
                    println!("  span annotated: {}", d.is_span_annotated());
                }
            }
            Ok(0)
        }
        Command::Lint { path, starc_mode, suppress, common } => {
            let d = parse_dataset_file(&path, None)?;
            let config = LintConfig {
                starc_mode,
                suppress: suppress.into_iter().collect(),
                ..LintConfig::default()
            };
            let report = lint_dataset(&d, &config)?;
            match common.format {
                OutputFormat::Json => println!("{}", serde_json::to_string_pretty(&report)?),
                OutputFormat::Table => print!("{}", report.to_table()),
            }
            Ok(if report.has_errors() { 1 } else { 0 })
        }
        Command::Ablate { path, kind, level, out, common: _ } => {
            let d = parse_dataset_file(&path, None)?;
            let kinds = parse_kinds(&kind, &d)?;
            let levels = parse_levels(&level, &d)?;
            let suite = ablation_suite(&d, &kinds, &levels)?;
            let mut buf = Vec::new();
            write_ndjson(&suite, &mut buf)?;
            write_output(&out, std::str::from_utf8(&buf)?)?;
            Ok(0)
        }
        Command::Probe {
            path,
            config,
            backends,
            kind,
            level,
            folds,
            windows,
            strict,
            timeout,
            format,
            seed,
        } => {
            let d = parse_dataset_file(&path, None)?;
            let mut probe_config = match &config {
                Some(cfg_path) => {
                    let raw = std::fs::read_to_string(cfg_path)
                        .with_context(|| format!("reading {cfg_path:?}"))?;
                    serde_json::from_str::<ProbeConfig>(&raw)
                        .map_err(|e| usage(format!("bad probe config: {e}")))?
                }
                None => ProbeConfig::new(vec![], vec![], vec![]),
            };
            if !kind.is_empty() {
                probe_config.kinds = parse_kinds(&kind, &d)?;
            } else if probe_config.kinds.is_empty() {
                probe_config.kinds = parse_kinds(&[], &d)?;
            }
            if !level.is_empty() {
                probe_config.levels = parse_levels(&level, &d)?;
            } else if probe_config.levels.is_empty() {
                probe_config.levels = parse_levels(&[], &d)?;
            }
            if !backends.is_empty() {
                probe_config.backends = backends
                    .iter()
                    .map(|s| parse_backend(s))
                    .collect::<Result<Vec<_>>>()?;
            }
            if probe_config.backends.is_empty() {
                return Err(usage("no backends given (flag --backend or config file)"));
            }
            if let Some(seed) = seed {
                probe_config.seed = seed;
            }
            if let Some(folds) = folds {
                probe_config.cv_folds = folds;
            }
            if let Some(timeout) = timeout {
                probe_config.timeout_secs = timeout;
            }
            if strict {
                probe_config.strict = true;
            }
            if !windows.is_empty() {
                probe_config.window_candidates = windows;
            }
            let report = run_probe(&d, &probe_config)?;
            match format {
                OutputFormat::Json => print!("{}", report.to_json()),
                OutputFormat::Table => print!("{}", report.to_table()),
            }
            Ok(if report.failures.is_empty() { 0 } else { 1 })
        }
        Command::Ceiling { path, policy, judges, common } => {
            let policy = match policy.as_str() {
                "unanimous" => InvalidPolicy::Unanimous,
                "majority" => InvalidPolicy::Majority,
                other => return Err(usage(format!("unknown policy {other:?}"))),
            };
            let judgments = read_judgments(&path)?;
            let ceiling = approximate_ceiling(&judgments, policy)?;
            let invalid = consensus_invalid_rate(&judgments, judges)?;
            match common.format {
                OutputFormat::Json => {
                    let summary = serde_json::json!({
                        "questions": judgments.len() / judges.max(1),
                        "judgments": judgments.len(),
                        "approximate_ceiling": ceiling,
                        "consensus_invalid_rate": invalid,
                        "policy": policy,
                    });
                    println!("{}", serde_json::to_string_pretty(&summary)?);
                }
                OutputFormat::Table => {
                    println!("judgments: {}", judgments.len());
                    println!("approximate ceiling: {ceiling:.1}");
                    println!("consensus invalid: {:.1}%", 100.0 * invalid);
                }
            }
            Ok(0)
        }
        Command::PilotLists { path, out, common } => {
            let d = parse_dataset_file(&path, None)?;
            let mut ids: Vec<String> = d
                .passages
                .keys()
                .map(|k| format!("{}#{}", k.article_id, k.paragraph_index))
                .collect();
            ids.dedup();
            let lists = latin_square_lists(&ids, 6, common.seed)?;
            verify_balance(&lists, &ids)?;
            let mut json = serde_json::to_string_pretty(&lists)?;
            json.push('\n');
            write_output(&out, &json)?;
            Ok(0)
        }
        Command::PilotFlags { path, common } => {
            let pre = read_responses(&path, "guess", "pilot-pre")?;
            let post = read_responses(&path, "qa", "pilot-post")?;
            let stats = compute_pilot_stats(&pre, &post)?;
            let mut all_flags = Vec::new();
            for s in &stats {
                all_flags.extend(pilot_flags(s)?);
            }
            match common.format {
                OutputFormat::Json => println!("{}", serde_json::to_string_pretty(&all_flags)?),
                OutputFormat::Table => {
                    if all_flags.is_empty() {
                        println!("no flags over {} questions", stats.len());
                    }
                    for f in &all_flags {
                        println!("{}  {:?}  {:.2}", f.question_id, f.criterion, f.value);
                    }
                }
            }
            Ok(if all_flags.is_empty() { 0 } else { 1 })
        }
        Command::Stats { path, level, common } => {
            let d = parse_dataset_file(&path, None)?;
            let levels = parse_levels(&level, &d)?;
            let mut rows = Vec::new();
            for l in levels {
                let passages: Vec<_> = d.passages.values().filter(|p| p.level == l).collect();
                if passages.is_empty() {
                    continue;
                }
                rows.push((l.key().to_string(), readability(&passages)?));
            }
            match common.format {
                OutputFormat::Json => {
                    let map: std::collections::BTreeMap<_, _> = rows.into_iter().collect();
                    println!("{}", serde_json::to_string_pretty(&map)?);
                }
                OutputFormat::Table => print!("{}", readability_table(&rows)),
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.to_string().starts_with("usage:") {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
