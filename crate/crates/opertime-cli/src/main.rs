//! Batch experiment runner: loads a JSON configuration, runs the named
//! suite, writes its reports, and exits 0 on pass, 1 on verdict failure,
//! 2 on configuration or usage errors.

use clap::Parser;
use opertime::suites::{run_experiment, ExperimentConfig, SuiteName};
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

#[derive(Parser)]
#[command(
    name = "opertime",
    version,
    about = "Run named operator-theory experiment suites and write JSON/CSV reports"
)]
struct Cli {
    /// JSON experiment configuration file.
    #[arg(long)]
    config: Option<PathBuf>,

    /// Suite name (overrides the config): weyl, charfun, invsub,
    /// irreversibility, lax_phillips, ab_clock, equivalence_chain.
    #[arg(long)]
    suite: Option<String>,

    /// Output directory for reports (overrides the config).
    #[arg(long)]
    out: Option<PathBuf>,

    /// Seed for the deterministic random draws (overrides the config).
    #[arg(long)]
    seed: Option<u64>,
}

fn build_config(cli: &Cli) -> Result<ExperimentConfig, String> {
    let mut config = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
            serde_json::from_str::<ExperimentConfig>(&text)
                .map_err(|e| format!("invalid config {}: {e}", path.display()))?
        }
        None => {
            let suite_str = cli
                .suite
                .as_deref()
                .ok_or_else(|| usage_text("missing --config or --suite"))?;
            let suite = SuiteName::from_str(suite_str).map_err(|e| usage_text(&e.to_string()))?;
            ExperimentConfig::new(suite)
        }
    };
    if let Some(suite_str) = &cli.suite {
        config.suite = SuiteName::from_str(suite_str).map_err(|e| usage_text(&e.to_string()))?;
    }
    if let Some(out) = &cli.out {
        config.out_dir = out.clone();
    }
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    config.validate().map_err(|e| e.to_string())?;
    Ok(config)
}

fn usage_text(problem: &str) -> String {
    format!(
        "{problem}\n\nusage: opertime --suite <name> [--out <dir>] [--seed <u64>]\n\
         \x20      opertime --config <path.json> [--suite <name>] [--out <dir>] [--seed <u64>]\n\
         suites: weyl, charfun, invsub, irreversibility, lax_phillips, ab_clock, equivalence_chain"
    )
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = match build_config(&cli) {
        Ok(c) => c,
        Err(msg) => {
            eprintln!("{msg}");
            return ExitCode::from(2);
        }
    };
    match run_experiment(&config) {
        Ok(outcome) => {
            for file in &outcome.files {
                println!("wrote {}", file.display());
            }
            if outcome.passed {
                println!("suite {}: PASS", outcome.suite.as_str());
                ExitCode::SUCCESS
            } else {
                println!("suite {}: FAIL", outcome.suite.as_str());
                ExitCode::from(1)
            }
        }
        Err(err) => {
            eprintln!("suite {} failed to run: {err}", config.suite.as_str());
            ExitCode::from(2)
        }
    }
}
