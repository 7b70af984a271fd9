//! Named batch experiments over the library, with deterministic
//! configuration and machine-readable reports.
//!
//! Each suite writes one JSON report (schema 1, inputs echoed, every
//! verdict with the tolerance actually used, the seed) plus CSV curves
//! into the output directory, and returns whether all verdicts passed.
//! Identical configurations produce byte-identical reports.

mod ab_clock;
mod charfun_suite;
mod equivalence_chain;
mod invsub_suite;
mod irreversibility;
mod lax_phillips;
mod weyl;

use crate::error::{OperError, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

/// The experiment suites.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SuiteName {
    Weyl,
    Charfun,
    Invsub,
    Irreversibility,
    LaxPhillips,
    AbClock,
    EquivalenceChain,
}

impl SuiteName {
    pub const ALL: [SuiteName; 7] = [
        SuiteName::Weyl,
        SuiteName::Charfun,
        SuiteName::Invsub,
        SuiteName::Irreversibility,
        SuiteName::LaxPhillips,
        SuiteName::AbClock,
        SuiteName::EquivalenceChain,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            SuiteName::Weyl => "weyl",
            SuiteName::Charfun => "charfun",
            SuiteName::Invsub => "invsub",
            SuiteName::Irreversibility => "irreversibility",
            SuiteName::LaxPhillips => "lax_phillips",
            SuiteName::AbClock => "ab_clock",
            SuiteName::EquivalenceChain => "equivalence_chain",
        }
    }
}

impl std::str::FromStr for SuiteName {
    type Err = OperError;

    fn from_str(s: &str) -> Result<Self> {
        SuiteName::ALL
            .iter()
            .copied()
            .find(|n| n.as_str() == s)
            .ok_or_else(|| OperError::InvalidInput {
                detail: format!(
                    "unknown suite '{s}'; expected one of {}",
                    SuiteName::ALL
                        .iter()
                        .map(|n| n.as_str())
                        .collect::<Vec<_>>()
                        .join(", ")
                ),
            })
    }
}

/// Configuration of one experiment run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub suite: SuiteName,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_out_dir")]
    pub out_dir: PathBuf,
    /// Primary grid size; suites pick their documented default when absent.
    #[serde(default)]
    pub grid_n: Option<usize>,
    /// Coefficient window half-width for the invariant-subspace suite.
    #[serde(default)]
    pub window_half_width: Option<usize>,
    /// Window margin for the invariant-subspace suite.
    #[serde(default)]
    pub margin: Option<usize>,
    /// Named tolerance overrides; every suite echoes the values it used.
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
}

fn default_seed() -> u64 {
    7082026
}

fn default_out_dir() -> PathBuf {
    PathBuf::from("reports")
}

impl ExperimentConfig {
    pub fn new(suite: SuiteName) -> Self {
        ExperimentConfig {
            suite,
            seed: default_seed(),
            out_dir: default_out_dir(),
            grid_n: None,
            window_half_width: None,
            margin: None,
            tolerances: BTreeMap::new(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(n) = self.grid_n {
            if n == 0 {
                return Err(OperError::InvalidInput {
                    detail: "grid_n must be positive".into(),
                });
            }
        }
        if let Some(m) = self.window_half_width {
            if m == 0 {
                return Err(OperError::InvalidInput {
                    detail: "window_half_width must be positive".into(),
                });
            }
        }
        for (name, tol) in &self.tolerances {
            if !(*tol > 0.0 && *tol < 1.0) {
                return Err(OperError::InvalidInput {
                    detail: format!("tolerance '{name}' = {tol} must lie in (0, 1)"),
                });
            }
        }
        Ok(())
    }

    pub fn tolerance(&self, name: &str, default: f64) -> f64 {
        self.tolerances.get(name).copied().unwrap_or(default)
    }

    pub fn out_path(&self, file: &str) -> PathBuf {
        self.out_dir.join(file)
    }
}

/// Outcome of one suite run.
#[derive(Debug, Clone)]
pub struct SuiteOutcome {
    pub suite: SuiteName,
    pub passed: bool,
    pub files: Vec<PathBuf>,
}

/// Run the configured suite and write its reports.
pub fn run_experiment(config: &ExperimentConfig) -> Result<SuiteOutcome> {
    config.validate()?;
    ensure_writable(&config.out_dir)?;
    let (passed, files) = match config.suite {
        SuiteName::Weyl => weyl::run(config)?,
        SuiteName::Charfun => charfun_suite::run(config)?,
        SuiteName::Invsub => invsub_suite::run(config)?,
        SuiteName::Irreversibility => irreversibility::run(config)?,
        SuiteName::LaxPhillips => lax_phillips::run(config)?,
        SuiteName::AbClock => ab_clock::run(config)?,
        SuiteName::EquivalenceChain => equivalence_chain::run(config)?,
    };
    Ok(SuiteOutcome {
        suite: config.suite,
        passed,
        files,
    })
}

fn ensure_writable(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let probe = dir.join(".write_probe");
    std::fs::write(&probe, b"ok")?;
    std::fs::remove_file(&probe)?;
    Ok(())
}
