//! Machine-readable verification outcome.
//!
//! The JSON schema is pinned: `{identity, mode, outcome, path,
//! certificate_entries, residual_terms, trials, seed, elapsed_ms,
//! engine_config, notes, failures}`. Fields are only ever added, never
//! renamed. Failures always carry the offending residual or nonzero trial
//! value verbatim.

use serde::{Deserialize, Serialize};

use crate::config::EngineConfig;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Fail,
    Error,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Path {
    SyntacticZero,
    Certificate,
    Numeric,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Report {
    pub identity: String,
    pub mode: String,
    pub outcome: Outcome,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<Path>,
    pub certificate_entries: usize,
    pub residual_terms: usize,
    pub trials: usize,
    pub seed: u64,
    /// Zeroed when the run asks for stable output (report determinism).
    pub elapsed_ms: u128,
    pub engine_config: EngineConfig,
    /// Transcription caveats attached by the tensor library, e.g. when the
    /// four-point genus-1 tensor with its repaired slot symbol is used.
    pub notes: Vec<String>,
    /// Residuals or nonzero trial values, verbatim.
    pub failures: Vec<String>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.outcome == Outcome::Pass
    }
}
