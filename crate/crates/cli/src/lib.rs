//! Manifest-driven front end for the `modpoisson` library.
//!
//! A manifest describes a chart, a Poisson structure and whichever optional
//! blocks a subcommand needs; [`run`] evaluates one subcommand and returns a
//! [`Report`] together with the process exit code.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Serialize;
use thiserror::Error;

mod commands;
pub mod fixtures;
pub mod manifest;

pub use manifest::{Effective, Manifest};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Subcommands, in the order they are documented.
pub const COMMANDS: [&str; 12] = [
    "jacobi",
    "modular",
    "ham-witness",
    "check-map",
    "map-modular",
    "path-integral",
    "character",
    "rel-modular",
    "holonomy",
    "quotient",
    "moment-check",
    "ham-quotient",
];

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Io(String),
    #[error("manifest is not valid JSON: {0}")]
    Json(String),
    #[error("manifest block `{0}` is required by this subcommand")]
    Missing(String),
    #[error("{field}: {source}")]
    Field { field: String, source: modpoisson::Error },
    #[error("unknown subcommand `{0}`")]
    UnknownCommand(String),
    #[error(transparent)]
    Lib(#[from] modpoisson::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub verdict: Verdict,
    pub residuals: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub witness: BTreeMap<String, String>,
    pub tolerances: Effective,
    pub seed: u64,
    pub version: String,
}

impl Report {
    pub(crate) fn new(command: &str, tol: &Effective) -> Self {
        Report {
            command: command.to_string(),
            verdict: Verdict::Pass,
            residuals: BTreeMap::new(),
            witness: BTreeMap::new(),
            tolerances: *tol,
            seed: tol.seed,
            version: VERSION.to_string(),
        }
    }

    pub(crate) fn residual(&mut self, name: &str, v: f64) -> &mut Self {
        self.residuals.insert(name.to_string(), v);
        self
    }

    pub(crate) fn witness(&mut self, name: &str, v: impl ToString) -> &mut Self {
        self.witness.insert(name.to_string(), v.to_string());
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    /// A short human-readable rendering.
    pub fn to_text(&self) -> String {
        let verdict = match self.verdict {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Inconclusive => "inconclusive",
        };
        let mut out = format!("{}: {verdict}\n", self.command);
        for (k, v) in &self.residuals {
            out.push_str(&format!("  {k} = {v:.6e}\n"));
        }
        for (k, v) in &self.witness {
            out.push_str(&format!("  {k}: {v}\n"));
        }
        out
    }
}

/// Command-line overrides of the manifest tolerances.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Flags {
    pub tol: Option<f64>,
    pub trials: Option<usize>,
    pub seed: Option<u64>,
    pub steps: Option<usize>,
    pub panels: Option<usize>,
    pub degree: Option<u32>,
}

impl Flags {
    pub fn apply(&self, manifest: &Manifest) -> Effective {
        let mut e = manifest.tolerances.clone().unwrap_or_default().resolve();
        if let Some(v) = self.tol {
            e.zero_tol = v;
        }
        if let Some(v) = self.trials {
            e.trials = v;
        }
        if let Some(v) = self.seed {
            e.seed = v;
        }
        if let Some(v) = self.steps {
            e.steps = v;
        }
        if let Some(v) = self.panels {
            e.panels = v;
        }
        if let Some(v) = self.degree {
            e.degree_cap = v;
        }
        e
    }
}

/// Exit code for a verdict: 0 pass, 1 fail, 4 inconclusive.
pub fn exit_code(v: Verdict) -> i32 {
    match v {
        Verdict::Pass => 0,
        Verdict::Fail => 1,
        Verdict::Inconclusive => 4,
    }
}

/// Exit code for an error: 1 when the input is well formed but a mathematical
/// property fails, 2 for input errors and 3 for numerical failures.
pub fn error_code(e: &CliError) -> i32 {
    use modpoisson::Error as E;
    let lib = match e {
        CliError::Field { source, .. } => source,
        CliError::Lib(source) => source,
        _ => return 2,
    };
    match lib {
        E::JacobiFailed { .. }
        | E::NotPoissonMap { .. }
        | E::NotPoissonSubmanifold { .. }
        | E::InvalidAction { .. }
        | E::NonInvariantDensity { .. }
        | E::NonInvariantMoment { .. }
        | E::SecondOrderResidue { .. } => 1,
        E::Sampling { .. }
        | E::Domain { .. }
        | E::OdeFailure(_)
        | E::DegenerateFrame(_)
        | E::RankDeficientLevel(_)
        | E::ConormalLeak { .. } => 3,
        _ => 2,
    }
}

/// Runs a subcommand on a parsed manifest.
pub fn run_manifest(command: &str, manifest: &Manifest, flags: &Flags) -> (Report, i32) {
    let tol = flags.apply(manifest);
    let mut report = Report::new(command, &tol);
    match commands::dispatch(command, manifest, &tol, &mut report) {
        Ok(()) => {
            let code = exit_code(report.verdict);
            (report, code)
        }
        Err(e) => {
            let code = error_code(&e);
            report.verdict = Verdict::Fail;
            report.witness("error", &e);
            (report, code)
        }
    }
}

/// Loads the manifest at `path` and runs `command` on it.
pub fn run(command: &str, path: &Path, flags: &Flags) -> (Report, i32) {
    match Manifest::load(path) {
        Ok(m) => run_manifest(command, &m, flags),
        Err(e) => {
            let tol = Effective { seed: flags.seed.unwrap_or(0), ..Effective::default() };
            let mut report = Report::new(command, &tol);
            report.verdict = Verdict::Fail;
            report.witness("error", &e);
            (report, 2)
        }
    }
}
