use std::path::PathBuf;

use clap::{Args, ValueEnum};
use pseudoinv_core::models::Preset;

use crate::RunError;

/// Default residual tolerance for the exit code.
pub const DEFAULT_TOL: f64 = 1e-5;
pub const MIN_STEPS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    /// Metric given, Hamiltonian synthesized.
    Synthesis,
    /// Hamiltonian given, metric integrated from the auxiliary system.
    Analysis,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Synthesis => "synthesis",
            Mode::Analysis => "analysis",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum Emit {
    Report,
    Curves,
    States,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ScenarioSource {
    Preset(Preset),
    File(PathBuf),
}

impl ScenarioSource {
    /// Preset names win over file paths.
    pub fn resolve(name: &str) -> Result<Self, RunError> {
        if let Some(p) = Preset::from_name(name) {
            return Ok(ScenarioSource::Preset(p));
        }
        let path = PathBuf::from(name);
        if path.is_file() {
            return Ok(ScenarioSource::File(path));
        }
        let known: Vec<&str> = Preset::ALL.iter().map(|p| p.name()).collect();
        Err(RunError::Config(format!(
            "`{name}` is neither a preset ({}) nor a scenario file",
            known.join(", ")
        )))
    }
}

#[derive(Debug, Clone, PartialEq, Args)]
pub struct RunConfig {
    /// Preset name or path to a scenario file.
    #[arg(long)]
    pub scenario: String,
    /// Truncation dimension for boson / SU(1,1) scenarios.
    #[arg(long)]
    pub dim: Option<usize>,
    /// Spin for SU(2) scenarios.
    #[arg(long)]
    pub j: Option<f64>,
    #[arg(long)]
    pub horizon: Option<f64>,
    #[arg(long)]
    pub steps: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    #[arg(long, value_enum, default_value_t = Mode::Synthesis)]
    pub mode: Mode,
    #[arg(long, default_value = ".")]
    pub output_dir: PathBuf,
    #[arg(long, value_enum, value_delimiter = ',', default_values_t = [Emit::Report, Emit::Curves])]
    pub emit: Vec<Emit>,
}

impl RunConfig {
    pub fn new(scenario: &str, output_dir: impl Into<PathBuf>) -> Self {
        Self {
            scenario: scenario.to_string(),
            dim: None,
            j: None,
            horizon: None,
            steps: None,
            tol: DEFAULT_TOL,
            mode: Mode::Synthesis,
            output_dir: output_dir.into(),
            emit: vec![Emit::Report, Emit::Curves],
        }
    }

    pub fn validate(&self) -> Result<(), RunError> {
        let bad = |m: String| Err(RunError::Config(m));
        if let Some(s) = self.steps {
            if s < MIN_STEPS {
                return bad(format!("--steps must be at least {MIN_STEPS}, got {s}"));
            }
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return bad(format!("--tol must be positive, got {}", self.tol));
        }
        if let Some(h) = self.horizon {
            if !(h > 0.0 && h.is_finite()) {
                return bad(format!("--horizon must be positive, got {h}"));
            }
        }
        if self.dim.is_some() && self.j.is_some() {
            return bad("--dim and --j are mutually exclusive".into());
        }
        if self.emit.is_empty() {
            return bad("--emit needs at least one of report, curves, states".into());
        }
        if !self.output_dir.is_dir() {
            return bad(format!("output directory {} does not exist", self.output_dir.display()));
        }
        Ok(())
    }

    pub fn emits(&self, e: Emit) -> bool {
        self.emit.contains(&e)
    }
}
