use std::fs;
use std::path::{Path, PathBuf};

use pseudoinv_core::dynamics;
use pseudoinv_core::models::{self, Preset, PresetOptions, ScenarioSpec, DEFAULT_HORIZON, DEFAULT_STEPS};

use crate::config::{Emit, Mode, RunConfig, ScenarioSource};
use crate::report::{self, Echo, Residual};
use crate::scenario_file::{self, Overrides};
use crate::RunError;

pub const REPORT_FILE: &str = "report.toml";
pub const CURVES_FILE: &str = "curves.csv";
pub const STATES_FILE: &str = "states.csv";

/// Acceptance bound of the analysis round trip.
const ROUND_TRIP_THRESHOLD: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub passed: bool,
    pub residuals: Vec<Residual>,
    pub written: Vec<PathBuf>,
}

impl RunOutcome {
    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            2
        }
    }
}

fn preset_spec(p: Preset, config: &RunConfig) -> Result<ScenarioSpec, RunError> {
    let spin = matches!(p, Preset::SpinHalfComplex | Preset::SpinOneComplex);
    if spin && config.dim.is_some() {
        return Err(RunError::Config(format!("--dim does not apply to {}", p.name())));
    }
    if p.is_boson() && config.j.is_some() {
        return Err(RunError::Config(format!("--j does not apply to {}", p.name())));
    }
    let opts = PresetOptions {
        dim: config.dim,
        j: config.j,
        horizon: config.horizon.unwrap_or(DEFAULT_HORIZON),
        steps: config.steps.unwrap_or(DEFAULT_STEPS),
    };
    Ok(p.build(&opts)?)
}

/// Replaces the metric by the one integrated from the coefficients and
/// returns the largest deviation from the original.
fn analyze(spec: ScenarioSpec, tol: f64) -> Result<(ScenarioSpec, f64), RunError> {
    let p0 = spec.metric.point(0);
    let sol = dynamics::solve_auxiliary(&spec.coeffs, p0.zeta, p0.theta0, spec.kind(), tol)?;
    let diff = spec
        .metric
        .points()
        .iter()
        .zip(sol.metric.points())
        .fold(0.0_f64, |a, (x, y)| a.max((x.zeta - y.zeta).abs()).max((x.theta0 - y.theta0).abs()));
    let ScenarioSpec {
        name,
        rep,
        coeffs,
        initial_state,
        indices,
        ..
    } = spec;
    let spec = ScenarioSpec::unchecked(&name, rep, sol.metric, coeffs, initial_state, indices)?;
    Ok((spec, diff))
}

fn is_real_case(spec: &ScenarioSpec) -> bool {
    let c = &spec.coeffs;
    c.omega().iter().chain(c.alpha()).chain(c.beta()).all(|z| z.im == 0.0)
}

fn real_case_residuals(spec: &ScenarioSpec) -> Result<Vec<Residual>, RunError> {
    let (dz, dt) = models::metric_drift(spec)?;
    let th = report::acceptance_threshold;
    Ok(vec![
        Residual::new("zeta_drift", dz, th("zeta_drift")),
        Residual::new("theta0_drift", dt, th("theta0_drift")),
        Residual::new(
            "real_case_proportionality",
            models::real_case_proportionality(spec),
            th("real_case_proportionality"),
        ),
        Residual::new(
            "real_case_quasi_hermiticity",
            models::standard_quasi_hermiticity(spec)?,
            th("real_case_quasi_hermiticity"),
        ),
    ])
}

/// Stages every document next to its target and renames them only once
/// all are written; on failure nothing is left behind.
fn write_all(dir: &Path, docs: Vec<(&str, String)>) -> Result<Vec<PathBuf>, RunError> {
    let mut staged: Vec<(PathBuf, PathBuf)> = Vec::new();
    let cleanup = |paths: &[PathBuf]| {
        for p in paths {
            let _ = fs::remove_file(p);
        }
    };
    for (name, text) in docs {
        let tmp = dir.join(format!(".{name}.partial"));
        if let Err(source) = fs::write(&tmp, text) {
            let mut tmps: Vec<PathBuf> = staged.iter().map(|s| s.0.clone()).collect();
            tmps.push(tmp.clone());
            cleanup(&tmps);
            return Err(RunError::Io { path: tmp, source });
        }
        staged.push((tmp, dir.join(name)));
    }
    let mut done = Vec::new();
    for (i, (tmp, dst)) in staged.iter().enumerate() {
        if let Err(source) = fs::rename(tmp, dst) {
            cleanup(&done);
            cleanup(&staged[i..].iter().map(|s| s.0.clone()).collect::<Vec<_>>());
            return Err(RunError::Io { path: dst.clone(), source });
        }
        done.push(dst.clone());
    }
    Ok(done)
}

pub fn run(config: &RunConfig) -> Result<RunOutcome, RunError> {
    config.validate()?;
    let source = ScenarioSource::resolve(&config.scenario)?;
    let analysis = config.mode == Mode::Analysis;

    let (spec, analyzed, source_name) = match &source {
        ScenarioSource::Preset(p) => (preset_spec(*p, config)?, false, "preset"),
        ScenarioSource::File(path) => {
            let o = Overrides {
                dim: config.dim,
                j: config.j,
                horizon: config.horizon,
                steps: config.steps,
            };
            let built = scenario_file::read(path)?.build(&o, analysis, config.tol)?;
            (built.spec, built.analyzed, "file")
        }
    };

    let mut extra = Vec::new();
    let spec = if analysis && !analyzed {
        let (spec, diff) = analyze(spec, config.tol)?;
        extra.push(Residual::new("analysis_metric_difference", diff, Some(ROUND_TRIP_THRESHOLD)));
        spec
    } else {
        spec
    };

    let verification = spec.verify()?;
    let mut residuals = report::verification_residuals(&verification);
    residuals.extend(extra);
    if is_real_case(&spec) {
        residuals.extend(real_case_residuals(&spec)?);
    }
    let passed = residuals.iter().all(|r| r.within(config.tol));

    let echo = Echo {
        scenario: config.scenario.clone(),
        source: source_name.to_string(),
        mode: config.mode.name().to_string(),
        tol: config.tol,
    };
    let mut docs = Vec::new();
    if config.emits(Emit::Report) {
        docs.push((REPORT_FILE, report::render_report(&echo, &spec, &residuals)));
    }
    if config.emits(Emit::Curves) {
        docs.push((CURVES_FILE, report::render_curves(&spec, &verification)));
    }
    if config.emits(Emit::States) {
        docs.push((STATES_FILE, report::render_states(&spec, &verification)));
    }
    let written = write_all(&config.output_dir, docs)?;
    Ok(RunOutcome {
        passed,
        residuals,
        written,
    })
}
