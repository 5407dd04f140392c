//! Scenario files: a TOML document with sections `[algebra]`, `[metric]`,
//! `[drive]`, `[grid]` and `[initial_state]`.
//!
//! ```toml
//! [algebra]
//! kind = "su2"          # or "su11" (bargmann_k, dim) or "boson" (dim)
//! j = 0.5
//!
//! [metric]
//! preset = "breathing"  # "constant", "curves" or "table"
//! zeta_mean = 0.2
//! zeta_amp = 0.05
//! zeta_freq = 0.7
//! theta0_mean = 1.0
//! theta0_amp = 0.1
//! theta0_freq = 0.5
//!
//! [drive]
//! beta_re = { kind = "sinusoid", offset = -0.2, amplitude = -0.06, frequency = 0.3 }
//!
//! [grid]
//! horizon = 10.0
//! steps = 2000
//!
//! [initial_state]
//! indices = [0, 1]
//! weights = [[1.0, 0.0], [0.0, 1.0]]
//! ```
//!
//! Table paths are relative to the scenario file. Giving `omega_re`
//! (and optionally the other Hamiltonian components) in `[drive]` supplies
//! the coefficients directly; such files only run in analysis mode, where
//! the metric section provides the initial `ζ`, `ϑ0`.

use std::path::{Path, PathBuf};

use pseudoinv_core::algebra::{self, AlgebraRep};
use pseudoinv_core::curve::{MetricCurve, ScalarCurve};
use pseudoinv_core::dynamics::{self, CoefficientTrajectory, MetricTrajectory};
use pseudoinv_core::grid::TimeGrid;
use pseudoinv_core::models::{self, ScenarioSpec, DEFAULT_HORIZON, DEFAULT_STEPS};
use pseudoinv_core::{AlgebraKind, C64};
use serde::Deserialize;

use crate::table::{self, Table};
use crate::RunError;

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum CurveDef {
    Constant {
        value: f64,
    },
    Ramp {
        start: f64,
        slope: f64,
    },
    Sinusoid {
        #[serde(default)]
        offset: f64,
        amplitude: f64,
        frequency: f64,
        #[serde(default)]
        phase: f64,
    },
}

impl CurveDef {
    pub fn curve(&self) -> ScalarCurve {
        match *self {
            CurveDef::Constant { value } => ScalarCurve::Constant(value),
            CurveDef::Ramp { start, slope } => ScalarCurve::Ramp { start, slope },
            CurveDef::Sinusoid {
                offset,
                amplitude,
                frequency,
                phase,
            } => ScalarCurve::Sinusoid {
                offset,
                amplitude,
                frequency,
                phase,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum AlgebraDef {
    Su2 { j: f64 },
    Su11 { bargmann_k: f64, dim: usize },
    Boson { dim: usize },
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "preset", rename_all = "lowercase", deny_unknown_fields)]
pub enum MetricDef {
    Constant {
        zeta: f64,
        theta0: f64,
    },
    Breathing {
        zeta_mean: f64,
        zeta_amp: f64,
        zeta_freq: f64,
        theta0_mean: f64,
        theta0_amp: f64,
        theta0_freq: f64,
    },
    Curves {
        zeta: CurveDef,
        theta0: CurveDef,
    },
    Table {
        zeta_table: PathBuf,
        theta0_table: PathBuf,
    },
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DriveDef {
    pub beta_re: Option<CurveDef>,
    pub beta_im: Option<CurveDef>,
    pub beta_table: Option<PathBuf>,
    pub omega_re: Option<CurveDef>,
    pub omega_im: Option<CurveDef>,
    pub alpha_re: Option<CurveDef>,
    pub alpha_im: Option<CurveDef>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridDef {
    pub horizon: Option<f64>,
    pub steps: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialStateDef {
    pub indices: Vec<usize>,
    /// `[re, im]` per index; equal real weights when absent.
    pub weights: Option<Vec<[f64; 2]>>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub algebra: AlgebraDef,
    pub metric: MetricDef,
    #[serde(default)]
    pub drive: DriveDef,
    #[serde(default)]
    pub grid: GridDef,
    pub initial_state: InitialStateDef,
    #[serde(skip)]
    pub base_dir: PathBuf,
}

/// Command-line values that take precedence over the file.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Overrides {
    pub dim: Option<usize>,
    pub j: Option<f64>,
    pub horizon: Option<f64>,
    pub steps: Option<usize>,
}

/// A scenario ready for verification.
#[derive(Debug, Clone, PartialEq)]
pub struct Built {
    pub spec: ScenarioSpec,
    /// The metric came from integrating the auxiliary system.
    pub analyzed: bool,
}

fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}

pub fn parse(text: &str, base_dir: &Path) -> Result<ScenarioFile, RunError> {
    let mut file: ScenarioFile = toml::from_str(text).map_err(|e| {
        let line = e.span().map(|s| line_of(text, s.start)).unwrap_or(0);
        RunError::Config(format!("scenario file, line {line}: {}", e.message()))
    })?;
    file.base_dir = base_dir.to_path_buf();
    Ok(file)
}

pub fn read(path: &Path) -> Result<ScenarioFile, RunError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| RunError::Config(format!("cannot read scenario file {}: {e}", path.display())))?;
    let dir = path.parent().unwrap_or(Path::new("."));
    parse(&text, dir).map_err(|e| match e {
        RunError::Config(m) => RunError::Config(format!("{}: {m}", path.display())),
        other => other,
    })
}

/// Synthesis-mode scenario from a file with no overrides.
pub fn load_scenario_file(path: &Path) -> Result<ScenarioSpec, RunError> {
    Ok(read(path)?.build(&Overrides::default(), false, f64::INFINITY)?.spec)
}

impl ScenarioFile {
    fn rep(&self, o: &Overrides) -> Result<AlgebraRep, RunError> {
        let rep = match self.algebra {
            AlgebraDef::Su2 { j } => {
                if o.dim.is_some() {
                    return Err(RunError::Config("--dim does not apply to an su2 scenario".into()));
                }
                algebra::build_su2_rep(o.j.unwrap_or(j))?
            }
            AlgebraDef::Su11 { bargmann_k, dim } => {
                if o.j.is_some() {
                    return Err(RunError::Config("--j does not apply to an su11 scenario".into()));
                }
                algebra::build_su11_rep(bargmann_k, o.dim.unwrap_or(dim))?
            }
            AlgebraDef::Boson { dim } => {
                if o.j.is_some() {
                    return Err(RunError::Config("--j does not apply to a boson scenario".into()));
                }
                algebra::build_boson_rep(o.dim.unwrap_or(dim))?
            }
        };
        Ok(rep)
    }

    fn table(&self, path: &Path) -> Result<Table, RunError> {
        table::read_table(&self.base_dir.join(path))
    }

    fn grid(&self, o: &Overrides) -> Result<TimeGrid, RunError> {
        // a metric table fixes the grid unless the user overrides it
        let from_table = match &self.metric {
            MetricDef::Table { zeta_table, .. } => {
                let t = self.table(zeta_table)?.t;
                Some((t[t.len() - 1] - t[0], t.len() - 1))
            }
            _ => None,
        };
        let horizon = o
            .horizon
            .or(self.grid.horizon)
            .or(from_table.map(|x| x.0))
            .unwrap_or(DEFAULT_HORIZON);
        let steps = o
            .steps
            .or(self.grid.steps)
            .or(from_table.map(|x| x.1))
            .unwrap_or(DEFAULT_STEPS);
        if steps < crate::config::MIN_STEPS || !(horizon > 0.0) {
            return Err(RunError::Config(format!(
                "grid needs steps ≥ {} and horizon > 0, got {steps} and {horizon}",
                crate::config::MIN_STEPS
            )));
        }
        Ok(TimeGrid::uniform(horizon, steps)?)
    }

    fn metric(&self, grid: &TimeGrid, kind: AlgebraKind) -> Result<MetricTrajectory, RunError> {
        let curve = |z: ScalarCurve, t: ScalarCurve| MetricCurve { zeta: z, theta0: t };
        let c = match &self.metric {
            MetricDef::Constant { zeta, theta0 } => MetricCurve::constant(*zeta, *theta0),
            MetricDef::Breathing {
                zeta_mean,
                zeta_amp,
                zeta_freq,
                theta0_mean,
                theta0_amp,
                theta0_freq,
            } => MetricCurve::breathing(*zeta_mean, *zeta_amp, *zeta_freq, *theta0_mean, *theta0_amp, *theta0_freq),
            MetricDef::Curves { zeta, theta0 } => curve(zeta.curve(), theta0.curve()),
            MetricDef::Table {
                zeta_table,
                theta0_table,
            } => {
                let mut out = Vec::new();
                for (path, what) in [(zeta_table, "zeta_table"), (theta0_table, "theta0_table")] {
                    let t = self.table(path)?;
                    t.check_grid(grid, what)?;
                    out.push(t.real_values(what)?);
                }
                let theta0 = out.pop().unwrap();
                curve(ScalarCurve::Sampled(out.pop().unwrap()), ScalarCurve::Sampled(theta0))
            }
        };
        Ok(MetricTrajectory::from_curve(grid.clone(), &c, kind)?)
    }

    fn weights(&self) -> Result<Vec<(usize, C64)>, RunError> {
        let s = &self.initial_state;
        if s.indices.is_empty() {
            return Err(RunError::Config("initial_state.indices is empty".into()));
        }
        match &s.weights {
            None => Ok(s.indices.iter().map(|&n| (n, C64::new(1.0, 0.0))).collect()),
            Some(w) if w.len() == s.indices.len() => {
                Ok(s.indices.iter().zip(w).map(|(&n, w)| (n, C64::new(w[0], w[1]))).collect())
            }
            Some(w) => Err(RunError::Config(format!(
                "initial_state has {} indices but {} weights",
                s.indices.len(),
                w.len()
            ))),
        }
    }

    fn direct_coefficients(&self) -> bool {
        let d = &self.drive;
        d.omega_re.is_some() || d.omega_im.is_some() || d.alpha_re.is_some() || d.alpha_im.is_some()
    }

    fn sample(c: &Option<CurveDef>, grid: &TimeGrid) -> Result<Vec<f64>, RunError> {
        match c {
            Some(c) => Ok(c.curve().sample(grid)?.0),
            None => Ok(vec![0.0; grid.len()]),
        }
    }

    fn beta(&self, grid: &TimeGrid) -> Result<(Vec<f64>, Option<Vec<f64>>), RunError> {
        let d = &self.drive;
        match (&d.beta_table, &d.beta_re) {
            (Some(_), Some(_)) => Err(RunError::Config("give either drive.beta_table or drive.beta_re".into())),
            (Some(path), None) => {
                if d.beta_im.is_some() {
                    return Err(RunError::Config("drive.beta_im conflicts with drive.beta_table".into()));
                }
                let t = self.table(path)?;
                t.check_grid(grid, "beta_table")?;
                Ok((t.real_parts(), Some(t.values.iter().map(|z| z.im).collect())))
            }
            (None, Some(re)) => {
                let im = match &d.beta_im {
                    Some(c) => Some(c.curve().sample(grid)?.0),
                    None => None,
                };
                Ok((re.curve().sample(grid)?.0, im))
            }
            (None, None) => Err(RunError::Config("drive needs beta_re or beta_table".into())),
        }
    }

    /// Builds the scenario. In analysis mode the metric is integrated from
    /// the coefficients with algebraic residuals checked against `rel_tol`.
    pub fn build(&self, o: &Overrides, analysis: bool, rel_tol: f64) -> Result<Built, RunError> {
        let rep = self.rep(o)?;
        let kind = rep.kind();
        let grid = self.grid(o)?;
        let metric = self.metric(&grid, kind)?;
        let weights = self.weights()?;
        let indices: Vec<usize> = weights.iter().map(|w| w.0).collect();
        let (beta_re, beta_im) = self.beta(&grid)?;

        if self.direct_coefficients() {
            if !analysis {
                return Err(RunError::Config(
                    "drive gives the Hamiltonian directly; run it with --mode analysis".into(),
                ));
            }
            let d = &self.drive;
            let cplx = |re: Vec<f64>, im: Vec<f64>| re.into_iter().zip(im).map(|(a, b)| C64::new(a, b)).collect();
            let omega = cplx(Self::sample(&d.omega_re, &grid)?, Self::sample(&d.omega_im, &grid)?);
            let alpha = cplx(Self::sample(&d.alpha_re, &grid)?, Self::sample(&d.alpha_im, &grid)?);
            let beta = cplx(beta_re, beta_im.unwrap_or_else(|| vec![0.0; grid.len()]));
            let coeffs = CoefficientTrajectory::new(grid, omega, alpha, beta)?;
            let p0 = metric.point(0);
            let sol = dynamics::solve_auxiliary(&coeffs, p0.zeta, p0.theta0, kind, rel_tol)?;
            let psi0 = models::eigen_superposition(&rep, sol.metric.point(0), &weights)?;
            let spec = ScenarioSpec::unchecked("file", rep, sol.metric, coeffs, psi0, indices)?;
            return Ok(Built { spec, analyzed: true });
        }

        let beta_im = beta_im.unwrap_or_else(|| dynamics::reality_beta_im(&metric));
        let coeffs = dynamics::synthesize_hamiltonian(&metric, &beta_re, &beta_im)?;
        let psi0 = models::eigen_superposition(&rep, metric.point(0), &weights)?;
        let spec = ScenarioSpec::new("file", rep, metric, coeffs, psi0, indices)?;
        Ok(Built { spec, analyzed: false })
    }
}
