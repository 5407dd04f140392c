//! Report, curves and states documents. Reports are flat `key = value`
//! lines (valid TOML) in a fixed order.

use pseudoinv_core::dynamics;
use pseudoinv_core::models::ScenarioSpec;
use pseudoinv_core::verify::Verification;
use pseudoinv_core::AlgebraKind;

use crate::fmt_f64;

pub const FORMAT_VERSION: u32 = 1;

/// One scalar residual with its optional acceptance threshold.
#[derive(Debug, Clone, PartialEq)]
pub struct Residual {
    pub name: String,
    pub value: f64,
    pub threshold: Option<f64>,
}

impl Residual {
    pub fn new(name: &str, value: f64, threshold: Option<f64>) -> Self {
        Self {
            name: name.to_string(),
            value,
            threshold,
        }
    }

    pub fn within(&self, tol: f64) -> bool {
        self.value <= tol
    }
}

/// Acceptance thresholds of the named verification fields.
pub fn acceptance_threshold(name: &str) -> Option<f64> {
    Some(match name {
        "invariance_residual" => 1e-6,
        "dyson_hermiticity_defect" | "dyson_commutator_residual" | "phh1_residual" => 1e-5,
        "pseudo_norm_drift" | "uv_max" | "im_w_max" | "spectrum_drift" => 1e-8,
        "auxiliary_max" | "similarity_residual" | "eta_orthonormality_defect" | "eigenvalue_imag_max" => 1e-9,
        "oracle_difference" | "rk4_pseudo_norm_drift" => 1e-6,
        "real_case_proportionality" | "real_case_quasi_hermiticity" | "zeta_drift" | "theta0_drift" => 1e-10,
        _ => return None,
    })
}

pub fn verification_residuals(v: &Verification) -> Vec<Residual> {
    v.report
        .fields()
        .iter()
        .map(|(k, x)| Residual::new(k, *x, acceptance_threshold(k)))
        .collect()
}

/// Scenario echo written at the top of the report.
#[derive(Debug, Clone, PartialEq)]
pub struct Echo {
    pub scenario: String,
    pub source: String,
    pub mode: String,
    pub tol: f64,
}

fn quote(s: &str) -> String {
    toml::Value::String(s.to_string()).to_string()
}

pub fn render_report(echo: &Echo, spec: &ScenarioSpec, residuals: &[Residual]) -> String {
    let mut out = String::new();
    let mut line = |k: &str, v: String| {
        out.push_str(k);
        out.push_str(" = ");
        out.push_str(&v);
        out.push('\n');
    };
    let grid = spec.grid();
    let passed = residuals.iter().all(|r| r.within(echo.tol));

    line("format_version", FORMAT_VERSION.to_string());
    line("scenario", quote(&echo.scenario));
    line("source", quote(&echo.source));
    line("mode", quote(&echo.mode));
    let kind = match spec.kind() {
        AlgebraKind::Su2 => "su2",
        AlgebraKind::Su11 => "su11",
    };
    line("algebra", quote(kind));
    line("dim", spec.rep.dim().to_string());
    if spec.kind() == AlgebraKind::Su2 {
        line("j", fmt_f64(0.5 * (spec.rep.dim() as f64 - 1.0)));
    }
    line("trusted_dim", spec.rep.trusted_dim().to_string());
    let idx: Vec<String> = spec.indices.iter().map(|n| n.to_string()).collect();
    line("indices", format!("[{}]", idx.join(", ")));
    line("horizon", fmt_f64(spec.horizon));
    line("steps", spec.steps.to_string());
    line("samples", grid.len().to_string());
    line("dt", fmt_f64(grid.step().unwrap_or(f64::NAN)));
    line("tol", fmt_f64(echo.tol));
    for r in residuals {
        line(&r.name, fmt_f64(r.value));
    }
    for r in residuals {
        let status = match r.threshold {
            Some(t) if r.value <= t => "pass",
            Some(_) => "fail",
            None => "none",
        };
        line(&format!("{}_threshold", r.name), r.threshold.map_or(quote("none"), fmt_f64));
        line(&format!("{}_acceptance", r.name), quote(status));
    }
    line("status", quote(if passed { "pass" } else { "fail" }));
    line("exit_code", if passed { "0" } else { "2" }.to_string());
    out
}

fn csv_document(header: &[String], rows: impl Iterator<Item = Vec<f64>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(row.iter().map(|x| fmt_f64(*x))).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ascii output")
}

/// Time series of the metric, coefficients, phases and residual curves.
pub fn render_curves(spec: &ScenarioSpec, v: &Verification) -> String {
    let c = &v.report.curves;
    let inv = &c.invariant;
    let t = spec.grid().times();
    let phases: Vec<(usize, Vec<f64>)> = spec
        .indices
        .iter()
        .map(|&n| (n, dynamics::phase(v.solution.eigenvalues[n], &spec.metric, &spec.coeffs)))
        .collect();
    let named: [(&str, &[f64]); 13] = [
        ("tdse", &c.tdse),
        ("invariance", &c.invariance),
        ("phh1", &c.phh1),
        ("dyson", &c.dyson),
        ("pseudo_norm", &c.pseudo_norm),
        ("uv", &c.uv),
        ("im_w", &c.im_w),
        ("oracle", &c.oracle),
        ("similarity", &inv.similarity),
        ("quasi_hermiticity", &inv.quasi_hermiticity),
        ("eta_orthonormality", &inv.eta_orthonormality),
        ("eigenvalue_imag", &inv.eigenvalue_imag),
        ("spectrum_drift", &inv.spectrum_drift),
    ];
    let mut header: Vec<String> = [
        "t", "zeta", "theta0", "chi", "omega_re", "omega_im", "alpha_re", "alpha_im", "beta_re", "beta_im",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    header.extend(phases.iter().map(|(n, _)| format!("phi_{n}")));
    header.extend(named.iter().map(|(k, _)| k.to_string()));

    let rows = (0..t.len()).map(|i| {
        let p = spec.metric.point(i);
        let (w, a, b) = spec.coeffs.at(i);
        let mut row = vec![t[i], p.zeta, p.theta0, p.chi, w.re, w.im, a.re, a.im, b.re, b.im];
        row.extend(phases.iter().map(|(_, ph)| ph[i]));
        row.extend(named.iter().map(|(_, curve)| curve[i]));
        row
    });
    csv_document(&header, rows)
}

/// Invariant-constructed states, real and imaginary parts interleaved.
pub fn render_states(spec: &ScenarioSpec, v: &Verification) -> String {
    let dim = spec.rep.dim();
    let mut header = vec!["t".to_string()];
    for k in 0..dim {
        header.push(format!("re_{k}"));
        header.push(format!("im_{k}"));
    }
    let t = spec.grid().times();
    let rows = v.solution.states.iter().enumerate().map(|(i, s)| {
        let mut row = vec![t[i]];
        for z in s.iter() {
            row.push(z.re);
            row.push(z.im);
        }
        row
    });
    csv_document(&header, rows)
}
