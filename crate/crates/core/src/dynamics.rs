//! Coupling between the metric and the Hamiltonian coefficients.
//!
//! Writing `Cx = Re x` and `Sx = Im x` for `x ∈ {ω, α, β}`, a metric
//! trajectory `(ζ, ϑ0)` is compatible with `H` when
//!
//! ```text
//! ϑ̇0 = (2ϑ0/ζ)[−2ζSω + Sα + (χ − Dζ²)Sβ]          (cont1)
//! ζ̇  = −2ζSω + 2Sα − Dζ²Sβ                          (cont2)
//! χCβ = Cα                                          (rel1)
//! (χ − (D/2)ζ²)Cα = χζCω                            (rel2)
//! ζCω = (χ − (D/2)ζ²)Cβ                             (rel3)
//! ```
//!
//! Under these the transformed Hamiltonian `−h = 2WK0 + 2UK− + 2VK+` has
//! `U = V = 0`. `W` is real only if in addition `Sβ = ζ̇/(2ϑ0)`; see
//! [`reality_beta_im`].
//!
//! Two directions are offered. Synthesis fixes the metric and `β` and
//! derives `ω`, `α`. Analysis fixes `H` and integrates the metric with RK4.

use alloc::vec::Vec;

use crate::algebra::AlgebraRep;
use crate::curve::MetricCurve;
use crate::error::{Error, Result};
use crate::grid::{self, TimeGrid};
use crate::linalg::{self, real, CMatrix, CVector, C64, I};
use crate::metric::MetricPoint;
use crate::AlgebraKind;

/// Below this `|ζ|` the relations divide by zero.
pub const MIN_ZETA: f64 = 1e-8;
/// Admissible range of `|ζ|` and `ϑ0` while integrating.
pub const METRIC_RANGE: (f64, f64) = (1e-8, 1e8);
/// Tolerance on `ϑ0 + (D/2)ζ² + χ` for stored metric samples.
pub const CONSISTENCY_TOL: f64 = 1e-10;
/// Default tolerance for `|U|`, `|V|`, `|Im W|` and the auxiliary residuals.
pub const DEFAULT_TOL: f64 = 1e-8;

/// `(|z|, arg z)`
pub fn polar(z: C64) -> (f64, f64) {
    (z.norm(), z.arg())
}

/// Time-sampled complex `(ω, α, β)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientTrajectory {
    grid: TimeGrid,
    omega: Vec<C64>,
    alpha: Vec<C64>,
    beta: Vec<C64>,
}

impl CoefficientTrajectory {
    pub fn new(grid: TimeGrid, omega: Vec<C64>, alpha: Vec<C64>, beta: Vec<C64>) -> Result<Self> {
        grid.check_len(omega.len())?;
        grid.check_len(alpha.len())?;
        grid.check_len(beta.len())?;
        Ok(Self {
            grid,
            omega,
            alpha,
            beta,
        })
    }

    pub fn constant(grid: TimeGrid, omega: C64, alpha: C64, beta: C64) -> Self {
        let n = grid.len();
        Self {
            grid,
            omega: alloc::vec![omega; n],
            alpha: alloc::vec![alpha; n],
            beta: alloc::vec![beta; n],
        }
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn len(&self) -> usize {
        self.omega.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omega.is_empty()
    }

    pub fn omega(&self) -> &[C64] {
        &self.omega
    }

    pub fn alpha(&self) -> &[C64] {
        &self.alpha
    }

    pub fn beta(&self) -> &[C64] {
        &self.beta
    }

    pub fn at(&self, i: usize) -> (C64, C64, C64) {
        (self.omega[i], self.alpha[i], self.beta[i])
    }

    /// Coefficients at `t_i + h/2` by cubic interpolation.
    pub fn midpoint(&self, i: usize) -> (C64, C64, C64) {
        (
            grid::midpoint_value(&self.omega, i),
            grid::midpoint_value(&self.alpha, i),
            grid::midpoint_value(&self.beta, i),
        )
    }

    pub fn hamiltonian(&self, rep: &AlgebraRep, i: usize) -> CMatrix {
        let (w, a, b) = self.at(i);
        rep.hamiltonian(w, a, b)
    }

    /// Polar form `(|ω|, φω, |α|, φα, |β|, φβ)` at one sample.
    pub fn polar_at(&self, i: usize) -> [f64; 6] {
        let (w, a, b) = self.at(i);
        let (pw, pa, pb) = (polar(w), polar(a), polar(b));
        [pw.0, pw.1, pa.0, pa.1, pb.0, pb.1]
    }

    /// Copy with `f` applied to every sample `(ω, α, β)`.
    pub fn map(&self, mut f: impl FnMut(usize, (C64, C64, C64)) -> (C64, C64, C64)) -> Self {
        let mut out = self.clone();
        for i in 0..self.len() {
            let (w, a, b) = f(i, self.at(i));
            out.omega[i] = w;
            out.alpha[i] = a;
            out.beta[i] = b;
        }
        out
    }
}

/// Time-sampled metric points of one algebra kind.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricTrajectory {
    grid: TimeGrid,
    points: Vec<MetricPoint>,
    kind: AlgebraKind,
}

impl MetricTrajectory {
    /// Checks `ϑ0 > 0` and `χ = −ϑ0 − (D/2)ζ²` at every sample.
    pub fn new(grid: TimeGrid, points: Vec<MetricPoint>, kind: AlgebraKind) -> Result<Self> {
        grid.check_len(points.len())?;
        for (i, p) in points.iter().enumerate() {
            p.check_theta0()?;
            let defect = p.consistency_defect(kind);
            if !(defect <= CONSISTENCY_TOL) {
                return Err(Error::Inconsistent {
                    quantity: "metric consistency",
                    index: i,
                    residual: defect,
                });
            }
        }
        Ok(Self { grid, points, kind })
    }

    /// Samples closed-form or tabulated curves; rates are analytic for
    /// closed forms and centered differences for tables.
    pub fn from_curve(grid: TimeGrid, curve: &MetricCurve, kind: AlgebraKind) -> Result<Self> {
        let (z, zd) = curve.zeta.sample(&grid)?;
        let (t, td) = curve.theta0.sample(&grid)?;
        let points = (0..grid.len())
            .map(|i| MetricPoint::new(z[i], t[i], kind).with_rates(zd[i], td[i]))
            .collect();
        Self::new(grid, points, kind)
    }

    /// Rates from centered differences of the samples.
    pub fn from_samples(grid: TimeGrid, zeta: Vec<f64>, theta0: Vec<f64>, kind: AlgebraKind) -> Result<Self> {
        grid.check_len(zeta.len())?;
        grid.check_len(theta0.len())?;
        let zd = grid::centered_derivative(&grid, &zeta);
        let td = grid::centered_derivative(&grid, &theta0);
        let points = (0..grid.len())
            .map(|i| MetricPoint::new(zeta[i], theta0[i], kind).with_rates(zd[i], td[i]))
            .collect();
        Self::new(grid, points, kind)
    }

    pub fn constant(grid: TimeGrid, zeta: f64, theta0: f64, kind: AlgebraKind) -> Result<Self> {
        let points = alloc::vec![MetricPoint::new(zeta, theta0, kind); grid.len()];
        Self::new(grid, points, kind)
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn kind(&self) -> AlgebraKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[MetricPoint] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &MetricPoint {
        &self.points[i]
    }

    pub fn zeta(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.zeta).collect()
    }

    pub fn theta0(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.theta0).collect()
    }

    pub fn chi(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.chi).collect()
    }
}

/// `W`, `U`, `V` at one sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransformedCoeffs {
    pub w: C64,
    pub u: C64,
    pub v: C64,
}

impl TransformedCoeffs {
    /// `max(|U|, |V|)`
    pub fn uv(&self) -> f64 {
        self.u.norm().max(self.v.norm())
    }
}

/// Coefficients of `iρρ̇⁻¹ − ρHρ⁻¹ = 2WK0 + 2UK− + 2VK+`.
pub fn transformed_coeffs(m: &MetricPoint, omega: C64, alpha: C64, beta: C64, kind: AlgebraKind) -> TransformedCoeffs {
    let d = kind.d();
    let (z, t0, chi) = (m.zeta, m.theta0, m.chi);
    let (zd, td) = (m.zeta_dot, m.theta0_dot);
    let half_i = I * 0.5;
    let w = -(omega * (0.5 * d * z * z - chi) - (alpha + beta * chi) * (d * z) + half_i * (td + d * z * zd)) / t0;
    let u = (omega * z - alpha + beta * (0.5 * d * z * z) + half_i * zd) / t0;
    let v = (omega * (chi * z) + alpha * (0.5 * d * z * z) - beta * (chi * chi)
        - half_i * (z * td - t0 * zd + 0.5 * d * z * z * zd))
        / t0;
    TransformedCoeffs { w, u, v }
}

pub fn transformed_curve(metric: &MetricTrajectory, coeffs: &CoefficientTrajectory) -> Vec<TransformedCoeffs> {
    (0..metric.len())
        .map(|i| {
            let (w, a, b) = coeffs.at(i);
            transformed_coeffs(metric.point(i), w, a, b, metric.kind())
        })
        .collect()
}

/// The unique `Im β` that keeps `W` real: `ζ̇/(2ϑ0)`.
pub fn reality_beta_im(metric: &MetricTrajectory) -> Vec<f64> {
    metric
        .points()
        .iter()
        .map(|p| p.zeta_dot / (2.0 * p.theta0))
        .collect()
}

/// Derives `ω`, `α` from the metric and the free inputs `Re β`, `Im β`.
pub fn synthesize_hamiltonian(metric: &MetricTrajectory, beta_re: &[f64], beta_im: &[f64]) -> Result<CoefficientTrajectory> {
    let grid = metric.grid().clone();
    grid.check_len(beta_re.len())?;
    grid.check_len(beta_im.len())?;
    let d = metric.kind().d();
    let n = grid.len();
    let (mut omega, mut alpha, mut beta) = (Vec::with_capacity(n), Vec::with_capacity(n), Vec::with_capacity(n));
    for (i, p) in metric.points().iter().enumerate() {
        let z = p.zeta;
        if !(z.abs() >= MIN_ZETA) {
            return Err(Error::ZetaTooSmall { index: i, value: z });
        }
        let (cb, sb) = (beta_re[i], beta_im[i]);
        let ca = p.chi * cb;
        let cw = (p.chi - 0.5 * d * z * z) * cb / z;
        let sa = p.zeta_dot - z * p.theta0_dot / (2.0 * p.theta0) + p.chi * sb;
        let sw = (-p.zeta_dot + 2.0 * sa - d * z * z * sb) / (2.0 * z);
        omega.push(C64::new(cw, sw));
        alpha.push(C64::new(ca, sa));
        beta.push(C64::new(cb, sb));
    }
    CoefficientTrajectory::new(grid, omega, alpha, beta)
}

/// Per-sample residuals of the five auxiliary relations, each written as
/// (governed quantity) − (its expression).
#[derive(Debug, Clone, PartialEq)]
pub struct AuxiliaryResiduals {
    pub cont1: Vec<f64>,
    pub cont2: Vec<f64>,
    pub rel1: Vec<f64>,
    pub rel2: Vec<f64>,
    pub rel3: Vec<f64>,
}

fn curve_max(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |a, &b| if b.is_nan() { f64::NAN } else { a.max(b) })
}

impl AuxiliaryResiduals {
    pub fn curves(&self) -> [(&'static str, &[f64]); 5] {
        [
            ("cont1", &self.cont1),
            ("cont2", &self.cont2),
            ("rel1", &self.rel1),
            ("rel2", &self.rel2),
            ("rel3", &self.rel3),
        ]
    }

    pub fn max(&self) -> f64 {
        self.curves().iter().map(|(_, c)| curve_max(c)).fold(0.0, f64::max)
    }

    /// Largest residual with its relation name and sample index.
    pub fn worst(&self) -> (&'static str, usize, f64) {
        let mut out = ("cont1", 0, 0.0);
        for (name, c) in self.curves() {
            for (i, &r) in c.iter().enumerate() {
                if r > out.2 || r.is_nan() {
                    out = (name, i, r);
                }
            }
        }
        out
    }

    pub fn at(&self, i: usize) -> f64 {
        self.cont1[i]
            .max(self.cont2[i])
            .max(self.rel1[i])
            .max(self.rel2[i])
            .max(self.rel3[i])
    }
}

/// `(ζ̇, ϑ̇0)` demanded by (cont1)/(cont2) at one state.
fn metric_rates(z: f64, t0: f64, chi: f64, w: C64, a: C64, b: C64, d: f64) -> (f64, f64) {
    let zd = -2.0 * z * w.im + 2.0 * a.im - d * z * z * b.im;
    let td = 2.0 * t0 / z * (-2.0 * z * w.im + a.im + (chi - d * z * z) * b.im);
    (zd, td)
}

/// The three algebraic relations at one state.
fn rel_residuals(z: f64, chi: f64, w: C64, a: C64, b: C64, d: f64) -> [f64; 3] {
    let g = chi - 0.5 * d * z * z;
    let rel1 = (a.re - chi * b.re).abs();
    let rel2 = (g * a.re - chi * z * w.re).abs();
    let rel3 = if z.abs() >= MIN_ZETA {
        (w.re - g * b.re / z).abs()
    } else {
        (z * w.re - g * b.re).abs()
    };
    [rel1, rel2, rel3]
}

pub fn auxiliary_residuals(metric: &MetricTrajectory, coeffs: &CoefficientTrajectory) -> AuxiliaryResiduals {
    let d = metric.kind().d();
    let n = metric.len().min(coeffs.len());
    let mut out = AuxiliaryResiduals {
        cont1: Vec::with_capacity(n),
        cont2: Vec::with_capacity(n),
        rel1: Vec::with_capacity(n),
        rel2: Vec::with_capacity(n),
        rel3: Vec::with_capacity(n),
    };
    for i in 0..n {
        let p = metric.point(i);
        let (w, a, b) = coeffs.at(i);
        let (zd, td) = metric_rates(p.zeta, p.theta0, p.chi, w, a, b, d);
        let cont1 = if p.zeta.abs() >= MIN_ZETA {
            (p.theta0_dot - td).abs()
        } else {
            // multiplied through by ζ
            let s = -2.0 * p.zeta * w.im + a.im + (p.chi - d * p.zeta * p.zeta) * b.im;
            (p.zeta * p.theta0_dot - 2.0 * p.theta0 * s).abs()
        };
        let [r1, r2, r3] = rel_residuals(p.zeta, p.chi, w, a, b, d);
        out.cont1.push(cont1);
        out.cont2.push((p.zeta_dot - zd).abs());
        out.rel1.push(r1);
        out.rel2.push(r2);
        out.rel3.push(r3);
    }
    out
}

/// Metric integrated from a given Hamiltonian.
#[derive(Debug, Clone, PartialEq)]
pub struct AuxiliarySolution {
    pub metric: MetricTrajectory,
    /// Largest of the three algebraic residuals per sample.
    pub rel_residual: Vec<f64>,
}

/// Integrates (cont1)/(cont2) from `(ζ0, ϑ0(0))` with classic RK4; the
/// coefficients at half steps come from cubic interpolation. Every sample
/// is checked against the algebraic relations with `rel_tol`; pass
/// `f64::INFINITY` to only collect the residual curve.
pub fn solve_auxiliary(
    coeffs: &CoefficientTrajectory,
    zeta0: f64,
    theta00: f64,
    kind: AlgebraKind,
    rel_tol: f64,
) -> Result<AuxiliarySolution> {
    let grid = coeffs.grid().clone();
    let h = grid.uniform_step()?;
    let d = kind.d();
    let n = grid.len();
    let rates = |z: f64, t0: f64, w, a, b| metric_rates(z, t0, -t0 - 0.5 * d * z * z, w, a, b, d);
    let in_range = |x: f64| x.is_finite() && x.abs() >= METRIC_RANGE.0 && x.abs() <= METRIC_RANGE.1;
    if !in_range(zeta0) || !(theta00 > 0.0) || !in_range(theta00) {
        return Err(Error::MetricBlowUp {
            index: 0,
            zeta: zeta0,
            theta0: theta00,
        });
    }

    let check_rel = |i: usize, z: f64, t0: f64| -> Result<f64> {
        let (w, a, b) = coeffs.at(i);
        let r = rel_residuals(z, -t0 - 0.5 * d * z * z, w, a, b, d);
        let r = r[0].max(r[1]).max(r[2]);
        if r > rel_tol || r.is_nan() {
            return Err(Error::RelIncompatible { index: i, residual: r });
        }
        Ok(r)
    };

    let mut zeta = Vec::with_capacity(n);
    let mut theta0 = Vec::with_capacity(n);
    let mut rel = Vec::with_capacity(n);
    rel.push(check_rel(0, zeta0, theta00)?);
    zeta.push(zeta0);
    theta0.push(theta00);

    let (mut z, mut t0) = (zeta0, theta00);
    for i in 0..n - 1 {
        let (w0, a0, b0) = coeffs.at(i);
        let (wm, am, bm) = coeffs.midpoint(i);
        let (w1, a1, b1) = coeffs.at(i + 1);
        let k1 = rates(z, t0, w0, a0, b0);
        let k2 = rates(z + 0.5 * h * k1.0, t0 + 0.5 * h * k1.1, wm, am, bm);
        let k3 = rates(z + 0.5 * h * k2.0, t0 + 0.5 * h * k2.1, wm, am, bm);
        let k4 = rates(z + h * k3.0, t0 + h * k3.1, w1, a1, b1);
        z += h / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0);
        t0 += h / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1);
        if !in_range(z) || !(t0 > 0.0) || !in_range(t0) {
            return Err(Error::MetricBlowUp {
                index: i + 1,
                zeta: z,
                theta0: t0,
            });
        }
        rel.push(check_rel(i + 1, z, t0)?);
        zeta.push(z);
        theta0.push(t0);
    }

    let points = (0..n)
        .map(|i| {
            let (w, a, b) = coeffs.at(i);
            let (zd, td) = rates(zeta[i], theta0[i], w, a, b);
            MetricPoint::new(zeta[i], theta0[i], kind).with_rates(zd, td)
        })
        .collect();
    Ok(AuxiliarySolution {
        metric: MetricTrajectory::new(grid, points, kind)?,
        rel_residual: rel,
    })
}

/// Integrand of the phase: `(1/ϑ0)[((D/2)ζ² − χ)Cω − 2DζCα]`, which equals
/// `−Re W` on a compatible pair.
pub fn phase_rate(m: &MetricPoint, omega: C64, alpha: C64, kind: AlgebraKind) -> f64 {
    let d = kind.d();
    ((0.5 * d * m.zeta * m.zeta - m.chi) * omega.re - 2.0 * d * m.zeta * alpha.re) / m.theta0
}

/// `φn(t) = −2k_n ∫₀ᵗ phase_rate dt′`, Simpson on uniform grids.
pub fn phase(k_n: f64, metric: &MetricTrajectory, coeffs: &CoefficientTrajectory) -> Vec<f64> {
    let rate: Vec<f64> = (0..metric.len())
        .map(|i| {
            let (w, a, _) = coeffs.at(i);
            phase_rate(metric.point(i), w, a, metric.kind())
        })
        .collect();
    grid::cumulative_integral(metric.grid(), &rate)
        .into_iter()
        .map(|x| -2.0 * k_n * x)
        .collect()
}

/// Maxima of the compatibility diagnostics over the grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Consistency {
    pub auxiliary: f64,
    pub u_max: f64,
    pub v_max: f64,
    pub im_w_max: f64,
}

impl Consistency {
    pub fn max(&self) -> f64 {
        self.auxiliary.max(self.u_max).max(self.v_max).max(self.im_w_max)
    }
}

pub fn consistency(metric: &MetricTrajectory, coeffs: &CoefficientTrajectory) -> Consistency {
    let aux = auxiliary_residuals(metric, coeffs).max();
    let t = transformed_curve(metric, coeffs);
    let fold = |f: fn(&TransformedCoeffs) -> f64| t.iter().map(f).fold(0.0, f64::max);
    Consistency {
        auxiliary: aux,
        u_max: fold(|c| c.u.norm()),
        v_max: fold(|c| c.v.norm()),
        im_w_max: fold(|c| c.w.im.abs()),
    }
}

/// Eigen-expansion of an initial state and its exact propagation.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionBundle {
    /// `k_n`, ascending.
    pub eigenvalues: Vec<f64>,
    /// `φn(t)` per eigenindex.
    pub phases: Vec<Vec<f64>>,
    /// `C_n = ⟨φn(0)|η(0)|Φ(0)⟩`
    pub coefficients: Vec<C64>,
    /// `Φ(t) = Σ C_n e^{iφn(t)} ρ⁻¹(t)|ψn⟩`
    pub states: Vec<CVector>,
}

/// `ρ⁻¹ v = exp(ζK−)·ϑ0^{−K0}·exp(ζK+)·v` without forming `ρ⁻¹`.
pub fn apply_rho_inverse(rep: &AlgebraRep, m: &MetricPoint, v: &CVector) -> CVector {
    let mut x = rep
        .sparse(crate::algebra::Generator::Plus)
        .exp_nilpotent_apply(real(m.zeta), v);
    for (i, k) in rep.k0_diagonal().iter().enumerate() {
        x[i] *= libm::pow(m.theta0, -*k);
    }
    rep.sparse(crate::algebra::Generator::Minus)
        .exp_nilpotent_apply(real(m.zeta), &x)
}

/// `ρ v = exp(−ζK+)·ϑ0^{K0}·exp(−ζK−)·v`.
pub fn apply_rho(rep: &AlgebraRep, m: &MetricPoint, v: &CVector) -> CVector {
    let mut x = rep
        .sparse(crate::algebra::Generator::Minus)
        .exp_nilpotent_apply(real(-m.zeta), v);
    for (i, k) in rep.k0_diagonal().iter().enumerate() {
        x[i] *= libm::pow(m.theta0, *k);
    }
    rep.sparse(crate::algebra::Generator::Plus)
        .exp_nilpotent_apply(real(-m.zeta), &x)
}

/// Builds the solution without checking compatibility of the pair.
pub fn assemble_solution(
    rep: &AlgebraRep,
    metric: &MetricTrajectory,
    coeffs: &CoefficientTrajectory,
    psi0: &CVector,
) -> Result<SolutionBundle> {
    if psi0.len() != rep.dim() {
        return Err(Error::LengthMismatch {
            expected: rep.dim(),
            found: psi0.len(),
        });
    }
    metric.grid().check_len(coeffs.len())?;
    let (eigenvalues, psi) = crate::invariant::k0_eigenbasis(rep)?;
    // ⟨φn|η|Φ⟩ = ⟨ψn|ρ^{−†}ρ†ρ|Φ⟩ = ⟨ψn|ρ|Φ⟩
    let rho_psi0 = apply_rho(rep, metric.point(0), psi0);
    let coefficients: Vec<C64> = psi.column_iter().map(|c| c.dotc(&rho_psi0)).collect();
    let phases: Vec<Vec<f64>> = eigenvalues.iter().map(|&k| phase(k, metric, coeffs)).collect();

    let states = (0..metric.len())
        .map(|i| {
            let mut h = CVector::zeros(rep.dim());
            for (n, c) in coefficients.iter().enumerate() {
                if *c == linalg::ZERO {
                    continue;
                }
                let e = C64::from_polar(1.0, phases[n][i]);
                h.axpy(*c * e, &psi.column(n), linalg::ONE);
            }
            apply_rho_inverse(rep, metric.point(i), &h)
        })
        .collect();
    Ok(SolutionBundle {
        eigenvalues,
        phases,
        coefficients,
        states,
    })
}

/// Exact solution `Φ(t)` for a compatible pair; rejects pairs whose
/// auxiliary residuals, `|U|`, `|V|` or `|Im W|` exceed `tol`.
pub fn evolve(
    rep: &AlgebraRep,
    metric: &MetricTrajectory,
    coeffs: &CoefficientTrajectory,
    psi0: &CVector,
    tol: f64,
) -> Result<SolutionBundle> {
    let aux = auxiliary_residuals(metric, coeffs);
    let (name, index, r) = aux.worst();
    if r > tol || r.is_nan() {
        return Err(Error::Inconsistent {
            quantity: name,
            index,
            residual: r,
        });
    }
    for (i, t) in transformed_curve(metric, coeffs).iter().enumerate() {
        for (name, r) in [("U", t.u.norm()), ("V", t.v.norm()), ("Im W", t.w.im.abs())] {
            if r > tol || r.is_nan() {
                return Err(Error::Inconsistent {
                    quantity: name,
                    index: i,
                    residual: r,
                });
            }
        }
    }
    assemble_solution(rep, metric, coeffs, psi0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::build_su2_rep;
    use crate::curve::{MetricCurve, ScalarCurve};

    fn grid(steps: usize) -> TimeGrid {
        TimeGrid::uniform(10.0, steps).unwrap()
    }

    fn breathing(kind: AlgebraKind, steps: usize) -> MetricTrajectory {
        let c = MetricCurve::breathing(0.2, 0.05, 0.7, 1.0, 0.1, 0.5);
        MetricTrajectory::from_curve(grid(steps), &c, kind).unwrap()
    }

    fn drive(g: &TimeGrid) -> Vec<f64> {
        let c = ScalarCurve::Sinusoid {
            offset: -0.2,
            amplitude: -0.06,
            frequency: 0.3,
            phase: 0.0,
        };
        c.sample(g).unwrap().0
    }

    #[test]
    fn constant_metric_gives_real_coefficients() {
        let m = MetricTrajectory::constant(grid(100), 0.3, 1.2, AlgebraKind::Su11).unwrap();
        let n = m.len();
        let c = synthesize_hamiltonian(&m, &alloc::vec![-0.4; n], &alloc::vec![0.0; n]).unwrap();
        for i in 0..n {
            let (w, a, b) = c.at(i);
            assert_eq!((w.im, a.im, b.im), (0.0, 0.0, 0.0));
        }
        assert!(auxiliary_residuals(&m, &c).max() <= 1e-12);
    }

    #[test]
    fn synthesis_closure_and_vanishing_drive() {
        for kind in [AlgebraKind::Su11, AlgebraKind::Su2] {
            let m = breathing(kind, 400);
            let b = drive(m.grid());
            let c = synthesize_hamiltonian(&m, &b, &reality_beta_im(&m)).unwrap();
            let aux = auxiliary_residuals(&m, &c);
            assert!(aux.max() <= 1e-9, "{:?}", aux.worst());
            let cons = consistency(&m, &c);
            assert!(cons.max() <= 1e-8, "{cons:?}");
        }
    }

    #[test]
    fn explicit_beta_im_leaves_w_complex() {
        let m = breathing(AlgebraKind::Su2, 200);
        let n = m.len();
        let c = synthesize_hamiltonian(&m, &drive(m.grid()), &alloc::vec![0.0; n]).unwrap();
        let cons = consistency(&m, &c);
        assert!(cons.auxiliary <= 1e-9);
        assert!(cons.u_max.max(cons.v_max) <= 1e-9);
        assert!(cons.im_w_max > 1e-3);
    }

    #[test]
    fn rel2_follows_from_rel1_and_rel3() {
        let m = breathing(AlgebraKind::Su11, 100);
        let c = synthesize_hamiltonian(&m, &drive(m.grid()), &reality_beta_im(&m)).unwrap();
        let aux = auxiliary_residuals(&m, &c);
        assert!(aux.rel2.iter().all(|&r| r <= 1e-12));
    }

    #[test]
    fn zeta_too_small() {
        let m = MetricTrajectory::constant(grid(10), 0.0, 1.0, AlgebraKind::Su2).unwrap();
        let z = alloc::vec![0.0; 11];
        let err = synthesize_hamiltonian(&m, &z, &z).unwrap_err();
        assert_eq!(err, Error::ZetaTooSmall { index: 0, value: 0.0 });
    }

    #[test]
    fn perturbed_omega_is_detected() {
        let m = breathing(AlgebraKind::Su2, 100);
        let c = synthesize_hamiltonian(&m, &drive(m.grid()), &reality_beta_im(&m)).unwrap();
        let bad = c.map(|_, (w, a, b)| (w + 0.1, a, b));
        assert!(auxiliary_residuals(&m, &bad).max() > 1e-3);
    }

    #[test]
    fn round_trip_recovers_metric() {
        let m = breathing(AlgebraKind::Su2, 2000);
        let c = synthesize_hamiltonian(&m, &drive(m.grid()), &reality_beta_im(&m)).unwrap();
        let p0 = m.point(0);
        let sol = solve_auxiliary(&c, p0.zeta, p0.theta0, AlgebraKind::Su2, 1e-7).unwrap();
        let err = m
            .points()
            .iter()
            .zip(sol.metric.points())
            .map(|(a, b)| (a.zeta - b.zeta).abs().max((a.theta0 - b.theta0).abs()))
            .fold(0.0, f64::max);
        assert!(err <= 1e-7, "{err}");
    }

    #[test]
    fn incompatible_hamiltonian_rejected() {
        let c = CoefficientTrajectory::constant(grid(100), C64::new(1.0, 0.3), C64::new(0.2, -0.1), C64::new(0.5, 0.7));
        let err = solve_auxiliary(&c, 0.2, 1.0, AlgebraKind::Su2, 1e-8).unwrap_err();
        assert!(matches!(err, Error::RelIncompatible { index: 0, .. }));
    }

    #[test]
    fn identity_metric_transformed_coeffs() {
        let m = MetricPoint::identity();
        let (w, a) = (real(1.3), C64::new(0.2, 0.1));
        let t = transformed_coeffs(&m, w, a, a.conj(), AlgebraKind::Su11);
        assert_eq!(t.w, -w);
        assert_eq!(t.u, -a);
    }

    #[test]
    fn perturbed_metric_breaks_u() {
        let m = breathing(AlgebraKind::Su2, 100);
        let c = synthesize_hamiltonian(&m, &drive(m.grid()), &reality_beta_im(&m)).unwrap();
        let mut p = *m.point(5);
        p.zeta += 0.1;
        p.chi = crate::metric::chi_of(p.zeta, p.theta0, AlgebraKind::Su2);
        let (w, a, b) = c.at(5);
        assert!(transformed_coeffs(&p, w, a, b, AlgebraKind::Su2).u.norm() > 1e-3);
    }

    #[test]
    fn phase_zero_and_linear() {
        let m = MetricTrajectory::constant(grid(100), 0.3, 1.2, AlgebraKind::Su2).unwrap();
        let n = m.len();
        let c = synthesize_hamiltonian(&m, &alloc::vec![-0.4; n], &alloc::vec![0.0; n]).unwrap();
        assert!(phase(0.0, &m, &c).iter().all(|&x| x == 0.0));
        let p = m.point(0);
        let (w, a, _) = c.at(0);
        let slope = -2.0 * 0.5 * ((p.zeta * p.zeta - p.chi) * w.re - 4.0 * p.zeta * a.re) / p.theta0;
        for (t, x) in m.grid().times().iter().zip(phase(0.5, &m, &c)) {
            assert!((x - slope * t).abs() < 1e-12);
        }
    }

    #[test]
    fn phase_rate_is_real_part_of_w() {
        let m = breathing(AlgebraKind::Su11, 100);
        let c = synthesize_hamiltonian(&m, &drive(m.grid()), &reality_beta_im(&m)).unwrap();
        for i in 0..m.len() {
            let (w, a, b) = c.at(i);
            let t = transformed_coeffs(m.point(i), w, a, b, AlgebraKind::Su11);
            assert!((phase_rate(m.point(i), w, a, AlgebraKind::Su11) + t.w.re).abs() < 1e-12);
        }
    }

    #[test]
    fn single_mode_propagation() {
        let rep = build_su2_rep(0.5).unwrap();
        let m = breathing(AlgebraKind::Su2, 200);
        let c = synthesize_hamiltonian(&m, &drive(m.grid()), &reality_beta_im(&m)).unwrap();
        let (_, psi) = crate::invariant::k0_eigenbasis(&rep).unwrap();
        let phi0 = apply_rho_inverse(&rep, m.point(0), &psi.column(0).into_owned());
        let sol = evolve(&rep, &m, &c, &phi0, 1e-8).unwrap();
        assert!((sol.coefficients[0] - linalg::ONE).norm() < 1e-12);
        assert!(sol.coefficients[1].norm() < 1e-12);
        for (i, s) in sol.states.iter().enumerate() {
            let expect = apply_rho_inverse(&rep, m.point(i), &psi.column(0).into_owned())
                * C64::from_polar(1.0, sol.phases[0][i]);
            assert!(linalg::vec_max_abs(&(s - expect)) < 1e-12);
        }
    }

    #[test]
    fn evolve_rejects_complex_w() {
        let rep = build_su2_rep(0.5).unwrap();
        let m = breathing(AlgebraKind::Su2, 100);
        let c = synthesize_hamiltonian(&m, &drive(m.grid()), &alloc::vec![0.0; m.len()]).unwrap();
        let err = evolve(&rep, &m, &c, &linalg::basis_vector(2, 0), 1e-8).unwrap_err();
        assert!(matches!(err, Error::Inconsistent { quantity: "Im W", .. }));
    }

    #[test]
    fn rho_apply_matches_dense() {
        let rep = crate::algebra::build_boson_rep(12).unwrap();
        let p = MetricPoint::new(0.2, 1.3, AlgebraKind::Su11);
        let map = crate::metric::DysonMap::new(&rep, &p).unwrap();
        let v = CVector::from_fn(12, |i, _| C64::new(1.0 / (i + 1) as f64, 0.1 * i as f64));
        assert!(linalg::vec_max_abs(&(apply_rho(&rep, &p, &v) - &map.rho * &v)) < 1e-12);
        assert!(linalg::vec_max_abs(&(apply_rho_inverse(&rep, &p, &v) - &map.rho_inv * &v)) < 1e-12);
    }
}
