//! Independent checks of the construction: a brute-force RK4 propagator and
//! residuals of the Schrödinger equation, the invariance condition,
//! quasi-Hermiticity, the time-dependent Dyson relation and pseudo-norm
//! conservation.
//!
//! Time derivatives of `I^PH`, `η` and `ρ` are centered differences on the
//! scenario grid, so the residuals here have an `O(h²)` floor and never use
//! the analytic rates carried by the metric samples.
//!
//! For truncated representations every dense check is restricted to the
//! trusted leading block (see [`AlgebraRep::trusted_dim`]).

use alloc::vec::Vec;

use crate::algebra::AlgebraRep;
use crate::dynamics::{self, CoefficientTrajectory, MetricTrajectory, SolutionBundle};
use crate::error::{Error, Result};
use crate::invariant;
use crate::linalg::{self, real, CMatrix, CVector, C64, I};
use crate::metric::DysonMap;

/// State norm beyond which propagation is abandoned.
pub const OVERFLOW_NORM: f64 = 1e8;

fn block_norm(v: &CVector, n: usize) -> f64 {
    libm::sqrt(v.iter().take(n).map(|z| z.norm_sqr()).sum())
}

/// Classic RK4 for `i∂tψ = Hψ`; half-step coefficients by cubic
/// interpolation. No renormalization.
pub fn integrate_tdse(rep: &AlgebraRep, coeffs: &CoefficientTrajectory, psi0: &CVector) -> Result<Vec<CVector>> {
    let h = coeffs.grid().uniform_step()?;
    if psi0.len() != rep.dim() {
        return Err(Error::LengthMismatch {
            expected: rep.dim(),
            found: psi0.len(),
        });
    }
    let rhs = |(w, a, b): (C64, C64, C64), v: &CVector| rep.apply_hamiltonian(w, a, b, v) * (-I);
    let mut out = Vec::with_capacity(coeffs.len());
    let mut psi = psi0.clone();
    out.push(psi.clone());
    for i in 0..coeffs.len() - 1 {
        let (c0, cm, c1) = (coeffs.at(i), coeffs.midpoint(i), coeffs.at(i + 1));
        let k1 = rhs(c0, &psi);
        let k2 = rhs(cm, &(&psi + &k1 * real(0.5 * h)));
        let k3 = rhs(cm, &(&psi + &k2 * real(0.5 * h)));
        let k4 = rhs(c1, &(&psi + &k3 * real(h)));
        psi += (k1 + k2 * real(2.0) + k3 * real(2.0) + k4) * real(h / 6.0);
        let norm = psi.norm();
        if !(norm <= OVERFLOW_NORM) {
            return Err(Error::Overflow(i + 1));
        }
        out.push(psi.clone());
    }
    Ok(out)
}

/// `∂tΦ` at sample `i`: five-point centered stencil on uniform grids (the
/// samples next to the ends use the offset fourth-order form), three-point
/// otherwise.
fn state_derivative(states: &[CVector], t: &[f64], uniform: Option<f64>, i: usize) -> CVector {
    let n = states.len();
    let s = |k: usize| &states[k];
    match uniform {
        Some(h) if n >= 5 => {
            let c = real(1.0 / (12.0 * h));
            if i >= 2 && i + 2 < n {
                (s(i - 2) - s(i - 1) * real(8.0) + s(i + 1) * real(8.0) - s(i + 2)) * c
            } else if i == 1 {
                (s(0) * real(-3.0) - s(1) * real(10.0) + s(2) * real(18.0) - s(3) * real(6.0) + s(4)) * c
            } else {
                (s(n - 1) * real(3.0) + s(n - 2) * real(10.0) - s(n - 3) * real(18.0) + s(n - 4) * real(6.0) - s(n - 5)) * c
            }
        }
        _ => (s(i + 1) - s(i - 1)) * real(1.0 / (t[i + 1] - t[i - 1])),
    }
}

/// `‖i∂tΦ − HΦ‖/‖Φ‖` per interior sample (zero at the ends).
pub fn tdse_residual_curve(states: &[CVector], coeffs: &CoefficientTrajectory, rep: &AlgebraRep) -> Vec<f64> {
    let grid = coeffs.grid();
    let t = grid.times();
    let uniform = grid.is_uniform().then(|| grid.step()).flatten();
    let n = rep.trusted_dim();
    let mut out = alloc::vec![0.0; states.len()];
    for i in 1..states.len().saturating_sub(1) {
        let d = state_derivative(states, t, uniform, i) * I;
        let (w, a, b) = coeffs.at(i);
        let r = d - rep.apply_hamiltonian(w, a, b, &states[i]);
        out[i] = block_norm(&r, n) / block_norm(&states[i], n);
    }
    out
}

pub fn tdse_residual(states: &[CVector], coeffs: &CoefficientTrajectory, rep: &AlgebraRep) -> f64 {
    max_of(&tdse_residual_curve(states, coeffs, rep))
}

fn max_of(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |a, &b| if b.is_nan() || a.is_nan() { f64::NAN } else { a.max(b) })
}

/// Everything a residual needs at one sample.
struct Frame {
    map: DysonMap,
    eta: CMatrix,
    i_ph: CMatrix,
    h: CMatrix,
}

impl Frame {
    fn new(rep: &AlgebraRep, metric: &MetricTrajectory, coeffs: &CoefficientTrajectory, k: usize) -> Result<Self> {
        let p = metric.point(k);
        let map = DysonMap::new(rep, p)?;
        let eta = map.eta();
        Ok(Self {
            map,
            eta,
            i_ph: invariant::build_invariant_ph(rep, p),
            h: coeffs.hamiltonian(rep, k),
        })
    }
}

/// Visits every interior sample with the frames at `i−1, i, i+1`; each
/// frame is built once.
fn for_each_interior(
    rep: &AlgebraRep,
    metric: &MetricTrajectory,
    coeffs: &CoefficientTrajectory,
    mut visit: impl FnMut(usize, f64, [&Frame; 3]),
) -> Result<()> {
    let t = metric.grid().times();
    let len = metric.len().min(coeffs.len());
    if len < 3 {
        return Ok(());
    }
    let mut prev = Frame::new(rep, metric, coeffs, 0)?;
    let mut cur = Frame::new(rep, metric, coeffs, 1)?;
    for i in 1..len - 1 {
        let next = Frame::new(rep, metric, coeffs, i + 1)?;
        visit(i, t[i + 1] - t[i - 1], [&prev, &cur, &next]);
        prev = cur;
        cur = next;
    }
    Ok(())
}

fn invariance_at(f: [&Frame; 3], dt: f64, n: usize) -> f64 {
    let [prev, cur, next] = f;
    let d = (&next.i_ph - &prev.i_ph) * real(1.0 / dt);
    let comm = linalg::matmul(&cur.i_ph, &cur.h) - linalg::matmul(&cur.h, &cur.i_ph);
    linalg::max_abs_block(&(d - comm * I), n)
}

fn phh1_at(f: [&Frame; 3], dt: f64, n: usize) -> f64 {
    let [prev, cur, next] = f;
    let eta_dot = (&next.eta - &prev.eta) * real(1.0 / dt);
    let eta_inv = cur.map.eta_inv();
    let conj = linalg::matmul(&linalg::matmul(&cur.eta, &cur.h), &eta_inv);
    let r = cur.h.adjoint() - conj - linalg::matmul(&eta_dot, &eta_inv) * I;
    linalg::max_abs_block(&r, n)
}

/// `h = ρHρ⁻¹ + iρ̇ρ⁻¹`; returns `‖h − h†‖` and `‖[h, K0]‖`.
fn dyson_at(f: [&Frame; 3], dt: f64, k0: &CMatrix, n: usize) -> (f64, f64) {
    let [prev, cur, next] = f;
    let rho_dot = (&next.map.rho - &prev.map.rho) * real(1.0 / dt);
    let h = cur.map.push_forward(&cur.h) + linalg::matmul(&rho_dot, &cur.map.rho_inv) * I;
    let comm = linalg::matmul(&h, k0) - linalg::matmul(k0, &h);
    (linalg::hermitian_defect_block(&h, n), linalg::max_abs_block(&comm, n))
}

/// `‖∂tI^PH − i[I^PH, H]‖` per interior sample.
pub fn invariance_residual_curve(metric: &MetricTrajectory, coeffs: &CoefficientTrajectory, rep: &AlgebraRep) -> Vec<f64> {
    let t = metric.grid().times();
    let n = rep.trusted_dim();
    let mut out = alloc::vec![0.0; metric.len()];
    let frame = |k: usize| {
        let i_ph = invariant::build_invariant_ph(rep, metric.point(k));
        (i_ph, coeffs.hamiltonian(rep, k))
    };
    for i in 1..metric.len() - 1 {
        let ((prev, _), (cur, h), (next, _)) = (frame(i - 1), frame(i), frame(i + 1));
        let d = (next - prev) * real(1.0 / (t[i + 1] - t[i - 1]));
        let comm = linalg::matmul(&cur, &h) - linalg::matmul(&h, &cur);
        out[i] = linalg::max_abs_block(&(d - comm * I), n);
    }
    out
}

pub fn invariance_residual(metric: &MetricTrajectory, coeffs: &CoefficientTrajectory, rep: &AlgebraRep) -> f64 {
    max_of(&invariance_residual_curve(metric, coeffs, rep))
}

/// `‖H† − ηHη⁻¹ − iη̇η⁻¹‖` per interior sample.
pub fn phh1_residual_curve(metric: &MetricTrajectory, coeffs: &CoefficientTrajectory, rep: &AlgebraRep) -> Result<Vec<f64>> {
    let n = rep.trusted_dim();
    let mut out = alloc::vec![0.0; metric.len()];
    for_each_interior(rep, metric, coeffs, |i, dt, f| out[i] = phh1_at(f, dt, n))?;
    Ok(out)
}

pub fn phh1_residual(metric: &MetricTrajectory, coeffs: &CoefficientTrajectory, rep: &AlgebraRep) -> Result<f64> {
    Ok(max_of(&phh1_residual_curve(metric, coeffs, rep)?))
}

/// Per interior sample: `‖h − h†‖` and `‖[h, K0]‖`.
pub fn dyson_curves(metric: &MetricTrajectory, coeffs: &CoefficientTrajectory, rep: &AlgebraRep) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = rep.trusted_dim();
    let mut defect = alloc::vec![0.0; metric.len()];
    let mut comm = alloc::vec![0.0; metric.len()];
    for_each_interior(rep, metric, coeffs, |i, dt, f| {
        (defect[i], comm[i]) = dyson_at(f, dt, rep.k0(), n);
    })?;
    Ok((defect, comm))
}

/// Largest Hermiticity defect of the Dyson-transformed Hamiltonian.
pub fn dyson_check(metric: &MetricTrajectory, coeffs: &CoefficientTrajectory, rep: &AlgebraRep) -> Result<f64> {
    Ok(max_of(&dyson_curves(metric, coeffs, rep)?.0))
}

/// Largest `‖[h, I^h]‖` with `I^h = 2K0`.
pub fn dyson_commutator_residual(metric: &MetricTrajectory, coeffs: &CoefficientTrajectory, rep: &AlgebraRep) -> Result<f64> {
    Ok(2.0 * max_of(&dyson_curves(metric, coeffs, rep)?.1))
}

/// `⟨Φ|η(t)|Φ⟩ = ‖ρ(t)Φ‖²` per sample.
pub fn pseudo_norm_curve(states: &[CVector], metric: &MetricTrajectory, rep: &AlgebraRep) -> Vec<f64> {
    states
        .iter()
        .zip(metric.points())
        .map(|(s, p)| dynamics::apply_rho(rep, p, s).norm_squared())
        .collect()
}

/// `max_t |⟨Φ|η|Φ⟩(t) − ⟨Φ|η|Φ⟩(0)|`
pub fn pseudo_norm_drift(states: &[CVector], metric: &MetricTrajectory, rep: &AlgebraRep) -> f64 {
    let c = pseudo_norm_curve(states, metric, rep);
    max_of(&c.iter().map(|x| (x - c[0]).abs()).collect::<Vec<_>>())
}

/// `max_t max_k |a_k(t) − b_k(t)|`, no phase alignment.
pub fn state_difference(a: &[CVector], b: &[CVector]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| linalg::vec_max_abs(&(x - y))).collect()
}

/// Per-sample diagnostics of the invariant itself.
#[derive(Debug, Clone, PartialEq)]
pub struct InvariantCurves {
    /// `‖ρI^PHρ⁻¹ − I^h‖`
    pub similarity: Vec<f64>,
    /// `‖I^PH†η − ηI^PH‖`
    pub quasi_hermiticity: Vec<f64>,
    /// `max |⟨φm|η|φn⟩ − δmn|`
    pub eta_orthonormality: Vec<f64>,
    /// `max_n |Im λn|` of the η-Rayleigh quotients
    pub eigenvalue_imag: Vec<f64>,
    /// `max_n |λn(t) − λn(0)|`
    pub spectrum_drift: Vec<f64>,
}

struct InvariantAccumulator {
    curves: InvariantCurves,
    psi: CMatrix,
    k2: CMatrix,
    n: usize,
    first: Vec<C64>,
}

impl InvariantAccumulator {
    fn new(rep: &AlgebraRep, len: usize) -> Result<Self> {
        let n = rep.trusted_dim();
        let (_, psi) = invariant::k0_eigenbasis(rep)?;
        let empty = || Vec::with_capacity(len);
        Ok(Self {
            curves: InvariantCurves {
                similarity: empty(),
                quasi_hermiticity: empty(),
                eta_orthonormality: empty(),
                eigenvalue_imag: empty(),
                spectrum_drift: empty(),
            },
            psi: psi.columns(0, n).into_owned(),
            k2: rep.k0() * real(2.0),
            n,
            first: Vec::new(),
        })
    }

    fn push(&mut self, f: &Frame) {
        let (n, c) = (self.n, &mut self.curves);
        c.similarity
            .push(linalg::max_abs_block(&(f.map.push_forward(&f.i_ph) - &self.k2), n));
        // η is Hermitian, so I†η − ηI = (ηI)† − ηI
        let eta_i = linalg::matmul(&f.eta, &f.i_ph);
        c.quasi_hermiticity
            .push(linalg::hermitian_defect_block(&eta_i, n));

        let phi = linalg::matmul(&f.map.rho_inv, &self.psi);
        let phi_h = phi.adjoint();
        let gram = linalg::matmul(&phi_h, &linalg::matmul(&f.eta, &phi));
        let num = linalg::matmul(&phi_h, &linalg::matmul(&eta_i, &phi));
        c.eta_orthonormality
            .push(linalg::max_abs(&(&gram - linalg::identity(n))));
        let lambda: Vec<C64> = (0..n).map(|k| num[(k, k)] / gram[(k, k)]).collect();
        c.eigenvalue_imag
            .push(lambda.iter().fold(0.0, |a, z| a.max(z.im.abs())));
        if self.first.is_empty() {
            self.first = lambda.clone();
        }
        c.spectrum_drift.push(
            lambda
                .iter()
                .zip(&self.first)
                .fold(0.0, |a, (x, y)| a.max((x - y).norm())),
        );
    }
}

pub fn invariant_curves(metric: &MetricTrajectory, rep: &AlgebraRep) -> Result<InvariantCurves> {
    let mut acc = InvariantAccumulator::new(rep, metric.len())?;
    let zero = CoefficientTrajectory::constant(metric.grid().clone(), linalg::ZERO, linalg::ZERO, linalg::ZERO);
    for k in 0..metric.len() {
        acc.push(&Frame::new(rep, metric, &zero, k)?);
    }
    Ok(acc.curves)
}

/// Named residuals, each a maximum over the grid, with their curves.
#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub tdse_residual: f64,
    pub invariance_residual: f64,
    pub quasi_hermiticity_residual: f64,
    pub dyson_hermiticity_defect: f64,
    pub dyson_commutator_residual: f64,
    pub phh1_residual: f64,
    pub pseudo_norm_drift: f64,
    pub uv_max: f64,
    pub im_w_max: f64,
    pub auxiliary_max: f64,
    pub oracle_difference: f64,
    pub rk4_pseudo_norm_drift: f64,
    pub rk4_tdse_residual: f64,
    pub similarity_residual: f64,
    pub eta_orthonormality_defect: f64,
    pub eigenvalue_imag_max: f64,
    pub spectrum_drift: f64,
    pub curves: ReportCurves,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportCurves {
    pub tdse: Vec<f64>,
    pub invariance: Vec<f64>,
    pub phh1: Vec<f64>,
    pub dyson: Vec<f64>,
    pub pseudo_norm: Vec<f64>,
    pub uv: Vec<f64>,
    pub im_w: Vec<f64>,
    pub oracle: Vec<f64>,
    pub invariant: InvariantCurves,
}

impl VerificationReport {
    /// Scalar fields in a fixed order.
    pub fn fields(&self) -> [(&'static str, f64); 17] {
        [
            ("tdse_residual", self.tdse_residual),
            ("invariance_residual", self.invariance_residual),
            ("quasi_hermiticity_residual", self.quasi_hermiticity_residual),
            ("dyson_hermiticity_defect", self.dyson_hermiticity_defect),
            ("dyson_commutator_residual", self.dyson_commutator_residual),
            ("phh1_residual", self.phh1_residual),
            ("pseudo_norm_drift", self.pseudo_norm_drift),
            ("uv_max", self.uv_max),
            ("im_w_max", self.im_w_max),
            ("auxiliary_max", self.auxiliary_max),
            ("oracle_difference", self.oracle_difference),
            ("rk4_pseudo_norm_drift", self.rk4_pseudo_norm_drift),
            ("rk4_tdse_residual", self.rk4_tdse_residual),
            ("similarity_residual", self.similarity_residual),
            ("eta_orthonormality_defect", self.eta_orthonormality_defect),
            ("eigenvalue_imag_max", self.eigenvalue_imag_max),
            ("spectrum_drift", self.spectrum_drift),
        ]
    }
}

/// Everything computed for one scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct Verification {
    pub report: VerificationReport,
    pub solution: SolutionBundle,
    pub rk4_states: Vec<CVector>,
}

/// Runs the full residual suite. The exact solution is assembled without
/// the consistency gate so that an inconsistent pair is reported through
/// its residuals rather than rejected.
pub fn verify_scenario(
    rep: &AlgebraRep,
    metric: &MetricTrajectory,
    coeffs: &CoefficientTrajectory,
    psi0: &CVector,
) -> Result<Verification> {
    let solution = dynamics::assemble_solution(rep, metric, coeffs, psi0)?;
    let rk4_states = integrate_tdse(rep, coeffs, psi0)?;

    let tdse = tdse_residual_curve(&solution.states, coeffs, rep);
    let rk4_tdse = tdse_residual_curve(&rk4_states, coeffs, rep);

    let len = metric.len();
    let n = rep.trusted_dim();
    let mut invariance = alloc::vec![0.0; len];
    let mut phh1 = alloc::vec![0.0; len];
    let mut dyson = alloc::vec![0.0; len];
    let mut dyson_comm = alloc::vec![0.0; len];
    let mut acc = InvariantAccumulator::new(rep, len)?;
    acc.push(&Frame::new(rep, metric, coeffs, 0)?);
    for_each_interior(rep, metric, coeffs, |i, dt, f| {
        invariance[i] = invariance_at(f, dt, n);
        phh1[i] = phh1_at(f, dt, n);
        (dyson[i], dyson_comm[i]) = dyson_at(f, dt, rep.k0(), n);
        acc.push(f[1]);
    })?;
    acc.push(&Frame::new(rep, metric, coeffs, len - 1)?);
    let inv = acc.curves;
    let pseudo_norm = pseudo_norm_curve(&solution.states, metric, rep);
    let rk4_norm = pseudo_norm_curve(&rk4_states, metric, rep);
    let transformed = dynamics::transformed_curve(metric, coeffs);
    let uv: Vec<f64> = transformed.iter().map(|c| c.uv()).collect();
    let im_w: Vec<f64> = transformed.iter().map(|c| c.w.im.abs()).collect();
    let oracle = state_difference(&solution.states, &rk4_states);
    let drift = |c: &[f64]| max_of(&c.iter().map(|x| (x - c[0]).abs()).collect::<Vec<_>>());

    let report = VerificationReport {
        tdse_residual: max_of(&tdse),
        invariance_residual: max_of(&invariance),
        quasi_hermiticity_residual: max_of(&inv.quasi_hermiticity),
        dyson_hermiticity_defect: max_of(&dyson),
        dyson_commutator_residual: 2.0 * max_of(&dyson_comm),
        phh1_residual: max_of(&phh1),
        pseudo_norm_drift: drift(&pseudo_norm),
        uv_max: max_of(&uv),
        im_w_max: max_of(&im_w),
        auxiliary_max: dynamics::auxiliary_residuals(metric, coeffs).max(),
        oracle_difference: max_of(&oracle),
        rk4_pseudo_norm_drift: drift(&rk4_norm),
        rk4_tdse_residual: max_of(&rk4_tdse),
        similarity_residual: max_of(&inv.similarity),
        eta_orthonormality_defect: max_of(&inv.eta_orthonormality),
        eigenvalue_imag_max: max_of(&inv.eigenvalue_imag),
        spectrum_drift: max_of(&inv.spectrum_drift),
        curves: ReportCurves {
            tdse,
            invariance,
            phh1,
            dyson,
            pseudo_norm,
            uv,
            im_w,
            oracle,
            invariant: inv,
        },
    };
    Ok(Verification {
        report,
        solution,
        rk4_states,
    })
}
