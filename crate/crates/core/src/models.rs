//! Ready-made scenarios: the time-dependent Swanson oscillator (boson
//! realization, D = −2), a spin in a complex time-varying field (SU(2),
//! D = 2) and the real-coefficient degeneration with a constant metric.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::algebra::{self, AlgebraKind, AlgebraRep};
use crate::curve::{MetricCurve, ScalarCurve};
use crate::dynamics::{self, CoefficientTrajectory, MetricTrajectory};
use crate::error::{Error, Result};
use crate::grid::{self, TimeGrid};
use crate::invariant;
use crate::linalg::{self, real, CMatrix, CVector, C64};
use crate::metric::{DysonMap, MetricPoint};
use crate::verify::{self, Verification};

/// Largest auxiliary residual a scenario may ship with.
pub const SCENARIO_TOL: f64 = 1e-8;
/// Smallest boson truncation accepted by the Swanson builder.
pub const MIN_BOSON_DIM: usize = 8;
pub const DEFAULT_DIM: usize = 40;
pub const DEFAULT_HORIZON: f64 = 10.0;
pub const DEFAULT_STEPS: usize = 2000;

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioSpec {
    pub name: String,
    pub rep: AlgebraRep,
    pub metric: MetricTrajectory,
    pub coeffs: CoefficientTrajectory,
    pub initial_state: CVector,
    /// Eigenindices populated by the initial state.
    pub indices: Vec<usize>,
    pub horizon: f64,
    pub steps: usize,
}

impl ScenarioSpec {
    /// Rejects pairs whose auxiliary residuals exceed [`SCENARIO_TOL`].
    pub fn new(
        name: &str,
        rep: AlgebraRep,
        metric: MetricTrajectory,
        coeffs: CoefficientTrajectory,
        initial_state: CVector,
        indices: Vec<usize>,
    ) -> Result<Self> {
        let spec = Self::unchecked(name, rep, metric, coeffs, initial_state, indices)?;
        let (quantity, index, residual) = dynamics::auxiliary_residuals(&spec.metric, &spec.coeffs).worst();
        if residual > SCENARIO_TOL || residual.is_nan() {
            return Err(Error::Inconsistent {
                quantity,
                index,
                residual,
            });
        }
        Ok(spec)
    }

    /// Same shape checks as [`ScenarioSpec::new`] but no consistency gate;
    /// used for negative controls and analysis runs.
    pub fn unchecked(
        name: &str,
        rep: AlgebraRep,
        metric: MetricTrajectory,
        coeffs: CoefficientTrajectory,
        initial_state: CVector,
        indices: Vec<usize>,
    ) -> Result<Self> {
        metric.grid().check_len(coeffs.len())?;
        if initial_state.len() != rep.dim() {
            return Err(Error::LengthMismatch {
                expected: rep.dim(),
                found: initial_state.len(),
            });
        }
        if metric.kind() != rep.kind() {
            return Err(Error::InvalidArgument("metric and representation use different algebras"));
        }
        let grid = metric.grid();
        Ok(Self {
            name: name.to_string(),
            horizon: grid.horizon(),
            steps: grid.steps(),
            rep,
            metric,
            coeffs,
            initial_state,
            indices,
        })
    }

    pub fn kind(&self) -> AlgebraKind {
        self.rep.kind()
    }

    pub fn grid(&self) -> &TimeGrid {
        self.metric.grid()
    }

    pub fn verify(&self) -> Result<Verification> {
        verify::verify_scenario(&self.rep, &self.metric, &self.coeffs, &self.initial_state)
    }
}

/// Closed-form `β` input; `im = None` selects the unique imaginary part
/// that keeps the phase drive real.
#[derive(Debug, Clone, PartialEq)]
pub struct BetaDrive {
    pub re: ScalarCurve,
    pub im: Option<ScalarCurve>,
}

impl BetaDrive {
    pub fn real_part(re: ScalarCurve) -> Self {
        Self { re, im: None }
    }
}

/// `Σ w_n ρ⁻¹(0)|ψn⟩` with the weights scaled to unit pseudo-norm.
pub fn eigen_superposition(rep: &AlgebraRep, m: &MetricPoint, weights: &[(usize, C64)]) -> Result<CVector> {
    let limit = rep.trusted_dim();
    let (_, psi) = invariant::k0_eigenbasis(rep)?;
    let norm = libm::sqrt(weights.iter().map(|(_, w)| w.norm_sqr()).sum::<f64>());
    if !(norm > 0.0) {
        return Err(Error::InvalidArgument("initial state weights are all zero"));
    }
    let mut h = CVector::zeros(rep.dim());
    for &(n, w) in weights {
        if n >= limit {
            return Err(Error::IndexOutOfRange { index: n, dim: limit });
        }
        h.axpy(w / norm, &psi.column(n), linalg::ONE);
    }
    Ok(dynamics::apply_rho_inverse(rep, m, &h))
}

/// Synthesizes coefficients on `grid` and seeds the initial state.
pub fn synthesized_scenario(
    name: &str,
    rep: AlgebraRep,
    grid: TimeGrid,
    curve: &MetricCurve,
    beta: &BetaDrive,
    weights: &[(usize, C64)],
) -> Result<ScenarioSpec> {
    let metric = MetricTrajectory::from_curve(grid.clone(), curve, rep.kind())?;
    let (beta_re, _) = beta.re.sample(&grid)?;
    let beta_im = match &beta.im {
        Some(c) => c.sample(&grid)?.0,
        None => dynamics::reality_beta_im(&metric),
    };
    let coeffs = dynamics::synthesize_hamiltonian(&metric, &beta_re, &beta_im)?;
    let psi0 = eigen_superposition(&rep, metric.point(0), weights)?;
    let indices = weights.iter().map(|w| w.0).collect();
    ScenarioSpec::new(name, rep, metric, coeffs, psi0, indices)
}

pub fn swanson_scenario(
    dim: usize,
    grid: TimeGrid,
    curve: &MetricCurve,
    beta: &BetaDrive,
    weights: &[(usize, C64)],
) -> Result<ScenarioSpec> {
    if dim < MIN_BOSON_DIM {
        return Err(Error::DimensionTooSmall { dim, min: MIN_BOSON_DIM });
    }
    synthesized_scenario("swanson", algebra::build_boson_rep(dim)?, grid, curve, beta, weights)
}

pub fn spin_scenario(
    j: f64,
    grid: TimeGrid,
    curve: &MetricCurve,
    beta: &BetaDrive,
    weights: &[(usize, C64)],
) -> Result<ScenarioSpec> {
    synthesized_scenario("spin", algebra::build_su2_rep(j)?, grid, curve, beta, weights)
}

// Factorized eigenstates, built from dense exponentials of the ladder
// matrices so they stay independent of the sparse pipeline.

fn ladder_exponential(x: &CMatrix, z: f64) -> CMatrix {
    linalg::expm(&(x * real(z)))
}

/// `exp[(ζ/2)a²]·exp[−(ln ϑ0/2){(a†a + ½) − (n + ½)}]·exp[(ζ/2)a†²]|n⟩`
pub fn swanson_eigenstate(dim: usize, m: &MetricPoint, n: usize) -> Result<CVector> {
    if n >= dim {
        return Err(Error::IndexOutOfRange { index: n, dim });
    }
    m.check_theta0()?;
    let a = algebra::annihilation(dim);
    let a2 = &a * &a;
    let ad2 = a2.adjoint();
    let ln = libm::log(m.theta0);
    let number = (0..dim).map(|r| libm::exp(-0.5 * ln * (r as f64 - n as f64)));
    let mid = linalg::diagonal(&number.map(real).collect::<Vec<_>>());
    let v = ladder_exponential(&a2, 0.5 * m.zeta) * mid * ladder_exponential(&ad2, 0.5 * m.zeta);
    Ok(v.column(n).into_owned())
}

/// `exp[ζJ−]·exp[−ln ϑ0 (Jz − m)]·exp[ζJ+]|m⟩`
pub fn spin_eigenstate(rep: &AlgebraRep, p: &MetricPoint, m: f64) -> Result<CVector> {
    let jz = rep.k0_diagonal();
    let index = jz
        .iter()
        .position(|k| (k - m).abs() < 1e-12)
        .ok_or(Error::InvalidArgument("m is not a Jz eigenvalue"))?;
    p.check_theta0()?;
    let ln = libm::log(p.theta0);
    let mid: Vec<C64> = jz.iter().map(|k| real(libm::exp(-ln * (k - m)))).collect();
    let v = ladder_exponential(rep.k_minus(), p.zeta)
        * linalg::diagonal(&mid)
        * ladder_exponential(rep.k_plus(), p.zeta);
    Ok(v.column(index).into_owned())
}

/// `exp[ζK−]exp[−ln ϑ0 K0]exp[ζK+] K0 exp[−ζK+]exp[ln ϑ0 K0]exp[−ζK−]`;
/// twice this is the Swanson form with `a†a + ½` in the middle.
pub fn spin_invariant_factorized(rep: &AlgebraRep, m: &MetricPoint) -> CMatrix {
    let k = rep.k0_diagonal();
    let pow = |s: f64| linalg::diagonal(&k.iter().map(|x| real(libm::pow(m.theta0, s * x))).collect::<Vec<_>>());
    let left = ladder_exponential(rep.k_minus(), m.zeta) * pow(-1.0) * ladder_exponential(rep.k_plus(), m.zeta);
    let right = ladder_exponential(rep.k_plus(), -m.zeta) * pow(1.0) * ladder_exponential(rep.k_minus(), -m.zeta);
    left * rep.k0() * right
}

fn cumulative(grid: &TimeGrid, rate: impl Fn(usize) -> f64) -> Vec<f64> {
    let r: Vec<f64> = (0..grid.len()).map(rate).collect();
    grid::cumulative_integral(grid, &r)
}

/// `(n + ½)∫(1/ϑ0)[(ζ² + χ)|ω|cos φω − 4ζ|α|cos φα]`
pub fn swanson_phase(n: usize, metric: &MetricTrajectory, coeffs: &CoefficientTrajectory) -> Vec<f64> {
    let acc = cumulative(metric.grid(), |i| {
        let p = metric.point(i);
        let [w, pw, a, pa, _, _] = coeffs.polar_at(i);
        ((p.zeta * p.zeta + p.chi) * w * libm::cos(pw) - 4.0 * p.zeta * a * libm::cos(pa)) / p.theta0
    });
    acc.into_iter().map(|x| (n as f64 + 0.5) * x).collect()
}

/// `−m∫(2/ϑ0)[(ζ² − χ)|ω|cos φω − 4ζ|α|cos φα]`
pub fn spin_phase(m: f64, metric: &MetricTrajectory, coeffs: &CoefficientTrajectory) -> Vec<f64> {
    let acc = cumulative(metric.grid(), |i| {
        let p = metric.point(i);
        let [w, pw, a, pa, _, _] = coeffs.polar_at(i);
        2.0 * ((p.zeta * p.zeta - p.chi) * w * libm::cos(pw) - 4.0 * p.zeta * a * libm::cos(pa)) / p.theta0
    });
    acc.into_iter().map(|x| -m * x).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Plus,
    Minus,
}

/// `ζ = (1/(2|β|))(−(D/2)|ω| ± √(|ω|² + 2D|α||β|))`
pub fn real_coefficient_zeta(
    abs_omega: f64,
    abs_alpha: f64,
    abs_beta: f64,
    kind: AlgebraKind,
    branch: Branch,
) -> Result<f64> {
    if !(abs_omega > 0.0 && abs_alpha >= 0.0 && abs_beta > 0.0) {
        return Err(Error::InvalidArgument("need |ω| > 0, |α| ≥ 0, |β| > 0"));
    }
    let d = kind.d();
    let disc = abs_omega * abs_omega + 2.0 * d * abs_alpha * abs_beta;
    if disc < 0.0 {
        return Err(Error::NegativeDiscriminant(disc));
    }
    let s = match branch {
        Branch::Plus => libm::sqrt(disc),
        Branch::Minus => -libm::sqrt(disc),
    };
    Ok((-0.5 * d * abs_omega + s) / (2.0 * abs_beta))
}

/// The root of smaller magnitude.
pub fn real_coefficient_zeta_small(abs_omega: f64, abs_alpha: f64, abs_beta: f64, kind: AlgebraKind) -> Result<f64> {
    let p = real_coefficient_zeta(abs_omega, abs_alpha, abs_beta, kind, Branch::Plus)?;
    let m = real_coefficient_zeta(abs_omega, abs_alpha, abs_beta, kind, Branch::Minus)?;
    Ok(if p.abs() <= m.abs() { p } else { m })
}

/// Residuals of `χ|β| = |α|`, `(χ − (D/2)ζ²)|α| = χζ|ω|`,
/// `ζ|ω| = (χ − (D/2)ζ²)|β|` with `χ = |α|/|β|`.
pub fn real_case_relations(abs_omega: f64, abs_alpha: f64, abs_beta: f64, zeta: f64, kind: AlgebraKind) -> [f64; 3] {
    let chi = abs_alpha / abs_beta;
    let g = chi - 0.5 * kind.d() * zeta * zeta;
    [
        (chi * abs_beta - abs_alpha).abs(),
        (g * abs_alpha - chi * zeta * abs_omega).abs(),
        (zeta * abs_omega - g * abs_beta).abs(),
    ]
}

/// Constant metric for real signed `(ω, α, β)`: `χ = α/β` and `ζ` a root
/// of `(D/2)βζ² + ωζ − α = 0`, the smaller admissible one (`ϑ0 > 0`).
pub fn real_case_metric(omega: f64, alpha: f64, beta: f64, kind: AlgebraKind) -> Result<MetricPoint> {
    if beta == 0.0 || omega == 0.0 {
        return Err(Error::InvalidArgument("real case needs ω ≠ 0 and β ≠ 0"));
    }
    let d = kind.d();
    let chi = alpha / beta;
    let (qa, qb, qc) = (0.5 * d * beta, omega, -alpha);
    let disc = qb * qb - 4.0 * qa * qc;
    if disc < 0.0 {
        return Err(Error::NegativeDiscriminant(disc));
    }
    // stable pair of roots
    let q = -0.5 * (qb + libm::copysign(libm::sqrt(disc), qb));
    let mut roots = [q / qa, qc / q];
    roots.sort_by(|a, b| a.abs().total_cmp(&b.abs()));
    let mut last = f64::NAN;
    for z in roots {
        let theta0 = -chi - 0.5 * d * z * z;
        if theta0 > 0.0 && z.is_finite() {
            return Ok(MetricPoint::new(z, theta0, kind));
        }
        last = theta0;
    }
    Err(Error::NoAdmissibleMetric(last))
}

/// Real coefficients `ω(t)·(1, rα, rβ)` with the constant metric they
/// admit.
pub fn real_case_scenario(
    name: &str,
    rep: AlgebraRep,
    grid: TimeGrid,
    omega: &ScalarCurve,
    alpha_ratio: f64,
    beta_ratio: f64,
    weights: &[(usize, C64)],
) -> Result<ScenarioSpec> {
    let p = real_case_metric(1.0, alpha_ratio, beta_ratio, rep.kind())?;
    let metric = MetricTrajectory::constant(grid.clone(), p.zeta, p.theta0, rep.kind())?;
    let (w, _) = omega.sample(&grid)?;
    let scale = |r: f64| w.iter().map(|x| real(r * x)).collect::<Vec<_>>();
    let coeffs = CoefficientTrajectory::new(grid, scale(1.0), scale(alpha_ratio), scale(beta_ratio))?;
    let psi0 = eigen_superposition(&rep, &p, weights)?;
    let indices = weights.iter().map(|w| w.0).collect();
    ScenarioSpec::new(name, rep, metric, coeffs, psi0, indices)
}

/// `max_t ‖H − [ωϑ0/((D/2)ζ² − χ)]·I^PH‖`
pub fn real_case_proportionality(spec: &ScenarioSpec) -> f64 {
    let d = spec.kind().d();
    (0..spec.metric.len())
        .map(|i| {
            let p = spec.metric.point(i);
            let (w, _, _) = spec.coeffs.at(i);
            let i_ph = invariant::build_invariant_ph(&spec.rep, p);
            let scale = w * real(p.theta0 / (0.5 * d * p.zeta * p.zeta - p.chi));
            linalg::max_abs(&(spec.coeffs.hamiltonian(&spec.rep, i) - i_ph * scale))
        })
        .fold(0.0, f64::max)
}

/// `max_t ‖H†η − ηH‖` on the trusted block.
pub fn standard_quasi_hermiticity(spec: &ScenarioSpec) -> Result<f64> {
    let n = spec.rep.trusted_dim();
    let mut out: f64 = 0.0;
    for i in 0..spec.metric.len() {
        let eta = DysonMap::new(&spec.rep, spec.metric.point(i))?.eta();
        let h = spec.coeffs.hamiltonian(&spec.rep, i);
        out = out.max(invariant::quasi_hermiticity_residual_block(&h, &eta, n));
    }
    Ok(out)
}

/// `max_t |ζ(t) − ζ(0)|` and `max_t |ϑ0(t) − ϑ0(0)|` of the metric
/// integrated from the coefficients.
pub fn metric_drift(spec: &ScenarioSpec) -> Result<(f64, f64)> {
    let p = spec.metric.point(0);
    let sol = dynamics::solve_auxiliary(&spec.coeffs, p.zeta, p.theta0, spec.kind(), f64::INFINITY)?;
    let drift = |v: Vec<f64>| v.iter().fold(0.0_f64, |a, x| a.max((x - v[0]).abs()));
    Ok((drift(sol.metric.zeta()), drift(sol.metric.theta0())))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    SwansonConstReal,
    SwansonDriven,
    SpinHalfComplex,
    SpinOneComplex,
    RealCaseCheck,
}

/// Overrides for preset construction; `None` keeps the preset default.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PresetOptions {
    pub dim: Option<usize>,
    pub j: Option<f64>,
    pub horizon: f64,
    pub steps: usize,
}

impl Default for PresetOptions {
    fn default() -> Self {
        Self {
            dim: None,
            j: None,
            horizon: DEFAULT_HORIZON,
            steps: DEFAULT_STEPS,
        }
    }
}

fn spin_curve() -> MetricCurve {
    MetricCurve::breathing(0.2, 0.05, 0.7, 1.0, 0.1, 0.5)
}

fn swanson_curve() -> MetricCurve {
    MetricCurve::breathing(0.05, 0.01, 0.7, 1.0, 0.1, 0.5)
}

fn beta_wave(offset: f64) -> BetaDrive {
    BetaDrive::real_part(ScalarCurve::Sinusoid {
        offset,
        amplitude: 0.3 * offset,
        frequency: 0.3,
        phase: 0.0,
    })
}

impl Preset {
    pub const ALL: [Preset; 5] = [
        Preset::SwansonConstReal,
        Preset::SwansonDriven,
        Preset::SpinHalfComplex,
        Preset::SpinOneComplex,
        Preset::RealCaseCheck,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Preset::SwansonConstReal => "swanson-const-real",
            Preset::SwansonDriven => "swanson-driven",
            Preset::SpinHalfComplex => "spin-half-complex",
            Preset::SpinOneComplex => "spin-one-complex",
            Preset::RealCaseCheck => "real-case-check",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|p| p.name() == name)
    }

    pub fn is_boson(self) -> bool {
        matches!(self, Preset::SwansonConstReal | Preset::SwansonDriven)
    }

    pub fn build(self, opts: &PresetOptions) -> Result<ScenarioSpec> {
        let grid = TimeGrid::uniform(opts.horizon, opts.steps)?;
        let dim = opts.dim.unwrap_or(DEFAULT_DIM);
        let weights = |w: &[(usize, f64, f64)]| w.iter().map(|&(n, re, im)| (n, C64::new(re, im))).collect::<Vec<_>>();
        let mut spec = match self {
            Preset::SwansonConstReal => {
                if dim < MIN_BOSON_DIM {
                    return Err(Error::DimensionTooSmall { dim, min: MIN_BOSON_DIM });
                }
                // ω = 1, α = 0.05, β = −0.05: ω² − 4αβ > 0
                real_case_scenario(
                    "",
                    algebra::build_boson_rep(dim)?,
                    grid,
                    &ScalarCurve::Constant(1.0),
                    0.05,
                    -0.05,
                    &weights(&[(0, 1.0, 0.0), (1, 0.0, 0.5)]),
                )?
            }
            Preset::SwansonDriven => swanson_scenario(
                dim,
                grid,
                &swanson_curve(),
                &beta_wave(-0.05),
                &weights(&[(0, 1.0, 0.0), (1, 0.0, 0.6), (2, -0.3, 0.0)]),
            )?,
            Preset::SpinHalfComplex => spin_scenario(
                opts.j.unwrap_or(0.5),
                grid,
                &spin_curve(),
                &beta_wave(-0.2),
                &weights(&[(0, 1.0, 0.0), (1, 0.0, 1.0)]),
            )?,
            Preset::SpinOneComplex => spin_scenario(
                opts.j.unwrap_or(1.0),
                grid,
                &spin_curve(),
                &beta_wave(-0.2),
                &weights(&[(0, 1.0, 0.0), (1, 0.0, 0.5), (2, -0.5, 0.0)]),
            )?,
            Preset::RealCaseCheck => {
                let rep = match opts.dim {
                    Some(d) => algebra::build_boson_rep(d)?,
                    None => algebra::build_su2_rep(opts.j.unwrap_or(0.5))?,
                };
                // α/β < 0 keeps ϑ0 positive on the small root
                let (ra, rb) = match rep.kind() {
                    AlgebraKind::Su2 => (0.3, -0.3),
                    AlgebraKind::Su11 => (0.05, -0.05),
                };
                let omega = ScalarCurve::Sinusoid {
                    offset: 1.0,
                    amplitude: 0.3,
                    frequency: 0.4,
                    phase: 0.0,
                };
                real_case_scenario("", rep, grid, &omega, ra, rb, &weights(&[(0, 1.0, 0.0), (1, 0.0, 1.0)]))?
            }
        };
        spec.name = self.name().to_string();
        Ok(spec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(p: Preset, steps: usize) -> ScenarioSpec {
        let opts = PresetOptions {
            steps,
            dim: p.is_boson().then_some(16),
            ..Default::default()
        };
        p.build(&opts).unwrap()
    }

    #[test]
    fn preset_names_round_trip() {
        for p in Preset::ALL {
            assert_eq!(Preset::from_name(p.name()), Some(p));
        }
        assert_eq!(Preset::from_name("swanson"), None);
    }

    #[test]
    fn presets_ship_consistent() {
        for p in Preset::ALL {
            let s = small(p, 200);
            assert!(dynamics::auxiliary_residuals(&s.metric, &s.coeffs).max() <= SCENARIO_TOL);
            assert_eq!(s.name, p.name());
            assert_eq!(s.steps, 200);
        }
    }

    #[test]
    fn closed_form_root_example() {
        let z = real_coefficient_zeta(2.0, 0.5, 0.5, AlgebraKind::Su11, Branch::Minus).unwrap();
        assert!((z - (2.0 - libm::sqrt(3.0))).abs() < 1e-12);
        let z = real_coefficient_zeta(2.0, 0.5, 0.5, AlgebraKind::Su11, Branch::Plus).unwrap();
        assert!((z - (2.0 + libm::sqrt(3.0))).abs() < 1e-12);
        assert!(real_case_relations(2.0, 0.5, 0.5, z, AlgebraKind::Su11).iter().all(|r| *r < 1e-12));
    }

    #[test]
    fn su2_roots_satisfy_relations() {
        for b in [Branch::Plus, Branch::Minus] {
            let z = real_coefficient_zeta(1.0, 1.0, 1.0, AlgebraKind::Su2, b).unwrap();
            assert!(real_case_relations(1.0, 1.0, 1.0, z, AlgebraKind::Su2).iter().all(|r| *r < 1e-12));
        }
    }

    #[test]
    fn zero_alpha_has_zero_root() {
        let z = real_coefficient_zeta_small(1.5, 0.0, 0.7, AlgebraKind::Su11).unwrap();
        assert_eq!(z, 0.0);
    }

    #[test]
    fn negative_discriminant_is_reported() {
        let e = real_coefficient_zeta(0.1, 1.0, 1.0, AlgebraKind::Su11, Branch::Plus);
        assert!(matches!(e, Err(Error::NegativeDiscriminant(_))));
    }

    #[test]
    fn signed_spin_half_metric() {
        let p = real_case_metric(1.0, 0.3, -0.3, AlgebraKind::Su2).unwrap();
        assert!((p.zeta - 1.0 / 3.0).abs() < 1e-15);
        assert!((p.chi + 1.0).abs() < 1e-15);
        assert!((p.theta0 - 8.0 / 9.0).abs() < 1e-15);
        assert!(real_case_metric(1.0, 0.3, 0.3, AlgebraKind::Su2).is_err());
    }

    #[test]
    fn real_case_is_self_adjoint() {
        let s = small(Preset::RealCaseCheck, 400);
        assert!(real_case_proportionality(&s) <= 1e-12);
        assert!(standard_quasi_hermiticity(&s).unwrap() <= 1e-12);
        let (dz, dt) = metric_drift(&s).unwrap();
        assert!(dz <= 1e-10 && dt <= 1e-10, "{dz:e} {dt:e}");
    }

    #[test]
    fn swanson_real_case_is_self_adjoint() {
        let s = small(Preset::SwansonConstReal, 200);
        assert!(real_case_proportionality(&s) <= 1e-10);
        assert!(standard_quasi_hermiticity(&s).unwrap() <= 1e-10);
    }

    #[test]
    fn spin_eigenstates_match_pipeline() {
        let s = small(Preset::SpinOneComplex, 100);
        for i in [0, 37, 100] {
            let p = s.metric.point(i);
            let rho = crate::metric::build_rho(&s.rep, p).unwrap();
            let pair = invariant::eigensystem(&s.rep, p, &rho).unwrap();
            for (idx, k) in pair.eigenvalues.iter().enumerate() {
                let f = spin_eigenstate(&s.rep, p, *k).unwrap();
                let g = pair.phi(idx) * real(libm::pow(p.theta0, *k));
                assert!(linalg::vec_max_abs(&(f - g)) < 1e-10);
            }
        }
    }

    #[test]
    fn swanson_eigenstates_match_pipeline() {
        let s = small(Preset::SwansonDriven, 100);
        let p = s.metric.point(50);
        let rho = crate::metric::build_rho(&s.rep, p).unwrap();
        let pair = invariant::eigensystem(&s.rep, p, &rho).unwrap();
        for n in 0..6 {
            let f = swanson_eigenstate(16, p, n).unwrap();
            let g = pair.phi(n) * real(libm::pow(p.theta0, pair.eigenvalues[n]));
            assert!(linalg::vec_max_abs(&(f - g)) < 1e-8);
        }
    }

    #[test]
    fn factorized_invariant_has_half_spectrum() {
        let rep = algebra::build_su2_rep(0.5).unwrap();
        let p = MetricPoint::new(0.3, 1.2, AlgebraKind::Su2);
        let f = spin_invariant_factorized(&rep, &p);
        let i_ph = invariant::build_invariant_ph(&rep, &p);
        assert!(linalg::max_abs(&(f * real(2.0) - i_ph)) < 1e-12);
        let ev = invariant::invariant_spectrum(&spin_invariant_factorized(&rep, &p)).unwrap();
        assert!((ev[0] - real(-0.5)).norm() < 1e-12 && (ev[1] - real(0.5)).norm() < 1e-12);
    }

    #[test]
    fn closed_form_phases_match_general_phase() {
        let s = small(Preset::SpinHalfComplex, 400);
        for (idx, m) in [-0.5, 0.5].into_iter().enumerate() {
            let a = spin_phase(m, &s.metric, &s.coeffs);
            let b = dynamics::phase(m, &s.metric, &s.coeffs);
            assert!(a.iter().zip(&b).all(|(x, y)| (x - y).abs() < 1e-12), "{idx}");
        }
        let s = small(Preset::SwansonDriven, 400);
        for n in 0..3 {
            let a = swanson_phase(n, &s.metric, &s.coeffs);
            let b = dynamics::phase(0.5 * (n as f64 + 0.5), &s.metric, &s.coeffs);
            assert!(a.iter().zip(&b).all(|(x, y)| (x - y).abs() < 1e-12));
        }
    }

    #[test]
    fn small_dimension_is_rejected() {
        let g = TimeGrid::uniform(1.0, 20).unwrap();
        let e = swanson_scenario(4, g, &swanson_curve(), &beta_wave(-0.05), &[(0, real(1.0))]);
        assert!(matches!(e, Err(Error::DimensionTooSmall { .. })));
    }

    #[test]
    fn explicit_beta_im_can_break_reality() {
        let g = TimeGrid::uniform(10.0, 200).unwrap();
        let drive = BetaDrive {
            re: ScalarCurve::Constant(-0.2),
            im: Some(ScalarCurve::Constant(0.0)),
        };
        let s = spin_scenario(0.5, g, &spin_curve(), &drive, &[(0, real(1.0))]).unwrap();
        let c = dynamics::consistency(&s.metric, &s.coeffs);
        assert!(c.im_w_max > 1e-3);
    }
}
