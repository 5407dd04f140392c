//! The time-dependent Dyson map and metric.
//!
//! A Hermitian group element is factorized as
//!
//! ```text
//! ρ = exp{2[εK0 + μ(K− + K+)]} = exp(ϑ+K+)·exp(ln ϑ0·K0)·exp(ϑ−K−)
//! ```
//!
//! with real `μ`, so `ϑ+ = ϑ− = −ζ` and `ρ` is Hermitian. The metric is
//! `η = ρ†ρ`. A metric point is stored as `(ζ, ϑ0, χ)` with
//! `ϑ0 = −(D/2)ζ² − χ`, plus the rates `ζ̇, ϑ̇0` needed by the dynamics.

use alloc::vec::Vec;

use crate::algebra::{AlgebraKind, AlgebraRep, Generator};
use crate::error::{Error, Result};
use crate::linalg::{self, real, CMatrix};

/// Below this magnitude the factorization denominator is treated as zero.
pub const SINGULAR_DENOMINATOR: f64 = 1e-12;

/// Exponent parameters `(ε, μ)` of `ρ = exp{2[εK0 + μ(K− + K+)]}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentParams {
    pub epsilon: f64,
    pub mu: f64,
}

impl ExponentParams {
    pub fn new(epsilon: f64, mu: f64) -> Self {
        Self { epsilon, mu }
    }

    /// `θ² = ε² + 2Dμ²`; negative for strongly off-diagonal SU(1,1) exponents.
    pub fn theta_squared(&self, kind: AlgebraKind) -> f64 {
        self.epsilon * self.epsilon + 2.0 * kind.d() * self.mu * self.mu
    }
}

/// Ordered-product coefficients of the factorized group element.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FactorizationCoeffs {
    pub theta_plus: f64,
    pub theta0: f64,
    pub theta_minus: f64,
    pub chi: f64,
}

impl FactorizationCoeffs {
    /// The metric point with `ζ = −ϑ±` and zero rates.
    pub fn metric_point(&self) -> MetricPoint {
        MetricPoint {
            zeta: -self.theta_plus,
            theta0: self.theta0,
            chi: self.chi,
            zeta_dot: 0.0,
            theta0_dot: 0.0,
        }
    }
}

/// `(cosh θ, sinh θ / θ)` as functions of `θ²`, continued to `θ² < 0`
/// through `cos` and `sin x / x`. Real arithmetic only.
fn even_odd(theta_sq: f64) -> (f64, f64) {
    let small = |x2: f64| 1.0 + x2 / 6.0 + x2 * x2 / 120.0;
    if theta_sq >= 0.0 {
        let t = libm::sqrt(theta_sq);
        let s = if t < 1e-4 { small(theta_sq) } else { libm::sinh(t) / t };
        (libm::cosh(t), s)
    } else {
        let x = libm::sqrt(-theta_sq);
        let s = if x < 1e-4 { small(theta_sq) } else { libm::sin(x) / x };
        (libm::cos(x), s)
    }
}

/// Disentangling coefficients of `exp{2[εK0 + μ(K− + K+)]}`.
pub fn factorization_coeffs(p: ExponentParams, kind: AlgebraKind) -> Result<FactorizationCoeffs> {
    let (c, s) = even_odd(p.theta_squared(kind));
    let den = c - p.epsilon * s;
    if den.abs() < SINGULAR_DENOMINATOR {
        return Err(Error::SingularFactorization(den.abs()));
    }
    let theta_pm = 2.0 * p.mu * s / den;
    Ok(FactorizationCoeffs {
        theta_plus: theta_pm,
        theta0: 1.0 / (den * den),
        theta_minus: theta_pm,
        chi: -(c + p.epsilon * s) / den,
    })
}

/// One sample of the metric trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricPoint {
    pub zeta: f64,
    pub theta0: f64,
    pub chi: f64,
    pub zeta_dot: f64,
    pub theta0_dot: f64,
}

impl MetricPoint {
    /// Point with `χ = −ϑ0 − (D/2)ζ²` and zero rates.
    pub fn new(zeta: f64, theta0: f64, kind: AlgebraKind) -> Self {
        Self {
            zeta,
            theta0,
            chi: chi_of(zeta, theta0, kind),
            zeta_dot: 0.0,
            theta0_dot: 0.0,
        }
    }

    pub fn with_rates(mut self, zeta_dot: f64, theta0_dot: f64) -> Self {
        self.zeta_dot = zeta_dot;
        self.theta0_dot = theta0_dot;
        self
    }

    pub fn identity() -> Self {
        Self {
            zeta: 0.0,
            theta0: 1.0,
            chi: -1.0,
            zeta_dot: 0.0,
            theta0_dot: 0.0,
        }
    }

    /// `|ϑ0 + (D/2)ζ² + χ|`
    pub fn consistency_defect(&self, kind: AlgebraKind) -> f64 {
        (self.theta0 + 0.5 * kind.d() * self.zeta * self.zeta + self.chi).abs()
    }

    pub fn check_theta0(&self) -> Result<()> {
        if self.theta0 > 0.0 && self.theta0.is_finite() {
            Ok(())
        } else {
            Err(Error::NonPositiveTheta0(self.theta0))
        }
    }

    /// `χ̇ = −ϑ̇0 − Dζζ̇`
    pub fn chi_dot(&self, kind: AlgebraKind) -> f64 {
        -self.theta0_dot - kind.d() * self.zeta * self.zeta_dot
    }
}

pub fn chi_of(zeta: f64, theta0: f64, kind: AlgebraKind) -> f64 {
    -theta0 - 0.5 * kind.d() * zeta * zeta
}

/// `exp(ϑ+K+)·ϑ0^K0·exp(ϑ−K−)` for arbitrary (not necessarily equal) `ϑ±`.
pub fn factorized_product(rep: &AlgebraRep, theta_plus: f64, theta0: f64, theta_minus: f64) -> CMatrix {
    let left = rep.exp_k_plus(real(theta_plus));
    let mut right = rep.exp_k_minus(real(theta_minus));
    let diag = rep.k0_diagonal();
    for (i, k) in diag.iter().enumerate() {
        let w = libm::pow(theta0, *k);
        right.row_mut(i).scale_mut(w);
    }
    linalg::matmul(&left, &right)
}

/// `exp{2[εK0 + μ(K− + K+)]}` by scaling and squaring.
pub fn direct_exponential(rep: &AlgebraRep, p: ExponentParams) -> CMatrix {
    let exponent = (rep.k0() * real(p.epsilon) + (rep.k_minus() + rep.k_plus()) * real(p.mu)) * real(2.0);
    linalg::expm(&exponent)
}

/// `ρ` together with its exact inverse `exp(ζK−)·ϑ0^{−K0}·exp(ζK+)` and
/// the three factors of each.
#[derive(Debug, Clone, PartialEq)]
pub struct DysonMap {
    pub rho: CMatrix,
    pub rho_inv: CMatrix,
    pub condition: f64,
    // exp(−ζK+), exp(ζK+), exp(−ζK−), exp(ζK−), ϑ0^{±k_n}
    e_plus: CMatrix,
    e_plus_inv: CMatrix,
    e_minus: CMatrix,
    e_minus_inv: CMatrix,
    power: Vec<f64>,
}

impl DysonMap {
    pub fn new(rep: &AlgebraRep, m: &MetricPoint) -> Result<Self> {
        m.check_theta0()?;
        let e_plus = rep.exp_k_plus(real(-m.zeta));
        let e_plus_inv = rep.exp_k_plus(real(m.zeta));
        let e_minus = rep.exp_k_minus(real(-m.zeta));
        let e_minus_inv = rep.exp_k_minus(real(m.zeta));
        let power: Vec<f64> = rep.k0_diagonal().iter().map(|k| libm::pow(m.theta0, *k)).collect();

        let mut right = e_minus.clone();
        scale_rows(&mut right, &power, false);
        let rho = linalg::matmul(&e_plus, &right);
        let mut right = e_plus_inv.clone();
        scale_rows(&mut right, &power, true);
        let rho_inv = linalg::matmul(&e_minus_inv, &right);

        let condition = linalg::norm1(&rho) * linalg::norm1(&rho_inv);
        if !condition.is_finite() || condition > linalg::MAX_CONDITION {
            return Err(Error::IllConditioned(condition));
        }
        Ok(Self {
            rho,
            rho_inv,
            condition,
            e_plus,
            e_plus_inv,
            e_minus,
            e_minus_inv,
            power,
        })
    }

    pub fn eta(&self) -> CMatrix {
        linalg::matmul(&self.rho.adjoint(), &self.rho)
    }

    pub fn eta_inv(&self) -> CMatrix {
        linalg::matmul(&self.rho_inv, &self.rho_inv.adjoint())
    }

    /// `ρ⁻¹ X ρ`, one factor at a time. Rounding stays far below that of
    /// the dense triple product when `ρ` is poorly conditioned.
    pub fn pull_back(&self, x: &CMatrix) -> CMatrix {
        let mut y = linalg::matmul3(&self.e_plus_inv, x, &self.e_plus);
        conjugate_diagonal(&mut y, &self.power, true);
        linalg::matmul3(&self.e_minus_inv, &y, &self.e_minus)
    }

    /// `ρ X ρ⁻¹`, one factor at a time.
    pub fn push_forward(&self, x: &CMatrix) -> CMatrix {
        let mut y = linalg::matmul3(&self.e_minus, x, &self.e_minus_inv);
        conjugate_diagonal(&mut y, &self.power, false);
        linalg::matmul3(&self.e_plus, &y, &self.e_plus_inv)
    }
}

fn scale_rows(m: &mut CMatrix, power: &[f64], inverse: bool) {
    for (i, p) in power.iter().enumerate() {
        m.row_mut(i).scale_mut(if inverse { 1.0 / p } else { *p });
    }
}

/// `P X P⁻¹` (or `P⁻¹ X P` with `inverse`) for `P = diag(power)`.
fn conjugate_diagonal(m: &mut CMatrix, power: &[f64], inverse: bool) {
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            let r = power[i] / power[j];
            m[(i, j)] *= if inverse { 1.0 / r } else { r };
        }
    }
}

/// `ρ = exp(−ζK+)·exp(ln ϑ0·K0)·exp(−ζK−)`.
pub fn build_rho(rep: &AlgebraRep, m: &MetricPoint) -> Result<CMatrix> {
    DysonMap::new(rep, m).map(|d| d.rho)
}

/// `η = ρ†ρ`.
pub fn build_eta(rho: &CMatrix) -> Result<CMatrix> {
    linalg::inverse_with_condition(rho)?;
    Ok(rho.adjoint() * rho)
}

/// Max-norm residuals of the six conjugation identities behind the
/// transformed invariant, in this order:
///
/// 1. `e^{ϑ−K−} K0 e^{−ϑ−K−} = K0 + ϑ−K−`
/// 2. `e^{ϑ+K+} K0 e^{−ϑ+K+} = K0 − ϑ+K+`
/// 3. `ϑ0^{K0} K− ϑ0^{−K0} = K−/ϑ0`
/// 4. `e^{ϑ+K+} K− e^{−ϑ+K+} = K− + Dϑ+K0 − (D/2)ϑ+²K+`
/// 5. `ϑ0^{K0} K+ ϑ0^{−K0} = ϑ0 K+`
/// 6. `e^{ϑ−K−} K+ e^{−ϑ−K−} = K+ − Dϑ−K0 − (D/2)ϑ−²K−`
pub fn adjoint_identity_residuals(rep: &AlgebraRep, theta_plus: f64, theta0: f64, theta_minus: f64) -> [f64; 6] {
    let n = rep.off_boundary_dim();
    let d = rep.kind().d();
    let k0 = rep.generator(Generator::K0);
    let kp = rep.generator(Generator::Plus);
    let km = rep.generator(Generator::Minus);
    let conj = |g: &CMatrix, g_inv: &CMatrix, x: &CMatrix| g * x * g_inv;

    let em = rep.exp_k_minus(real(theta_minus));
    let em_inv = rep.exp_k_minus(real(-theta_minus));
    let ep = rep.exp_k_plus(real(theta_plus));
    let ep_inv = rep.exp_k_plus(real(-theta_plus));
    let e0 = rep.k0_power(theta0);
    let e0_inv = rep.k0_power(1.0 / theta0);

    let r1 = conj(&em, &em_inv, k0) - (k0 + km * real(theta_minus));
    let r2 = conj(&ep, &ep_inv, k0) - (k0 - kp * real(theta_plus));
    let r3 = conj(&e0, &e0_inv, km) - km * real(1.0 / theta0);
    let r4 = conj(&ep, &ep_inv, km)
        - (km + k0 * real(d * theta_plus) - kp * real(0.5 * d * theta_plus * theta_plus));
    let r5 = conj(&e0, &e0_inv, kp) - kp * real(theta0);
    let r6 = conj(&em, &em_inv, kp)
        - (kp - k0 * real(d * theta_minus) - km * real(0.5 * d * theta_minus * theta_minus));
    [r1, r2, r3, r4, r5, r6].map(|r| linalg::max_abs_block(&r, n))
}

/// `‖exp{2[εK0 + μ(K−+K+)]} − exp(ϑ+K+)ϑ0^K0 exp(ϑ−K−)‖` on the trusted block.
pub fn factorization_residual(rep: &AlgebraRep, p: ExponentParams) -> Result<f64> {
    let c = factorization_coeffs(p, rep.kind())?;
    let direct = direct_exponential(rep, p);
    let product = factorized_product(rep, c.theta_plus, c.theta0, c.theta_minus);
    Ok(linalg::max_abs_block(&(direct - product), rep.trusted_dim()))
}
