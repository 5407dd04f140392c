//! The pseudo-Hermitian invariant
//!
//! ```text
//! I^PH = (2/ϑ0)[((D/2)ζ² − χ)K0 − χζK− − ζK+] = 2ρ⁻¹K0ρ
//! ```
//!
//! its Hermitian image `I^h = ρ I^PH ρ⁻¹ ∝ K0`, and the η-orthonormal
//! eigenbasis `|φn⟩ = ρ⁻¹|ψn⟩` built from the `K0` eigenbasis `|ψn⟩`.

use alloc::vec::Vec;

use crate::algebra::AlgebraRep;
use crate::error::{Error, Result};
use crate::linalg::{self, real, CMatrix, CVector, C64};
use crate::metric::MetricPoint;
use crate::AlgebraKind;

/// Smallest admissible gap in the `K0` spectrum.
pub const DEGENERACY_GAP: f64 = 1e-10;
/// Largest tolerated imaginary part of an invariant eigenvalue.
pub const EIGENVALUE_IMAG_TOL: f64 = 1e-9;

/// Coefficients of the ansatz `I = δ1·2K0 + δ2·2K− + δ3·2K+` after the
/// Hermiticity constraints, with the scalar bracket of `I^h` alongside.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltaCoefficients {
    pub delta1: f64,
    pub delta2: f64,
    pub delta3: f64,
    /// `(2/ϑ0)[((D/2)ζ² − χ)δ1 − 2Dχζδ3]`; equals 2 on a consistent point.
    pub prefactor: f64,
}

/// Residuals of the two δ constraints and of the metric consistency relation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltaResiduals {
    /// `|δ2 − χδ3|`
    pub chi_ratio: f64,
    /// `|δ1 − ((D/2)ζ² − χ)/ϑ− · δ3|` with `ϑ− = −ζ`
    pub zeta_ratio: f64,
    /// `|ϑ0 + (D/2)ζ² + χ|`
    pub consistency: f64,
}

impl DeltaResiduals {
    pub fn max(&self) -> f64 {
        self.chi_ratio.max(self.zeta_ratio).max(self.consistency)
    }
}

pub fn delta_coefficients(m: &MetricPoint, kind: AlgebraKind) -> DeltaCoefficients {
    let d = kind.d();
    let (z, t0, chi) = (m.zeta, m.theta0, m.chi);
    let a = 0.5 * d * z * z - chi;
    let delta1 = a / t0;
    let delta2 = -chi * z / t0;
    let delta3 = -z / t0;
    DeltaCoefficients {
        delta1,
        delta2,
        delta3,
        prefactor: 2.0 / t0 * (a * delta1 - 2.0 * d * chi * z * delta3),
    }
}

impl DeltaCoefficients {
    pub fn residuals(&self, m: &MetricPoint, kind: AlgebraKind) -> DeltaResiduals {
        let d = kind.d();
        let a = 0.5 * d * m.zeta * m.zeta - m.chi;
        let zeta_ratio = if m.zeta != 0.0 {
            (self.delta1 - a / (-m.zeta) * self.delta3).abs()
        } else {
            0.0
        };
        DeltaResiduals {
            chi_ratio: (self.delta2 - m.chi * self.delta3).abs(),
            zeta_ratio,
            consistency: m.consistency_defect(kind),
        }
    }
}

/// `I^PH` assembled from the metric point.
pub fn build_invariant_ph(rep: &AlgebraRep, m: &MetricPoint) -> CMatrix {
    let d = rep.kind().d();
    // `combination` carries the overall factor 2
    let s = 1.0 / m.theta0;
    let c0 = s * (0.5 * d * m.zeta * m.zeta - m.chi);
    let cm = -s * m.chi * m.zeta;
    let cp = -s * m.zeta;
    rep.combination(real(c0), real(cm), real(cp))
}

/// `I^h = prefactor·K0`; with `normalize` the prefactor is replaced by 2.
pub fn build_invariant_h(rep: &AlgebraRep, m: &MetricPoint, normalize: bool) -> CMatrix {
    let p = if normalize {
        2.0
    } else {
        delta_coefficients(m, rep.kind()).prefactor
    };
    rep.k0() * real(p)
}

/// `‖I†η − ηI‖`, the defect of `I† = ηIη⁻¹`.
pub fn quasi_hermiticity_residual(i: &CMatrix, eta: &CMatrix) -> f64 {
    linalg::max_abs(&(i.adjoint() * eta - eta * i))
}

/// Same defect restricted to the leading `n × n` block.
pub fn quasi_hermiticity_residual_block(i: &CMatrix, eta: &CMatrix, n: usize) -> f64 {
    linalg::max_abs_block(&(i.adjoint() * eta - eta * i), n)
}

/// Both invariants and their eigenbases at one metric point.
#[derive(Debug, Clone, PartialEq)]
pub struct InvariantPair {
    pub i_ph: CMatrix,
    pub i_h: CMatrix,
    /// `K0` eigenvalues `k_n`, ascending; `I^PH` has eigenvalues `2k_n`.
    pub eigenvalues: Vec<f64>,
    /// Columns `|φn⟩ = ρ⁻¹|ψn⟩`.
    pub eigenvectors_ph: CMatrix,
    /// Columns `|ψn⟩`, eigenvectors of `K0`.
    pub eigenvectors_h: CMatrix,
    /// `⟨φn|η I^PH|φn⟩ / ⟨φn|η|φn⟩` for every trusted index.
    pub rayleigh: Vec<C64>,
    pub rho_inv: CMatrix,
}

impl InvariantPair {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn phi(&self, n: usize) -> CVector {
        self.eigenvectors_ph.column(n).into_owned()
    }

    pub fn psi(&self, n: usize) -> CVector {
        self.eigenvectors_h.column(n).into_owned()
    }

    /// `max |⟨φm|η|φn⟩ − δmn|` over `m, n < block`.
    pub fn eta_orthonormality_defect(&self, eta: &CMatrix, block: usize) -> f64 {
        let gram = self.eigenvectors_ph.adjoint() * eta * &self.eigenvectors_ph;
        linalg::max_abs_block(&(gram - linalg::identity(self.dim())), block)
    }

    /// `‖ρ I^PH ρ⁻¹ − I^h‖` on the leading block.
    pub fn similarity_residual(&self, rho: &CMatrix, block: usize) -> f64 {
        let mapped = rho * &self.i_ph * &self.rho_inv;
        linalg::max_abs_block(&(mapped - &self.i_h), block)
    }

    /// `max |Im λ|` over the trusted Rayleigh values.
    pub fn max_imag(&self) -> f64 {
        self.rayleigh.iter().fold(0.0, |acc, z| acc.max(z.im.abs()))
    }
}

/// `K0` eigenvectors ordered by ascending eigenvalue, each with its
/// largest-magnitude component made real positive.
pub fn k0_eigenbasis(rep: &AlgebraRep) -> Result<(Vec<f64>, CMatrix)> {
    let (values, mut vectors) = linalg::hermitian_eigen(rep.k0());
    let gap = values
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::INFINITY, f64::min);
    if gap < DEGENERACY_GAP {
        return Err(Error::DegenerateSpectrum(gap));
    }
    for mut col in vectors.column_iter_mut() {
        let lead = col
            .iter()
            .copied()
            .max_by(|a, b| a.norm().total_cmp(&b.norm()))
            .unwrap_or(linalg::ONE);
        let phase = lead.conj() / lead.norm();
        for z in col.iter_mut() {
            *z *= phase;
        }
    }
    Ok((values, vectors))
}

pub fn eigensystem(rep: &AlgebraRep, m: &MetricPoint, rho: &CMatrix) -> Result<InvariantPair> {
    let rho_inv = linalg::inverse(rho)?;
    let (eigenvalues, psi) = k0_eigenbasis(rep)?;
    let phi = &rho_inv * &psi;
    let i_ph = build_invariant_ph(rep, m);
    let i_h = build_invariant_h(rep, m, true);

    let eta = rho.adjoint() * rho;
    let eta_i = &eta * &i_ph;
    let mut rayleigh = Vec::new();
    for n in 0..rep.trusted_dim() {
        let v = phi.column(n);
        let num = v.dotc(&(&eta_i * v));
        let den = v.dotc(&(&eta * v));
        let lambda = num / den;
        if lambda.im.abs() > EIGENVALUE_IMAG_TOL || !lambda.re.is_finite() {
            return Err(Error::ComplexEigenvalue {
                index: n,
                imag: lambda.im,
            });
        }
        rayleigh.push(lambda);
    }

    Ok(InvariantPair {
        i_ph,
        i_h,
        eigenvalues,
        eigenvectors_ph: phi,
        eigenvectors_h: psi,
        rayleigh,
        rho_inv,
    })
}

/// Eigenvalues of the literal `I^PH` matrix (Schur form), sorted by real part.
pub fn invariant_spectrum(i_ph: &CMatrix) -> Option<Vec<C64>> {
    let mut v = linalg::eigenvalues(i_ph)?;
    v.sort_by(|a, b| a.re.total_cmp(&b.re));
    Some(v)
}
