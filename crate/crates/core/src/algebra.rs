//! Finite matrix representations of the su(1,1) and su(2) generator triples
//!
//! ```text
//! [K0, K+] = K+,   [K0, K−] = −K−,   [K+, K−] = D·K0
//! ```
//!
//! with `D = −2` for SU(1,1) and `D = +2` for SU(2). SU(2) representations are
//! exact. SU(1,1) is infinite-dimensional, so its representations here are
//! truncations: the commutators fail on the top `boundary_rows` basis states
//! and every residual check is restricted to the block below them.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{self, real, CMatrix, CVector, SparseOp, C64};

/// Which group the generator triple closes into.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AlgebraKind {
    /// `D = −2`
    Su11,
    /// `D = +2`
    Su2,
}

impl AlgebraKind {
    pub const fn structure_constant(self) -> i32 {
        match self {
            AlgebraKind::Su11 => -2,
            AlgebraKind::Su2 => 2,
        }
    }

    /// `D` as a float, for use in formulas.
    pub const fn d(self) -> f64 {
        self.structure_constant() as f64
    }

    pub const fn from_structure_constant(d: i32) -> Option<Self> {
        match d {
            -2 => Some(AlgebraKind::Su11),
            2 => Some(AlgebraKind::Su2),
            _ => None,
        }
    }

    pub const fn name(self) -> &'static str {
        match self {
            AlgebraKind::Su11 => "su11",
            AlgebraKind::Su2 => "su2",
        }
    }
}

/// One of the three generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Generator {
    K0,
    Plus,
    Minus,
}

/// A matrix triple `(K0, K+, K−)` of one representation.
///
/// Immutable after construction. `K0` is diagonal with real entries in every
/// representation built here, and `K+ = K−†` holds bit-exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraRep {
    kind: AlgebraKind,
    k0: CMatrix,
    k_plus: CMatrix,
    k_minus: CMatrix,
    boundary_rows: usize,
    sparse: [SparseOp; 3],
}

impl AlgebraRep {
    fn assemble(kind: AlgebraKind, k0: CMatrix, k_minus: CMatrix, boundary_rows: usize) -> Self {
        let k_plus = k_minus.adjoint();
        let sparse = [
            SparseOp::from_dense(&k0),
            SparseOp::from_dense(&k_plus),
            SparseOp::from_dense(&k_minus),
        ];
        Self {
            kind,
            k0,
            k_plus,
            k_minus,
            boundary_rows,
            sparse,
        }
    }

    /// Raw constructor for hand-built (possibly corrupted) triples. No
    /// algebra relation is checked; `k_plus` is taken as given.
    pub fn from_matrices(
        kind: AlgebraKind,
        k0: CMatrix,
        k_plus: CMatrix,
        k_minus: CMatrix,
        boundary_rows: usize,
    ) -> Result<Self> {
        let dim = k0.nrows();
        let square = |m: &CMatrix| m.nrows() == dim && m.ncols() == dim;
        if !(square(&k0) && square(&k_plus) && square(&k_minus)) {
            return Err(Error::InvalidArgument("generator matrices must share one square shape"));
        }
        if boundary_rows >= dim {
            return Err(Error::InvalidArgument("boundary rows must leave a nonempty block"));
        }
        let sparse = [
            SparseOp::from_dense(&k0),
            SparseOp::from_dense(&k_plus),
            SparseOp::from_dense(&k_minus),
        ];
        Ok(Self {
            kind,
            k0,
            k_plus,
            k_minus,
            boundary_rows,
            sparse,
        })
    }

    pub fn kind(&self) -> AlgebraKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.k0.nrows()
    }

    pub fn k0(&self) -> &CMatrix {
        &self.k0
    }

    pub fn k_plus(&self) -> &CMatrix {
        &self.k_plus
    }

    pub fn k_minus(&self) -> &CMatrix {
        &self.k_minus
    }

    pub fn generator(&self, g: Generator) -> &CMatrix {
        match g {
            Generator::K0 => &self.k0,
            Generator::Plus => &self.k_plus,
            Generator::Minus => &self.k_minus,
        }
    }

    pub fn sparse(&self, g: Generator) -> &SparseOp {
        match g {
            Generator::K0 => &self.sparse[0],
            Generator::Plus => &self.sparse[1],
            Generator::Minus => &self.sparse[2],
        }
    }

    /// Top basis rows where truncation breaks the commutators (0 for SU(2)).
    pub fn boundary_rows(&self) -> usize {
        self.boundary_rows
    }

    /// Size of the leading block on which the commutators hold.
    pub fn off_boundary_dim(&self) -> usize {
        self.dim() - self.boundary_rows
    }

    /// Size of the leading block on which dense products of group elements
    /// (ρ, ρ⁻¹, η) with truncated generators are trusted. Conjugating by ρ
    /// drags boundary errors down the basis, so for truncated
    /// representations only the lower half of the off-boundary block is used.
    pub fn trusted_dim(&self) -> usize {
        if self.boundary_rows == 0 {
            self.dim()
        } else {
            (self.off_boundary_dim() / 2).max(1)
        }
    }

    /// Diagonal of `K0`, in basis order.
    pub fn k0_diagonal(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.k0[(i, i)].re).collect()
    }

    /// `base^K0` for diagonal `K0`.
    pub fn k0_power(&self, base: f64) -> CMatrix {
        let values: Vec<C64> = self
            .k0_diagonal()
            .into_iter()
            .map(|k| real(libm::pow(base, k)))
            .collect();
        linalg::diagonal(&values)
    }

    pub fn exp_k_plus(&self, z: C64) -> CMatrix {
        self.sparse[1].exp_nilpotent(z)
    }

    pub fn exp_k_minus(&self, z: C64) -> CMatrix {
        self.sparse[2].exp_nilpotent(z)
    }

    /// `H = 2ωK0 + 2αK− + 2βK+`
    pub fn hamiltonian(&self, omega: C64, alpha: C64, beta: C64) -> CMatrix {
        &self.k0 * (omega * 2.0) + &self.k_minus * (alpha * 2.0) + &self.k_plus * (beta * 2.0)
    }

    /// `H·v` without assembling `H`.
    pub fn apply_hamiltonian(&self, omega: C64, alpha: C64, beta: C64, v: &CVector) -> CVector {
        let mut out = CVector::zeros(self.dim());
        self.sparse[0].apply_add(omega * 2.0, v, &mut out);
        self.sparse[2].apply_add(alpha * 2.0, v, &mut out);
        self.sparse[1].apply_add(beta * 2.0, v, &mut out);
        out
    }

    /// `2(a K0 + b K− + c K+)`, the common shape of `H`, `I^PH` and the
    /// transformed Hamiltonian.
    pub fn combination(&self, a: C64, b: C64, c: C64) -> CMatrix {
        self.hamiltonian(a, b, c)
    }
}

fn is_half_integer(j: f64) -> bool {
    let twice = 2.0 * j;
    j > 0.0 && (twice - libm::round(twice)).abs() < 1e-12
}

/// Spin-`j` representation: `K0 = Jz`, `K± = J±`, basis ordered `m = j, …, −j`.
pub fn build_su2_rep(j: f64) -> Result<AlgebraRep> {
    if !is_half_integer(j) {
        return Err(Error::InvalidSpin(j));
    }
    let dim = libm::round(2.0 * j) as usize + 1;
    let j = (dim - 1) as f64 / 2.0;
    let m = |i: usize| j - i as f64;
    let k0 = CMatrix::from_fn(dim, dim, |r, c| if r == c { real(m(r)) } else { linalg::ZERO });
    // J−|m⟩ = √(j(j+1) − m(m−1)) |m−1⟩; m−1 sits one row further down.
    let k_minus = CMatrix::from_fn(dim, dim, |r, c| {
        if r == c + 1 {
            let mm = m(c);
            real(libm::sqrt(j * (j + 1.0) - mm * (mm - 1.0)))
        } else {
            linalg::ZERO
        }
    });
    Ok(AlgebraRep::assemble(AlgebraKind::Su2, k0, k_minus, 0))
}

/// Truncated discrete-series representation with Bargmann index `k`:
/// `K0|n⟩ = (k+n)|n⟩`, `K+|n⟩ = √((n+1)(2k+n))|n+1⟩`.
pub fn build_su11_rep(bargmann_k: f64, dim: usize) -> Result<AlgebraRep> {
    if !(bargmann_k > 0.0) || !bargmann_k.is_finite() {
        return Err(Error::InvalidBargmannIndex(bargmann_k));
    }
    if dim < 4 {
        return Err(Error::DimensionTooSmall { dim, min: 4 });
    }
    let k0 = CMatrix::from_fn(dim, dim, |r, c| {
        if r == c {
            real(bargmann_k + r as f64)
        } else {
            linalg::ZERO
        }
    });
    let k_minus = CMatrix::from_fn(dim, dim, |r, c| {
        if c == r + 1 {
            let n = r as f64;
            real(libm::sqrt((n + 1.0) * (2.0 * bargmann_k + n)))
        } else {
            linalg::ZERO
        }
    });
    Ok(AlgebraRep::assemble(AlgebraKind::Su11, k0, k_minus, 1))
}

/// Truncated annihilation operator, `a|n⟩ = √n |n−1⟩`.
pub fn annihilation(dim: usize) -> CMatrix {
    CMatrix::from_fn(dim, dim, |r, c| {
        if c == r + 1 {
            real(libm::sqrt(c as f64))
        } else {
            linalg::ZERO
        }
    })
}

/// Two-boson realization `K0 = (a†a + 1/2)/2`, `K− = a²/2`, `K+ = a†²/2` in a
/// truncated Fock space. Splits into the `k = 1/4` (even) and `k = 3/4` (odd)
/// discrete series.
pub fn build_boson_rep(dim: usize) -> Result<AlgebraRep> {
    if dim < 4 {
        return Err(Error::DimensionTooSmall { dim, min: 4 });
    }
    let a = annihilation(dim);
    // a†a assembled from the exact integers rather than the product of square roots
    let k0 = CMatrix::from_fn(dim, dim, |r, c| {
        if r == c {
            real((r as f64 + 0.5) * 0.5)
        } else {
            linalg::ZERO
        }
    });
    let k_minus = (&a * &a) * real(0.5);
    Ok(AlgebraRep::assemble(AlgebraKind::Su11, k0, k_minus, 2))
}

/// Max-norm residuals of the three commutation relations on the
/// off-boundary block.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CommutatorResiduals {
    /// `‖[K0,K+] − K+‖`
    pub k0_plus: f64,
    /// `‖[K0,K−] + K−‖`
    pub k0_minus: f64,
    /// `‖[K+,K−] − D·K0‖`
    pub plus_minus: f64,
}

impl CommutatorResiduals {
    pub fn max(&self) -> f64 {
        self.k0_plus.max(self.k0_minus).max(self.plus_minus)
    }
}

pub fn commutator_residuals(rep: &AlgebraRep) -> CommutatorResiduals {
    let n = rep.off_boundary_dim();
    let d = real(rep.kind().d());
    let r1 = linalg::commutator(rep.k0(), rep.k_plus()) - rep.k_plus();
    let r2 = linalg::commutator(rep.k0(), rep.k_minus()) + rep.k_minus();
    let r3 = linalg::commutator(rep.k_plus(), rep.k_minus()) - rep.k0() * d;
    CommutatorResiduals {
        k0_plus: linalg::max_abs_block(&r1, n),
        k0_minus: linalg::max_abs_block(&r2, n),
        plus_minus: linalg::max_abs_block(&r3, n),
    }
}
