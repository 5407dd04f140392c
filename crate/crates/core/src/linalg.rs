//! Dense complex matrix helpers on top of nalgebra.
//!
//! Norms named `max_abs*` are entrywise max-norms, which is what every
//! residual in this crate reports.

use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

pub type C64 = num_complex::Complex64;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Condition-number ceiling above which an inverse is rejected.
pub const MAX_CONDITION: f64 = 1e12;

pub fn real(x: f64) -> C64 {
    C64::new(x, 0.0)
}

pub fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

/// Max-norm of the leading `n × n` block.
pub fn max_abs_block(m: &CMatrix, n: usize) -> f64 {
    let n = n.min(m.nrows()).min(m.ncols());
    let mut acc: f64 = 0.0;
    for j in 0..n {
        for i in 0..n {
            acc = acc.max(m[(i, j)].norm());
        }
    }
    acc
}

pub fn vec_max_abs(v: &CVector) -> f64 {
    v.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

/// Induced 1-norm (max column sum).
pub fn norm1(m: &CMatrix) -> f64 {
    m.column_iter()
        .map(|c| c.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

pub fn hermitian_defect(m: &CMatrix) -> f64 {
    max_abs(&(m - m.adjoint()))
}

pub fn hermitian_defect_block(m: &CMatrix, n: usize) -> f64 {
    max_abs_block(&(m - m.adjoint()), n)
}

pub fn identity(dim: usize) -> CMatrix {
    CMatrix::identity(dim, dim)
}

pub fn diagonal(values: &[C64]) -> CMatrix {
    CMatrix::from_diagonal(&CVector::from_column_slice(values))
}

pub fn basis_vector(dim: usize, index: usize) -> CVector {
    let mut v = CVector::zeros(dim);
    v[index] = ONE;
    v
}

/// `⟨a|b⟩` with the conjugate on the left.
pub fn inner(a: &CVector, b: &CVector) -> C64 {
    a.dotc(b)
}

/// LU inverse together with the 1-norm condition number.
pub fn inverse_with_condition(m: &CMatrix) -> Result<(CMatrix, f64)> {
    let inv = m
        .clone()
        .lu()
        .try_inverse()
        .ok_or(Error::IllConditioned(f64::INFINITY))?;
    let cond = norm1(m) * norm1(&inv);
    if !cond.is_finite() || cond > MAX_CONDITION {
        return Err(Error::IllConditioned(cond));
    }
    Ok((inv, cond))
}

pub fn inverse(m: &CMatrix) -> Result<CMatrix> {
    inverse_with_condition(m).map(|(inv, _)| inv)
}

/// Eigenvalues of a general complex matrix via the Schur form.
pub fn eigenvalues(m: &CMatrix) -> Option<Vec<C64>> {
    m.clone()
        .schur()
        .eigenvalues()
        .map(|v| v.iter().copied().collect())
}

/// Eigenvalues of a Hermitian matrix, ascending. Only the Hermitian part of
/// `m` is used.
pub fn hermitian_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let herm = (m + m.adjoint()) * real(0.5);
    let eig = herm.symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMatrix::from_fn(m.nrows(), order.len(), |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

pub fn min_hermitian_eigenvalue(m: &CMatrix) -> f64 {
    hermitian_eigen(m).0.first().copied().unwrap_or(f64::NAN)
}

// Pade(6,6) numerator coefficients; the denominator alternates signs.
const PADE6: [f64; 7] = [
    1.0,
    1.0 / 2.0,
    5.0 / 44.0,
    1.0 / 66.0,
    1.0 / 792.0,
    1.0 / 15840.0,
    1.0 / 665280.0,
];

/// Matrix exponential by scaling and squaring with a diagonal Padé(6,6)
/// approximant. The argument is scaled until its 1-norm is at most 1/2,
/// where the truncation error of the approximant is below 1e-16.
pub fn expm(a: &CMatrix) -> CMatrix {
    let n = a.nrows();
    let norm = norm1(a);
    let mut squarings = 0u32;
    if norm > 0.5 {
        squarings = libm::ceil(libm::log2(norm / 0.5)) as u32;
    }
    let scaled = a * real(libm::ldexp(1.0, -(squarings as i32)));

    let mut power = identity(n);
    let mut num = identity(n);
    let mut den = identity(n);
    for (k, &c) in PADE6.iter().enumerate().skip(1) {
        power = &power * &scaled;
        let term = &power * real(c);
        num += &term;
        if k % 2 == 0 {
            den += &term;
        } else {
            den -= &term;
        }
    }
    let mut result = den
        .lu()
        .solve(&num)
        .expect("Pade denominator is nonsingular for ‖A‖ ≤ 1/2");
    for _ in 0..squarings {
        result = &result * &result;
    }
    result
}

/// Sparse triplet view of an operator matrix. The representations here are
/// banded (one nonzero per column for K±), so products against vectors and
/// series of nilpotent exponentials are done on this view.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseOp {
    dim: usize,
    entries: Vec<(usize, usize, C64)>,
}

impl SparseOp {
    pub fn from_dense(m: &CMatrix) -> Self {
        let mut entries = Vec::new();
        for j in 0..m.ncols() {
            for i in 0..m.nrows() {
                let z = m[(i, j)];
                if z != ZERO {
                    entries.push((i, j, z));
                }
            }
        }
        Self {
            dim: m.nrows(),
            entries,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_strictly_triangular(&self) -> bool {
        self.entries.iter().all(|&(i, j, _)| i > j) || self.entries.iter().all(|&(i, j, _)| i < j)
    }

    /// `out += scale · A v`
    pub fn apply_add(&self, scale: C64, v: &CVector, out: &mut CVector) {
        for &(i, j, z) in &self.entries {
            out[i] += scale * z * v[j];
        }
    }

    pub fn apply(&self, v: &CVector) -> CVector {
        let mut out = CVector::zeros(self.dim);
        self.apply_add(ONE, v, &mut out);
        out
    }

    /// `exp(z·A)·v` for nilpotent `A`; the series terminates exactly.
    pub fn exp_nilpotent_apply(&self, z: C64, v: &CVector) -> CVector {
        debug_assert!(self.is_strictly_triangular());
        let mut sum = v.clone();
        let mut term = v.clone();
        for k in 1..=self.dim {
            let mut next = CVector::zeros(self.dim);
            self.apply_add(z / real(k as f64), &term, &mut next);
            if next.iter().all(|c| *c == ZERO) {
                break;
            }
            sum += &next;
            term = next;
        }
        sum
    }

    /// `exp(z·A)` for nilpotent `A`. Ladder operators with at most one
    /// entry per column are walked column by column, where every term of
    /// the series is a single entry; anything else goes through the dense
    /// terminating series.
    pub fn exp_nilpotent(&self, z: C64) -> CMatrix {
        debug_assert!(self.is_strictly_triangular());
        let n = self.dim;
        let mut next: Vec<Option<(usize, C64)>> = alloc::vec![None; n];
        for &(i, j, a) in &self.entries {
            if next[j].is_some() {
                return self.exp_nilpotent_series(z);
            }
            next[j] = Some((i, a));
        }
        let mut out = identity(n);
        for j in 0..n {
            let (mut at, mut v) = (j, ONE);
            let mut k = 1.0;
            while let Some((i, a)) = next[at] {
                v *= z * a / k;
                out[(i, j)] = v;
                at = i;
                k += 1.0;
            }
        }
        out
    }

    fn exp_nilpotent_series(&self, z: C64) -> CMatrix {
        let n = self.dim;
        let mut sum = identity(n);
        let mut term = identity(n);
        for k in 1..=n {
            let c = z / real(k as f64);
            let mut next = CMatrix::zeros(n, n);
            for &(i, j, a) in &self.entries {
                let f = c * a;
                for col in 0..n {
                    let t = term[(j, col)];
                    if t != ZERO {
                        next[(i, col)] += f * t;
                    }
                }
            }
            if next.iter().all(|x| *x == ZERO) {
                break;
            }
            sum += &next;
            term = next;
        }
        sum
    }
}

/// `A·B`, skipping zero entries of `B`. Several factors here are triangular
/// or banded, where this beats the generic product severalfold.
pub fn matmul(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let (n, m, p) = (a.nrows(), a.ncols(), b.ncols());
    assert_eq!(m, b.nrows(), "matmul: inner dimensions differ");
    let mut c = CMatrix::zeros(n, p);
    let (av, bv) = (a.as_slice(), b.as_slice());
    let cv = c.as_mut_slice();
    for j in 0..p {
        let cc = &mut cv[j * n..(j + 1) * n];
        for k in 0..m {
            let s = bv[j * m + k];
            if s == ZERO {
                continue;
            }
            let ac = &av[k * n..(k + 1) * n];
            for (x, y) in cc.iter_mut().zip(ac) {
                *x += y * s;
            }
        }
    }
    c
}

/// `A·B·C`
pub fn matmul3(a: &CMatrix, b: &CMatrix, c: &CMatrix) -> CMatrix {
    matmul(&matmul(a, b), c)
}
