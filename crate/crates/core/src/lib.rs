//! Pseudo-Hermitian Lewis–Riesenfeld invariants for time-dependent
//! non-Hermitian Hamiltonians built from SU(1,1) or SU(2) generators,
//!
//! ```text
//! H(t) = 2ω(t)K0 + 2α(t)K− + 2β(t)K+,     ω, α, β ∈ ℂ
//! ```
//!
//! The crate constructs the time-dependent Dyson map
//! `ρ = exp(ϑ+K+)·exp(ln ϑ0·K0)·exp(ϑ−K−)` and metric `η = ρ†ρ`, the
//! invariant `I^PH(t)` together with its η-orthonormal eigenbasis, the
//! auxiliary equations tying the metric to the Hamiltonian coefficients, the
//! real Lewis–Riesenfeld phases, and the exact solution of the Schrödinger
//! equation. The [`verify`] module carries an independent brute-force
//! propagator and the residual suite that checks every relation numerically.
//!
//! Everything here is pure computation on finite matrix representations; the
//! crate is `no_std` and only needs `alloc`.

#![no_std]
#![warn(missing_debug_implementations)]
// negated comparisons also reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod algebra;
pub mod curve;
pub mod dynamics;
mod error;
pub mod grid;
pub mod invariant;
pub mod linalg;
pub mod metric;
pub mod models;
pub mod verify;

pub use algebra::{AlgebraKind, AlgebraRep};
pub use error::{Error, Result};
pub use linalg::{CMatrix, CVector, C64};
