use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("spin must be a positive half-integer, got j = {0}")]
    InvalidSpin(f64),

    #[error("Bargmann index must be positive, got k = {0}")]
    InvalidBargmannIndex(f64),

    #[error("representation dimension {dim} is below the minimum of {min}")]
    DimensionTooSmall { dim: usize, min: usize },

    #[error("singular factorization: |cosh θ − (ε/θ) sinh θ| = {0:e}")]
    SingularFactorization(f64),

    #[error("ϑ0 must be positive, got {0}")]
    NonPositiveTheta0(f64),

    #[error("matrix is not safely invertible (condition number {0:e})")]
    IllConditioned(f64),

    #[error("K0 spectrum is degenerate (smallest gap {0:e})")]
    DegenerateSpectrum(f64),

    #[error("eigenvalue {index} has imaginary part {imag:e}")]
    ComplexEigenvalue { index: usize, imag: f64 },

    #[error("|ζ| = {value:e} is too small at sample {index}")]
    ZetaTooSmall { index: usize, value: f64 },

    #[error("metric left the admissible range at sample {index} (ζ = {zeta}, ϑ0 = {theta0})")]
    MetricBlowUp { index: usize, zeta: f64, theta0: f64 },

    #[error("Hamiltonian is incompatible with the algebraic relations: residual {residual:e} at sample {index}")]
    RelIncompatible { index: usize, residual: f64 },

    #[error("inconsistent trajectories: {quantity} residual {residual:e} at sample {index}")]
    Inconsistent { quantity: &'static str, index: usize, residual: f64 },

    #[error("state norm overflow at sample {0}")]
    Overflow(usize),

    #[error("negative discriminant {0} (no real metric in this family)")]
    NegativeDiscriminant(f64),

    #[error("no admissible metric on this branch: ϑ0 = {0}")]
    NoAdmissibleMetric(f64),

    #[error("invalid time grid: {0}")]
    InvalidGrid(&'static str),

    #[error("length mismatch: expected {expected} samples, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("eigenindex {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),
}
