//! Closed-form and sampled scalar curves used to specify metric
//! trajectories and drives.

use alloc::vec::Vec;

use crate::error::Result;
use crate::grid::{self, TimeGrid};

#[derive(Debug, Clone, PartialEq)]
pub enum ScalarCurve {
    Constant(f64),
    /// `start + slope·t`
    Ramp { start: f64, slope: f64 },
    /// `offset + amplitude·sin(frequency·t + phase)`
    Sinusoid {
        offset: f64,
        amplitude: f64,
        frequency: f64,
        phase: f64,
    },
    /// Values on the scenario grid; derivatives by finite differences.
    Sampled(Vec<f64>),
}

impl ScalarCurve {
    pub fn value(&self, t: f64) -> Option<f64> {
        match *self {
            ScalarCurve::Constant(c) => Some(c),
            ScalarCurve::Ramp { start, slope } => Some(start + slope * t),
            ScalarCurve::Sinusoid {
                offset,
                amplitude,
                frequency,
                phase,
            } => Some(offset + amplitude * libm::sin(frequency * t + phase)),
            ScalarCurve::Sampled(_) => None,
        }
    }

    pub fn derivative(&self, t: f64) -> Option<f64> {
        match *self {
            ScalarCurve::Constant(_) => Some(0.0),
            ScalarCurve::Ramp { slope, .. } => Some(slope),
            ScalarCurve::Sinusoid {
                amplitude,
                frequency,
                phase,
                ..
            } => Some(amplitude * frequency * libm::cos(frequency * t + phase)),
            ScalarCurve::Sampled(_) => None,
        }
    }

    pub fn is_analytic(&self) -> bool {
        !matches!(self, ScalarCurve::Sampled(_))
    }

    /// Values and time derivatives on every grid sample.
    pub fn sample(&self, grid: &TimeGrid) -> Result<(Vec<f64>, Vec<f64>)> {
        match self {
            ScalarCurve::Sampled(values) => {
                grid.check_len(values.len())?;
                let d = grid::centered_derivative(grid, values);
                Ok((values.clone(), d))
            }
            analytic => {
                let values = grid.times().iter().map(|&t| analytic.value(t).unwrap()).collect();
                let d = grid.times().iter().map(|&t| analytic.derivative(t).unwrap()).collect();
                Ok((values, d))
            }
        }
    }
}

/// A metric trajectory given as two scalar curves `ζ(t)` and `ϑ0(t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricCurve {
    pub zeta: ScalarCurve,
    pub theta0: ScalarCurve,
}

impl MetricCurve {
    pub fn constant(zeta: f64, theta0: f64) -> Self {
        Self {
            zeta: ScalarCurve::Constant(zeta),
            theta0: ScalarCurve::Constant(theta0),
        }
    }

    /// `ζ = ζ̄ + a·sin(ν t)`, `ϑ0 = ϑ̄0 + b·cos(ν' t)`.
    pub fn breathing(zeta_mean: f64, zeta_amp: f64, zeta_freq: f64, theta0_mean: f64, theta0_amp: f64, theta0_freq: f64) -> Self {
        Self {
            zeta: ScalarCurve::Sinusoid {
                offset: zeta_mean,
                amplitude: zeta_amp,
                frequency: zeta_freq,
                phase: 0.0,
            },
            theta0: ScalarCurve::Sinusoid {
                offset: theta0_mean,
                amplitude: theta0_amp,
                frequency: theta0_freq,
                phase: core::f64::consts::FRAC_PI_2,
            },
        }
    }
}
