//! Time grids, cumulative quadrature, finite differences and midpoint
//! interpolation for sampled trajectories.

use alloc::vec::Vec;
use core::ops::{Add, Mul, Sub};

use crate::error::{Error, Result};

/// Anything that can be linearly combined with real weights.
pub trait Sample: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {}

impl<T> Sample for T where T: Copy + Add<Output = T> + Sub<Output = T> + Mul<f64, Output = T> {}

/// Strictly increasing sample times `t_0 < t_1 < … < t_M` (ħ = 1).
#[derive(Debug, Clone, PartialEq)]
pub struct TimeGrid {
    times: Vec<f64>,
    uniform: bool,
}

impl TimeGrid {
    /// `steps + 1` equally spaced samples on `[0, horizon]`.
    pub fn uniform(horizon: f64, steps: usize) -> Result<Self> {
        if !(horizon > 0.0 && horizon.is_finite()) {
            return Err(Error::InvalidGrid("horizon must be positive and finite"));
        }
        if steps < 2 {
            return Err(Error::InvalidGrid("at least two steps are required"));
        }
        let times = (0..=steps)
            .map(|i| horizon * i as f64 / steps as f64)
            .collect();
        Ok(Self {
            times,
            uniform: true,
        })
    }

    pub fn from_samples(times: Vec<f64>) -> Result<Self> {
        if times.len() < 3 {
            return Err(Error::InvalidGrid("at least three samples are required"));
        }
        if times.iter().any(|t| !t.is_finite()) {
            return Err(Error::InvalidGrid("sample times must be finite"));
        }
        if times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidGrid("sample times must be strictly increasing"));
        }
        let span = times[times.len() - 1] - times[0];
        let h = span / (times.len() - 1) as f64;
        let uniform = times
            .iter()
            .enumerate()
            .all(|(i, t)| (t - (times[0] + h * i as f64)).abs() <= 1e-12 * span.max(1.0));
        Ok(Self { times, uniform })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn steps(&self) -> usize {
        self.times.len() - 1
    }

    pub fn is_uniform(&self) -> bool {
        self.uniform
    }

    pub fn horizon(&self) -> f64 {
        self.times[self.times.len() - 1] - self.times[0]
    }

    /// Step size of a uniform grid.
    pub fn step(&self) -> Option<f64> {
        self.uniform.then(|| self.horizon() / self.steps() as f64)
    }

    pub fn uniform_step(&self) -> Result<f64> {
        self.step()
            .ok_or(Error::InvalidGrid("a uniform grid is required"))
    }

    pub fn check_len(&self, found: usize) -> Result<()> {
        if found == self.len() {
            Ok(())
        } else {
            Err(Error::LengthMismatch {
                expected: self.len(),
                found,
            })
        }
    }
}

/// Running integral `∫_{t_0}^{t_i} f dt` for every sample.
///
/// On uniform grids the even samples use composite Simpson and the odd ones
/// the matching three-point partial-panel rule, so every entry is fourth
/// order. Non-uniform grids fall back to the trapezoid rule.
pub fn cumulative_integral(grid: &TimeGrid, f: &[f64]) -> Vec<f64> {
    let n = f.len();
    debug_assert_eq!(n, grid.len());
    let mut out = alloc::vec![0.0; n];
    match grid.step() {
        Some(h) if n >= 3 => {
            let mut i = 0;
            while i + 2 < n {
                out[i + 1] = out[i] + h / 12.0 * (5.0 * f[i] + 8.0 * f[i + 1] - f[i + 2]);
                out[i + 2] = out[i] + h / 3.0 * (f[i] + 4.0 * f[i + 1] + f[i + 2]);
                i += 2;
            }
            if i + 1 < n {
                out[i + 1] = out[i] + h / 12.0 * (-f[i - 1] + 8.0 * f[i] + 5.0 * f[i + 1]);
            }
        }
        _ => {
            let t = grid.times();
            for i in 1..n {
                out[i] = out[i - 1] + 0.5 * (t[i] - t[i - 1]) * (f[i] + f[i - 1]);
            }
        }
    }
    out
}

/// Second-order finite-difference derivative: centered in the interior,
/// one-sided three-point at the ends of a uniform grid.
pub fn centered_derivative<T: Sample>(grid: &TimeGrid, f: &[T]) -> Vec<T> {
    let n = f.len();
    debug_assert_eq!(n, grid.len());
    let t = grid.times();
    let mut out = Vec::with_capacity(n);
    match grid.step() {
        Some(h) => {
            out.push((f[1] * 4.0 - f[0] * 3.0 - f[2]) * (0.5 / h));
            for i in 1..n - 1 {
                out.push((f[i + 1] - f[i - 1]) * (0.5 / h));
            }
            out.push((f[n - 1] * 3.0 - f[n - 2] * 4.0 + f[n - 3]) * (0.5 / h));
        }
        None => {
            out.push((f[1] - f[0]) * (1.0 / (t[1] - t[0])));
            for i in 1..n - 1 {
                out.push((f[i + 1] - f[i - 1]) * (1.0 / (t[i + 1] - t[i - 1])));
            }
            out.push((f[n - 1] - f[n - 2]) * (1.0 / (t[n - 1] - t[n - 2])));
        }
    }
    out
}

/// Value at `t_i + h/2` on a uniform grid by four-point Lagrange
/// interpolation (fourth order); the stencil shifts inward at the ends.
pub fn midpoint_value<T: Sample>(f: &[T], i: usize) -> T {
    let n = f.len();
    debug_assert!(i + 1 < n);
    if n < 4 {
        return (f[i] + f[i + 1]) * 0.5;
    }
    if i == 0 {
        (f[0] * 5.0 + f[1] * 15.0 - f[2] * 5.0 + f[3]) * (1.0 / 16.0)
    } else if i + 2 >= n {
        (f[n - 4] - f[n - 3] * 5.0 + f[n - 2] * 15.0 + f[n - 1] * 5.0) * (1.0 / 16.0)
    } else {
        ((f[i] + f[i + 1]) * 9.0 - f[i - 1] - f[i + 2]) * (1.0 / 16.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(grid: &TimeGrid, f: impl Fn(f64) -> f64) -> Vec<f64> {
        grid.times().iter().map(|&t| f(t)).collect()
    }

    #[test]
    fn uniform_grid_shape() {
        let g = TimeGrid::uniform(10.0, 2000).unwrap();
        assert_eq!(g.len(), 2001);
        assert_eq!(g.step(), Some(0.005));
        assert_eq!(g.times()[2000], 10.0);
        assert!(TimeGrid::uniform(0.0, 10).is_err());
        assert!(TimeGrid::uniform(1.0, 1).is_err());
    }

    #[test]
    fn from_samples_validates_order() {
        assert!(TimeGrid::from_samples(alloc::vec![0.0, 1.0, 1.0]).is_err());
        let g = TimeGrid::from_samples(alloc::vec![0.0, 0.5, 1.5, 2.0]).unwrap();
        assert!(!g.is_uniform());
        let g = TimeGrid::from_samples(alloc::vec![0.0, 0.5, 1.0]).unwrap();
        assert!(g.is_uniform());
    }

    #[test]
    fn cumulative_integral_is_fourth_order() {
        // ∫ cos = sin, on both even and odd step counts
        let err = |steps: usize| {
            let g = TimeGrid::uniform(3.0, steps).unwrap();
            let f = sample(&g, libm::cos);
            let out = cumulative_integral(&g, &f);
            g.times()
                .iter()
                .zip(&out)
                .map(|(&t, &v)| (v - libm::sin(t)).abs())
                .fold(0.0, f64::max)
        };
        for &steps in &[40usize, 41] {
            let (coarse, fine) = (err(steps), err(2 * steps));
            assert!(coarse < 2e-6, "steps {steps}: {coarse}");
            assert!(coarse / fine > 12.0, "ratio {}", coarse / fine);
        }
    }

    #[test]
    fn cumulative_integral_simpson_samples_exact_for_cubics() {
        let g = TimeGrid::uniform(2.0, 8).unwrap();
        let f = sample(&g, |t| t * t * t - 2.0 * t + 1.0);
        let out = cumulative_integral(&g, &f);
        for (&t, &v) in g.times().iter().zip(&out).step_by(2) {
            let exact = t * t * t * t / 4.0 - t * t + t;
            assert!((v - exact).abs() < 1e-13);
        }
        // partial panels are exact for quadratics
        let f = sample(&g, |t| 3.0 * t * t - t);
        let out = cumulative_integral(&g, &f);
        for (&t, &v) in g.times().iter().zip(&out) {
            assert!((v - (t * t * t - t * t / 2.0)).abs() < 1e-13);
        }
    }

    #[test]
    fn centered_derivative_second_order() {
        let g = TimeGrid::uniform(1.0, 100).unwrap();
        let f = sample(&g, libm::exp);
        let d = centered_derivative(&g, &f);
        for (&t, &v) in g.times().iter().zip(&d) {
            assert!((v - libm::exp(t)).abs() < 2e-4);
        }
    }

    #[test]
    fn midpoint_exact_for_cubics() {
        let g = TimeGrid::uniform(1.0, 10).unwrap();
        let p = |t: f64| 2.0 * t * t * t - t + 0.5;
        let f = sample(&g, p);
        let h = g.step().unwrap();
        for i in 0..10 {
            let t = g.times()[i] + h / 2.0;
            assert!((midpoint_value(&f, i) - p(t)).abs() < 1e-14, "i = {i}");
        }
    }
}
