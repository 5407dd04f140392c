//! Seeded generator of smooth random scenarios for property checks.
//! The seed comes from `PSEUDOINV_SEED` when set.

use pseudoinv_core::algebra;
use pseudoinv_core::curve::{MetricCurve, ScalarCurve};
use pseudoinv_core::grid::TimeGrid;
use pseudoinv_core::models::{self, BetaDrive, ScenarioSpec};
use pseudoinv_core::{AlgebraKind, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::RunError;

pub const SEED_VAR: &str = "PSEUDOINV_SEED";
pub const DEFAULT_SEED: u64 = 20_160_521;

pub fn seed_from_env() -> Result<u64, RunError> {
    match std::env::var(SEED_VAR) {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| RunError::Config(format!("{SEED_VAR} must be an unsigned integer, got `{s}`"))),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

pub struct ScenarioGenerator {
    rng: ChaCha8Rng,
    seed: u64,
}

impl ScenarioGenerator {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
            seed,
        }
    }

    pub fn from_env() -> Result<Self, RunError> {
        Ok(Self::new(seed_from_env()?))
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// `ζ` stays away from zero and `ϑ0` within `[0.7, 1.3]`; boson
    /// metrics are kept narrow so truncation stays mild.
    pub fn metric_curve(&mut self, kind: AlgebraKind) -> MetricCurve {
        let r = &mut self.rng;
        let sign = if r.gen_bool(0.5) { 1.0 } else { -1.0 };
        let (mean, amp) = match kind {
            AlgebraKind::Su2 => (r.gen_range(0.1..0.45), r.gen_range(0.0..0.08)),
            AlgebraKind::Su11 => (r.gen_range(0.03..0.07), r.gen_range(0.0..0.015)),
        };
        MetricCurve {
            zeta: ScalarCurve::Sinusoid {
                offset: sign * mean,
                amplitude: amp,
                frequency: r.gen_range(0.1..1.5),
                phase: r.gen_range(0.0..std::f64::consts::TAU),
            },
            theta0: ScalarCurve::Sinusoid {
                offset: r.gen_range(0.9..1.1),
                amplitude: r.gen_range(0.0..0.2),
                frequency: r.gen_range(0.1..1.5),
                phase: r.gen_range(0.0..std::f64::consts::TAU),
            },
        }
    }

    pub fn beta_drive(&mut self, kind: AlgebraKind) -> BetaDrive {
        let r = &mut self.rng;
        let scale = match kind {
            AlgebraKind::Su2 => 0.4,
            AlgebraKind::Su11 => 0.08,
        };
        let offset = -r.gen_range(0.2..1.0) * scale;
        BetaDrive::real_part(ScalarCurve::Sinusoid {
            offset,
            amplitude: r.gen_range(0.0..0.4) * offset,
            frequency: r.gen_range(0.1..1.0),
            phase: r.gen_range(0.0..std::f64::consts::TAU),
        })
    }

    fn weights(&mut self, count: usize, limit: usize) -> Vec<(usize, C64)> {
        let r = &mut self.rng;
        let mut idx: Vec<usize> = (0..limit).collect();
        let mut out = Vec::new();
        for k in 0..count.min(limit) {
            let pick = r.gen_range(k..limit);
            idx.swap(k, pick);
            out.push((idx[k], C64::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0))));
        }
        out
    }

    /// Random spin (`j ≤ 3/2`) or boson (dim 24) scenario on `grid`.
    pub fn scenario(&mut self, kind: AlgebraKind, grid: TimeGrid) -> Result<ScenarioSpec, RunError> {
        let curve = self.metric_curve(kind);
        let drive = self.beta_drive(kind);
        let spec = match kind {
            AlgebraKind::Su2 => {
                let j = 0.5 * self.rng.gen_range(1..=3) as f64;
                let w = self.weights(2, (2.0 * j) as usize + 1);
                models::spin_scenario(j, grid, &curve, &drive, &w)?
            }
            AlgebraKind::Su11 => {
                let w = self.weights(2, 4);
                let rep = algebra::build_boson_rep(24)?;
                models::synthesized_scenario("swanson", rep, grid, &curve, &drive, &w)?
            }
        };
        Ok(spec)
    }
}
