//! Mean-reverting diffusion confined to an interval by reflection.

use rand_distr::{Distribution, StandardNormal};

use crate::error::{ensure, Result};
use crate::exec::Execution;
use crate::stochastic::rng::RngSpec;

/// dX = reversion·(mean − X)dt + volatility·dW on [lower, upper].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OuProcessSpec {
    pub mean: f64,
    pub reversion: f64,
    pub volatility: f64,
    pub lower: f64,
    pub upper: f64,
    /// Initial value of every path.
    pub start: f64,
    pub dt: f64,
    pub horizon: f64,
}

impl OuProcessSpec {
    /// Starts at `mean`, step `1e-3/reversion`, horizon of 50 relaxation times.
    pub fn new(mean: f64, reversion: f64, volatility: f64, lower: f64, upper: f64) -> Self {
        OuProcessSpec { mean, reversion, volatility, lower, upper, start: mean, dt: 1e-3 / reversion, horizon: 50.0 / reversion }
    }

    pub fn validate(&self) -> Result<()> {
        ensure(self.dt > 0.0 && self.dt.is_finite(), "dt", "must be positive")?;
        ensure(self.reversion > 0.0, "reversion", "must be positive")?;
        ensure(self.volatility >= 0.0, "volatility", "must be nonnegative")?;
        ensure(self.lower < self.mean && self.mean < self.upper, "mean", "must lie strictly inside (lower, upper)")?;
        ensure((self.lower..=self.upper).contains(&self.start), "start", "must lie in [lower, upper]")?;
        ensure(self.horizon > 0.0, "horizon", "must be positive")?;
        ensure(self.dt <= self.horizon, "dt", "must not exceed the horizon")
    }

    /// Folds `x` back into the interval, repeatedly if it overshoots by more than a width.
    pub fn reflect(&self, x: f64) -> f64 {
        let width = self.upper - self.lower;
        let mut y = (x - self.lower).rem_euclid(2.0 * width);
        if y > width {
            y = 2.0 * width - y;
        }
        self.lower + y
    }

    fn steps(&self) -> usize {
        (self.horizon / self.dt).round().max(1.0) as usize
    }
}

/// Simulates `n_paths` reflected paths; row `i` holds path `i` at each of `record_times`.
pub fn simulate_ou_reflected(spec: &OuProcessSpec, rng: RngSpec, n_paths: usize, record_times: &[f64]) -> Result<Vec<Vec<f64>>> {
    simulate_ou_reflected_with(spec, rng, n_paths, record_times, Execution::default())
}

pub fn simulate_ou_reflected_with(
    spec: &OuProcessSpec,
    rng: RngSpec,
    n_paths: usize,
    record_times: &[f64],
    exec: Execution,
) -> Result<Vec<Vec<f64>>> {
    spec.validate()?;
    ensure(n_paths > 0, "n_paths", "must be positive")?;
    let total = spec.steps();
    let mut slots: Vec<(usize, usize)> = Vec::with_capacity(record_times.len());
    for (slot, &t) in record_times.iter().enumerate() {
        ensure((0.0..=spec.horizon * (1.0 + 1e-12)).contains(&t), "record_times", "must lie in [0, horizon]")?;
        slots.push((((t / spec.dt).round() as usize).min(total), slot));
    }
    slots.sort_unstable();

    let spec = *spec;
    Ok(exec.map(n_paths, |path| {
        let mut rng = rng.fork(path as u64).rng();
        let mut out = vec![0.0; slots.len()];
        let mut next = 0;
        let mut x = spec.start;
        let drift_scale = spec.reversion * spec.dt;
        let noise_scale = spec.volatility * spec.dt.sqrt();
        for step in 0..=total {
            while next < slots.len() && slots[next].0 == step {
                out[slots[next].1] = x;
                next += 1;
            }
            if next == slots.len() {
                break;
            }
            let z: f64 = StandardNormal.sample(&mut rng);
            x = spec.reflect(x + drift_scale * (spec.mean - x) + noise_scale * z);
            debug_assert!(spec.lower <= x && x <= spec.upper);
        }
        out
    }))
}
