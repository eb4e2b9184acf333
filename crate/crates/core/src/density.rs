//! Two-sided exponential densities.
//!
//! A drift-diffusion `dx = μ dt + Σ dW` that is restarted at 0 with Poisson
//! rate β has the stationary density
//!
//! ```text
//! p(x) = K exp( rate_left · x)   x < 0
//! p(x) = K exp(-rate_right · x)  x > 0
//! ```
//!
//! with `s = √(μ² + 2βΣ²)`, `K = β/s`, `rate_left = (μ+s)/Σ²` and
//! `rate_right = (s−μ)/Σ²`. The cognition, wealth and equilibrium laws all
//! share this family.

use crate::error::{ensure, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PiecewiseExpDensity {
    norm_k: f64,
    rate_left: f64,
    rate_right: f64,
}

/// Summary statistics of a [`PiecewiseExpDensity`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityStats {
    pub mean: f64,
    pub variance: f64,
    /// Right rate; the Pareto exponent of `e^x`.
    pub tail_right: f64,
    pub tail_left: f64,
    /// `E[e^x]`, finite only when `tail_right > 1`.
    pub wealth_mean: Option<f64>,
}

impl PiecewiseExpDensity {
    pub fn new(rate_left: f64, rate_right: f64) -> Result<Self> {
        ensure(rate_left > 0.0 && rate_left.is_finite(), "rate_left", "must be positive")?;
        ensure(rate_right > 0.0 && rate_right.is_finite(), "rate_right", "must be positive")?;
        let norm_k = rate_left * rate_right / (rate_left + rate_right);
        Ok(PiecewiseExpDensity { norm_k, rate_left, rate_right })
    }

    /// Stationary law of the reset process with drift `drift`, volatility
    /// `volatility` and reset rate `reset_rate`.
    pub fn from_drift_diffusion(drift: f64, volatility: f64, reset_rate: f64) -> Result<Self> {
        ensure(drift.is_finite(), "drift", "must be finite")?;
        ensure(reset_rate > 0.0 && reset_rate.is_finite(), "reset_rate", "must be positive")?;
        if volatility == 0.0 || !volatility.is_finite() {
            return Err(Error::DegenerateDiffusion(format!("volatility {volatility} gives no continuous stationary density")));
        }
        let v2 = volatility * volatility;
        let s = drift.hypot((2.0 * reset_rate).sqrt() * volatility.abs());
        // (s - |μ|) = 2βΣ²/(s + |μ|) avoids cancellation when |μ| ≫ Σ.
        let (rate_left, rate_right) = if drift >= 0.0 {
            ((drift + s) / v2, 2.0 * reset_rate / (s + drift))
        } else {
            (2.0 * reset_rate / (s - drift), (s - drift) / v2)
        };
        Ok(PiecewiseExpDensity { norm_k: reset_rate / s, rate_left, rate_right })
    }

    pub fn norm_k(&self) -> f64 {
        self.norm_k
    }

    pub fn rate_left(&self) -> f64 {
        self.rate_left
    }

    pub fn rate_right(&self) -> f64 {
        self.rate_right
    }

    pub fn pdf(&self, x: f64) -> f64 {
        if x < 0.0 {
            self.norm_k * (self.rate_left * x).exp()
        } else {
            self.norm_k * (-self.rate_right * x).exp()
        }
    }

    pub fn cdf(&self, x: f64) -> f64 {
        if x < 0.0 {
            self.norm_k / self.rate_left * (self.rate_left * x).exp()
        } else {
            1.0 - self.norm_k / self.rate_right * (-self.rate_right * x).exp()
        }
    }

    pub fn mean(&self) -> f64 {
        self.norm_k * (self.rate_right.powi(-2) - self.rate_left.powi(-2))
    }

    pub fn second_moment(&self) -> f64 {
        2.0 * self.norm_k * (self.rate_right.powi(-3) + self.rate_left.powi(-3))
    }

    pub fn variance(&self) -> f64 {
        let m = self.mean();
        self.second_moment() - m * m
    }

    /// `E[e^x]`, or `None` when the right tail is too heavy for it to exist.
    pub fn exp_mean(&self) -> Option<f64> {
        (self.rate_right > 1.0).then(|| self.norm_k * (1.0 / (self.rate_left + 1.0) + 1.0 / (self.rate_right - 1.0)))
    }

    pub fn stats(&self) -> DensityStats {
        DensityStats {
            mean: self.mean(),
            variance: self.variance(),
            tail_right: self.rate_right,
            tail_left: self.rate_left,
            wealth_mean: self.exp_mean(),
        }
    }

    /// Evaluates the density at each abscissa.
    pub fn sample_on(&self, xs: &[f64]) -> Vec<f64> {
        xs.iter().map(|&x| self.pdf(x)).collect()
    }
}
