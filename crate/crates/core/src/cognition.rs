//! Cognitive-resource retention and dilution by data scale.

use crate::density::PiecewiseExpDensity;
use crate::error::{ensure, Result};

/// Logistic retention dynamics `r' = −d·r + v·r(1 − r)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RetentionParams {
    pub r0: f64,
    /// Dilution intensity (interaction rate times data exposure).
    pub dilution_rate: f64,
    pub recovery_rate: f64,
}

impl RetentionParams {
    pub fn new(r0: f64, dilution_rate: f64, recovery_rate: f64) -> Result<Self> {
        let p = RetentionParams { r0, dilution_rate, recovery_rate };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        ensure(self.r0 > 0.0 && self.r0 <= 1.0, "r0", "must lie in (0, 1]")?;
        ensure(self.dilution_rate > 0.0, "dilution_rate", "must be positive")?;
        ensure(self.recovery_rate > 0.0, "recovery_rate", "must be positive")
    }

    /// Closed-form r(t).
    pub fn at(&self, t: f64) -> f64 {
        let (r0, v) = (self.r0, self.recovery_rate);
        let k = v - self.dilution_rate;
        if k.abs() <= 1e-12 * v.max(self.dilution_rate) {
            return r0 / (1.0 + r0 * v * t);
        }
        if k < 0.0 {
            r0 * (k * t).exp() / (1.0 + r0 * v * (k * t).exp_m1() / k)
        } else {
            // divided through by e^{kt} so large t does not overflow
            r0 / ((-k * t).exp() - r0 * v * (-k * t).exp_m1() / k)
        }
    }

    /// lim r(t) as t → ∞.
    pub fn limit(&self) -> f64 {
        if self.dilution_rate >= self.recovery_rate {
            0.0
        } else {
            1.0 - self.dilution_rate / self.recovery_rate
        }
    }

    /// Right-hand side of the retention ODE.
    pub fn rate(&self, r: f64) -> f64 {
        -self.dilution_rate * r + self.recovery_rate * r * (1.0 - r)
    }
}

pub fn retention_trajectory(p: &RetentionParams, times: &[f64]) -> Result<Vec<f64>> {
    p.validate()?;
    ensure(times.iter().all(|&t| t >= 0.0), "times", "must be nonnegative")?;
    ensure(times.windows(2).all(|w| w[0] <= w[1]), "times", "must be sorted")?;
    Ok(times.iter().map(|&t| p.at(t)).collect())
}

/// Parameters of the scale-dilution model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CognitionParams {
    /// Maximum resource R0.
    pub r_max: f64,
    pub mu_c: f64,
    pub eta_c: f64,
    pub sigma_c: f64,
    pub gamma_c: f64,
    pub psi_c: f64,
    pub beta_c: f64,
    pub theta_c: f64,
    /// Data scale; real-valued, at least 1.
    pub n: f64,
}

/// Drift Φ, volatility Ω and log-drift Σ = Φ − Ω²/2 of the resource process.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GbmCoefficients {
    pub phi: f64,
    pub omega: f64,
    pub sigma: f64,
}

impl CognitionParams {
    /// σ = γ = ψ = 0.4, β = 0.8, θ = 2, R0 = 1 with the given recovery,
    /// dilution and scale.
    pub fn reference(mu_c: f64, eta_c: f64, n: f64) -> Self {
        CognitionParams { r_max: 1.0, mu_c, eta_c, sigma_c: 0.4, gamma_c: 0.4, psi_c: 0.4, beta_c: 0.8, theta_c: 2.0, n }
    }

    pub fn with_n(self, n: f64) -> Self {
        CognitionParams { n, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        ensure(self.r_max > 0.0, "r_max", "must be positive")?;
        ensure(self.mu_c > 0.0, "mu_c", "must be positive")?;
        ensure(self.eta_c > 0.0, "eta_c", "must be positive")?;
        ensure(self.sigma_c > 0.0 && self.sigma_c < 1.0, "sigma_c", "must lie in (0, 1)")?;
        ensure(self.gamma_c > 0.0 && self.gamma_c < 1.0, "gamma_c", "must lie in (0, 1)")?;
        ensure(self.psi_c > 0.0, "psi_c", "must be positive")?;
        ensure(self.beta_c > 0.0, "beta_c", "must be positive")?;
        ensure(self.theta_c > 1.0, "theta_c", "must exceed 1")?;
        ensure(self.n >= 1.0 && self.n.is_finite(), "n", "must be at least 1")
    }

    /// Allocation share per data unit, σ/(n−1)^γ (infinite at n = 1).
    pub fn allocation_share(&self) -> f64 {
        self.sigma_c / (self.n - 1.0).powf(self.gamma_c)
    }

    /// Aggregate dilution pressure ησ(n−1)^{1−γ}.
    pub fn dilution_load(&self) -> f64 {
        self.eta_c * self.sigma_c * (self.n - 1.0).powf(1.0 - self.gamma_c)
    }

    /// 1 − R*/R0.
    pub fn relative_dilution(&self) -> f64 {
        let load = self.dilution_load();
        load / (self.mu_c + load)
    }
}

pub fn steady_state_resource(p: &CognitionParams) -> Result<f64> {
    p.validate()?;
    Ok(p.mu_c * p.r_max / (p.mu_c + p.dilution_load()))
}

/// Scale at which the steady state loses half of R0.
pub fn dilution_threshold(p: &CognitionParams) -> Result<f64> {
    p.validate()?;
    Ok(1.0 + (p.mu_c / (p.eta_c * p.sigma_c)).powf(1.0 / (1.0 - p.gamma_c)))
}

pub fn gbm_coefficients(p: &CognitionParams) -> Result<GbmCoefficients> {
    p.validate()?;
    let load = p.dilution_load();
    let phi = p.mu_c * (p.theta_c - 1.0) - load;
    let omega = p.psi_c * (p.theta_c - p.mu_c * p.theta_c / (p.mu_c + load));
    Ok(GbmCoefficients { phi, omega, sigma: phi - 0.5 * omega * omega })
}

/// Stationary law of the log-resource, re-entering at 0 with rate `beta_c`.
pub fn stationary_cognition_density(sigma_c: f64, omega_c: f64, beta_c: f64) -> Result<PiecewiseExpDensity> {
    PiecewiseExpDensity::from_drift_diffusion(sigma_c, omega_c, beta_c)
}

impl CognitionParams {
    pub fn density(&self) -> Result<PiecewiseExpDensity> {
        let g = gbm_coefficients(self)?;
        stationary_cognition_density(g.sigma, g.omega, self.beta_c)
    }
}
