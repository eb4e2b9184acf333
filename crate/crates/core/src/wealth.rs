//! Entrepreneurs under collateral constraints: policies, log-wealth laws and
//! the closed-form equilibrium at capital share one half.

use crate::density::{DensityStats, PiecewiseExpDensity};
use crate::error::{ensure, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AgentType {
    /// Converts all consumption into utility.
    One,
    /// Converts the fraction `f_sigma` of consumption into utility.
    Two,
}

pub const TABLE2_LAMBDA: [f64; 3] = [5.0, 25.0, 50.0];
pub const TABLE2_F_SIGMA: [f64; 3] = [0.2, 0.5, 0.8];
/// (θ, σ) pairs: both low, both high.
pub const TABLE2_RETURNS: [(f64, f64); 2] = [(0.05, 0.05), (0.5, 0.5)];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EconomyParams {
    pub rho: f64,
    pub gamma: f64,
    pub alpha: f64,
    pub delta: f64,
    /// Rate at which wealth is reset to the entry level.
    pub beta: f64,
    pub w: f64,
    pub r: f64,
    pub theta: f64,
    pub sigma: f64,
    pub lambda: f64,
    pub f_sigma: f64,
    pub z: f64,
    pub agent_type: AgentType,
}

impl Default for EconomyParams {
    fn default() -> Self {
        EconomyParams::table2()
    }
}

impl EconomyParams {
    /// Type one, λ = 5, θ = σ = 0.05.
    pub fn table2() -> Self {
        EconomyParams {
            rho: 0.05,
            gamma: 2.0,
            alpha: 0.3,
            delta: 0.6,
            beta: 0.3,
            w: 1.0,
            r: 0.01,
            theta: 0.05,
            sigma: 0.05,
            lambda: 5.0,
            f_sigma: 1.0,
            z: 5.0,
            agent_type: AgentType::One,
        }
    }

    /// Table 2 combination: `level` indexes λ (and f_σ for type two),
    /// `returns` indexes the (θ, σ) pair.
    pub fn table2_case(agent_type: AgentType, level: usize, returns: usize) -> Self {
        let (theta, sigma) = TABLE2_RETURNS[returns];
        let base = EconomyParams { theta, sigma, lambda: TABLE2_LAMBDA[level], ..EconomyParams::table2() };
        match agent_type {
            AgentType::One => base,
            AgentType::Two => base.type_two(TABLE2_F_SIGMA[level]),
        }
    }

    pub fn type_two(self, f_sigma: f64) -> Self {
        EconomyParams { f_sigma, agent_type: AgentType::Two, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        ensure(self.rho > 0.0, "rho", "must be positive")?;
        ensure(self.gamma > 0.0 && self.gamma != 1.0, "gamma", "must be positive and not 1")?;
        ensure(self.alpha > 0.0 && self.alpha < 1.0, "alpha", "must lie in (0, 1)")?;
        ensure(self.delta > 0.0, "delta", "must be positive")?;
        ensure(self.beta > 0.0, "beta", "must be positive")?;
        ensure(self.w > 0.0, "w", "must be positive")?;
        ensure(self.r.is_finite(), "r", "must be finite")?;
        ensure(self.theta.is_finite(), "theta", "must be finite")?;
        ensure(self.sigma > 0.0, "sigma", "must be positive")?;
        ensure(self.lambda >= 1.0, "lambda", "must be at least 1")?;
        ensure(self.f_sigma > 0.0 && self.f_sigma <= 1.0, "f_sigma", "must lie in (0, 1]")?;
        ensure(self.z > 0.0, "z", "must be positive")?;
        ensure(self.agent_type == AgentType::Two || self.f_sigma == 1.0, "f_sigma", "must be 1 for type-one agents")
    }

    /// ((1−α)/w)^{(1−α)/α}: output per unit of capital net of wages, over αz.
    fn labor_term(&self) -> f64 {
        ((1.0 - self.alpha) / self.w).powf((1.0 - self.alpha) / self.alpha)
    }

    /// Profit per unit of wealth, Π.
    pub fn profit_rate(&self) -> f64 {
        (self.alpha * self.z * self.labor_term() - self.r - self.delta) * self.lambda
    }

    /// Squared Sharpe-style premium (θ−r)²/(γσ²).
    fn premium(&self) -> f64 {
        (self.theta - self.r).powi(2) / (self.gamma * self.sigma * self.sigma)
    }

    fn utility_weight(&self) -> f64 {
        match self.agent_type {
            AgentType::One => 1.0,
            AgentType::Two => self.f_sigma,
        }
    }
}

pub fn productivity_cutoff(r: f64, delta: f64, alpha: f64, w: f64) -> Result<f64> {
    ensure(w > 0.0, "w", "must be positive")?;
    ensure(alpha > 0.0 && alpha < 1.0, "alpha", "must lie in (0, 1)")?;
    Ok((r + delta) / (alpha * ((1.0 - alpha) / w).powf((1.0 - alpha) / alpha)))
}

/// Capital, labor, profit and output of a firm run with wealth `a`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FirmPolicy {
    pub capital: f64,
    pub labor: f64,
    pub profit: f64,
    pub output: f64,
}

pub fn firm_policy(a: f64, p: &EconomyParams) -> Result<FirmPolicy> {
    p.validate()?;
    ensure(a > 0.0, "a", "wealth must be positive")?;
    let z_min = productivity_cutoff(p.r, p.delta, p.alpha, p.w)?;
    if p.z < z_min {
        return Err(Error::InactiveFirm { z: p.z, z_min });
    }
    let capital = p.lambda * a;
    let labor = ((1.0 - p.alpha) / p.w).powf(1.0 / p.alpha) * p.z * capital;
    Ok(FirmPolicy { capital, labor, profit: p.profit_rate() * a, output: (p.z * capital).powf(p.alpha) * labor.powf(1.0 - p.alpha) })
}

/// Portfolio and consumption shares per unit of wealth.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolicyCoefficients {
    pub kappa: f64,
    pub consumption: f64,
}

pub fn policy_functions(p: &EconomyParams) -> Result<PolicyCoefficients> {
    p.validate()?;
    let g = p.gamma;
    let kappa = (p.theta - p.r) / (g * p.sigma * p.sigma);
    let bracket = p.rho - (1.0 - g) * (p.profit_rate() + p.r) - 0.5 * (1.0 - g) * p.premium();
    let consumption = bracket / (g * p.utility_weight());
    if consumption.is_nan() || consumption <= 0.0 {
        return Err(Error::param("rho", format!("consumption share {consumption} is not positive")));
    }
    Ok(PolicyCoefficients { kappa, consumption })
}

/// Log-wealth drift μ, volatility Σ and reset rate β.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WealthLaw {
    pub mu: f64,
    /// Magnitude of the log-wealth volatility.
    pub sigma: f64,
    pub beta: f64,
}

impl WealthLaw {
    pub fn density(&self) -> Result<PiecewiseExpDensity> {
        stationary_wealth_density(self)
    }
}

pub fn drift_diffusion(p: &EconomyParams) -> Result<WealthLaw> {
    p.validate()?;
    let g = p.gamma;
    let pi_r = p.profit_rate() + p.r;
    let prem = p.premium();
    // A short risky position (θ < r) flips the sign; only Σ² enters the law.
    let sigma = ((p.theta - p.r) / (g * p.sigma)).abs();
    let bracket = p.rho - (1.0 - g) * pi_r - 0.5 * (1.0 - g) * prem;
    let mu = pi_r + prem - bracket / (g * p.utility_weight()) - 0.5 * sigma * sigma;
    Ok(WealthLaw { mu, sigma, beta: p.beta })
}

pub fn stationary_wealth_density(law: &WealthLaw) -> Result<PiecewiseExpDensity> {
    PiecewiseExpDensity::from_drift_diffusion(law.mu, law.sigma, law.beta)
}

pub fn density_stats(d: &PiecewiseExpDensity) -> DensityStats {
    d.stats()
}

pub fn wealth_density(p: &EconomyParams) -> Result<PiecewiseExpDensity> {
    drift_diffusion(p)?.density()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquilibriumPrices {
    pub r_star: f64,
    /// `None` when the validity condition fails.
    pub w_star: Option<f64>,
    /// The term that must be negative for the root formula to apply.
    pub condition: f64,
    pub valid: bool,
}

fn require_equilibrium_setting(p: &EconomyParams) -> Result<()> {
    p.validate()?;
    ensure(p.alpha == 0.5, "alpha", "the closed-form equilibrium requires alpha = 0.5")?;
    ensure(p.agent_type == AgentType::One, "agent_type", "the equilibrium is derived for type-one agents")
}

/// Equilibrium rate from capital-market clearing, θ − γσ²(1 − λ).
pub fn equilibrium_rate(p: &EconomyParams) -> f64 {
    p.theta - p.gamma * p.sigma * p.sigma * (1.0 - p.lambda)
}

pub fn equilibrium_prices(p: &EconomyParams) -> Result<EquilibriumPrices> {
    require_equilibrium_setting(p)?;
    let (g, l, b, z) = (p.gamma, p.lambda, p.beta, p.z);
    let r = equilibrium_rate(p);
    let condition = 2.0 * (r - l * r - l * p.delta - p.rho) + (1.0 + g) * (p.theta - r).powi(2) / (g * p.sigma * p.sigma) - 2.0 * b * g;
    let valid = condition < 0.0;
    // √t solves 2βzλγ·t + zλ·√t + condition = 0; w* = (1−α)/t with α = ½.
    // Written as (√disc + zλ)/(−4·condition) to avoid cancellation.
    let w_star = valid.then(|| {
        let disc = (z * l).powi(2) - 8.0 * b * z * l * g * condition;
        (disc.sqrt() + z * l) / (-4.0 * condition)
    });
    Ok(EquilibriumPrices { r_star: r, w_star, condition, valid })
}

/// `((1−α)/w)^{1/α} z λ E[e^x] − 1` at the prices already set in `p`.
pub fn labor_market_residual(p: &EconomyParams) -> Result<f64> {
    let d = wealth_density(p)?;
    let ex = d.exp_mean().ok_or_else(|| Error::InvalidEquilibrium(format!("E[e^x] diverges (right rate {} ≤ 1)", d.rate_right())))?;
    Ok(((1.0 - p.alpha) / p.w).powf(1.0 / p.alpha) * p.z * p.lambda * ex - 1.0)
}

/// `p` with its prices replaced by the equilibrium ones.
pub fn at_equilibrium(p: &EconomyParams) -> Result<EconomyParams> {
    let prices = equilibrium_prices(p)?;
    let w = prices.w_star.ok_or_else(|| Error::InvalidEquilibrium(format!("validity term {} is not negative", prices.condition)))?;
    Ok(EconomyParams { r: prices.r_star, w, ..*p })
}

pub fn equilibrium_density(p: &EconomyParams) -> Result<PiecewiseExpDensity> {
    wealth_density(&at_equilibrium(p)?)
}
