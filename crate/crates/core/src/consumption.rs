//! Consumption adjustment: log-odds, shrinkage, the CAWF and net utility.

use rand_distr::{Distribution, StandardNormal};

use crate::error::{ensure, Error, Result};
use crate::exec::Execution;
use crate::stochastic::ou::{simulate_ou_reflected_with, OuProcessSpec};
use crate::stochastic::rng::RngSpec;

/// Log-odds adjustment ln(p1/(1 − p1)) of a fully rational agent.
pub fn bayes_adjustment(p1: f64) -> Result<f64> {
    ensure((0.5..1.0).contains(&p1), "p1", "must lie in [0.5, 1)")?;
    Ok((p1 / (1.0 - p1)).ln())
}

/// Shrinkage `Ŝ = μ_b · S^β_b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShrinkageParams {
    pub beta_b: f64,
    pub mu_b: f64,
}

impl ShrinkageParams {
    pub fn new(beta_b: f64, mu_b: f64) -> Result<Self> {
        ensure(beta_b > 0.0 && beta_b <= 1.0, "beta_b", "must lie in (0, 1]")?;
        ensure(mu_b > 0.0 && mu_b.is_finite(), "mu_b", "must be positive")?;
        Ok(ShrinkageParams { beta_b, mu_b })
    }

    /// The identity line.
    pub fn bayesian() -> Self {
        ShrinkageParams { beta_b: 1.0, mu_b: 1.0 }
    }

    /// ln S* where Ŝ = S; `None` when β_b = 1.
    pub fn crossover_log(&self) -> Option<f64> {
        (self.beta_b < 1.0).then(|| self.mu_b.ln() / (1.0 - self.beta_b))
    }
}

pub fn nonbayes_adjustment(s: f64, p: &ShrinkageParams) -> Result<f64> {
    ensure(s > 0.0 && s.is_finite(), "S", "must be positive")?;
    Ok(p.mu_b * s.powf(p.beta_b))
}

/// Lognormal signal model behind the shrinkage law.
///
/// `ln S ~ N(μ_S, σ_S²)`, `ln s_n | S ~ N(ln S − σ_n²/2, σ_n²)`, and the agent
/// combines the bias-corrected estimate with the prior mean on the log scale
/// using the precision weight β = σ_S²/(σ_S² + σ_n²).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShrinkageModel {
    pub sigma_s: f64,
    pub sigma_n: f64,
    pub mu_s: f64,
}

impl ShrinkageModel {
    pub fn new(sigma_s: f64, sigma_n: f64, mu_s: f64) -> Result<Self> {
        ensure(sigma_s > 0.0 && sigma_s.is_finite(), "sigma_S", "must be positive")?;
        ensure(sigma_n >= 0.0 && sigma_n.is_finite(), "sigma_n", "must be nonnegative")?;
        ensure(mu_s.is_finite(), "mu_S", "must be finite")?;
        Ok(ShrinkageModel { sigma_s, sigma_n, mu_s })
    }

    /// The model with prior spread `sigma_s` that implies `p`.
    pub fn from_params(p: &ShrinkageParams, sigma_s: f64) -> Result<Self> {
        let p = ShrinkageParams::new(p.beta_b, p.mu_b)?;
        ensure(sigma_s > 0.0, "sigma_S", "must be positive")?;
        let var_s = sigma_s * sigma_s;
        if p.beta_b == 1.0 {
            ensure(p.mu_b == 1.0, "mu_b", "must be 1 when beta_b = 1")?;
            return ShrinkageModel::new(sigma_s, 0.0, 0.0);
        }
        let var_n = var_s * (1.0 - p.beta_b) / p.beta_b;
        let mu_s = (p.mu_b.ln() - 0.5 * p.beta_b * p.beta_b * var_n) / (1.0 - p.beta_b) - 0.5 * var_s;
        ShrinkageModel::new(sigma_s, var_n.sqrt(), mu_s)
    }

    pub fn beta(&self) -> f64 {
        let (vs, vn) = (self.sigma_s.powi(2), self.sigma_n.powi(2));
        vs / (vs + vn)
    }

    /// Shrinkage parameters of the conditional mean of Ŝ given S.
    pub fn params(&self) -> ShrinkageParams {
        let b = self.beta();
        let ln_mu = (1.0 - b) * (self.mu_s + 0.5 * self.sigma_s.powi(2)) + 0.5 * b * b * self.sigma_n.powi(2);
        ShrinkageParams { beta_b: b, mu_b: ln_mu.exp() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegressionFit {
    pub slope: f64,
    /// Estimate of ln μ_b: OLS intercept plus half the residual variance
    /// (the lognormal mean correction).
    pub intercept: f64,
    pub residual_variance: f64,
}

/// Draws from `model` and regresses ln Ŝ on ln S.
pub fn shrinkage_regression_check(model: &ShrinkageModel, rng: RngSpec, n_draws: usize) -> Result<RegressionFit> {
    let m = ShrinkageModel::new(model.sigma_s, model.sigma_n, model.mu_s)?;
    ensure(n_draws >= 10_000, "n_draws", "must be at least 1e4")?;
    let b = m.beta();
    let var_n = m.sigma_n * m.sigma_n;
    let prior = m.mu_s + 0.5 * m.sigma_s * m.sigma_s;
    let mut r = rng.rng();
    let (mut xs, mut ys) = (Vec::with_capacity(n_draws), Vec::with_capacity(n_draws));
    for _ in 0..n_draws {
        let z1: f64 = StandardNormal.sample(&mut r);
        let z2: f64 = StandardNormal.sample(&mut r);
        let ln_s = m.mu_s + m.sigma_s * z1;
        let ln_sn = ln_s - 0.5 * var_n + m.sigma_n * z2;
        xs.push(ln_s);
        ys.push(b * (ln_sn + 0.5 * var_n) + (1.0 - b) * prior);
    }
    let n = n_draws as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxx, mut sxy) = (0.0, 0.0);
    for (x, y) in xs.iter().zip(&ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    if sxx <= 0.0 {
        return Err(Error::param("sigma_S", "degenerate regressor"));
    }
    let slope = sxy / sxx;
    let ols = my - slope * mx;
    let rss: f64 = xs.iter().zip(&ys).map(|(x, y)| (y - ols - slope * x).powi(2)).sum();
    let residual_variance = rss / (n - 2.0);
    Ok(RegressionFit { slope, intercept: ols + 0.5 * residual_variance, residual_variance })
}

/// Parameters of the consumption adjustment weight function.
#[derive(Debug, Clone, PartialEq)]
pub struct CawfParams {
    pub s_delta: f64,
    pub omega: f64,
    pub d_bar: f64,
    /// Law of the data value D(t).
    pub ou: OuProcessSpec,
    pub n_grid: Vec<f64>,
}

/// `count` points from `lo` to `hi`, evenly spaced in log scale.
pub fn geometric_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![lo];
    }
    let step = (hi / lo).ln() / (count - 1) as f64;
    (0..count).map(|i| if i + 1 == count { hi } else { lo * (step * i as f64).exp() }).collect()
}

impl CawfParams {
    /// s_Δ = 1.15, ω = 100, D̄ = 0.5, data value reverting at 0.1 with
    /// volatility 0.8 on (0, 1), scales 1..500.
    pub fn reference() -> Self {
        CawfParams {
            s_delta: 1.15,
            omega: 100.0,
            d_bar: 0.5,
            ou: OuProcessSpec::new(0.5, 0.1, 0.8, 0.0, 1.0),
            n_grid: geometric_grid(1.0, 500.0, 50),
        }
    }

    pub fn validate(&self) -> Result<()> {
        ensure(self.s_delta >= 1.0, "s_delta", "must be at least 1")?;
        ensure(self.omega > 0.0, "omega", "must be positive")?;
        ensure(self.d_bar.is_finite(), "d_bar", "must be finite")?;
        ensure(!self.n_grid.is_empty(), "n_grid", "must not be empty")?;
        ensure(self.n_grid.iter().all(|&n| n >= 0.0), "n_grid", "scales must be nonnegative")
    }

    /// Weight on the rational branch, 1/(1 + n/ω).
    pub fn weight(&self, n: f64) -> f64 {
        1.0 / (1.0 + n / self.omega)
    }
}

/// Rational (n → 0) branch s_Δ e^{D−D̄} − 1.
pub fn cawf_bayes_limit(d: f64, p: &CawfParams) -> f64 {
    p.s_delta * (d - p.d_bar).exp() - 1.0
}

/// Diluted (n → ∞) branch 1 − s_Δ e^{D̄−D}.
pub fn cawf_nonbayes_limit(d: f64, p: &CawfParams) -> f64 {
    1.0 - p.s_delta * (p.d_bar - d).exp()
}

pub fn cawf(d: f64, n: f64, p: &CawfParams) -> f64 {
    let w = p.weight(n);
    cawf_bayes_limit(d, p) * w + cawf_nonbayes_limit(d, p) * (1.0 - w)
}

/// Mean CAWF over the scale grid for all draws and for the high/low halves.
#[derive(Debug, Clone, PartialEq)]
pub struct CawfCurves {
    pub n: Vec<f64>,
    pub average: Vec<f64>,
    /// Draws with D ≥ D̄.
    pub high: Vec<f64>,
    /// Draws with D ≤ D̄.
    pub low: Vec<f64>,
    /// Terminal data values, one per path.
    pub draws: Vec<f64>,
}

impl CawfCurves {
    /// First grid scale where the average falls to half of `reference`.
    pub fn half_point(&self, reference: f64) -> Option<f64> {
        self.n.iter().zip(&self.average).find(|(_, &v)| v <= 0.5 * reference).map(|(&n, _)| n)
    }
}

pub fn cawf_montecarlo(p: &CawfParams, rng: RngSpec, n_paths: usize) -> Result<CawfCurves> {
    cawf_montecarlo_with(p, rng, n_paths, Execution::default())
}

pub fn cawf_montecarlo_with(p: &CawfParams, rng: RngSpec, n_paths: usize, exec: Execution) -> Result<CawfCurves> {
    p.validate()?;
    ensure(n_paths >= 100, "n_paths", "must be at least 100")?;
    let paths = simulate_ou_reflected_with(&p.ou, rng, n_paths, &[p.ou.horizon], exec)?;
    let draws: Vec<f64> = paths.into_iter().map(|row| row[0]).collect();
    let mean_over = |keep: &dyn Fn(f64) -> bool, n: f64| {
        let (sum, count) = draws.iter().filter(|&&d| keep(d)).fold((0.0, 0usize), |(s, c), &d| (s + cawf(d, n, p), c + 1));
        if count == 0 {
            f64::NAN
        } else {
            sum / count as f64
        }
    };
    let mut curves = CawfCurves { n: p.n_grid.clone(), average: Vec::new(), high: Vec::new(), low: Vec::new(), draws: Vec::new() };
    for &n in &p.n_grid {
        curves.average.push(mean_over(&|_| true, n));
        curves.high.push(mean_over(&|d| d >= p.d_bar, n));
        curves.low.push(mean_over(&|d| d <= p.d_bar, n));
    }
    curves.draws = draws;
    Ok(curves)
}

/// Total consumption scaled by 1 + C_Δ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveConsumption {
    pub c_total: f64,
    pub c_delta: f64,
    pub gamma_t: f64,
}

impl EffectiveConsumption {
    /// Utility weight f_σ = 1 + C_Δ.
    pub fn f_sigma(&self) -> f64 {
        1.0 + self.c_delta
    }

    pub fn c_utility(&self) -> f64 {
        self.c_total * self.f_sigma()
    }
}

/// CRRA utility of effective consumption; logarithmic at γ = 1.
pub fn net_utility(e: &EffectiveConsumption) -> Result<f64> {
    ensure(e.gamma_t > 0.0, "gamma_t", "must be positive")?;
    let c = e.c_utility();
    ensure(c > 0.0 && c.is_finite(), "c_utility", "effective consumption must be positive")?;
    Ok(if e.gamma_t == 1.0 { c.ln() } else { c.powf(1.0 - e.gamma_t) / (1.0 - e.gamma_t) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn log_odds() {
        assert_eq!(bayes_adjustment(0.5).unwrap(), 0.0);
        assert_abs_diff_eq!(bayes_adjustment(0.75).unwrap(), 3f64.ln(), epsilon = 1e-15);
        assert_abs_diff_eq!(bayes_adjustment(0.9).unwrap(), 9f64.ln(), epsilon = 1e-14);
        assert!(bayes_adjustment(0.4).is_err());
        assert!(bayes_adjustment(1.0).is_err());
    }

    #[test]
    fn shrinkage_examples() {
        assert_eq!(nonbayes_adjustment(2.5, &ShrinkageParams::bayesian()).unwrap(), 2.5);
        let p = ShrinkageParams::new(0.8, 0.9).unwrap();
        assert_abs_diff_eq!(nonbayes_adjustment(1.0, &p).unwrap(), 0.9, epsilon = 1e-15);
        assert_abs_diff_eq!(p.crossover_log().unwrap(), 0.9f64.ln() / 0.2, epsilon = 1e-15);
        assert_abs_diff_eq!(p.crossover_log().unwrap(), -0.5268, epsilon = 1e-4);
        assert!(ShrinkageParams::bayesian().crossover_log().is_none());
        assert!(nonbayes_adjustment(0.0, &p).is_err());
    }

    #[test]
    fn model_round_trip() {
        let p = ShrinkageParams::new(0.8, 0.9).unwrap();
        let m = ShrinkageModel::from_params(&p, 1.0).unwrap();
        assert_abs_diff_eq!(m.beta(), 0.8, epsilon = 1e-15);
        assert_abs_diff_eq!(m.params().mu_b, 0.9, epsilon = 1e-14);
    }

    #[test]
    fn regression_without_noise_is_exact() {
        let m = ShrinkageModel::new(0.7, 0.0, 0.3).unwrap();
        let fit = shrinkage_regression_check(&m, RngSpec::new(1), 10_000).unwrap();
        assert_abs_diff_eq!(fit.slope, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(fit.intercept, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn regression_recovers_half_weight() {
        let m = ShrinkageModel::new(0.6, 0.6, 0.2).unwrap();
        let fit = shrinkage_regression_check(&m, RngSpec::new(4), 100_000).unwrap();
        assert!((fit.slope - 0.5).abs() < 0.02);
        assert!((fit.intercept - m.params().mu_b.ln()).abs() < 0.02);
    }

    #[test]
    fn cawf_limits_and_midpoint() {
        let p = CawfParams::reference();
        assert_abs_diff_eq!(cawf(0.5, 0.0, &p), 0.15, epsilon = 1e-15);
        assert_abs_diff_eq!(cawf(0.5, f64::INFINITY, &p), -0.15, epsilon = 1e-15);
        assert_abs_diff_eq!(cawf(0.5, p.omega, &p), 0.0, epsilon = 1e-15);
        for d in [0.05, 0.3, 0.77] {
            assert_eq!(cawf(d, 0.0, &p), cawf_bayes_limit(d, &p));
            assert_eq!(cawf(d, f64::INFINITY, &p), cawf_nonbayes_limit(d, &p));
        }
        assert!(cawf(0.5, 10.0, &p) > cawf(0.5, 20.0, &p));
    }

    #[test]
    fn deterministic_data_value_collapses_curves() {
        let mut p = CawfParams::reference();
        p.ou.volatility = 0.0;
        let c = cawf_montecarlo(&p, RngSpec::new(3), 100).unwrap();
        for (i, &n) in c.n.iter().enumerate() {
            let exact = cawf(0.5, n, &p);
            assert_abs_diff_eq!(c.average[i], exact, epsilon = 1e-12);
            assert_abs_diff_eq!(c.high[i], exact, epsilon = 1e-12);
            assert_abs_diff_eq!(c.low[i], exact, epsilon = 1e-12);
        }
    }

    #[test]
    fn utility_examples() {
        let u = |c_total, c_delta, gamma_t| net_utility(&EffectiveConsumption { c_total, c_delta, gamma_t });
        assert_eq!(u(1.0, 0.0, 2.0).unwrap(), -1.0);
        assert_eq!(u(1.0, -0.5, 2.0).unwrap(), -2.0);
        assert_abs_diff_eq!(u(std::f64::consts::E, 0.0, 1.0).unwrap(), 1.0, epsilon = 1e-15);
        assert!(u(1.0, -1.0, 2.0).is_err());
    }

    #[test]
    fn grid_endpoints() {
        let g = geometric_grid(1.0, 500.0, 50);
        assert_eq!((g[0], g[49], g.len()), (1.0, 500.0, 50));
        assert!(g.windows(2).all(|w| w[1] > w[0]));
    }

    proptest! {
        #[test]
        fn shrinkage_homogeneity(s in 0.01..100.0f64, k in 0.01..100.0f64, b in 0.05..1.0f64, m in 0.1..3.0f64) {
            let p = ShrinkageParams::new(b, m).unwrap();
            let lhs = nonbayes_adjustment(k * s, &p).unwrap();
            let rhs = k.powf(b) * nonbayes_adjustment(s, &p).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs);
        }

        #[test]
        fn over_under_partition(ln_s in -5.0..5.0f64, b in 0.05..0.99f64, m in 0.1..3.0f64) {
            let p = ShrinkageParams::new(b, m).unwrap();
            let star = p.crossover_log().unwrap();
            prop_assume!((ln_s - star).abs() > 1e-9);
            let gap = nonbayes_adjustment(ln_s.exp(), &p).unwrap().ln() - ln_s;
            prop_assert_eq!(gap > 0.0, star > ln_s);
        }

        #[test]
        fn cawf_increasing_in_data_value(d in 0.0..0.99f64, dd in 0.001..0.5f64, n in 0.0..1e4f64) {
            let p = CawfParams::reference();
            prop_assert!(cawf(d + dd, n, &p) > cawf(d, n, &p));
        }
    }
}
