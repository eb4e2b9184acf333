//! Plain-text `name = value` reports for the module subcommands, and the
//! oracle validation run.

use std::fmt::Write as _;

use cawf_core::cognition::{dilution_threshold, gbm_coefficients, steady_state_resource, CognitionParams, RetentionParams};
use cawf_core::consumption::{cawf_bayes_limit, cawf_montecarlo, cawf_nonbayes_limit, ShrinkageModel};
use cawf_core::data_value::{
    aggregate_data_value, data_value_index, differential_entropy, direction_value_matrix, information_value, normalize_value,
};
use cawf_core::stochastic::{ks_distance, simulate_gbm_reset, solve_stationary_kfe_fd, FluxScheme, GbmResetSpec, Grid1D};
use cawf_core::tax::{consumptions, expected_utility_investor, mass_consistency, tax_direction_check};
use cawf_core::wealth::{
    drift_diffusion, equilibrium_prices, firm_policy, labor_market_residual, policy_functions, productivity_cutoff, AgentType,
    EconomyParams,
};
use cawf_core::{PiecewiseExpDensity, RngSpec};

use crate::config::ScenarioConfig;
use crate::error::{CliError, CliResult};

/// Finite-difference tolerance (max abs density error).
pub const FD_TOL: f64 = 1e-3;
/// Monte Carlo tolerance (KS distance).
pub const KS_TOL: f64 = 0.02;

#[derive(Default)]
struct Lines(String);

impl Lines {
    fn put(&mut self, name: &str, v: impl std::fmt::Display) {
        let _ = writeln!(self.0, "{name} = {v}");
    }

    fn num(&mut self, name: &str, v: f64) {
        self.put(name, format!("{v:.12e}"));
    }

    fn density(&mut self, prefix: &str, d: &PiecewiseExpDensity) {
        let s = d.stats();
        self.num(&format!("{prefix}.mean"), s.mean);
        self.num(&format!("{prefix}.variance"), s.variance);
        self.num(&format!("{prefix}.rate_left"), s.tail_left);
        self.num(&format!("{prefix}.rate_right"), s.tail_right);
        match s.wealth_mean {
            Some(m) => self.num(&format!("{prefix}.exp_mean"), m),
            None => self.put(&format!("{prefix}.exp_mean"), "none"),
        }
    }
}

pub fn cognition(cfg: &ScenarioConfig) -> CliResult<String> {
    let mut out = Lines::default();
    let c = &cfg.cognition;
    let r = &cfg.retention;
    for (&d, &v) in r.dilution.iter().zip(&r.recovery) {
        let p = RetentionParams::new(r.r0[0], d, v)?;
        out.num(&format!("retention.gap{:+}.limit", d - v), p.limit());
    }
    let regimes = [("recovery", c.base, &c.n), ("dilution", CognitionParams { eta_c: c.eta_alt, ..c.base }, &c.n_alt)];
    for (name, base, scales) in regimes {
        out.num(&format!("{name}.n_star"), dilution_threshold(&base)?);
        for &n in scales {
            let p = base.with_n(n);
            let g = gbm_coefficients(&p)?;
            let pre = format!("{name}.n{n}");
            out.num(&format!("{pre}.r_star"), steady_state_resource(&p)?);
            out.num(&format!("{pre}.relative_dilution"), p.relative_dilution());
            out.num(&format!("{pre}.phi"), g.phi);
            out.num(&format!("{pre}.omega"), g.omega);
            out.num(&format!("{pre}.log_drift"), g.sigma);
            out.density(&pre, &p.density()?);
        }
    }
    Ok(out.0)
}

pub fn datavalue(cfg: &ScenarioConfig) -> CliResult<String> {
    let mut out = Lines::default();
    let c = &cfg.datavalue;
    let cap = c.ensemble.sigma_max();
    out.num("sigma_max", cap);
    for (i, s) in c.ensemble.sources.iter().enumerate() {
        let h = differential_entropy(s, Some(cap))?;
        let v = information_value(h.value, cap)?;
        out.num(&format!("source{i}.entropy"), h.value);
        out.num(&format!("source{i}.entropy_raw"), h.raw);
        out.put(&format!("source{i}.clamped"), h.clamped_low || h.clamped_high);
        out.num(&format!("source{i}.value"), v.value);
        out.num(&format!("source{i}.phi"), normalize_value(v.value));
    }
    let agg = aggregate_data_value(&c.ensemble)?;
    out.num("aggregate", agg);
    out.num("index", data_value_index(&[agg])?);
    let m = direction_value_matrix(&c.direction, c.magnitude)?;
    out.num("direction.eigen_high", m.eigenvalues[0]);
    out.num("direction.eigen_low", m.eigenvalues[1]);
    Ok(out.0)
}

pub fn consumption(cfg: &ScenarioConfig) -> CliResult<String> {
    let mut out = Lines::default();
    let s = &cfg.shrinkage;
    match s.params.crossover_log() {
        Some(x) => out.num("shrinkage.crossover_ln_s", x),
        None => out.put("shrinkage.crossover_ln_s", "none"),
    }
    if s.params.beta_b < 1.0 {
        let model = ShrinkageModel::from_params(&s.params, s.sigma_s)?;
        let fit = cawf_core::consumption::shrinkage_regression_check(&model, RngSpec::with_stream(cfg.seed, 9), s.draws)?;
        out.num("shrinkage.sigma_n", model.sigma_n);
        out.num("shrinkage.fit_slope", fit.slope);
        out.num("shrinkage.fit_intercept", fit.intercept);
        out.num("shrinkage.target_intercept", s.params.mu_b.ln());
    }
    let c = &cfg.cawf;
    let d = c.params.d_bar;
    out.num("cawf.bayes_limit_at_d_bar", cawf_bayes_limit(d, &c.params));
    out.num("cawf.nonbayes_limit_at_d_bar", cawf_nonbayes_limit(d, &c.params));
    let mc = cawf_montecarlo(&c.params, RngSpec::with_stream(cfg.seed, 6), c.paths)?;
    out.num("cawf.average_first", mc.average[0]);
    out.num("cawf.average_last", *mc.average.last().expect("grid is nonempty"));
    match mc.half_point(mc.average[0]) {
        Some(n) => out.num("cawf.half_point", n),
        None => out.put("cawf.half_point", "none"),
    }
    Ok(out.0)
}

pub fn tax(cfg: &ScenarioConfig) -> CliResult<String> {
    let mut out = Lines::default();
    let t = &cfg.tax;
    let e = &t.economy;
    out.num("expected_output", e.expected_output()?);
    out.num("tax_revenue", e.expected_tax_revenue()?);
    out.num("investor_share", e.expected_investor_share()?);
    let mc = mass_consistency(e, 1e-6)?;
    out.num("mass.configured", mc.configured);
    out.num("mass.implied", mc.implied);
    out.put("mass.consistent", mc.consistent);
    let (gov, inv) = consumptions(e, 0.0, 0.0)?;
    out.num("consumption.gov", gov);
    out.num("consumption.investor", inv);
    out.num("utility.tau_low", expected_utility_investor(e, t.tau_low)?);
    out.num("utility.tau_high", expected_utility_investor(e, t.tau_high)?);
    out.put("low_tax_preferred", tax_direction_check(e, t.tau_high, t.tau_low)?);
    Ok(out.0)
}

pub fn wealth(cfg: &ScenarioConfig) -> CliResult<String> {
    let mut out = Lines::default();
    let p = &cfg.wealth.params;
    out.num("z_min", productivity_cutoff(p.r, p.delta, p.alpha, p.w)?);
    out.num("profit_rate", p.profit_rate());
    let f = firm_policy(1.0, p)?;
    out.num("firm.capital", f.capital);
    out.num("firm.labor", f.labor);
    out.num("firm.profit", f.profit);
    out.num("firm.output", f.output);
    let pol = policy_functions(p)?;
    out.num("policy.kappa", pol.kappa);
    out.num("policy.consumption", pol.consumption);
    let law = drift_diffusion(p)?;
    out.num("law.mu", law.mu);
    out.num("law.sigma", law.sigma);
    out.num("law.beta", law.beta);
    out.density("density", &law.density()?);
    Ok(out.0)
}

pub fn equilibrium(cfg: &ScenarioConfig) -> CliResult<String> {
    let p = &cfg.equilibrium;
    if p.agent_type != AgentType::One {
        return Err(CliError::config("wealth.agent_type", "the equilibrium is solved for type-one agents only"));
    }
    let mut out = Lines::default();
    let prices = equilibrium_prices(p)?;
    out.num("r_star", prices.r_star);
    out.num("condition", prices.condition);
    out.put("valid", prices.valid);
    let Some(w) = prices.w_star else {
        out.put("w_star", "none");
        return Ok(out.0);
    };
    out.num("w_star", w);
    let eq = EconomyParams { r: prices.r_star, w, ..*p };
    let law = drift_diffusion(&eq)?;
    out.num("law.mu", law.mu);
    out.num("law.sigma", law.sigma);
    let d = law.density()?;
    out.density("density", &d);
    match labor_market_residual(&eq) {
        Ok(r) => out.num("labor_residual", r),
        Err(e) => out.put("labor_residual", format!("none ({e})")),
    }
    Ok(out.0)
}

/// Pass/fail lines of the dual-oracle run; `passed` is false if any check failed.
pub struct Validation {
    pub text: String,
    pub passed: bool,
}

#[allow(clippy::too_many_arguments)]
fn check_law(
    out: &mut Lines,
    name: &str,
    mu: f64,
    sigma: f64,
    beta: f64,
    fd_points: usize,
    samples: usize,
    rng: RngSpec,
) -> CliResult<bool> {
    let d = match PiecewiseExpDensity::from_drift_diffusion(mu, sigma, beta) {
        Ok(d) => d,
        Err(cawf_core::Error::DegenerateDiffusion(why)) => {
            out.put(&format!("{name}.status"), "degenerate");
            out.put(&format!("{name}.reason"), &why);
            return Err(CliError::Degenerate(format!("{name}: {why}\n{}", out.0.trim_end())));
        }
        Err(e) => return Err(e.into()),
    };
    let grid = Grid1D::for_reset_law(mu, sigma, beta, 0.0, fd_points)?;
    let fd = solve_stationary_kfe_fd(mu, sigma, beta, 0.0, &grid, FluxScheme::default())?;
    let fd_err = fd.max_abs_error(|x| d.pdf(x));
    let xs = simulate_gbm_reset(&GbmResetSpec::new(mu, sigma, beta), rng, samples)?;
    let ks = ks_distance(&xs, |x| d.cdf(x));
    let verdict = |ok: bool| if ok { "PASS" } else { "FAIL" };
    out.put(&format!("{name}.fd"), format!("{} max_abs_error {fd_err:.3e} (tol {FD_TOL:e}, {fd_points} points)", verdict(fd_err < FD_TOL)));
    out.put(&format!("{name}.mc"), format!("{} ks {ks:.3e} (tol {KS_TOL}, {samples} samples)", verdict(ks < KS_TOL)));
    Ok(fd_err < FD_TOL && ks < KS_TOL)
}

pub fn validate(cfg: &ScenarioConfig) -> CliResult<Validation> {
    let mut out = Lines::default();
    let w = &cfg.wealth;
    let law = drift_diffusion(&w.params)?;
    let rng = RngSpec::with_stream(cfg.seed, 12);
    let mut passed = check_law(&mut out, "wealth", law.mu, law.sigma, law.beta, w.fd_points, w.mc_samples, rng.fork(0))?;
    let c = cfg.cognition.base;
    let g = gbm_coefficients(&c)?;
    passed &= check_law(&mut out, "cognition", g.sigma, g.omega, c.beta_c, w.fd_points, w.mc_samples, rng.fork(1))?;
    out.put("overall", if passed { "PASS" } else { "FAIL" });
    Ok(Validation { text: out.0, passed })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn value(report: &str, key: &str) -> String {
        report.lines().find_map(|l| l.strip_prefix(&format!("{key} = "))).unwrap_or_else(|| panic!("{key} missing")).to_string()
    }

    #[test]
    fn wealth_report_values() {
        let r = wealth(&ScenarioConfig::defaults()).unwrap();
        let z: f64 = value(&r, "z_min").parse().unwrap();
        assert!((z - 4.674).abs() < 1e-3);
        let k: f64 = value(&r, "policy.kappa").parse().unwrap();
        assert!((k - 8.0).abs() < 1e-12);
    }

    #[test]
    fn equilibrium_report_clears() {
        let r = equilibrium(&ScenarioConfig::defaults()).unwrap();
        assert_eq!(value(&r, "valid"), "true");
        let res: f64 = value(&r, "labor_residual").parse().unwrap();
        assert!(res.abs() < 1e-8);
        let hot = ScenarioConfig::parse("[equilibrium]\nlambda = 25\ntheta = 0.5\nsigma = 0.5\n").unwrap();
        let r = equilibrium(&hot).unwrap();
        assert_eq!(value(&r, "w_star"), "none");
        let two = ScenarioConfig::parse("[wealth]\nagent_type = two\nf_sigma = 0.5\n").unwrap();
        assert!(equilibrium(&two).is_err());
    }

    #[test]
    fn other_reports_run() {
        let cfg = ScenarioConfig::parse("[cawf]\npaths = 100\nhorizon = 100\n[shrinkage]\ndraws = 10000\n").unwrap();
        assert_eq!(value(&tax(&cfg).unwrap(), "low_tax_preferred"), "true");
        assert!(datavalue(&cfg).unwrap().contains("direction.eigen_high = 1.0"));
        assert!(cognition(&cfg).unwrap().contains("recovery.n10.mean"));
        assert!(consumption(&cfg).unwrap().contains("cawf.half_point"));
    }

    #[test]
    fn degenerate_law_is_reported() {
        let cfg = ScenarioConfig::parse("[wealth]\ntheta = 0.01\n").unwrap();
        let e = validate(&cfg).err().expect("degenerate");
        assert_eq!(e.exit_code(), 3);
        assert!(e.to_string().contains("wealth.status = degenerate"));
    }
}
