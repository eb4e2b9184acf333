//! Entrepreneur–worker economy with a proportional output tax.

use crate::error::{ensure, Error, Result};
use crate::stochastic::special::{normal_pdf, normal_sf, GaussHermite};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TaxEconomy {
    pub tau: f64,
    /// Government contribution to output.
    pub g: f64,
    /// Mass of investors.
    pub m: f64,
    pub mu_bar: f64,
    pub sigma_mu: f64,
    /// Ability cutoff for joining the investor set.
    pub k_cut: f64,
    pub sigma_agg: f64,
    pub sigma_idio: f64,
    /// Share of own output each investor must retain.
    pub theta_c: f64,
    pub gamma_b: f64,
    /// Ability of the investor whose consumption is evaluated.
    pub ability: f64,
}

impl TaxEconomy {
    pub fn validate(&self) -> Result<()> {
        ensure(self.tau > 0.0 && self.tau < 1.0, "tau", "must lie in (0, 1)")?;
        ensure(self.g > 0.0, "G", "must be positive")?;
        ensure(self.m > 0.0 && self.m < 1.0, "m", "must lie in (0, 1)")?;
        ensure(self.mu_bar.is_finite(), "mu_bar", "must be finite")?;
        ensure(self.sigma_mu > 0.0, "sigma_mu", "must be positive")?;
        ensure(self.k_cut.is_finite(), "K_cut", "must be finite")?;
        ensure(self.sigma_agg > 0.0, "sigma_agg", "must be positive")?;
        ensure(self.sigma_idio > 0.0, "sigma_idio", "must be positive")?;
        ensure(self.theta_c > 0.0 && self.theta_c < 1.0, "theta_c", "must lie in (0, 1)")?;
        ensure(self.gamma_b > 0.0, "gamma_b", "must be positive")?;
        ensure(self.ability.is_finite(), "ability", "must be finite")
    }

    /// Expected aggregate output G·m·E[e^μ | μ ≥ K] (shocks have unit mean).
    pub fn expected_output(&self) -> Result<f64> {
        Ok(self.g * self.m * truncated_exp_mean(self.mu_bar, self.sigma_mu, self.k_cut)?)
    }

    pub fn expected_tax_revenue(&self) -> Result<f64> {
        Ok(self.tau * self.expected_output()?)
    }

    pub fn expected_investor_share(&self) -> Result<f64> {
        Ok((1.0 - self.tau) * self.expected_output()?)
    }
}

/// E[e^μ | μ ≥ K] for μ ~ N(μ̄, σ²).
pub fn truncated_exp_mean(mu_bar: f64, sigma_mu: f64, k_cut: f64) -> Result<f64> {
    ensure(sigma_mu > 0.0 && sigma_mu.is_finite(), "sigma_mu", "must be positive")?;
    let z = (k_cut - mu_bar) / sigma_mu;
    let survival = normal_sf(z);
    if survival.is_nan() || survival <= 1e-300 {
        return Err(Error::SurvivalUnderflow { cutoff: k_cut });
    }
    let shifted = normal_sf(z - sigma_mu);
    Ok((mu_bar + 0.5 * sigma_mu * sigma_mu).exp() * shifted / survival)
}

/// Investor mass implied by the cutoff, 1 − Φ(K; μ̄, σ²).
pub fn investor_mass_from_cutoff(mu_bar: f64, sigma_mu: f64, k_cut: f64) -> Result<f64> {
    ensure(sigma_mu > 0.0, "sigma_mu", "must be positive")?;
    Ok(normal_sf((k_cut - mu_bar) / sigma_mu))
}

/// Compares the configured investor mass with the one the cutoff implies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MassConsistency {
    pub configured: f64,
    pub implied: f64,
    pub consistent: bool,
}

pub fn mass_consistency(e: &TaxEconomy, tolerance: f64) -> Result<MassConsistency> {
    let implied = investor_mass_from_cutoff(e.mu_bar, e.sigma_mu, e.k_cut)?;
    Ok(MassConsistency { configured: e.m, implied, consistent: (implied - e.m).abs() <= tolerance })
}

/// Normal hazard at `mu_k`, comparing the centred law with the one shifted by σ².
pub fn hazard_ratio_check(mu_k: f64, sigma_mu: f64) -> bool {
    let hazard = |x: f64, mean: f64| {
        let z = (x - mean) / sigma_mu;
        normal_pdf(z) / sigma_mu / normal_sf(z)
    };
    hazard(mu_k, 0.0) > hazard(mu_k, sigma_mu * sigma_mu)
}

/// Consumption of a government worker and of the investor with `e.ability`.
pub fn consumptions(e: &TaxEconomy, eps_agg: f64, eps_idio: f64) -> Result<(f64, f64)> {
    ensure(e.m < 1.0, "m", "government mass 1 − m must be positive")?;
    let conditional = truncated_exp_mean(e.mu_bar, e.sigma_mu, e.k_cut)?;
    let c_gov = e.tau * e.g * eps_agg.exp() * e.m * conditional / (1.0 - e.m);
    let bracket = e.theta_c * eps_idio.exp() + (1.0 - e.theta_c);
    let c_inv = (1.0 - e.tau) * e.g * e.ability.exp() * eps_agg.exp() * bracket;
    Ok((c_gov, c_inv))
}

/// E[(θ e^ε + 1 − θ)^{1−γ}] for ε ~ N(−σ²/2, σ²), by 64-node Gauss–Hermite.
pub fn bracket_moment(theta_c: f64, sigma_idio: f64, gamma_b: f64) -> f64 {
    GaussHermite::rule64()
        .expect_normal(-0.5 * sigma_idio * sigma_idio, sigma_idio, |eps| (theta_c * eps.exp() + 1.0 - theta_c).powf(1.0 - gamma_b))
}

/// E[ln(θ e^ε + 1 − θ)] for the same shock.
pub fn bracket_log_moment(theta_c: f64, sigma_idio: f64) -> f64 {
    GaussHermite::rule64().expect_normal(-0.5 * sigma_idio * sigma_idio, sigma_idio, |eps| (theta_c * eps.exp() + 1.0 - theta_c).ln())
}

/// Expected utility of the investor under tax rate `tau`.
pub fn expected_utility_investor(e: &TaxEconomy, tau: f64) -> Result<f64> {
    e.validate()?;
    ensure((0.0..1.0).contains(&tau), "tau", "must lie in [0, 1)")?;
    let g = e.gamma_b;
    if (g - 1.0).abs() < 1e-12 {
        let agg = -0.5 * e.sigma_agg * e.sigma_agg;
        return Ok((1.0 - tau).ln() + e.g.ln() + e.ability + agg + bracket_log_moment(e.theta_c, e.sigma_idio));
    }
    let one_g = 1.0 - g;
    let s2 = e.sigma_agg * e.sigma_agg;
    let agg = (one_g * (-0.5 * s2) + 0.5 * one_g * one_g * s2).exp();
    Ok((1.0 - tau).powf(one_g) * e.g.powf(one_g) * (one_g * e.ability).exp() / one_g * agg * bracket_moment(e.theta_c, e.sigma_idio, g))
}

/// Whether the investor prefers the low tax rate.
pub fn tax_direction_check(e: &TaxEconomy, tau_h: f64, tau_l: f64) -> Result<bool> {
    ensure(0.0 < tau_l && tau_l < tau_h && tau_h < 1.0, "tau", "need 0 < tau_L < tau_H < 1")?;
    Ok(expected_utility_investor(e, tau_l)? > expected_utility_investor(e, tau_h)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn economy() -> TaxEconomy {
        TaxEconomy {
            tau: 0.3,
            g: 1.0,
            m: 0.5,
            mu_bar: 0.0,
            sigma_mu: 1.0,
            k_cut: 0.0,
            sigma_agg: 0.2,
            sigma_idio: 0.3,
            theta_c: 0.5,
            gamma_b: 2.0,
            ability: 0.0,
        }
    }

    #[test]
    fn truncated_mean_limits_and_monotone() {
        let untrunc = (0.5f64).exp();
        assert_abs_diff_eq!(truncated_exp_mean(0.0, 1.0, -40.0).unwrap(), untrunc, epsilon = 1e-14);
        let at0 = truncated_exp_mean(0.0, 1.0, 0.0).unwrap();
        assert!(truncated_exp_mean(0.0, 1.0, 1.0).unwrap() > at0 && at0 > untrunc);
        // e^{1/2}·Φ(1)/Φ(0)
        assert_abs_diff_eq!(at0, untrunc * 2.0 * 0.841_344_746_068_542_9, epsilon = 1e-14);
        assert!(matches!(truncated_exp_mean(0.0, 1.0, 50.0), Err(Error::SurvivalUnderflow { .. })));
    }

    #[test]
    fn hazard_sweep() {
        for s in [0.5, 1.0, 2.0] {
            for i in 0..=100 {
                assert!(hazard_ratio_check(-5.0 + 0.1 * i as f64, s));
            }
        }
    }

    #[test]
    fn consumption_examples() {
        let e = economy();
        let (_, c) = consumptions(&e, 0.0, 0.0).unwrap();
        assert_abs_diff_eq!(c, 0.7, epsilon = 1e-15);
        let (gov, inv) = consumptions(&TaxEconomy { tau: 0.0, ..e }, 0.1, 0.2).unwrap();
        assert_eq!(gov, 0.0);
        assert!(inv > consumptions(&e, 0.1, 0.2).unwrap().1);
        let full = TaxEconomy { theta_c: 1.0, ..e };
        let (_, c) = consumptions(&full, 0.0, 0.4).unwrap();
        assert_abs_diff_eq!(c, 0.7 * 0.4f64.exp(), epsilon = 1e-15);
        assert!(consumptions(&TaxEconomy { m: 1.0, ..e }, 0.0, 0.0).is_err());
    }

    #[test]
    fn shocks_have_unit_mean() {
        let gh = GaussHermite::rule64();
        for s in [0.1, 0.5, 1.0] {
            assert_abs_diff_eq!(gh.expect_normal(-0.5 * s * s, s, f64::exp), 1.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn bracket_limits() {
        assert_abs_diff_eq!(bracket_moment(1e-12, 0.5, 2.0), 1.0, epsilon = 1e-10);
        // θ = 1: E[e^{(1−γ)ε}] in closed form
        let (s, g) = (0.4f64, 3.0f64);
        let exact = ((1.0 - g) * (-0.5 * s * s) + 0.5 * (1.0 - g).powi(2) * s * s).exp();
        assert_abs_diff_eq!(bracket_moment(1.0, s, g), exact, epsilon = 1e-12);
    }

    #[test]
    fn log_utility_difference() {
        let e = TaxEconomy { gamma_b: 1.0, ..economy() };
        let d = expected_utility_investor(&e, 0.2).unwrap() - expected_utility_investor(&e, 0.4).unwrap();
        assert_abs_diff_eq!(d, (0.8f64 / 0.6).ln(), epsilon = 1e-14);
    }

    #[test]
    fn crra_margin_factorizes() {
        let e = economy();
        assert!(tax_direction_check(&e, 0.4, 0.2).unwrap());
        let rest = expected_utility_investor(&e, 0.0).unwrap();
        let d = expected_utility_investor(&e, 0.2).unwrap() - expected_utility_investor(&e, 0.4).unwrap();
        assert_abs_diff_eq!(d, (1.0 / 0.8 - 1.0 / 0.6) * rest, epsilon = 1e-14);
        assert!(tax_direction_check(&e, 0.2, 0.4).is_err());
    }

    #[test]
    fn resource_identity_and_mass_helper() {
        let e = economy();
        let total = e.expected_output().unwrap();
        let split = e.expected_tax_revenue().unwrap() + e.expected_investor_share().unwrap();
        assert!((split - total).abs() <= 1e-12 * total);
        let c = mass_consistency(&e, 1e-12).unwrap();
        assert!(c.consistent && c.implied == 0.5);
        assert!(!mass_consistency(&TaxEconomy { k_cut: 1.0, ..e }, 1e-6).unwrap().consistent);
    }

    proptest! {
        #[test]
        fn low_tax_preferred_holds(
            tl in 0.01..0.5f64, dt in 0.01..0.45f64, g in 0.2..5.0f64, th in 0.05..0.95f64,
            s1 in 0.05..1.0f64, s in 0.05..1.0f64, ab in -1.0..1.0f64
        ) {
            let e = TaxEconomy { gamma_b: g, theta_c: th, sigma_idio: s1, sigma_agg: s, ability: ab, ..economy() };
            prop_assert!(tax_direction_check(&e, tl + dt, tl).unwrap());
        }
    }
}
