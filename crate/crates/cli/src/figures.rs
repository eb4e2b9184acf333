//! Data series behind figures 1 to 14.

use cawf_core::cognition::{retention_trajectory, CognitionParams, RetentionParams};
use cawf_core::consumption::{cawf, cawf_montecarlo, nonbayes_adjustment};
use cawf_core::wealth::{wealth_density, AgentType, EconomyParams};
use cawf_core::RngSpec;

use crate::config::{linspace, ScenarioConfig, WealthCfg};
use crate::error::{CliError, CliResult};
use crate::table::SeriesTable;

pub const FIGURES: std::ops::RangeInclusive<u32> = 1..=14;

const LEVELS: [&str; 3] = ["L", "M", "H"];

pub fn reproduce(figure: u32, cfg: &ScenarioConfig) -> CliResult<SeriesTable> {
    match figure {
        1 => retention(cfg),
        2 => cognition(cfg, false),
        3 => cognition(cfg, true),
        4 => shrinkage(cfg),
        5 => cawf_surface(cfg),
        6 => cawf_mc(cfg),
        7..=14 => wealth(figure, cfg),
        _ => Err(CliError::Usage(format!("figure must be in 1..=14, got {figure}"))),
    }
}

fn retention(cfg: &ScenarioConfig) -> CliResult<SeriesTable> {
    let c = &cfg.retention;
    let t = linspace(0.0, c.t_max, c.t_points);
    let mut curves = Vec::new();
    for (&d, &v) in c.dilution.iter().zip(&c.recovery) {
        for &r0 in &c.r0 {
            let p = RetentionParams::new(r0, d, v)?;
            curves.push((format!("gap{:+}_r0_{r0}", d - v), retention_trajectory(&p, &t)?));
        }
    }
    Ok(SeriesTable::from_columns("figure 1: cognition retention over time", "t", &t, curves))
}

fn cognition(cfg: &ScenarioConfig, alt: bool) -> CliResult<SeriesTable> {
    let c = &cfg.cognition;
    let (base, scales, id, regime) = if alt {
        (CognitionParams { eta_c: c.eta_alt, ..c.base }, &c.n_alt, 3, "dilution-dominated")
    } else {
        (c.base, &c.n, 2, "recovery-dominated")
    };
    let mut curves = Vec::new();
    let mut notes = Vec::new();
    for &n in scales {
        let d = base.with_n(n).density()?;
        notes.push(format!("n_{n}: mean {:.12e}, right rate {:.12e}", d.mean(), d.rate_right()));
        curves.push((format!("n_{n}"), d.sample_on(&c.x)));
    }
    let title = format!("figure {id}: stationary log cognitive-resource density, {regime} (mu_c = {}, eta_c = {})", base.mu_c, base.eta_c);
    let mut t = SeriesTable::from_columns(title, "x", &c.x, curves);
    t.notes = notes;
    Ok(t)
}

fn shrinkage(cfg: &ScenarioConfig) -> CliResult<SeriesTable> {
    let c = &cfg.shrinkage;
    let p = &c.params;
    let shrunk = c.ln_s.iter().map(|&x| nonbayes_adjustment(x.exp(), p).map(f64::ln)).collect::<cawf_core::Result<Vec<f64>>>()?;
    let mut t = SeriesTable::from_columns(
        format!("figure 4: log consumption adjustment (beta_b = {}, mu_b = {})", p.beta_b, p.mu_b),
        "ln_s",
        &c.ln_s,
        vec![("bayes".into(), c.ln_s.clone()), ("nonbayes".into(), shrunk)],
    );
    if let Some(x) = p.crossover_log() {
        let side = if p.mu_b < 1.0 { "below" } else { "above" };
        t = t.note(format!(
            "the lines cross at ln S = ln(mu_b)/(1 - beta_b) = {x:.6}; the shrinkage line lies above the identity only for ln S {side} that point"
        ));
    }
    Ok(t)
}

fn scale_name(n: f64) -> String {
    if n.is_infinite() {
        "n_inf".into()
    } else {
        format!("n_{n}")
    }
}

fn cawf_surface(cfg: &ScenarioConfig) -> CliResult<SeriesTable> {
    let c = &cfg.cawf;
    let curves = c.scales.iter().map(|&n| (scale_name(n), c.d_rows.iter().map(|&d| cawf(d, n, &c.params)).collect())).collect();
    Ok(SeriesTable::from_columns(
        format!("figure 5: CAWF against data value (s_delta = {}, omega = {})", c.params.s_delta, c.params.omega),
        "d",
        &c.d_rows,
        curves,
    ))
}

fn cawf_mc(cfg: &ScenarioConfig) -> CliResult<SeriesTable> {
    let c = &cfg.cawf;
    let curves = cawf_montecarlo(&c.params, RngSpec::with_stream(cfg.seed, 6), c.paths)?;
    let reference = curves.average[0];
    let half = curves.half_point(reference).map(|n| format!("{n:.6}")).unwrap_or_else(|| "not reached".into());
    let high = curves.draws.iter().filter(|&&d| d >= c.params.d_bar).count();
    Ok(SeriesTable::from_columns(
        format!("figure 6: Monte Carlo CAWF over data scale ({} paths)", c.paths),
        "n",
        &curves.n,
        vec![("high".into(), curves.high), ("low".into(), curves.low), ("average".into(), curves.average)],
    )
    .note(format!("{high} of {} terminal draws at or above d_bar", c.paths))
    .note(format!("average falls to half its first value at n = {half}")))
}

fn law_params(w: &WealthCfg, agent: AgentType, level: usize, theta: f64, sigma: f64) -> EconomyParams {
    let base = EconomyParams { lambda: w.lambda_levels[level], theta, sigma, f_sigma: 1.0, agent_type: AgentType::One, ..w.params };
    match agent {
        AgentType::One => base,
        AgentType::Two => base.type_two(w.f_levels[level]),
    }
}

fn wealth(figure: u32, cfg: &ScenarioConfig) -> CliResult<SeriesTable> {
    let w = &cfg.wealth;
    let agent = if matches!(figure, 7 | 8 | 11 | 12) { AgentType::One } else { AgentType::Two };
    if w.type_explicit && w.params.agent_type != agent {
        return Err(CliError::config(
            "wealth.agent_type",
            format!("figure {figure} plots type-{} agents", if agent == AgentType::One { "one" } else { "two" }),
        ));
    }
    let (lo, hi) = ((w.params.theta, w.params.sigma), (w.theta_high, w.sigma_high));
    let settings: Vec<(&str, f64, f64)> = match figure {
        7 | 9 => vec![("", lo.0, lo.1)],
        8 | 10 => vec![("", hi.0, hi.1)],
        11 | 13 => vec![("theta_a_", w.theta_ab[0], lo.1), ("theta_b_", w.theta_ab[1], lo.1)],
        _ => vec![("sigma_a_", lo.0, w.sigma_ab[0]), ("sigma_b_", lo.0, w.sigma_ab[1])],
    };
    let mut curves = Vec::new();
    let mut notes = Vec::new();
    for (prefix, theta, sigma) in &settings {
        for (level, tag) in LEVELS.iter().enumerate() {
            let p = law_params(w, agent, level, *theta, *sigma);
            let d = wealth_density(&p)?;
            let name = format!("{prefix}lambda_{tag}");
            let s = d.stats();
            let wealth_mean = s.wealth_mean.map(|m| format!("{m:.12e}")).unwrap_or_else(|| "none (right rate <= 1)".into());
            notes.push(format!(
                "{name}: lambda {}, f_sigma {}, theta {theta}, sigma {sigma}; mean {:.12e}, variance {:.12e}, right rate {:.12e}, left rate {:.12e}, mean wealth {wealth_mean}",
                p.lambda, p.f_sigma, s.mean, s.variance, s.tail_right, s.tail_left
            ));
            curves.push((name, d.sample_on(&w.x)));
        }
    }
    let kind = if agent == AgentType::One { "type-one" } else { "type-two" };
    let mut t = SeriesTable::from_columns(format!("figure {figure}: stationary log-wealth density, {kind} agents"), "x", &w.x, curves);
    t.notes = notes;
    Ok(t)
}
