//! Scenario files: `[section]` headers, `key = value` lines, `#` comments.
//!
//! The `[datavalue]` section additionally takes bare records, one per line:
//! sources as `uniform,width`, `gaussian,variance` or
//! `grid,x_min,h,p0,p1,...`, and interactions as `i,j,synergy,antagonism`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use cawf_core::cognition::CognitionParams;
use cawf_core::consumption::{geometric_grid, CawfParams, ShrinkageParams};
use cawf_core::data_value::{DirectionVector, InfoEnsemble, Interaction, SourceDist};
use cawf_core::stochastic::OuProcessSpec;
use cawf_core::tax::TaxEconomy;
use cawf_core::wealth::{AgentType, EconomyParams};

use crate::error::{CliError, CliResult};

pub struct KeySpec {
    pub key: &'static str,
    /// Empty means no default.
    pub default: &'static str,
    pub about: &'static str,
}

const fn k(key: &'static str, default: &'static str, about: &'static str) -> KeySpec {
    KeySpec { key, default, about }
}

pub const SECTIONS: &[(&str, &[KeySpec])] = &[
    ("run", &[k("seed", "42", "master seed for every random stream")]),
    (
        "retention",
        &[
            k("r0", "0.99,0.5,0.1", "initial retention levels (high, medium, low)"),
            k("dilution", "3,5,4", "dilution efficiency per curve family"),
            k("recovery", "2,6,4", "recovery efficiency per curve family"),
            k("t_max", "10", "time horizon of the retention curves"),
            k("t_points", "201", "time samples"),
        ],
    ),
    (
        "cognition",
        &[
            k("r_max", "1", "maximum resource"),
            k("mu_c", "2", "recovery strength"),
            k("eta_c", "1", "dilution strength, recovery-dominated regime"),
            k("eta_c_alt", "2.1", "dilution strength, dilution-dominated regime"),
            k("sigma_c", "0.4", "allocation numerator"),
            k("gamma_c", "0.4", "allocation exponent"),
            k("psi_c", "0.4", "volatility scale"),
            k("beta_c", "0.8", "reset rate"),
            k("theta_c", "2", "recovery multiplier"),
            k("n", "10,15,20,25", "data scales, recovery-dominated regime"),
            k("n_alt", "10,25", "data scales, dilution-dominated regime"),
            k("x_min", "-12", "log-resource grid start"),
            k("x_max", "12", "log-resource grid end"),
            k("x_points", "2401", "log-resource grid size"),
        ],
    ),
    (
        "datavalue",
        &[
            k("strength", "0.5", "interaction strength J"),
            k("reference_variance", "4", "variance of the reference normal fixing the entropy cap"),
            k("direction", "0.6,0,0.8", "unit direction (a, b, c)"),
            k("magnitude", "1", "direction-matrix scale"),
        ],
    ),
    (
        "shrinkage",
        &[
            k("beta_b", "0.8", "shrinkage slope"),
            k("mu_b", "0.9", "multiplicative prior factor"),
            k("sigma_s", "1", "dispersion of the log state for the regression check"),
            k("draws", "100000", "draws for the regression check"),
            k("ln_s_min", "-2", "log-state axis start"),
            k("ln_s_max", "2", "log-state axis end"),
            k("points", "401", "log-state samples"),
        ],
    ),
    (
        "cawf",
        &[
            k("s_delta", "1.15", "sensitivity to data"),
            k("omega", "100", "dilution weight"),
            k("d_bar", "0.5", "mean data value"),
            k("reversion", "0.1", "mean reversion of the data value"),
            k("volatility", "0.8", "volatility of the data value"),
            k("d_min", "0", "lower reflecting bound"),
            k("d_max", "1", "upper reflecting bound"),
            k("dt", "", "Euler step (default 1e-3/reversion)"),
            k("horizon", "", "simulated time (default 50/reversion)"),
            k("paths", "1000", "Monte Carlo sample size"),
            k("n_min", "1", "smallest data scale"),
            k("n_max", "500", "largest data scale"),
            k("n_points", "50", "geometric grid size"),
            k("d_points", "101", "data-value rows of the CAWF surface"),
            k("scales", "0,25,100,400,inf", "data scales of the CAWF surface"),
        ],
    ),
    (
        "tax",
        &[
            k("tau", "0.3", "tax rate"),
            k("tau_high", "0.4", "high tax rate of the comparison"),
            k("tau_low", "0.2", "low tax rate of the comparison"),
            k("g", "1", "government output contribution"),
            k("m", "0.5", "investor mass"),
            k("mu_bar", "0", "ability mean"),
            k("sigma_mu", "1", "ability dispersion"),
            k("k_cut", "0", "ability cutoff"),
            k("sigma_agg", "0.2", "aggregate shock volatility"),
            k("sigma_idio", "0.3", "idiosyncratic shock volatility"),
            k("theta_c", "0.5", "retained share"),
            k("gamma_b", "2", "risk aversion"),
            k("ability", "0", "ability of the evaluated investor"),
        ],
    ),
    (
        "wealth",
        &[
            k("rho", "0.05", "discount rate"),
            k("gamma", "2", "relative risk aversion"),
            k("alpha", "0.3", "capital share"),
            k("delta", "0.6", "depreciation"),
            k("beta", "0.3", "wealth reset rate"),
            k("w", "1", "wage"),
            k("r", "0.01", "interest rate"),
            k("theta", "0.05", "risky mean return (low level)"),
            k("sigma", "0.05", "risky volatility (low level)"),
            k("lambda", "5", "collateral multiple"),
            k("z", "5", "productivity"),
            k("agent_type", "one", "one or two"),
            k("f_sigma", "", "utility weight; required for type two"),
            k("lambda_levels", "5,25,50", "collateral multiples L, M, H"),
            k("f_levels", "0.2,0.5,0.8", "utility weights paired with the multiples"),
            k("theta_high", "0.5", "risky mean return (high level)"),
            k("sigma_high", "0.5", "risky volatility (high level)"),
            k("theta_a", "0.1", "first intermediate mean return"),
            k("theta_b", "0.3", "second intermediate mean return"),
            k("sigma_a", "0.1", "first intermediate volatility"),
            k("sigma_b", "0.3", "second intermediate volatility"),
            k("x_min", "-10", "log-wealth grid start"),
            k("x_max", "10", "log-wealth grid end"),
            k("x_points", "2001", "log-wealth grid size"),
            k("fd_points", "4001", "finite-difference oracle grid size"),
            k("mc_samples", "1000000", "Monte Carlo oracle sample size"),
        ],
    ),
    (
        "equilibrium",
        &[
            k("alpha", "0.5", "capital share; the closed form needs 0.5"),
            k("lambda", "", "collateral multiple (default: wealth.lambda)"),
            k("theta", "", "risky mean return (default: wealth.theta)"),
            k("sigma", "", "risky volatility (default: wealth.sigma)"),
        ],
    ),
];

const DEFAULT_RECORDS: &[&str] = &["gaussian,1", "gaussian,0.25", "uniform,3", "0,1,0.6,0.1", "1,2,0.2,0.4"];

#[derive(Debug, Clone)]
struct Value {
    text: String,
    line: Option<usize>,
}

/// Parsed but untyped document.
#[derive(Debug, Clone, Default)]
pub struct RawConfig {
    values: BTreeMap<(String, String), Value>,
    records: Vec<(usize, String)>,
}

fn key_spec(section: &str, key: &str) -> Option<&'static KeySpec> {
    SECTIONS.iter().find(|(s, _)| *s == section).and_then(|(_, keys)| keys.iter().find(|k| k.key == key))
}

impl RawConfig {
    pub fn parse(text: &str) -> CliResult<Self> {
        let mut raw = RawConfig::default();
        let mut section: Option<String> = None;
        for (i, line) in text.lines().enumerate() {
            let line_no = i + 1;
            let err = |msg: String| CliError::Parse { line: line_no, msg };
            let body = line.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            if let Some(rest) = body.strip_prefix('[') {
                let name = rest.strip_suffix(']').ok_or_else(|| err(format!("unterminated section header `{body}`")))?.trim();
                if !SECTIONS.iter().any(|(s, _)| *s == name) {
                    return Err(err(format!("unknown section `[{name}]`")));
                }
                section = Some(name.to_string());
                continue;
            }
            let Some(sec) = section.as_deref() else {
                return Err(err("entry before any section header".into()));
            };
            match body.split_once('=') {
                Some((key, value)) => {
                    let key = key.trim();
                    if key_spec(sec, key).is_none() {
                        return Err(err(format!("unknown key `{key}` in [{sec}]")));
                    }
                    let value = value.trim();
                    if value.is_empty() {
                        return Err(err(format!("empty value for `{key}`")));
                    }
                    let slot = (sec.to_string(), key.to_string());
                    if raw.values.contains_key(&slot) {
                        return Err(err(format!("`{key}` set twice in [{sec}]")));
                    }
                    raw.values.insert(slot, Value { text: value.to_string(), line: Some(line_no) });
                }
                None if sec == "datavalue" => raw.records.push((line_no, body.to_string())),
                None => return Err(err(format!("expected `key = value`, found `{body}`"))),
            }
        }
        Ok(raw)
    }

    fn get(&self, section: &str, key: &str) -> Option<(&str, Option<usize>)> {
        if let Some(v) = self.values.get(&(section.to_string(), key.to_string())) {
            return Some((&v.text, v.line));
        }
        let spec = key_spec(section, key).expect("key is declared");
        (!spec.default.is_empty()).then_some((spec.default, None))
    }

    fn is_set(&self, section: &str, key: &str) -> bool {
        self.values.contains_key(&(section.to_string(), key.to_string()))
    }

    fn err(section: &str, key: &str, line: Option<usize>, msg: impl std::fmt::Display) -> CliError {
        let at = line.map(|l| format!(" (line {l})")).unwrap_or_default();
        CliError::config(format!("{section}.{key}{at}"), msg.to_string())
    }

    fn parse_f64(section: &str, key: &str, text: &str, line: Option<usize>) -> CliResult<f64> {
        let v: f64 = text.trim().parse().map_err(|_| Self::err(section, key, line, format!("`{text}` is not a number")))?;
        if v.is_nan() {
            return Err(Self::err(section, key, line, "NaN is not allowed"));
        }
        Ok(v)
    }

    fn opt_f64(&self, section: &str, key: &str) -> CliResult<Option<f64>> {
        self.get(section, key).map(|(t, line)| Self::parse_f64(section, key, t, line)).transpose()
    }

    fn f64(&self, section: &str, key: &str) -> CliResult<f64> {
        self.opt_f64(section, key)?.ok_or_else(|| Self::err(section, key, None, "is required"))
    }

    fn finite(&self, section: &str, key: &str) -> CliResult<f64> {
        let v = self.f64(section, key)?;
        if !v.is_finite() {
            let line = self.get(section, key).and_then(|(_, l)| l);
            return Err(Self::err(section, key, line, "must be finite"));
        }
        Ok(v)
    }

    fn list(&self, section: &str, key: &str) -> CliResult<Vec<f64>> {
        let (text, line) = self.get(section, key).expect("list keys have defaults");
        text.split(',').map(|t| Self::parse_f64(section, key, t, line)).collect()
    }

    fn finite_list(&self, section: &str, key: &str, len: Option<usize>) -> CliResult<Vec<f64>> {
        let v = self.list(section, key)?;
        let line = self.get(section, key).and_then(|(_, l)| l);
        if v.iter().any(|x| !x.is_finite()) {
            return Err(Self::err(section, key, line, "entries must be finite"));
        }
        match len {
            Some(n) if v.len() != n => Err(Self::err(section, key, line, format!("needs exactly {n} entries"))),
            _ if v.is_empty() => Err(Self::err(section, key, line, "must not be empty")),
            _ => Ok(v),
        }
    }

    fn count(&self, section: &str, key: &str, min: u64) -> CliResult<u64> {
        let (text, line) = self.get(section, key).expect("count keys have defaults");
        let v: u64 = text.parse().map_err(|_| Self::err(section, key, line, format!("`{text}` is not a nonnegative integer")))?;
        if v < min {
            return Err(Self::err(section, key, line, format!("must be at least {min}")));
        }
        Ok(v)
    }

    fn line_of(&self, section: &str, key: &str) -> Option<usize> {
        self.get(section, key).and_then(|(_, l)| l)
    }

    /// Attaches the section name and line to a core validation failure.
    fn wrap(&self, section: &str, e: cawf_core::Error) -> CliError {
        match e {
            cawf_core::Error::InvalidParameter { name, reason } => {
                let line = key_spec(section, name).and_then(|_| self.line_of(section, name));
                Self::err(section, name, line, reason)
            }
            other => CliError::from(other),
        }
    }
}

#[derive(Debug, Clone)]
pub struct RetentionCfg {
    pub r0: Vec<f64>,
    pub dilution: Vec<f64>,
    pub recovery: Vec<f64>,
    pub t_max: f64,
    pub t_points: usize,
}

#[derive(Debug, Clone)]
pub struct CognitionCfg {
    /// Recovery-dominated regime at the first scale.
    pub base: CognitionParams,
    pub eta_alt: f64,
    pub n: Vec<f64>,
    pub n_alt: Vec<f64>,
    pub x: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct DataValueCfg {
    pub ensemble: InfoEnsemble,
    pub direction: DirectionVector,
    pub magnitude: f64,
}

#[derive(Debug, Clone)]
pub struct ShrinkageCfg {
    pub params: ShrinkageParams,
    pub sigma_s: f64,
    pub draws: usize,
    pub ln_s: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct CawfCfg {
    pub params: CawfParams,
    pub paths: usize,
    pub d_rows: Vec<f64>,
    pub scales: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct TaxCfg {
    pub economy: TaxEconomy,
    pub tau_high: f64,
    pub tau_low: f64,
}

#[derive(Debug, Clone)]
pub struct WealthCfg {
    pub params: EconomyParams,
    /// Whether `agent_type` was set in the file rather than defaulted.
    pub type_explicit: bool,
    pub lambda_levels: [f64; 3],
    pub f_levels: [f64; 3],
    pub theta_high: f64,
    pub sigma_high: f64,
    pub theta_ab: [f64; 2],
    pub sigma_ab: [f64; 2],
    pub x: Vec<f64>,
    pub fd_points: usize,
    pub mc_samples: usize,
}

#[derive(Debug, Clone)]
pub struct ScenarioConfig {
    pub raw: RawConfig,
    pub seed: u64,
    pub retention: RetentionCfg,
    pub cognition: CognitionCfg,
    pub datavalue: DataValueCfg,
    pub shrinkage: ShrinkageCfg,
    pub cawf: CawfCfg,
    pub tax: TaxCfg,
    pub wealth: WealthCfg,
    /// Wealth parameters with the equilibrium overrides applied.
    pub equilibrium: EconomyParams,
}

pub(crate) fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let span = hi - lo;
    (0..n).map(|i| lo + span * i as f64 / (n - 1) as f64).collect()
}

fn three(v: Vec<f64>) -> [f64; 3] {
    [v[0], v[1], v[2]]
}

impl ScenarioConfig {
    pub fn parse(text: &str) -> CliResult<Self> {
        Self::from_raw(RawConfig::parse(text)?)
    }

    pub fn defaults() -> Self {
        Self::from_raw(RawConfig::default()).expect("defaults are valid")
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self.raw.values.insert(("run".into(), "seed".into()), Value { text: seed.to_string(), line: None });
        self
    }

    fn from_raw(raw: RawConfig) -> CliResult<Self> {
        let seed = raw.count("run", "seed", 0)?;
        let retention = Self::retention(&raw)?;
        let cognition = Self::cognition(&raw)?;
        let datavalue = Self::datavalue(&raw)?;
        let shrinkage = Self::shrinkage(&raw)?;
        let cawf = Self::cawf(&raw)?;
        let tax = Self::tax(&raw)?;
        let wealth = Self::wealth(&raw)?;
        let equilibrium = Self::equilibrium(&raw, &wealth.params)?;
        Ok(ScenarioConfig { raw, seed, retention, cognition, datavalue, shrinkage, cawf, tax, wealth, equilibrium })
    }

    fn retention(raw: &RawConfig) -> CliResult<RetentionCfg> {
        let s = "retention";
        let r0 = raw.finite_list(s, "r0", None)?;
        let dilution = raw.finite_list(s, "dilution", None)?;
        let recovery = raw.finite_list(s, "recovery", Some(dilution.len()))?;
        let t_max = raw.finite(s, "t_max")?;
        if t_max <= 0.0 {
            return Err(RawConfig::err(s, "t_max", raw.line_of(s, "t_max"), "must be positive"));
        }
        for &r in &r0 {
            for (&d, &v) in dilution.iter().zip(&recovery) {
                cawf_core::cognition::RetentionParams::new(r, d, v).map_err(|e| raw.wrap(s, e))?;
            }
        }
        let t_points = raw.count(s, "t_points", 2)? as usize;
        Ok(RetentionCfg { r0, dilution, recovery, t_max, t_points })
    }

    fn cognition(raw: &RawConfig) -> CliResult<CognitionCfg> {
        let s = "cognition";
        let n = raw.finite_list(s, "n", None)?;
        let n_alt = raw.finite_list(s, "n_alt", None)?;
        let base = CognitionParams {
            r_max: raw.finite(s, "r_max")?,
            mu_c: raw.finite(s, "mu_c")?,
            eta_c: raw.finite(s, "eta_c")?,
            sigma_c: raw.finite(s, "sigma_c")?,
            gamma_c: raw.finite(s, "gamma_c")?,
            psi_c: raw.finite(s, "psi_c")?,
            beta_c: raw.finite(s, "beta_c")?,
            theta_c: raw.finite(s, "theta_c")?,
            n: n[0],
        };
        let eta_alt = raw.finite(s, "eta_c_alt")?;
        for &m in &n {
            base.with_n(m).validate().map_err(|e| raw.wrap(s, e))?;
        }
        let alt = CognitionParams { eta_c: eta_alt, ..base };
        for &m in &n_alt {
            alt.with_n(m).validate().map_err(|e| RawConfig::err(s, "eta_c_alt / n_alt", raw.line_of(s, "n_alt"), e))?;
        }
        let x = Self::grid(raw, s)?;
        Ok(CognitionCfg { base, eta_alt, n, n_alt, x })
    }

    fn grid(raw: &RawConfig, s: &str) -> CliResult<Vec<f64>> {
        let lo = raw.finite(s, "x_min")?;
        let hi = raw.finite(s, "x_max")?;
        if lo >= hi {
            return Err(RawConfig::err(s, "x_max", raw.line_of(s, "x_max"), "must exceed x_min"));
        }
        Ok(linspace(lo, hi, raw.count(s, "x_points", 2)? as usize))
    }

    fn datavalue(raw: &RawConfig) -> CliResult<DataValueCfg> {
        let s = "datavalue";
        let records: Vec<(Option<usize>, &str)> = if raw.records.is_empty() {
            DEFAULT_RECORDS.iter().map(|r| (None, *r)).collect()
        } else {
            raw.records.iter().map(|(l, r)| (Some(*l), r.as_str())).collect()
        };
        let mut sources = Vec::new();
        let mut interactions = Vec::new();
        for (line, rec) in records {
            let fields: Vec<&str> = rec.split(',').map(str::trim).collect();
            let bad = |msg: String| match line {
                Some(l) => CliError::Parse { line: l, msg },
                None => CliError::config("datavalue.records", msg),
            };
            let num = |t: &str| -> CliResult<f64> {
                t.parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| bad(format!("`{t}` is not a finite number in record `{rec}`")))
            };
            let idx =
                |t: &str| -> CliResult<usize> { t.parse::<usize>().map_err(|_| bad(format!("`{t}` is not an index in record `{rec}`"))) };
            match fields[0] {
                "uniform" | "gaussian" if fields.len() != 2 => return Err(bad(format!("`{}` takes exactly one parameter", fields[0]))),
                "uniform" => sources.push(SourceDist::Uniform { width: num(fields[1])? }),
                "gaussian" => sources.push(SourceDist::Gaussian { variance: num(fields[1])? }),
                "grid" if fields.len() < 6 => return Err(bad("`grid` takes x_min, h and at least three density values".into())),
                "grid" => sources.push(SourceDist::Grid {
                    x_min: num(fields[1])?,
                    h: num(fields[2])?,
                    density: fields[3..].iter().map(|t| num(t)).collect::<CliResult<_>>()?,
                }),
                _ if fields.len() == 4 => interactions.push(Interaction {
                    i: idx(fields[0])?,
                    j: idx(fields[1])?,
                    synergy: num(fields[2])?,
                    antagonism: num(fields[3])?,
                }),
                _ => return Err(bad(format!("unrecognized record `{rec}`"))),
            }
        }
        let ensemble = InfoEnsemble {
            sources,
            interactions,
            strength: raw.finite(s, "strength")?,
            reference_variance: raw.finite(s, "reference_variance")?,
        };
        cawf_core::data_value::aggregate_data_value(&ensemble).map_err(|e| match e {
            cawf_core::Error::InvalidParameter { .. } => raw.wrap(s, e),
            other => CliError::config("datavalue.records", other.to_string()),
        })?;
        let d = raw.finite_list(s, "direction", Some(3))?;
        let direction =
            DirectionVector::new(d[0], d[1], d[2]).map_err(|e| RawConfig::err(s, "direction", raw.line_of(s, "direction"), e))?;
        let magnitude = raw.finite(s, "magnitude")?;
        if magnitude <= 0.0 {
            return Err(RawConfig::err(s, "magnitude", raw.line_of(s, "magnitude"), "must be positive"));
        }
        Ok(DataValueCfg { ensemble, direction, magnitude })
    }

    fn shrinkage(raw: &RawConfig) -> CliResult<ShrinkageCfg> {
        let s = "shrinkage";
        let params = ShrinkageParams::new(raw.finite(s, "beta_b")?, raw.finite(s, "mu_b")?).map_err(|e| raw.wrap(s, e))?;
        let sigma_s = raw.finite(s, "sigma_s")?;
        if sigma_s <= 0.0 {
            return Err(RawConfig::err(s, "sigma_s", raw.line_of(s, "sigma_s"), "must be positive"));
        }
        let lo = raw.finite(s, "ln_s_min")?;
        let hi = raw.finite(s, "ln_s_max")?;
        if lo >= hi {
            return Err(RawConfig::err(s, "ln_s_max", raw.line_of(s, "ln_s_max"), "must exceed ln_s_min"));
        }
        Ok(ShrinkageCfg {
            params,
            sigma_s,
            draws: raw.count(s, "draws", 10_000)? as usize,
            ln_s: linspace(lo, hi, raw.count(s, "points", 2)? as usize),
        })
    }

    fn cawf(raw: &RawConfig) -> CliResult<CawfCfg> {
        let s = "cawf";
        let d_bar = raw.finite(s, "d_bar")?;
        let mut ou = OuProcessSpec::new(
            d_bar,
            raw.finite(s, "reversion")?,
            raw.finite(s, "volatility")?,
            raw.finite(s, "d_min")?,
            raw.finite(s, "d_max")?,
        );
        if let Some(dt) = raw.opt_f64(s, "dt")? {
            ou.dt = dt;
        }
        if let Some(h) = raw.opt_f64(s, "horizon")? {
            ou.horizon = h;
        }
        ou.validate().map_err(|e| {
            let key = match &e {
                cawf_core::Error::InvalidParameter { name, .. } => *name,
                _ => "reversion",
            };
            let key = match key {
                "mean" | "start" => "d_bar",
                "lower" => "d_min",
                "upper" => "d_max",
                k => k,
            };
            RawConfig::err(s, key, raw.line_of(s, key), e)
        })?;
        let n_min = raw.finite(s, "n_min")?;
        let n_max = raw.finite(s, "n_max")?;
        if n_min <= 0.0 || n_min >= n_max {
            return Err(RawConfig::err(s, "n_min", raw.line_of(s, "n_min"), "need 0 < n_min < n_max"));
        }
        let params = CawfParams {
            s_delta: raw.finite(s, "s_delta")?,
            omega: raw.finite(s, "omega")?,
            d_bar,
            ou,
            n_grid: geometric_grid(n_min, n_max, raw.count(s, "n_points", 2)? as usize),
        };
        params.validate().map_err(|e| raw.wrap(s, e))?;
        let scales = raw.list(s, "scales")?;
        if scales.iter().any(|&n| n < 0.0) {
            return Err(RawConfig::err(s, "scales", raw.line_of(s, "scales"), "must be nonnegative"));
        }
        Ok(CawfCfg {
            d_rows: linspace(ou.lower, ou.upper, raw.count(s, "d_points", 2)? as usize),
            params,
            paths: raw.count(s, "paths", 100)? as usize,
            scales,
        })
    }

    fn tax(raw: &RawConfig) -> CliResult<TaxCfg> {
        let s = "tax";
        let economy = TaxEconomy {
            tau: raw.finite(s, "tau")?,
            g: raw.finite(s, "g")?,
            m: raw.finite(s, "m")?,
            mu_bar: raw.finite(s, "mu_bar")?,
            sigma_mu: raw.finite(s, "sigma_mu")?,
            k_cut: raw.finite(s, "k_cut")?,
            sigma_agg: raw.finite(s, "sigma_agg")?,
            sigma_idio: raw.finite(s, "sigma_idio")?,
            theta_c: raw.finite(s, "theta_c")?,
            gamma_b: raw.finite(s, "gamma_b")?,
            ability: raw.finite(s, "ability")?,
        };
        economy.validate().map_err(|e| match e {
            cawf_core::Error::InvalidParameter { name, reason } => {
                let key = name.to_ascii_lowercase();
                RawConfig::err(s, &key, raw.line_of(s, &key), reason)
            }
            other => other.into(),
        })?;
        let tau_high = raw.finite(s, "tau_high")?;
        let tau_low = raw.finite(s, "tau_low")?;
        if tau_low <= 0.0 || tau_low >= tau_high || tau_high >= 1.0 {
            return Err(RawConfig::err(s, "tau_high", raw.line_of(s, "tau_high"), "need 0 < tau_low < tau_high < 1"));
        }
        Ok(TaxCfg { economy, tau_high, tau_low })
    }

    fn wealth(raw: &RawConfig) -> CliResult<WealthCfg> {
        let s = "wealth";
        let (type_text, type_line) = raw.get(s, "agent_type").expect("has default");
        let agent_type = match type_text {
            "one" => AgentType::One,
            "two" => AgentType::Two,
            other => return Err(RawConfig::err(s, "agent_type", type_line, format!("`{other}` is not `one` or `two`"))),
        };
        let f_sigma = match (agent_type, raw.opt_f64(s, "f_sigma")?) {
            (AgentType::One, None) => 1.0,
            (AgentType::One, Some(1.0)) => 1.0,
            (AgentType::One, Some(_)) => {
                return Err(RawConfig::err(s, "f_sigma", raw.line_of(s, "f_sigma"), "must be 1 (or unset) for agent_type = one"))
            }
            (AgentType::Two, None) => return Err(RawConfig::err(s, "f_sigma", type_line, "is required when agent_type = two")),
            (AgentType::Two, Some(f)) => f,
        };
        let params = EconomyParams {
            rho: raw.finite(s, "rho")?,
            gamma: raw.finite(s, "gamma")?,
            alpha: raw.finite(s, "alpha")?,
            delta: raw.finite(s, "delta")?,
            beta: raw.finite(s, "beta")?,
            w: raw.finite(s, "w")?,
            r: raw.finite(s, "r")?,
            theta: raw.finite(s, "theta")?,
            sigma: raw.finite(s, "sigma")?,
            lambda: raw.finite(s, "lambda")?,
            f_sigma,
            z: raw.finite(s, "z")?,
            agent_type,
        };
        params.validate().map_err(|e| raw.wrap(s, e))?;
        let lambda_levels = three(raw.finite_list(s, "lambda_levels", Some(3))?);
        let f_levels = three(raw.finite_list(s, "f_levels", Some(3))?);
        for (l, f) in lambda_levels.iter().zip(&f_levels) {
            EconomyParams { lambda: *l, ..params }
                .type_two(*f)
                .validate()
                .map_err(|e| RawConfig::err(s, "lambda_levels / f_levels", raw.line_of(s, "f_levels"), e))?;
        }
        let positive = |key: &str| -> CliResult<f64> {
            let v = raw.finite(s, key)?;
            if v > 0.0 {
                Ok(v)
            } else {
                Err(RawConfig::err(s, key, raw.line_of(s, key), "must be positive"))
            }
        };
        Ok(WealthCfg {
            params,
            type_explicit: raw.is_set(s, "agent_type"),
            lambda_levels,
            f_levels,
            theta_high: raw.finite(s, "theta_high")?,
            sigma_high: positive("sigma_high")?,
            theta_ab: [raw.finite(s, "theta_a")?, raw.finite(s, "theta_b")?],
            sigma_ab: [positive("sigma_a")?, positive("sigma_b")?],
            x: Self::grid(raw, s)?,
            fd_points: raw.count(s, "fd_points", 101)? as usize,
            mc_samples: raw.count(s, "mc_samples", 1000)? as usize,
        })
    }

    fn equilibrium(raw: &RawConfig, wealth: &EconomyParams) -> CliResult<EconomyParams> {
        let s = "equilibrium";
        let alpha = raw.finite(s, "alpha")?;
        if alpha != 0.5 {
            return Err(RawConfig::err(s, "alpha", raw.line_of(s, "alpha"), "the closed-form equilibrium requires alpha = 0.5"));
        }
        let p = EconomyParams {
            alpha,
            lambda: raw.opt_f64(s, "lambda")?.unwrap_or(wealth.lambda),
            theta: raw.opt_f64(s, "theta")?.unwrap_or(wealth.theta),
            sigma: raw.opt_f64(s, "sigma")?.unwrap_or(wealth.sigma),
            ..*wealth
        };
        p.validate().map_err(|e| raw.wrap(s, e))?;
        Ok(p)
    }

    /// The resolved configuration in file syntax. Defaulted entries are
    /// written commented out, so feeding the text back reproduces this config.
    pub fn echo(&self) -> String {
        let mut out = String::new();
        for (section, keys) in SECTIONS {
            let _ = writeln!(out, "[{section}]");
            for spec in keys.iter() {
                let explicit = self.raw.is_set(section, spec.key);
                if let Some((v, _)) = self.raw.get(section, spec.key) {
                    let mark = if explicit { "" } else { "#" };
                    let _ = writeln!(out, "{mark}{} = {v}", spec.key);
                }
            }
            if *section == "datavalue" {
                if self.raw.records.is_empty() {
                    for r in DEFAULT_RECORDS {
                        let _ = writeln!(out, "#{r}");
                    }
                } else {
                    for (_, r) in &self.raw.records {
                        let _ = writeln!(out, "{r}");
                    }
                }
            }
        }
        out
    }

    /// Every key with its value, origin and meaning.
    pub fn explain(&self) -> String {
        let mut out = String::new();
        for (section, keys) in SECTIONS {
            let _ = writeln!(out, "[{section}]");
            for spec in keys.iter() {
                let origin = match self.raw.values.get(&(section.to_string(), spec.key.to_string())) {
                    Some(Value { line: Some(l), .. }) => format!("config line {l}"),
                    Some(_) => "command line".to_string(),
                    None => "default".to_string(),
                };
                let value = self.raw.get(section, spec.key).map(|(v, _)| v).unwrap_or("(unset)");
                let _ = writeln!(out, "{} = {value}    # {}; {origin}", spec.key, spec.about);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_is_defaults() {
        let c = ScenarioConfig::parse("").unwrap();
        assert_eq!(c.wealth.params, EconomyParams::table2());
        assert!(!c.wealth.type_explicit);
        assert_eq!(c.seed, 42);
        assert_eq!(c.datavalue.ensemble.sources.len(), 3);
        assert_eq!(c.cawf.params.n_grid.len(), 50);
    }

    #[test]
    fn rejects_negative_gamma_by_name() {
        let e = ScenarioConfig::parse("[wealth]\ngamma = -1\n").unwrap_err();
        let msg = e.to_string();
        assert!(msg.contains("wealth.gamma") && msg.contains("line 2"), "{msg}");
        assert_eq!(e.exit_code(), 1);
    }

    #[test]
    fn type_two_needs_weight() {
        let e = ScenarioConfig::parse("[wealth]\nagent_type = two\n").unwrap_err();
        assert!(e.to_string().contains("f_sigma"));
        let ok = ScenarioConfig::parse("[wealth]\nagent_type = two\nf_sigma = 0.5\n").unwrap();
        assert_eq!(ok.wealth.params.f_sigma, 0.5);
        assert!(ok.wealth.type_explicit);
        assert!(ScenarioConfig::parse("[wealth]\nf_sigma = 0.5\n").is_err());
    }

    #[test]
    fn line_numbers_and_unknowns() {
        let e = RawConfig::parse("# c\n[wealth]\n\nbogus = 1\n").unwrap_err();
        assert!(matches!(e, CliError::Parse { line: 4, .. }), "{e}");
        assert!(matches!(RawConfig::parse("[nowhere]").unwrap_err(), CliError::Parse { line: 1, .. }));
        assert!(matches!(RawConfig::parse("x = 1").unwrap_err(), CliError::Parse { line: 1, .. }));
        assert!(matches!(RawConfig::parse("[tax]\ntau = 0.1\ntau = 0.2").unwrap_err(), CliError::Parse { line: 3, .. }));
        assert!(matches!(RawConfig::parse("[tax]\n0,1,2,3").unwrap_err(), CliError::Parse { line: 2, .. }));
    }

    #[test]
    fn equilibrium_alpha_is_fixed() {
        let e = ScenarioConfig::parse("[equilibrium]\nalpha = 0.3\n").unwrap_err();
        assert!(e.to_string().contains("alpha"));
        let c = ScenarioConfig::defaults();
        assert_eq!(c.equilibrium.alpha, 0.5);
        assert_eq!(c.equilibrium.lambda, c.wealth.params.lambda);
    }

    #[test]
    fn ensemble_records() {
        let text = "[datavalue]\nstrength = 1\ngaussian, 1\nuniform,2\ngrid,-1,1,0,1,0\n0,2,0.5,0\n";
        let c = ScenarioConfig::parse(text).unwrap();
        assert_eq!(c.datavalue.ensemble.sources.len(), 3);
        assert_eq!(c.datavalue.ensemble.interactions[0].j, 2);
        let bad = ScenarioConfig::parse("[datavalue]\ngaussian,1\n0,3,1,0\n").unwrap_err();
        assert!(bad.to_string().contains("interaction"), "{bad}");
        let bad = ScenarioConfig::parse("[datavalue]\ngaussian,1\nlaplace,2\n").unwrap_err();
        assert!(matches!(bad, CliError::Parse { line: 3, .. }));
        let bad = ScenarioConfig::parse("[datavalue]\ngrid,0,1,1,1,1\n").unwrap_err();
        assert!(bad.to_string().contains("integrates") && bad.exit_code() == 1, "{bad}");
    }

    #[test]
    fn echo_round_trips() {
        let c = ScenarioConfig::parse("[wealth]\nagent_type = two\nf_sigma = 0.5\n[cawf]\npaths = 200\n").unwrap().with_seed(7);
        let again = ScenarioConfig::parse(&c.echo()).unwrap();
        assert_eq!(again.echo(), c.echo());
        assert_eq!(again.seed, 7);
        assert_eq!(again.wealth.params, c.wealth.params);
        assert_eq!(again.cawf.paths, 200);
        assert!(!ScenarioConfig::parse(&ScenarioConfig::defaults().echo()).unwrap().wealth.type_explicit);
    }
}
