//! Run configuration: defaults, optional key-value config file, then
//! command-line flags, in increasing priority.
//!
//! Config file format: one `key = value` per line, `#` starts a comment.
//! Keys match the long flag names with underscores (family, p, a, expr, n,
//! m_min, m_max, m_count, m_spacing, beta, tol_ode, tol_quad, tol_eigen,
//! out, threads, seed).

use anyhow::{anyhow, bail, Context, Result};
use semistable::Nonlinearity;
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, PartialEq)]
pub enum FamilySpec {
    Exp,
    Pow { p: f64 },
    LinLog,
    LinLogPow { a: f64 },
    Expr(String),
}

impl FamilySpec {
    pub fn build(&self) -> Result<Nonlinearity> {
        Ok(match self {
            FamilySpec::Exp => Nonlinearity::exponential(),
            FamilySpec::Pow { p } => Nonlinearity::power_shifted(*p)?,
            FamilySpec::LinLog => Nonlinearity::lin_log()?,
            FamilySpec::LinLogPow { a } => Nonlinearity::lin_log_pow(*a)?,
            FamilySpec::Expr(src) => Nonlinearity::parse(src)?,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Linear,
    Geometric,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub family: FamilySpec,
    pub n: u32,
    pub m_min: f64,
    pub m_max: f64,
    pub m_count: usize,
    pub m_spacing: Spacing,
    pub betas: Vec<f64>,
    pub tol_ode: f64,
    pub tol_quad: f64,
    pub tol_eigen: f64,
    pub out_dir: Option<PathBuf>,
    pub threads: usize,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            family: FamilySpec::Exp,
            n: 2,
            m_min: 0.1,
            m_max: 10.0,
            m_count: 100,
            m_spacing: Spacing::Linear,
            betas: vec![0.0],
            tol_ode: 1e-10,
            tol_quad: 1e-10,
            tol_eigen: 1e-9,
            out_dir: None,
            threads: 1,
            seed: 0x5EED_0001,
        }
    }
}

impl RunConfig {
    pub fn m_grid(&self) -> Result<Vec<f64>> {
        if !(self.m_max > self.m_min && self.m_min > 0.0) {
            bail!("need m_max > m_min > 0, got [{}, {}]", self.m_min, self.m_max);
        }
        if self.m_count < 2 {
            bail!("m_count must be at least 2");
        }
        let k = self.m_count;
        Ok(match self.m_spacing {
            Spacing::Linear => (0..k)
                .map(|i| self.m_min + (self.m_max - self.m_min) * i as f64 / (k - 1) as f64)
                .collect(),
            Spacing::Geometric => {
                let ratio = (self.m_max / self.m_min).powf(1.0 / (k - 1) as f64);
                (0..k).map(|i| self.m_min * ratio.powi(i as i32)).collect()
            }
        })
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("tol_ode", self.tol_ode),
            ("tol_quad", self.tol_quad),
            ("tol_eigen", self.tol_eigen),
        ] {
            if !(v > 0.0) {
                bail!("{name} must be positive, got {v}");
            }
        }
        for b in &self.betas {
            if !(0.0..1.0).contains(b) {
                bail!("beta must lie in [0,1), got {b}");
            }
        }
        Ok(())
    }
}

pub fn parse_config_file(path: &Path) -> Result<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading config file {}", path.display()))?;
    let mut map = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| anyhow!("{}:{}: expected 'key = value'", path.display(), lineno + 1))?;
        map.insert(key.trim().to_string(), value.trim().to_string());
    }
    Ok(map)
}

/// Applies config-file values over the defaults; flags are applied later
/// and win.
pub fn apply_file(cfg: &mut RunConfig, map: &BTreeMap<String, String>) -> Result<()> {
    let parse_f = |k: &str, v: &str| -> Result<f64> {
        v.parse::<f64>().map_err(|_| anyhow!("config key {k}: bad number '{v}'"))
    };
    let mut family: Option<String> = None;
    let mut p: Option<f64> = None;
    let mut a: Option<f64> = None;
    let mut expr: Option<String> = None;
    for (k, v) in map {
        match k.as_str() {
            "family" => family = Some(v.clone()),
            "p" => p = Some(parse_f(k, v)?),
            "a" => a = Some(parse_f(k, v)?),
            "expr" => expr = Some(v.clone()),
            "n" => cfg.n = v.parse().map_err(|_| anyhow!("config key n: bad integer '{v}'"))?,
            "m_min" => cfg.m_min = parse_f(k, v)?,
            "m_max" => cfg.m_max = parse_f(k, v)?,
            "m_count" => {
                cfg.m_count = v.parse().map_err(|_| anyhow!("config key m_count: bad integer"))?
            }
            "m_spacing" => cfg.m_spacing = parse_spacing(v)?,
            "beta" => cfg.betas = parse_beta_list(v)?,
            "tol_ode" => cfg.tol_ode = parse_f(k, v)?,
            "tol_quad" => cfg.tol_quad = parse_f(k, v)?,
            "tol_eigen" => cfg.tol_eigen = parse_f(k, v)?,
            "out" => cfg.out_dir = Some(PathBuf::from(v)),
            "threads" => {
                cfg.threads = v.parse().map_err(|_| anyhow!("config key threads: bad integer"))?
            }
            "seed" => cfg.seed = v.parse().map_err(|_| anyhow!("config key seed: bad integer"))?,
            other => bail!("unknown config key '{other}'"),
        }
    }
    if let Some(fam) = family {
        cfg.family = family_spec(&fam, p, a, expr.clone())?;
    } else if let Some(src) = expr {
        cfg.family = FamilySpec::Expr(src);
    }
    Ok(())
}

pub fn parse_spacing(v: &str) -> Result<Spacing> {
    match v {
        "linear" => Ok(Spacing::Linear),
        "geometric" => Ok(Spacing::Geometric),
        other => bail!("m_spacing must be 'linear' or 'geometric', got '{other}'"),
    }
}

pub fn parse_beta_list(v: &str) -> Result<Vec<f64>> {
    v.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| anyhow!("bad beta value '{s}'"))
        })
        .collect()
}

pub fn family_spec(
    family: &str,
    p: Option<f64>,
    a: Option<f64>,
    expr: Option<String>,
) -> Result<FamilySpec> {
    Ok(match family {
        "exp" => FamilySpec::Exp,
        "pow" => FamilySpec::Pow { p: p.ok_or_else(|| anyhow!("--family pow needs --p"))? },
        "linlog" => FamilySpec::LinLog,
        "linlogpow" => {
            FamilySpec::LinLogPow { a: a.ok_or_else(|| anyhow!("--family linlogpow needs --a"))? }
        }
        "expr" => FamilySpec::Expr(expr.ok_or_else(|| anyhow!("--family expr needs --expr"))?),
        other => bail!("unknown family '{other}' (exp|pow|linlog|linlogpow|expr)"),
    })
}
