//! TOML run configuration.
//!
//! Five sections (`network`, `channel`, `radio`, `scheme`, `run`); every key
//! is optional and defaults to the reference parameter set. Power fields take
//! either a `_w` or a `_dbm` suffix. `--set key=value` overrides accept a bare
//! key (every key name is unique across sections) or `section.key`.

use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use jtcomp::clustering::toa_budget_from_cp;
use jtcomp::{
    dbm_to_watts, FractalParams, Metric, RadioParams, Region, Scheme, SchemeConfig, SimParams,
};
use serde::{Deserialize, Serialize};
use toml::{Table, Value};

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub network: Network,
    pub channel: Channel,
    pub radio: Radio,
    pub scheme: SchemeSection,
    pub run: Run,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MetricName {
    Torus,
    Plane,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Network {
    #[serde(rename = "lambda_B", alias = "lambda_b")]
    pub lambda_b: f64,
    #[serde(rename = "lambda_U", alias = "lambda_u")]
    pub lambda_u: f64,
    pub side_length_m: f64,
    pub metric: MetricName,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Channel {
    pub epsilon: f64,
    pub rho_min: f64,
    pub rho_max: f64,
    pub zeta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Radio {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tx_power_w: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tx_power_dbm: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub noise_w: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub noise_dbm: Option<f64>,
    pub bandwidth_hz: f64,
    #[serde(rename = "R_min", alias = "r_min")]
    pub r_min: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SchemeSection {
    pub schemes: Vec<String>,
    pub prb_budget: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bpc_threshold_w: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bpc_threshold_dbm: Option<f64>,
    pub bdc_cluster_size: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub toa_distance_budget_m: Option<f64>,
    /// Cyclic prefix in ns; an alternative to `toa_distance_budget_m`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_cp_ns: Option<f64>,
    pub enforce_prb_budget_for_baselines: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Run {
    pub drops: u32,
    pub master_seed: u64,
}

/// `(section, key)` for every accepted key, aliases included.
const KEYS: &[(&str, &str)] = &[
    ("network", "lambda_B"),
    ("network", "lambda_b"),
    ("network", "lambda_U"),
    ("network", "lambda_u"),
    ("network", "side_length_m"),
    ("network", "metric"),
    ("channel", "epsilon"),
    ("channel", "rho_min"),
    ("channel", "rho_max"),
    ("channel", "zeta"),
    ("radio", "tx_power_w"),
    ("radio", "tx_power_dbm"),
    ("radio", "noise_w"),
    ("radio", "noise_dbm"),
    ("radio", "bandwidth_hz"),
    ("radio", "R_min"),
    ("radio", "r_min"),
    ("scheme", "schemes"),
    ("scheme", "prb_budget"),
    ("scheme", "bpc_threshold_w"),
    ("scheme", "bpc_threshold_dbm"),
    ("scheme", "bdc_cluster_size"),
    ("scheme", "toa_distance_budget_m"),
    ("scheme", "t_cp_ns"),
    ("scheme", "enforce_prb_budget_for_baselines"),
    ("run", "drops"),
    ("run", "master_seed"),
];

/// Keys that describe the same quantity; setting one clears the others.
const EXCLUSIVE: &[&[&str]] = &[
    &["tx_power_w", "tx_power_dbm"],
    &["noise_w", "noise_dbm"],
    &["bpc_threshold_w", "bpc_threshold_dbm"],
    &["toa_distance_budget_m", "t_cp_ns"],
    &["lambda_B", "lambda_b"],
    &["lambda_U", "lambda_u"],
    &["R_min", "r_min"],
];

impl Default for Network {
    fn default() -> Self {
        let p = SimParams::default();
        Self {
            lambda_b: p.lambda_b,
            lambda_u: p.lambda_u,
            side_length_m: p.region.side_length(),
            metric: MetricName::Torus,
        }
    }
}

impl Default for Channel {
    fn default() -> Self {
        let f = FractalParams::default();
        Self {
            epsilon: f.epsilon,
            rho_min: f.rho_min,
            rho_max: f.rho_max,
            zeta: f.zeta,
        }
    }
}

impl Default for Radio {
    fn default() -> Self {
        Self {
            tx_power_w: None,
            tx_power_dbm: None,
            noise_w: None,
            noise_dbm: None,
            bandwidth_hz: RadioParams::default().bandwidth_hz,
            r_min: RadioParams::default().r_min,
        }
    }
}

impl Default for SchemeSection {
    fn default() -> Self {
        let c = SchemeConfig::default();
        Self {
            schemes: Scheme::ALL.iter().map(|s| s.to_string()).collect(),
            prb_budget: c.prb_budget,
            bpc_threshold_w: None,
            bpc_threshold_dbm: None,
            bdc_cluster_size: c.bdc_cluster_size,
            toa_distance_budget_m: None,
            t_cp_ns: None,
            enforce_prb_budget_for_baselines: c.enforce_prb_budget_for_baselines,
        }
    }
}

impl Default for Run {
    fn default() -> Self {
        let p = SimParams::default();
        Self {
            drops: p.drops,
            master_seed: p.master_seed,
        }
    }
}

fn pick(key: &str, watts: Option<f64>, dbm: Option<f64>, default: f64) -> Result<f64> {
    match (watts, dbm) {
        (Some(_), Some(_)) => bail!("both `{key}_w` and `{key}_dbm` are set"),
        (Some(w), None) => Ok(w),
        (None, Some(d)) => Ok(dbm_to_watts(d)),
        (None, None) => Ok(default),
    }
}

impl RunConfig {
    /// Reads `path` (or starts from defaults) and applies `overrides`.
    pub fn load(path: Option<&Path>, overrides: &[String]) -> Result<Self> {
        let mut table = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .with_context(|| format!("reading config {}", p.display()))?;
                text.parse::<Table>()
                    .with_context(|| format!("parsing config {}", p.display()))?
            }
            None => Table::new(),
        };
        for o in overrides {
            apply_override(&mut table, o)?;
        }
        let cfg: RunConfig = Value::Table(table)
            .try_into()
            .map_err(|e: toml::de::Error| anyhow!("invalid config: {}", e.message()))?;
        cfg.to_params()?;
        Ok(cfg)
    }

    pub fn to_params(&self) -> Result<SimParams> {
        let n = &self.network;
        let metric = match n.metric {
            MetricName::Torus => Metric::Torus,
            MetricName::Plane => Metric::Plane,
        };
        let ch = &self.channel;
        let r = &self.radio;
        let defaults = RadioParams::default();
        let radio = RadioParams {
            tx_power_w: pick(
                "tx_power",
                r.tx_power_w,
                r.tx_power_dbm,
                defaults.tx_power_w,
            )?,
            noise_w: pick("noise", r.noise_w, r.noise_dbm, defaults.noise_w)?,
            bandwidth_hz: r.bandwidth_hz,
            r_min: r.r_min,
        };
        let s = &self.scheme;
        let toa = match (s.toa_distance_budget_m, s.t_cp_ns) {
            (Some(_), Some(_)) => bail!("both `toa_distance_budget_m` and `t_cp_ns` are set"),
            (Some(d), None) => d,
            (None, Some(t)) => toa_budget_from_cp(t * 1e-9),
            (None, None) => SchemeConfig::default().toa_distance_budget_m,
        };
        let scheme_cfg = SchemeConfig {
            prb_budget: s.prb_budget,
            bpc_threshold_w: pick(
                "bpc_threshold",
                s.bpc_threshold_w,
                s.bpc_threshold_dbm,
                SchemeConfig::default().bpc_threshold_w,
            )?,
            bdc_cluster_size: s.bdc_cluster_size,
            toa_distance_budget_m: toa,
            enforce_prb_budget_for_baselines: s.enforce_prb_budget_for_baselines,
        };
        let mut schemes = Vec::new();
        for name in &s.schemes {
            let scheme: Scheme = name.parse().map_err(|e| anyhow!("scheme.schemes: {e}"))?;
            if !schemes.contains(&scheme) {
                schemes.push(scheme);
            }
        }
        if self.run.master_seed > i64::MAX as u64 {
            bail!("master_seed must not exceed {}", i64::MAX);
        }
        let p = SimParams {
            lambda_b: n.lambda_b,
            lambda_u: n.lambda_u,
            region: Region::new(n.side_length_m, metric)?,
            fractal: FractalParams::new(ch.epsilon, ch.rho_min, ch.rho_max, ch.zeta)?,
            radio,
            scheme_cfg,
            schemes,
            drops: self.run.drops,
            master_seed: self.run.master_seed,
        };
        p.validate()?;
        Ok(p)
    }

    /// The config that reproduces `p` exactly, with every power in watts.
    pub fn canonical(p: &SimParams) -> Self {
        RunConfig {
            network: Network {
                lambda_b: p.lambda_b,
                lambda_u: p.lambda_u,
                side_length_m: p.region.side_length(),
                metric: match p.region.metric() {
                    Metric::Torus => MetricName::Torus,
                    Metric::Plane => MetricName::Plane,
                },
            },
            channel: Channel {
                epsilon: p.fractal.epsilon,
                rho_min: p.fractal.rho_min,
                rho_max: p.fractal.rho_max,
                zeta: p.fractal.zeta,
            },
            radio: Radio {
                tx_power_w: Some(p.radio.tx_power_w),
                tx_power_dbm: None,
                noise_w: Some(p.radio.noise_w),
                noise_dbm: None,
                bandwidth_hz: p.radio.bandwidth_hz,
                r_min: p.radio.r_min,
            },
            scheme: SchemeSection {
                schemes: p.schemes.iter().map(|s| s.to_string()).collect(),
                prb_budget: p.scheme_cfg.prb_budget,
                bpc_threshold_w: Some(p.scheme_cfg.bpc_threshold_w),
                bpc_threshold_dbm: None,
                bdc_cluster_size: p.scheme_cfg.bdc_cluster_size,
                toa_distance_budget_m: Some(p.scheme_cfg.toa_distance_budget_m),
                t_cp_ns: None,
                enforce_prb_budget_for_baselines: p.scheme_cfg.enforce_prb_budget_for_baselines,
            },
            run: Run {
                drops: p.drops,
                master_seed: p.master_seed,
            },
        }
    }

    pub fn to_toml(&self) -> Result<String> {
        Ok(toml::to_string(self)?)
    }
}

fn apply_override(table: &mut Table, raw: &str) -> Result<()> {
    let (key, value) = raw
        .split_once('=')
        .ok_or_else(|| anyhow!("override `{raw}` is not of the form key=value"))?;
    let (key, value) = (key.trim(), value.trim());
    let (section, name) = match key.split_once('.') {
        Some((s, k)) => {
            if !KEYS.contains(&(s, k)) {
                bail!("unknown config key `{key}`");
            }
            (s, k)
        }
        None => *KEYS
            .iter()
            .find(|(_, k)| *k == key)
            .ok_or_else(|| anyhow!("unknown config key `{key}`"))?,
    };
    let parsed = parse_value(name, value);
    let entry = table
        .entry(section)
        .or_insert_with(|| Value::Table(Table::new()));
    let Value::Table(sec) = entry else {
        bail!("config entry `{section}` is not a section");
    };
    if let Some(group) = EXCLUSIVE.iter().find(|g| g.contains(&name)) {
        for other in group.iter() {
            sec.remove(*other);
        }
    }
    sec.insert(name.to_string(), parsed);
    Ok(())
}

fn parse_value(key: &str, raw: &str) -> Value {
    if let Ok(mut t) = format!("v = {raw}").parse::<Table>() {
        if let Some(v) = t.remove("v") {
            return v;
        }
    }
    if key == "schemes" {
        return Value::Array(
            raw.split(',')
                .map(|s| Value::String(s.trim().to_string()))
                .collect(),
        );
    }
    Value::String(raw.to_string())
}
