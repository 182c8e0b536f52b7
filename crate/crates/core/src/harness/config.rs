use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::Precision;

pub const MAX_DEG_CAP: usize = 30;
/// Random input zeros are drawn i.i.d. uniform on this interval.
pub const RANDOM_ROOT_RANGE: (f64, f64) = (-0.99, 0.99);
pub const DEFAULT_TIMESTAMP: &str = "1970-01-01T00:00:00Z";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Campaign {
    Theorem12,
    Conjecture32,
    Question31,
    SsrExplore,
    BiorthoEquiv,
    Selftest,
}

impl Campaign {
    pub fn command(self) -> &'static str {
        match self {
            Campaign::Theorem12 => "theorem12",
            Campaign::Conjecture32 => "conj32",
            Campaign::Question31 => "q31",
            Campaign::SsrExplore => "ssr",
            Campaign::BiorthoEquiv => "biortho-equiv",
            Campaign::Selftest => "selftest",
        }
    }
}

impl fmt::Display for Campaign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.command())
    }
}

impl FromStr for Campaign {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [
            Campaign::Theorem12,
            Campaign::Conjecture32,
            Campaign::Question31,
            Campaign::SsrExplore,
            Campaign::BiorthoEquiv,
            Campaign::Selftest,
        ]
        .into_iter()
        .find(|c| c.command() == s)
        .ok_or_else(|| Error::Config(format!("unknown campaign '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            _ => Err(Error::Config(format!("unknown format '{s}'"))),
        }
    }
}

fn ser_precision<S: Serializer>(p: &Precision, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(p)
}

fn de_precision<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Precision, D::Error> {
    let s = String::deserialize(d)?;
    s.parse().map_err(serde::de::Error::custom)
}

/// Fully resolved campaign settings. Echoed verbatim into every report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignConfig {
    pub campaign: Campaign,
    pub alphas: Vec<f64>,
    pub betas: Vec<f64>,
    /// Degree cap: random input degree for `theorem12` and `biortho-equiv`,
    /// `n + m` cap of the boundary family for `conj32` and `q31`.
    pub deg_cap: usize,
    /// Largest degree of the random inputs in `conj32` and `q31`.
    pub random_degree_max: usize,
    /// Random inputs per parameter point, or tuples per order for `ssr`.
    pub trials: usize,
    pub m_max: usize,
    pub seed: u64,
    #[serde(serialize_with = "ser_precision", deserialize_with = "de_precision")]
    pub precision: Precision,
    /// Root classification tolerance.
    pub tol: f64,
    pub random_root_range: (f64, f64),
    pub timestamp: String,
    /// Record per-case wall time. Off by default so reports are reproducible
    /// byte for byte.
    pub timing: bool,
    #[serde(skip)]
    pub out: Option<PathBuf>,
    #[serde(skip, default = "default_format")]
    pub format: Format,
}

fn default_format() -> Format {
    Format::Json
}

fn int_grid(lo: i32, hi: i32) -> Vec<f64> {
    (lo..=hi).map(f64::from).collect()
}

impl CampaignConfig {
    /// Defaults reproducing each campaign's reference run.
    pub fn for_campaign(campaign: Campaign) -> Self {
        let mut c = CampaignConfig {
            campaign,
            alphas: vec![0.0],
            betas: vec![0.0],
            deg_cap: 12,
            random_degree_max: 9,
            trials: 1000,
            m_max: 5,
            seed: 1,
            precision: Precision::Double,
            tol: 1e-8,
            random_root_range: RANDOM_ROOT_RANGE,
            timestamp: DEFAULT_TIMESTAMP.into(),
            timing: false,
            out: None,
            format: Format::Json,
        };
        match campaign {
            Campaign::Theorem12 => {
                c.alphas = vec![-0.5, 0.0, 0.5, 1.0, 2.5];
                c.betas = Vec::new();
            }
            Campaign::Conjecture32 => {
                c.alphas = int_grid(0, 4);
                c.betas = int_grid(0, 4);
                c.deg_cap = 14;
                c.trials = 200;
                c.precision = Precision::Extended { bits: 256 };
                c.tol = 1e-7;
            }
            Campaign::Question31 => {
                c.alphas = vec![-0.5, 0.0, 1.0, 2.0];
                c.betas = vec![-0.5, 0.0, 1.0, 2.0];
                c.deg_cap = 14;
                c.trials = 50;
                c.precision = Precision::Extended { bits: 256 };
                c.tol = 1e-7;
            }
            Campaign::SsrExplore => {
                c.alphas = vec![0.0, 1.0];
                c.betas = vec![-1.5, -0.5, 0.5, 1.5, 3.0];
                c.trials = 500;
            }
            Campaign::BiorthoEquiv => {
                c.alphas = vec![0.0, 1.0];
                c.betas = Vec::new();
                c.deg_cap = 6;
                c.trials = 100;
            }
            Campaign::Selftest => {
                c.alphas = Vec::new();
                c.betas = Vec::new();
                c.trials = 1;
            }
        }
        c
    }

    pub fn validate(&self) -> Result<()> {
        if self.deg_cap > MAX_DEG_CAP || self.random_degree_max > MAX_DEG_CAP {
            return Err(Error::Config(format!("degree caps must not exceed {MAX_DEG_CAP}")));
        }
        if self.trials == 0 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        if !(self.tol > 0.0) {
            return Err(Error::Config("tol must be positive".into()));
        }
        self.precision.validate()?;
        if self.alphas.iter().chain(&self.betas).any(|v| !v.is_finite()) {
            return Err(Error::Config("grid values must be finite".into()));
        }
        let above = |v: &[f64]| v.iter().all(|&x| x > -1.0);
        match self.campaign {
            Campaign::Theorem12 | Campaign::BiorthoEquiv if !above(&self.alphas) => {
                Err(Error::Config("alpha must exceed -1".into()))
            }
            Campaign::Conjecture32 | Campaign::Question31 if !above(&self.alphas) || !above(&self.betas) => {
                Err(Error::Config("alpha and beta must exceed -1".into()))
            }
            Campaign::BiorthoEquiv if self.alphas.contains(&-0.5) => {
                Err(Error::Config("the G2 kernel vanishes at alpha = -1/2".into()))
            }
            Campaign::BiorthoEquiv if self.deg_cap > crate::biortho::MAX_NODES => Err(Error::Config(format!(
                "biorthogonal degree cap is {}",
                crate::biortho::MAX_NODES
            ))),
            Campaign::SsrExplore if self.trials < 100 => Err(Error::Config("ssr needs at least 100 trials".into())),
            Campaign::SsrExplore if self.m_max == 0 => Err(Error::Config("m_max must be at least 1".into())),
            _ => Ok(()),
        }
    }

    /// `(n, m)` with `1 <= n + m <= deg_cap`.
    pub fn boundary_pairs(&self) -> Vec<(usize, usize)> {
        (1..=self.deg_cap)
            .flat_map(|s| (0..=s).map(move |n| (n, s - n)))
            .collect()
    }

    /// JacobiGenFun points scanned by `ssr`: those with both parameters
    /// above -1.
    pub fn genfun_points(&self) -> Vec<(f64, f64)> {
        self.alphas
            .iter()
            .flat_map(|&a| self.betas.iter().map(move |&b| (a, b)))
            .filter(|&(a, b)| a > -1.0 && b > -1.0)
            .collect()
    }

    /// Number of cases the campaign will produce, from the grid sizes alone.
    pub fn expected_cases(&self) -> usize {
        let (na, nb) = (self.alphas.len(), self.betas.len());
        let c = self.deg_cap;
        match self.campaign {
            Campaign::Theorem12 | Campaign::BiorthoEquiv => na * self.trials,
            Campaign::Conjecture32 | Campaign::Question31 => na * nb * (c * (c + 3) / 2 + self.trials),
            Campaign::SsrExplore => nb + self.genfun_points().len(),
            Campaign::Selftest => super::selftest::CHECKS.len(),
        }
    }

    /// Applies one `key = value` setting. Keys match the CLI flags with
    /// dashes or underscores.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let bad = |what: &str| Error::Config(format!("invalid {what} '{value}'"));
        let key = key.trim().replace('-', "_");
        let value = value.trim();
        match key.as_str() {
            "campaign" => {
                let c: Campaign = value.parse()?;
                if c != self.campaign {
                    return Err(Error::Config(format!(
                        "config is for '{c}' but '{}' was requested",
                        self.campaign
                    )));
                }
            }
            "alpha" => self.alphas = parse_list(value).ok_or_else(|| bad("alpha list"))?,
            "beta" => self.betas = parse_list(value).ok_or_else(|| bad("beta list"))?,
            "alpha_max" => self.alphas = grid_to(value).ok_or_else(|| bad("alpha_max"))?,
            "beta_max" => self.betas = grid_to(value).ok_or_else(|| bad("beta_max"))?,
            "deg_cap" => self.deg_cap = value.parse().map_err(|_| bad("deg_cap"))?,
            "random_degree_max" => self.random_degree_max = value.parse().map_err(|_| bad("random_degree_max"))?,
            "trials" => self.trials = value.parse().map_err(|_| bad("trials"))?,
            "m_max" => self.m_max = value.parse().map_err(|_| bad("m_max"))?,
            "seed" => self.seed = value.parse().map_err(|_| bad("seed"))?,
            "precision" => self.precision = value.parse()?,
            "tol" => self.tol = value.parse().map_err(|_| bad("tol"))?,
            "timestamp" => self.timestamp = value.to_string(),
            "timing" => self.timing = value.parse().map_err(|_| bad("timing"))?,
            "out" => self.out = Some(PathBuf::from(value)),
            "format" => self.format = value.parse()?,
            _ => return Err(Error::Config(format!("unknown key '{key}'"))),
        }
        Ok(())
    }

    /// Applies a flat `key = value` file; blank lines and `#` comments are
    /// skipped.
    pub fn apply_file(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path)?;
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("{}:{}: expected key = value", path.display(), i + 1)))?;
            self.set(k, v)?;
        }
        Ok(())
    }
}

fn parse_list(s: &str) -> Option<Vec<f64>> {
    if s.is_empty() {
        return Some(Vec::new());
    }
    s.split(',').map(|v| v.trim().parse().ok()).collect()
}

/// `0, 1, ..., max` for an integer `max >= 0`.
fn grid_to(s: &str) -> Option<Vec<f64>> {
    let max: i32 = s.parse().ok()?;
    (max >= 0).then(|| int_grid(0, max))
}
