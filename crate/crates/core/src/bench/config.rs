//! Experiment configuration in a `key = value` text format.
//!
//! ```text
//! # comments and blank lines are ignored
//! sizes = 3-7          # or a list: 3, 5, 8
//! instances = 10
//! families = zero-centered, inverse-nonnegative
//! methods = full-search, orthant-search
//! seed = 1
//! output = results     # directory for results.csv, results.json, summary.csv
//! eps_bisect = 1e-9    # any Tolerances field
//! ```

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::generate::Family;
use crate::error::{Error, Result};
use crate::radius::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BenchMethod {
    FullSearch,
    OrthantSearch,
}

impl FromStr for BenchMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full-search" | "full" => Ok(BenchMethod::FullSearch),
            "orthant-search" | "orthant" => Ok(BenchMethod::OrthantSearch),
            _ => Err(Error::Parse(format!("unknown method {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub sizes: Vec<usize>,
    pub instances_per_size: usize,
    pub families: Vec<Family>,
    pub methods: BTreeSet<BenchMethod>,
    pub seed: u64,
    pub negate_fraction: f64,
    pub tolerances: Tolerances,
    pub output: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            sizes: (3..=13).collect(),
            instances_per_size: 10,
            families: Family::ALL.to_vec(),
            methods: [BenchMethod::FullSearch, BenchMethod::OrthantSearch].into(),
            seed: 1,
            negate_fraction: 0.10,
            tolerances: Tolerances::default(),
            output: None,
        }
    }
}

fn parse_value<T: FromStr>(key: &str, v: &str) -> Result<T> {
    v.parse()
        .map_err(|_| Error::Parse(format!("bad value for {key}: {v:?}")))
}

fn parse_sizes(v: &str) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for part in v.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        match part.split_once('-') {
            Some((lo, hi)) => {
                let (lo, hi): (usize, usize) = (parse_value("sizes", lo.trim())?, parse_value("sizes", hi.trim())?);
                if lo > hi {
                    return Err(Error::Parse(format!("empty size range {part:?}")));
                }
                out.extend(lo..=hi);
            }
            None => out.push(parse_value("sizes", part)?),
        }
    }
    Ok(out)
}

fn list<T: FromStr<Err = Error>>(v: &str) -> Result<Vec<T>> {
    v.split(',').map(str::trim).filter(|p| !p.is_empty()).map(str::parse).collect()
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = ExperimentConfig::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("line {}: expected key = value", lineno + 1)))?;
            let (key, value) = (key.trim(), value.trim());
            let t = &mut cfg.tolerances;
            match key {
                "sizes" => cfg.sizes = parse_sizes(value)?,
                "instances" | "instances_per_size" => cfg.instances_per_size = parse_value(key, value)?,
                "families" => cfg.families = list(value)?,
                "methods" => cfg.methods = list(value)?.into_iter().collect(),
                "seed" => cfg.seed = parse_value(key, value)?,
                "negate_fraction" => cfg.negate_fraction = parse_value(key, value)?,
                "output" => cfg.output = Some(PathBuf::from(value)),
                "eps_bisect" => t.eps_bisect = parse_value(key, value)?,
                "eps_imag" => t.eps_imag = parse_value(key, value)?,
                "eps_rank" => t.eps_rank = Some(parse_value(key, value)?),
                "eps_lp" => t.eps_lp = parse_value(key, value)?,
                "tol_singular" => t.tol_singular = parse_value(key, value)?,
                "full_search_cap" => t.full_search_cap = parse_value(key, value)?,
                "norm_cap" => t.norm_cap = parse_value(key, value)?,
                _ => return Err(Error::Parse(format!("line {}: unknown key {key:?}", lineno + 1))),
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        self.tolerances.validate()?;
        if self.sizes.is_empty() || self.sizes.contains(&0) {
            return Err(Error::InvalidInput("sizes must be a nonempty list of positive integers".into()));
        }
        if self.instances_per_size == 0 || self.families.is_empty() || self.methods.is_empty() {
            return Err(Error::InvalidInput("instances, families and methods must be nonempty".into()));
        }
        if !(0.0..=1.0).contains(&self.negate_fraction) {
            return Err(Error::InvalidInput("negate_fraction must lie in [0, 1]".into()));
        }
        Ok(())
    }

    /// Whether full search runs at size `n` (it is skipped above the cap).
    pub fn runs_full_search(&self, n: usize) -> bool {
        self.methods.contains(&BenchMethod::FullSearch) && n <= self.tolerances.full_search_cap
    }
}
