//! Full search against orthant search over the random families.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{BenchMethod, ExperimentConfig};
use super::generate::{generate, Family, GeneratorSpec};
use crate::error::{Error, Result};
use crate::exact::radius_full_search;
use crate::orthant::radius_orthant_search;
use crate::radius::RadiusValue;

pub const SCHEMA_VERSION: u32 = 1;

/// One `(family, n, instance)` comparison. Column order is the CSV schema.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRow {
    pub family: Family,
    pub n: usize,
    pub instance: u32,
    pub seed: u64,
    pub r_fs: Option<RadiusValue>,
    pub r_os: Option<RadiusValue>,
    /// `(r_os - r_fs) / r_fs` when both are finite and `r_fs > 0`.
    pub delta_r: Option<f64>,
    pub visited_orthants: Option<usize>,
    pub lp_calls: Option<usize>,
    pub pairs_evaluated: Option<u64>,
    pub time_fs_s: Option<f64>,
    pub time_os_s: Option<f64>,
    pub error: Option<String>,
}

/// Per `(family, n)` aggregates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SizeSummary {
    pub family: Family,
    pub n: usize,
    pub rows: usize,
    pub mean_delta_r: Option<f64>,
    pub max_abs_delta_r: Option<f64>,
    pub mean_visited_orthants: Option<f64>,
    pub mean_lp_calls: Option<f64>,
    pub mean_pairs_evaluated: Option<f64>,
    pub errors: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentOutput {
    pub schema: u32,
    pub config: ExperimentConfig,
    pub rows: Vec<ExperimentRow>,
    pub summary: Vec<SizeSummary>,
}

fn note(error: &mut Option<String>, method: &str, e: Error) {
    let msg = format!("{method}: {e}");
    *error = Some(match error.take() {
        Some(prev) => format!("{prev}; {msg}"),
        None => msg,
    });
}

pub fn run_row(cfg: &ExperimentConfig, family: Family, n: usize, instance: u32) -> ExperimentRow {
    let mut spec = GeneratorSpec::new(family, n, cfg.seed).with_instance(instance);
    spec.negate_fraction = cfg.negate_fraction;
    let mut row = ExperimentRow {
        family,
        n,
        instance,
        seed: cfg.seed,
        r_fs: None,
        r_os: None,
        delta_r: None,
        visited_orthants: None,
        lp_calls: None,
        pairs_evaluated: None,
        time_fs_s: None,
        time_os_s: None,
        error: None,
    };
    let (a, delta) = match generate(&spec) {
        Ok(pair) => pair,
        Err(e) => {
            note(&mut row.error, "generate", e);
            return row;
        }
    };
    let tol = &cfg.tolerances;
    if cfg.runs_full_search(n) {
        let start = Instant::now();
        match radius_full_search(&a, &delta, tol) {
            Ok(report) => {
                row.r_fs = Some(report.value);
                row.pairs_evaluated = Some(report.pairs_evaluated);
            }
            Err(e) => note(&mut row.error, "full-search", e),
        }
        row.time_fs_s = Some(start.elapsed().as_secs_f64());
    }
    if cfg.methods.contains(&BenchMethod::OrthantSearch) {
        let start = Instant::now();
        match radius_orthant_search(&a, &delta, tol) {
            Ok(trace) => {
                row.r_os = Some(trace.result.value);
                row.visited_orthants = Some(trace.visited.len());
                row.lp_calls = Some(trace.lp_calls);
            }
            Err(Error::InfiniteRadius) => row.r_os = Some(RadiusValue::Infinite),
            Err(e) => note(&mut row.error, "orthant-search", e),
        }
        row.time_os_s = Some(start.elapsed().as_secs_f64());
    }
    if let (Some(RadiusValue::Finite(fs)), Some(RadiusValue::Finite(os))) = (row.r_fs, row.r_os) {
        if fs > 0.0 {
            row.delta_r = Some((os - fs) / fs);
        }
    }
    row
}

fn mean(values: impl Iterator<Item = f64>) -> Option<f64> {
    let (sum, count) = values.fold((0.0, 0usize), |(s, c), v| (s + v, c + 1));
    (count > 0).then(|| sum / count as f64)
}

pub fn summarize(rows: &[ExperimentRow]) -> Vec<SizeSummary> {
    let mut keys: Vec<(Family, usize)> = rows.iter().map(|r| (r.family, r.n)).collect();
    keys.sort();
    keys.dedup();
    keys.into_iter()
        .map(|(family, n)| {
            let group: Vec<&ExperimentRow> = rows.iter().filter(|r| r.family == family && r.n == n).collect();
            SizeSummary {
                family,
                n,
                rows: group.len(),
                mean_delta_r: mean(group.iter().filter_map(|r| r.delta_r)),
                max_abs_delta_r: group.iter().filter_map(|r| r.delta_r).map(f64::abs).reduce(f64::max),
                mean_visited_orthants: mean(group.iter().filter_map(|r| r.visited_orthants.map(|v| v as f64))),
                mean_lp_calls: mean(group.iter().filter_map(|r| r.lp_calls.map(|v| v as f64))),
                mean_pairs_evaluated: mean(group.iter().filter_map(|r| r.pairs_evaluated.map(|v| v as f64))),
                errors: group.iter().filter(|r| r.error.is_some()).count(),
            }
        })
        .collect()
}

/// Runs every `(family, n, instance)` row in parallel and, when an output
/// directory is configured, writes `results.csv`, `results.json` and
/// `summary.csv` there.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    cfg.validate()?;
    let mut tasks = Vec::new();
    for &family in &cfg.families {
        for &n in &cfg.sizes {
            for m in 0..cfg.instances_per_size {
                tasks.push((family, n, m as u32));
            }
        }
    }
    tasks.sort();
    tasks.dedup();
    let rows: Vec<ExperimentRow> = tasks.par_iter().map(|&(f, n, m)| run_row(cfg, f, n, m)).collect();
    let out = ExperimentOutput { schema: SCHEMA_VERSION, config: cfg.clone(), summary: summarize(&rows), rows };
    if let Some(dir) = &cfg.output {
        write_outputs(dir, &out)?;
    }
    Ok(out)
}

fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    fs::write(&tmp, bytes)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

fn csv_bytes<T: Serialize>(records: &[T]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in records {
        w.serialize(r).map_err(|e| Error::Io(e.to_string()))?;
    }
    w.into_inner().map_err(|e| Error::Io(e.to_string()))
}

pub fn write_outputs(dir: &Path, out: &ExperimentOutput) -> Result<()> {
    fs::create_dir_all(dir)?;
    write_atomic(&dir.join("results.csv"), &csv_bytes(&out.rows)?)?;
    write_atomic(&dir.join("summary.csv"), &csv_bytes(&out.summary)?)?;
    let json = serde_json::to_vec_pretty(out).map_err(|e| Error::Io(e.to_string()))?;
    write_atomic(&dir.join("results.json"), &json)
}

pub fn read_rows_csv(path: &Path) -> Result<Vec<ExperimentRow>> {
    let mut r = csv::Reader::from_path(path).map_err(|e| Error::Io(e.to_string()))?;
    r.deserialize()
        .map(|row| row.map_err(|e| Error::Parse(e.to_string())))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(methods: &[BenchMethod]) -> ExperimentConfig {
        ExperimentConfig {
            sizes: vec![3, 4],
            instances_per_size: 2,
            families: vec![Family::ZeroCentered, Family::InverseNonnegative],
            methods: methods.iter().copied().collect(),
            ..ExperimentConfig::default()
        }
    }

    #[test]
    fn both_methods_agree_on_small_sizes() {
        let out = run_experiment(&small(&[BenchMethod::FullSearch, BenchMethod::OrthantSearch])).unwrap();
        assert_eq!(out.rows.len(), 8);
        for row in &out.rows {
            assert!(row.error.is_none(), "{row:?}");
            assert!(row.delta_r.unwrap().abs() <= 1e-6, "{row:?}");
        }
        assert_eq!(out.summary.len(), 4);
        assert!(out.summary.iter().all(|s| s.rows == 2));
    }

    #[test]
    fn full_search_skipped_above_cap() {
        let mut cfg = small(&[BenchMethod::FullSearch, BenchMethod::OrthantSearch]);
        cfg.sizes = vec![4];
        cfg.families = vec![Family::ZeroCentered];
        cfg.tolerances.full_search_cap = 3;
        let out = run_experiment(&cfg).unwrap();
        for row in &out.rows {
            assert!(row.r_fs.is_none() && row.r_os.is_some() && row.delta_r.is_none());
        }
    }

    #[test]
    fn outputs_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let mut cfg = small(&[BenchMethod::OrthantSearch]);
        cfg.output = Some(dir.path().to_path_buf());
        let out = run_experiment(&cfg).unwrap();
        let back = read_rows_csv(&dir.path().join("results.csv")).unwrap();
        assert_eq!(back, out.rows);
        let json: serde_json::Value =
            serde_json::from_slice(&fs::read(dir.path().join("results.json")).unwrap()).unwrap();
        assert_eq!(json["schema"], 1);
        assert_eq!(json["rows"].as_array().unwrap().len(), out.rows.len());
        assert!(dir.path().join("summary.csv").exists());
        assert!(!dir.path().join("results.csv.tmp").exists());
    }

    #[test]
    fn rows_are_reproducible() {
        let cfg = small(&[BenchMethod::OrthantSearch]);
        let strip = |mut rows: Vec<ExperimentRow>| {
            for r in &mut rows {
                r.time_os_s = None;
            }
            rows
        };
        assert_eq!(strip(run_experiment(&cfg).unwrap().rows), strip(run_experiment(&cfg).unwrap().rows));
    }
}
