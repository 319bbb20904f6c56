//! Experimental harness: every strategy on every dataset, for a range of
//! cluster counts and a number of repeats, with wall and CPU time.

use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{compute_cardinalities, infer_graph_type, PropertyGraph};
use crate::insight::{run_strategy, Clusterer, SearchConfig, Strategy};
use crate::io::{
    generate_synthetic_graph, load_tabular_as_graph, read_config, read_graph, read_matrix_csv,
    SyntheticSpec,
};
use crate::matrix::DenseMatrix;
use crate::validation::{validate_indicators, Mode, ValidationConfig};

pub const BENCH_FORMAT: &str = "bench-report";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Source {
    /// A graph file in JSON or JSON Lines.
    Graph { path: PathBuf },
    /// A CSV file loaded as one node per row, labelled with the node type.
    Tabular { path: PathBuf },
    /// A synthetic graph generated from a spec file.
    Synthetic { spec: PathBuf, seed: u64 },
    /// A ready indicator matrix.
    Matrix { path: PathBuf },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Dataset {
    pub name: String,
    #[serde(default)]
    pub node_type: String,
    pub source: Source,
    #[serde(default)]
    pub validation: ValidationConfig,
}

/// Datasets listed in a manifest file; relative paths resolve against the
/// manifest's directory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    #[serde(rename = "dataset")]
    pub datasets: Vec<Dataset>,
}

impl Manifest {
    pub fn load(path: &Path) -> Result<Manifest> {
        let mut m: Manifest = read_config(path)?;
        let base = path.parent().unwrap_or(Path::new("."));
        for d in &mut m.datasets {
            let p = match &mut d.source {
                Source::Graph { path } | Source::Tabular { path } | Source::Matrix { path } => path,
                Source::Synthetic { spec, .. } => spec,
            };
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        Ok(m)
    }
}

impl Dataset {
    pub fn graph(&self) -> Result<PropertyGraph> {
        match &self.source {
            Source::Graph { path } => read_graph(path),
            Source::Tabular { path } => {
                load_tabular_as_graph(std::fs::File::open(path)?, &self.node_type)
            }
            Source::Synthetic { spec, seed } => {
                let spec: SyntheticSpec = read_config(spec)?;
                generate_synthetic_graph(&spec, *seed)
            }
            Source::Matrix { .. } => Err(Error::InvalidConfig(format!(
                "dataset {} is a matrix",
                self.name
            ))),
        }
    }

    /// The validated, null-free indicator matrix of the dataset.
    pub fn matrix(&self) -> Result<DenseMatrix> {
        if let Source::Matrix { path } = &self.source {
            return DenseMatrix::try_from(
                &read_matrix_csv(std::fs::File::open(path)?)?.complete_rows(),
            );
        }
        let g = self.graph()?;
        let s = compute_cardinalities(&g, &infer_graph_type(&g))?;
        let out = validate_indicators(&g, &s, &self.node_type, &self.validation, Mode::Eager)?;
        DenseMatrix::try_from(&out.matrix)
    }
}

/// Total CPU time consumed by the process, all threads included.
pub fn process_cpu_seconds() -> f64 {
    let mut ts = libc::timespec {
        tv_sec: 0,
        tv_nsec: 0,
    };
    // SAFETY: `ts` is a valid, writable timespec for the duration of the call.
    let rc = unsafe { libc::clock_gettime(libc::CLOCK_PROCESS_CPUTIME_ID, &mut ts) };
    if rc != 0 {
        return 0.0;
    }
    ts.tv_sec as f64 + ts.tv_nsec as f64 * 1e-9
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BenchConfig {
    pub strategies: Vec<Strategy>,
    pub k_min: usize,
    pub k_max: usize,
    pub repeats: usize,
    pub seed: u64,
    pub search: SearchConfig,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            strategies: Strategy::ALL.to_vec(),
            k_min: 2,
            k_max: 4,
            repeats: 10,
            seed: 0,
            search: SearchConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Run {
    pub dataset: String,
    pub strategy: Strategy,
    pub k: usize,
    pub repeat: usize,
    pub seed: u64,
    /// Min-max normalized over every run of the dataset.
    pub score: Option<f64>,
    pub raw_score: Option<f64>,
    pub wall_seconds: f64,
    pub cpu_seconds: f64,
    pub indicator_count: usize,
    pub node_count: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct MeanSd {
    pub mean: f64,
    pub sd: f64,
}

/// Mean and sample standard deviation; the deviation of fewer than two values is 0.
pub fn mean_sd(xs: &[f64]) -> MeanSd {
    if xs.is_empty() {
        return MeanSd::default();
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let sd = if xs.len() < 2 {
        0.0
    } else {
        (xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
    };
    MeanSd { mean, sd }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellSummary {
    pub dataset: String,
    pub strategy: Strategy,
    pub k: usize,
    pub runs: usize,
    pub failures: usize,
    pub score: MeanSd,
    pub raw_score: MeanSd,
    pub wall_seconds: MeanSd,
    pub cpu_seconds: MeanSd,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub format: String,
    pub version: u32,
    pub config: BenchConfig,
    pub runs: Vec<Run>,
    pub summary: Vec<CellSummary>,
}

/// Rescale the scores of each dataset to `[0, 1]`; when all runs of a
/// dataset tie, every one of them scores 1.
pub fn normalize_scores(runs: &mut [Run]) {
    let mut names: Vec<String> = runs.iter().map(|r| r.dataset.clone()).collect();
    names.sort();
    names.dedup();
    for name in names {
        let raw: Vec<f64> = runs
            .iter()
            .filter(|r| r.dataset == name)
            .filter_map(|r| r.raw_score)
            .collect();
        let lo = raw.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = raw.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        for r in runs.iter_mut().filter(|r| r.dataset == name) {
            r.score = r
                .raw_score
                .map(|s| if hi > lo { (s - lo) / (hi - lo) } else { 1.0 });
        }
    }
}

fn summarize(runs: &[Run]) -> Vec<CellSummary> {
    let mut keys: Vec<(String, Strategy, usize)> = runs
        .iter()
        .map(|r| (r.dataset.clone(), r.strategy, r.k))
        .collect();
    keys.dedup();
    let mut seen = std::collections::HashSet::new();
    keys.retain(|k| seen.insert(k.clone()));
    keys.into_iter()
        .map(|(dataset, strategy, k)| {
            let cell: Vec<&Run> = runs
                .iter()
                .filter(|r| r.dataset == dataset && r.strategy == strategy && r.k == k)
                .collect();
            let ok: Vec<&&Run> = cell.iter().filter(|r| r.error.is_none()).collect();
            let col = |f: fn(&Run) -> Option<f64>| -> MeanSd {
                mean_sd(&ok.iter().filter_map(|r| f(r)).collect::<Vec<_>>())
            };
            CellSummary {
                dataset,
                strategy,
                k,
                runs: cell.len(),
                failures: cell.len() - ok.len(),
                score: col(|r| r.score),
                raw_score: col(|r| r.raw_score),
                wall_seconds: col(|r| Some(r.wall_seconds)),
                cpu_seconds: col(|r| Some(r.cpu_seconds)),
            }
        })
        .collect()
}

/// Run every (dataset, K, repeat, strategy) cell in order. All strategies of
/// one (dataset, K, repeat) share the seed `cfg.seed ^ index` of that triple.
/// Failing cells are recorded with their error and the run continues.
pub fn run_bench(
    datasets: &[(String, DenseMatrix)],
    cfg: &BenchConfig,
    clusterer: &dyn Clusterer,
) -> Result<BenchReport> {
    if cfg.repeats < 1 {
        return Err(Error::InvalidConfig("repeats must be at least 1".into()));
    }
    if cfg.k_min < 1 || cfg.k_min > cfg.k_max {
        return Err(Error::InvalidConfig(format!(
            "bad K range [{}, {}]",
            cfg.k_min, cfg.k_max
        )));
    }
    let mut runs = Vec::new();
    let mut cell = 0u64;
    for (name, m) in datasets {
        for k in cfg.k_min..=cfg.k_max {
            for repeat in 0..cfg.repeats {
                let seed = cfg.seed ^ cell;
                cell += 1;
                for &strategy in &cfg.strategies {
                    let search = SearchConfig {
                        k,
                        seed,
                        ..cfg.search.clone()
                    };
                    let cpu0 = process_cpu_seconds();
                    let t0 = Instant::now();
                    let outcome = run_strategy(m, strategy, &search, clusterer);
                    let wall_seconds = t0.elapsed().as_secs_f64();
                    let cpu_seconds = process_cpu_seconds() - cpu0;
                    log::info!("{name} {strategy} K={k} repeat={repeat}: {wall_seconds:.3}s");
                    let (raw_score, error) = match outcome {
                        Ok(r) => (Some(r.score), None),
                        Err(e) => (None, Some(e.to_string())),
                    };
                    runs.push(Run {
                        dataset: name.clone(),
                        strategy,
                        k,
                        repeat,
                        seed,
                        score: None,
                        raw_score,
                        wall_seconds,
                        cpu_seconds,
                        indicator_count: m.n_cols(),
                        node_count: m.n_rows(),
                        error,
                    });
                }
            }
        }
    }
    normalize_scores(&mut runs);
    let summary = summarize(&runs);
    Ok(BenchReport {
        format: BENCH_FORMAT.into(),
        version: 1,
        config: cfg.clone(),
        runs,
        summary,
    })
}
