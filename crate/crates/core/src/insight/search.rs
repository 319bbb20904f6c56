use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::fcmdd::Clusterer;
use super::laplacian::{laplacian_heuristic, LaplacianConfig};
use super::objective::{objective_score, Clustering};
use super::partition::ThreePartition;
use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    /// One random partition.
    Rd,
    /// Laplacian-score heuristic.
    Lp,
    /// Local search from the Laplacian partition.
    Sls,
    /// Local search from several random partitions.
    Ls,
    /// Every feasible partition.
    Exp,
}

impl Strategy {
    pub const ALL: [Strategy; 5] = [
        Strategy::Rd,
        Strategy::Lp,
        Strategy::Sls,
        Strategy::Ls,
        Strategy::Exp,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Strategy::Rd => "rd",
            Strategy::Lp => "lp",
            Strategy::Sls => "sls",
            Strategy::Ls => "ls",
            Strategy::Exp => "exp",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Strategy::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown strategy `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SearchConfig {
    pub k: usize,
    pub seed: u64,
    pub tau: f64,
    pub restarts: usize,
    pub exp_limit: usize,
    pub laplacian: LaplacianConfig,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            k: 2,
            seed: 0,
            tau: 1e-6,
            restarts: 5,
            exp_limit: 12,
            laplacian: LaplacianConfig::default(),
        }
    }
}

impl SearchConfig {
    pub fn check(&self) -> Result<()> {
        if self.k < 1 {
            return Err(Error::InvalidConfig("k must be at least 1".into()));
        }
        if !(self.tau > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "tau must be positive, got {}",
                self.tau
            )));
        }
        if self.restarts < 1 {
            return Err(Error::InvalidConfig("restarts must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchResult {
    pub partition: ThreePartition,
    pub clustering: Clustering,
    pub score: f64,
    /// Scores of the accepted local-search iterations, starting point first.
    pub history: Vec<f64>,
    /// Best score of each restart, for multi-start searches.
    pub restart_scores: Vec<f64>,
    /// Number of partitions clustered and scored.
    pub evaluations: usize,
}

/// Cluster the rows for `p` and score the outcome.
pub fn evaluate(
    m: &DenseMatrix,
    p: &ThreePartition,
    k: usize,
    clusterer: &dyn Clusterer,
    seed: u64,
) -> Result<(Clustering, f64)> {
    let c = clusterer.cluster(m, p, k, seed)?;
    let s = objective_score(m, p, &c)?;
    Ok((c, s))
}

fn single(
    m: &DenseMatrix,
    p: ThreePartition,
    k: usize,
    clusterer: &dyn Clusterer,
    seed: u64,
) -> Result<SearchResult> {
    let (clustering, score) = evaluate(m, &p, k, clusterer, seed)?;
    Ok(SearchResult {
        partition: p,
        clustering,
        score,
        history: vec![score],
        restart_scores: Vec::new(),
        evaluations: 1,
    })
}

/// Pick the highest score; equal scores go to the smallest partition.
fn better(a: &(ThreePartition, Clustering, f64), b: &(ThreePartition, Clustering, f64)) -> bool {
    a.2 > b.2 || (a.2 == b.2 && a.0 < b.0)
}

/// Greedy hill climbing over single-indicator moves.
pub fn local_search(
    m: &DenseMatrix,
    start: ThreePartition,
    tau: f64,
    k: usize,
    clusterer: &dyn Clusterer,
    seed: u64,
) -> Result<SearchResult> {
    let (c0, s0) = evaluate(m, &start, k, clusterer, seed)?;
    let mut current = (start, c0, s0);
    let mut history = vec![s0];
    let mut evaluations = 1;
    loop {
        let neighbours = current.0.neighbours();
        evaluations += neighbours.len();
        let scored: Vec<(ThreePartition, Clustering, f64)> = neighbours
            .into_par_iter()
            .map(|p| evaluate(m, &p, k, clusterer, seed).map(|(c, s)| (p, c, s)))
            .collect::<Result<_>>()?;
        let Some(best) = scored
            .into_iter()
            .reduce(|a, b| if better(&b, &a) { b } else { a })
        else {
            break;
        };
        let gain = best.2 - current.2;
        if gain > 0.0 {
            history.push(best.2);
            current = best;
        }
        if gain < tau {
            break;
        }
    }
    let (partition, clustering, score) = current;
    Ok(SearchResult {
        partition,
        clustering,
        score,
        history,
        restart_scores: Vec::new(),
        evaluations,
    })
}

fn partition_rng(seed: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(1);
    rng
}

/// Local search from `restarts` random partitions, keeping the best.
pub fn random_restart_search(
    m: &DenseMatrix,
    restarts: usize,
    tau: f64,
    k: usize,
    clusterer: &dyn Clusterer,
    seed: u64,
) -> Result<SearchResult> {
    if restarts < 1 {
        return Err(Error::InvalidConfig("restarts must be at least 1".into()));
    }
    let mut rng = partition_rng(seed);
    let starts: Vec<ThreePartition> = (0..restarts)
        .map(|_| ThreePartition::random(m.n_cols(), &mut rng))
        .collect::<Result<_>>()?;
    let runs: Vec<SearchResult> = starts
        .into_par_iter()
        .map(|p| local_search(m, p, tau, k, clusterer, seed))
        .collect::<Result<_>>()?;
    let restart_scores: Vec<f64> = runs.iter().map(|r| r.score).collect();
    let evaluations = runs.iter().map(|r| r.evaluations).sum();
    let mut best = runs
        .into_iter()
        .reduce(|a, b| if b.score > a.score { b } else { a })
        .expect("at least one restart");
    best.restart_scores = restart_scores;
    best.evaluations = evaluations;
    Ok(best)
}

/// Score every feasible partition.
pub fn exponential_search(
    m: &DenseMatrix,
    k: usize,
    clusterer: &dyn Clusterer,
    seed: u64,
    limit: usize,
) -> Result<SearchResult> {
    let n = m.n_cols();
    if n > limit {
        return Err(Error::SearchSpaceTooLarge {
            indicators: n,
            limit,
        });
    }
    if n < 2 {
        return Err(Error::TooFewIndicators(n));
    }
    let partitions: Vec<ThreePartition> = (0..3u64.pow(n as u32))
        .filter_map(|c| ThreePartition::from_code(n, c))
        .collect();
    let evaluations = partitions.len();
    let best = partitions
        .into_par_iter()
        .map(|p| evaluate(m, &p, k, clusterer, seed).map(|(c, s)| (p, c, s)))
        .try_reduce_with(|a, b| Ok(if better(&b, &a) { b } else { a }))
        .expect("at least two feasible partitions")?;
    Ok(SearchResult {
        partition: best.0,
        clustering: best.1,
        score: best.2,
        history: vec![best.2],
        restart_scores: Vec::new(),
        evaluations,
    })
}

pub fn random_baseline(
    m: &DenseMatrix,
    k: usize,
    clusterer: &dyn Clusterer,
    seed: u64,
) -> Result<SearchResult> {
    let p = ThreePartition::random(m.n_cols(), &mut partition_rng(seed))?;
    single(m, p, k, clusterer, seed)
}

pub fn laplacian_search(
    m: &DenseMatrix,
    cfg: &LaplacianConfig,
    k: usize,
    clusterer: &dyn Clusterer,
    seed: u64,
) -> Result<SearchResult> {
    single(m, laplacian_heuristic(m, cfg)?, k, clusterer, seed)
}

pub fn run_strategy(
    m: &DenseMatrix,
    strategy: Strategy,
    cfg: &SearchConfig,
    clusterer: &dyn Clusterer,
) -> Result<SearchResult> {
    cfg.check()?;
    if m.n_cols() < 2 {
        return Err(Error::TooFewIndicators(m.n_cols()));
    }
    if m.n_rows() < 2 * cfg.k {
        return Err(Error::InfeasibleK {
            k: cfg.k,
            rows: m.n_rows(),
        });
    }
    let (k, seed) = (cfg.k, cfg.seed);
    match strategy {
        Strategy::Rd => random_baseline(m, k, clusterer, seed),
        Strategy::Lp => laplacian_search(m, &cfg.laplacian, k, clusterer, seed),
        Strategy::Sls => local_search(
            m,
            laplacian_heuristic(m, &cfg.laplacian)?,
            cfg.tau,
            k,
            clusterer,
            seed,
        ),
        Strategy::Ls => random_restart_search(m, cfg.restarts, cfg.tau, k, clusterer, seed),
        Strategy::Exp => exponential_search(m, k, clusterer, seed, cfg.exp_limit),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::insight::fcmdd::FuzzyCMedoids;

    fn toy() -> DenseMatrix {
        let rows: Vec<Vec<f64>> = (0..16)
            .map(|j| {
                let blob = if j % 2 == 0 { 0.2 } else { 0.8 };
                vec![
                    blob + 0.01 * (j % 3) as f64,
                    ((j * 5) % 7) as f64 / 7.0 + 0.05,
                    ((j * 3) % 16) as f64 / 16.0 + 0.05,
                    0.5 + 0.02 * (j % 4) as f64,
                ]
            })
            .collect();
        DenseMatrix::from_rows(&rows)
    }

    #[test]
    fn strategy_names() {
        for s in Strategy::ALL {
            assert_eq!(s.name().parse::<Strategy>().unwrap(), s);
        }
        assert!("greedy".parse::<Strategy>().is_err());
    }

    #[test]
    fn exponential_dominates() {
        let m = toy();
        let f = FuzzyCMedoids::default();
        for seed in 0..3 {
            let cfg = SearchConfig {
                seed,
                ..Default::default()
            };
            let exp = run_strategy(&m, Strategy::Exp, &cfg, &f).unwrap();
            assert_eq!(exp.evaluations, 81 - 2 * 16 + 1);
            for s in [Strategy::Rd, Strategy::Lp, Strategy::Sls, Strategy::Ls] {
                let r = run_strategy(&m, s, &cfg, &f).unwrap();
                assert!(exp.score >= r.score, "{s} beat exp on seed {seed}");
            }
        }
    }

    #[test]
    fn local_search_climbs() {
        let m = toy();
        let f = FuzzyCMedoids::default();
        let start = ThreePartition::from_sets(4, &[3], &[1]).unwrap();
        let r = local_search(&m, start, 1e-6, 2, &f, 5).unwrap();
        assert!(r.history.windows(2).all(|w| w[1] > w[0]));
        assert_eq!(*r.history.last().unwrap(), r.score);
    }

    #[test]
    fn restarts_report_each_score() {
        let m = toy();
        let f = FuzzyCMedoids::default();
        let r = random_restart_search(&m, 5, 1e-6, 2, &f, 8).unwrap();
        assert_eq!(r.restart_scores.len(), 5);
        assert_eq!(
            r.score,
            r.restart_scores
                .iter()
                .copied()
                .fold(f64::NEG_INFINITY, f64::max)
        );
        let again = random_restart_search(&m, 5, 1e-6, 2, &f, 8).unwrap();
        assert_eq!(r, again);
    }

    #[test]
    fn exp_limit() {
        let m = DenseMatrix::from_rows(&vec![vec![0.5; 13]; 4]);
        assert!(matches!(
            exponential_search(&m, 2, &FuzzyCMedoids::default(), 0, 12),
            Err(Error::SearchSpaceTooLarge {
                indicators: 13,
                limit: 12
            })
        ));
    }
}
