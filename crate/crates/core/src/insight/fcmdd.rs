use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::objective::{significance, sq_distance, term_weights, Clustering};
use super::partition::ThreePartition;
use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;

/// Clusters matrix rows for a given indicator partition. Implementations
/// must be pure functions of their arguments.
pub trait Clusterer: Sync {
    fn cluster(
        &self,
        m: &DenseMatrix,
        p: &ThreePartition,
        k: usize,
        seed: u64,
    ) -> Result<Clustering>;
}

/// Fuzzy c-medoids over the combined objective cost
/// `w_d * sq_distance - w_s * significance`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FuzzyCMedoids {
    pub fuzzifier: f64,
    pub max_iter: usize,
    /// Added after shifting costs so the smallest one is strictly positive.
    pub epsilon: f64,
    /// Medoid candidates per cluster: the rows with the highest membership.
    /// Every row is a candidate when the matrix has at most `exact_below` rows.
    pub candidate_pool: usize,
    pub exact_below: usize,
}

impl Default for FuzzyCMedoids {
    fn default() -> Self {
        FuzzyCMedoids {
            fuzzifier: 2.0,
            max_iter: 100,
            epsilon: 1e-9,
            candidate_pool: 16,
            exact_below: 512,
        }
    }
}

struct Cost<'a> {
    m: &'a DenseMatrix,
    compare: Vec<usize>,
    group: Vec<usize>,
    w_s: f64,
    w_d: f64,
}

impl Cost<'_> {
    fn pair(&self, a: usize, b: usize) -> f64 {
        let (ra, rb) = (self.m.row(a), self.m.row(b));
        self.w_d * sq_distance(ra, rb, &self.group) - self.w_s * significance(ra, rb, &self.compare)
    }
}

/// Row-normalized memberships `u_jk ∝ d_jk^(-1/(m-1))` for strictly positive costs.
pub fn memberships_from_costs(costs: &[Vec<f64>], fuzzifier: f64) -> Vec<Vec<f64>> {
    let e = 1.0 / (fuzzifier - 1.0);
    costs
        .iter()
        .map(|row| {
            let logs: Vec<f64> = row.iter().map(|d| -e * d.ln()).collect();
            let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let w: Vec<f64> = logs.iter().map(|l| (l - top).exp()).collect();
            let total: f64 = w.iter().sum();
            w.into_iter().map(|x| x / total).collect()
        })
        .collect()
}

fn argmax(row: &[f64]) -> usize {
    let mut best = 0;
    for (k, &x) in row.iter().enumerate() {
        if x > row[best] {
            best = k;
        }
    }
    best
}

impl FuzzyCMedoids {
    fn shifted_costs(&self, cost: &Cost, medoids: &[usize]) -> Vec<Vec<f64>> {
        let raw: Vec<Vec<f64>> = (0..cost.m.n_rows())
            .map(|j| medoids.iter().map(|&r| cost.pair(j, r)).collect())
            .collect();
        let min = raw.iter().flatten().copied().fold(f64::INFINITY, f64::min);
        raw.into_iter()
            .map(|row| row.into_iter().map(|c| c - min + self.epsilon).collect())
            .collect()
    }

    fn update_medoids(&self, cost: &Cost, u: &[Vec<f64>], medoids: &[usize]) -> Vec<usize> {
        let n = cost.m.n_rows();
        let mut taken: Vec<usize> = Vec::with_capacity(medoids.len());
        for (k, &current) in medoids.iter().enumerate() {
            let weight: Vec<f64> = u.iter().map(|r| r[k].powf(self.fuzzifier)).collect();
            let mut pool: Vec<usize> = (0..n).collect();
            if n > self.exact_below && medoids.len() > 1 {
                pool.sort_by(|&a, &b| u[b][k].total_cmp(&u[a][k]).then(a.cmp(&b)));
                pool.truncate(self.candidate_pool);
                if !pool.contains(&current) {
                    pool.push(current);
                }
            }
            let mut ranked: Vec<(f64, usize)> = pool
                .into_iter()
                .map(|r| ((0..n).map(|j| weight[j] * cost.pair(j, r)).sum::<f64>(), r))
                .collect();
            ranked.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            let pick = ranked
                .iter()
                .map(|x| x.1)
                .find(|r| !taken.contains(r) && !medoids[k + 1..].contains(r))
                .unwrap_or(current);
            taken.push(pick);
        }
        taken
    }

    fn run(&self, cost: &Cost, k: usize, seed: u64) -> Option<Clustering> {
        let n = cost.m.n_rows();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut medoids: Vec<usize> = sample(&mut rng, n, k).into_vec();
        medoids.sort_unstable();
        for _ in 0..self.max_iter {
            let u = memberships_from_costs(&self.shifted_costs(cost, &medoids), self.fuzzifier);
            let next = self.update_medoids(cost, &u, &medoids);
            if next == medoids {
                break;
            }
            medoids = next;
        }
        let u = memberships_from_costs(&self.shifted_costs(cost, &medoids), self.fuzzifier);
        let mut assignment: Vec<usize> = u.iter().map(|r| argmax(r)).collect();
        for (c, &r) in medoids.iter().enumerate() {
            assignment[r] = c;
        }
        if !enforce_min_size(&mut assignment, &medoids, &u) {
            return None;
        }
        Some(Clustering {
            k,
            assignment,
            medoids,
            memberships: Some(u),
        })
    }
}

/// Grow every cluster below two members with the row that has the highest
/// membership in it, among non-medoid rows whose cluster keeps two members.
fn enforce_min_size(assignment: &mut [usize], medoids: &[usize], u: &[Vec<f64>]) -> bool {
    let k = medoids.len();
    let mut sizes = vec![0usize; k];
    for &c in assignment.iter() {
        sizes[c] += 1;
    }
    while let Some(small) = (0..k).find(|&c| sizes[c] < 2) {
        let mut best: Option<usize> = None;
        for j in 0..assignment.len() {
            let from = assignment[j];
            if from == small || sizes[from] <= 2 || medoids.contains(&j) {
                continue;
            }
            if best.is_none_or(|b| u[j][small] > u[b][small]) {
                best = Some(j);
            }
        }
        let Some(j) = best else {
            return false;
        };
        sizes[assignment[j]] -= 1;
        assignment[j] = small;
        sizes[small] += 1;
    }
    true
}

impl Clusterer for FuzzyCMedoids {
    fn cluster(
        &self,
        m: &DenseMatrix,
        p: &ThreePartition,
        k: usize,
        seed: u64,
    ) -> Result<Clustering> {
        let n = m.n_rows();
        if k == 0 || n < 2 * k {
            return Err(Error::InfeasibleK { k, rows: n });
        }
        let (w_s, w_d) = term_weights(p);
        let cost = Cost {
            m,
            compare: p.compare(),
            group: p.group(),
            w_s,
            w_d,
        };
        for kk in (1..=k).rev() {
            if let Some(c) = self.run(&cost, kk, seed) {
                if kk < k {
                    log::debug!("clustering reduced from {k} to {kk} clusters");
                }
                return Ok(c);
            }
        }
        Err(Error::InfeasibleK { k, rows: n })
    }
}
