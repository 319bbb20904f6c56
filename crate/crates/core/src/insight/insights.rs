use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::objective::{significance, Clustering};
use super::partition::ThreePartition;
use super::search::{SearchResult, Strategy};
use crate::matrix::DenseMatrix;

/// Two rows of one cluster and their values on the comparison indicators.
#[derive(Debug, Clone, PartialEq)]
pub struct Insight {
    pub a: usize,
    pub b: usize,
    pub significance: f64,
    /// `(value(a, i), value(b, i))` per comparison indicator, in column order.
    pub values: Vec<(usize, f64, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClusterInsights {
    pub medoid: usize,
    pub members: Vec<usize>,
    /// Descending significance.
    pub insights: Vec<Insight>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InsightResult {
    pub partition: ThreePartition,
    pub clustering: Clustering,
    pub score: f64,
    pub strategy: Strategy,
    pub seed: u64,
    pub clusters: Vec<ClusterInsights>,
    pub restart_scores: Vec<f64>,
}

struct Ranked(f64, usize, usize);

impl PartialEq for Ranked {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Ranked {}

impl PartialOrd for Ranked {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Ranked {
    // Greater means ranked earlier: higher significance, then smaller rows.
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .total_cmp(&other.0)
            .then_with(|| other.1.cmp(&self.1))
            .then_with(|| other.2.cmp(&self.2))
    }
}

/// The `top_n` most significant pairs of every cluster.
pub fn rank_pairs(
    m: &DenseMatrix,
    p: &ThreePartition,
    c: &Clustering,
    top_n: usize,
) -> Vec<ClusterInsights> {
    let compare = p.compare();
    c.clusters()
        .into_iter()
        .enumerate()
        .map(|(k, members)| {
            // Min-heap of the best pairs seen so far.
            let mut heap: BinaryHeap<std::cmp::Reverse<Ranked>> =
                BinaryHeap::with_capacity(top_n + 1);
            for (x, &a) in members.iter().enumerate() {
                for &b in &members[x + 1..] {
                    let r = Ranked(significance(m.row(a), m.row(b), &compare), a, b);
                    if heap.len() < top_n {
                        heap.push(std::cmp::Reverse(r));
                    } else if heap.peek().is_some_and(|w| r > w.0) {
                        heap.pop();
                        heap.push(std::cmp::Reverse(r));
                    }
                }
            }
            let mut ranked: Vec<Ranked> = heap.into_iter().map(|r| r.0).collect();
            ranked.sort_by(|x, y| y.cmp(x));
            let insights = ranked
                .into_iter()
                .map(|Ranked(s, a, b)| Insight {
                    a,
                    b,
                    significance: s,
                    values: compare
                        .iter()
                        .map(|&i| (i, m.get(a, i), m.get(b, i)))
                        .collect(),
                })
                .collect();
            ClusterInsights {
                medoid: c.medoids[k],
                members,
                insights,
            }
        })
        .collect()
}

pub fn extract_insights(
    m: &DenseMatrix,
    result: SearchResult,
    strategy: Strategy,
    seed: u64,
    top_n: usize,
) -> InsightResult {
    let clusters = rank_pairs(m, &result.partition, &result.clustering, top_n);
    InsightResult {
        partition: result.partition,
        clustering: result.clustering,
        score: result.score,
        strategy,
        seed,
        clusters,
        restart_scores: result.restart_scores,
    }
}
