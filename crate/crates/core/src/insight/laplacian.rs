use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::partition::{Role, ThreePartition};
use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;

/// Unweighted symmetric k-nearest-neighbour graph over matrix rows.
#[derive(Debug, Clone, PartialEq)]
pub struct KnnGraph {
    adjacency: Vec<Vec<usize>>,
}

impl KnnGraph {
    /// Euclidean distance over all columns; equidistant neighbours are
    /// taken in row order.
    pub fn build(m: &DenseMatrix, k: usize) -> Result<KnnGraph> {
        let n = m.n_rows();
        if n < k + 1 || k == 0 {
            return Err(Error::TooFewRows {
                needed: k.max(1) + 1,
                found: n,
            });
        }
        if m.rows().all(|r| r == m.row(0)) {
            return Err(Error::DegenerateGraph);
        }
        let nearest: Vec<Vec<usize>> = (0..n)
            .into_par_iter()
            .map(|j| {
                let a = m.row(j);
                let mut d: Vec<(f64, usize)> = (0..n)
                    .filter(|&l| l != j)
                    .map(|l| {
                        let b = m.row(l);
                        (
                            a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>(),
                            l,
                        )
                    })
                    .collect();
                let cmp =
                    |x: &(f64, usize), y: &(f64, usize)| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1));
                d.select_nth_unstable_by(k - 1, cmp);
                d.truncate(k);
                d.into_iter().map(|(_, l)| l).collect()
            })
            .collect();
        let mut adjacency = vec![Vec::new(); n];
        for (j, ns) in nearest.iter().enumerate() {
            for &l in ns {
                adjacency[j].push(l);
                adjacency[l].push(j);
            }
        }
        for a in &mut adjacency {
            a.sort_unstable();
            a.dedup();
        }
        Ok(KnnGraph { adjacency })
    }

    pub fn neighbours(&self, row: usize) -> &[usize] {
        &self.adjacency[row]
    }

    pub fn degree(&self, row: usize) -> usize {
        self.adjacency[row].len()
    }

    /// `I^T L I / I^T D I` for the column `values`. With `centered`, the
    /// degree-weighted mean is removed from `values` first.
    pub fn score(&self, values: &[f64], centered: bool) -> f64 {
        let shift = if centered {
            let (num, den) = values
                .iter()
                .enumerate()
                .fold((0.0, 0.0), |(a, b), (j, &x)| {
                    (a + x * self.degree(j) as f64, b + self.degree(j) as f64)
                });
            num / den
        } else {
            0.0
        };
        let x = |j: usize| values[j] - shift;
        let mut smooth = 0.0;
        let mut spread = 0.0;
        for j in 0..self.adjacency.len() {
            spread += self.degree(j) as f64 * x(j).powi(2);
            for &l in &self.adjacency[j] {
                if l > j {
                    smooth += (x(j) - x(l)).powi(2);
                }
            }
        }
        if spread == 0.0 {
            0.0
        } else {
            smooth / spread
        }
    }
}

pub fn laplacian_score(m: &DenseMatrix, col: usize, k_nn: usize) -> Result<f64> {
    Ok(KnnGraph::build(m, k_nn)?.score(&m.column(col), false))
}

/// Population standard deviation over mean; 0 for a constant column.
pub fn coefficient_of_variation(values: &[f64]) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::EmptyCollection);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let sd = (values.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n).sqrt();
    if sd == 0.0 {
        return Ok(0.0);
    }
    if mean == 0.0 {
        return Err(Error::ZeroMean);
    }
    Ok(sd / mean)
}

/// Value at the point of an ascending list farthest from the chord joining
/// its end points. Equally distant points resolve to the smaller index.
pub fn elbow_cut(sorted: &[f64]) -> Result<f64> {
    let n = sorted.len();
    if n < 2 {
        return Err(Error::TooShort(n));
    }
    if n == 2 {
        return Ok((sorted[0] + sorted[1]) / 2.0);
    }
    let (first, last) = (sorted[0], sorted[n - 1]);
    let dy = last - first;
    let dx = (n - 1) as f64;
    let mut best = (0usize, f64::NEG_INFINITY);
    for (i, &y) in sorted.iter().enumerate() {
        // The chord's norm is shared by every point and left out.
        let d = (dy * i as f64 - dx * (y - first)).abs();
        if d > best.1 {
            best = (i, d);
        }
    }
    Ok(sorted[best.0])
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LaplacianConfig {
    pub k_nn: usize,
    pub centered: bool,
}

impl Default for LaplacianConfig {
    fn default() -> Self {
        LaplacianConfig {
            k_nn: 5,
            centered: false,
        }
    }
}

/// Split `items` (ascending by score) at the elbow; the lower side includes the cut.
fn split_at_elbow(items: &[(f64, usize)]) -> (Vec<usize>, Vec<usize>) {
    let scores: Vec<f64> = items.iter().map(|x| x.0).collect();
    match elbow_cut(&scores) {
        Ok(cut) => {
            let (lo, hi): (Vec<&(f64, usize)>, Vec<_>) = items.iter().partition(|x| x.0 <= cut);
            (
                lo.into_iter().map(|x| x.1).collect(),
                hi.into_iter().map(|x| x.1).collect(),
            )
        }
        Err(_) => (Vec::new(), items.iter().map(|x| x.1).collect()),
    }
}

fn sorted_by_score(scores: &[f64], idx: impl IntoIterator<Item = usize>) -> Vec<(f64, usize)> {
    let mut v: Vec<(f64, usize)> = idx.into_iter().map(|i| (scores[i], i)).collect();
    v.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    v
}

/// Grouping indicators are the locality-preserving ones (low Laplacian
/// score); of the rest, the diverse ones (high coefficient of variation) are
/// used for comparison and the others left unused.
pub fn laplacian_heuristic(m: &DenseMatrix, cfg: &LaplacianConfig) -> Result<ThreePartition> {
    let n = m.n_cols();
    if n < 2 {
        return Err(Error::TooFewIndicators(n));
    }
    let knn = KnnGraph::build(m, cfg.k_nn.min(m.n_rows().saturating_sub(1)))?;
    let ls: Vec<f64> = (0..n)
        .map(|i| knn.score(&m.column(i), cfg.centered))
        .collect();
    let cv: Vec<f64> = (0..n)
        .map(|i| coefficient_of_variation(&m.column(i)))
        .collect::<Result<_>>()?;

    let (group, rest) = split_at_elbow(&sorted_by_score(&ls, 0..n));
    let mut roles = vec![Role::Unused; n];
    for &i in &group {
        roles[i] = Role::Group;
    }
    let (unused, compare) = split_at_elbow(&sorted_by_score(&cv, rest));
    for &i in &compare {
        roles[i] = Role::Compare;
    }
    for &i in &unused {
        roles[i] = Role::Unused;
    }
    repair(&mut roles, Role::Group, &ls, false);
    repair(&mut roles, Role::Compare, &cv, true);
    ThreePartition::new(roles)
}

/// Force the best-ranked indicator into an empty `role`, taking it from the
/// unused set or from a set that keeps at least one member.
fn repair(roles: &mut [Role], role: Role, scores: &[f64], highest: bool) {
    if roles.contains(&role) {
        return;
    }
    let count = |r: Role, roles: &[Role]| roles.iter().filter(|&&x| x == r).count();
    let donor_ok = |i: usize| roles[i] == Role::Unused || count(roles[i], roles) > 1;
    let better = |a: usize, b: usize| {
        let o = scores[a].total_cmp(&scores[b]);
        if highest {
            o.is_gt()
        } else {
            o.is_lt()
        }
    };
    let mut pick: Option<usize> = None;
    for i in (0..roles.len()).filter(|&i| donor_ok(i)) {
        if pick.is_none_or(|p| better(i, p)) {
            pick = Some(i);
        }
    }
    if let Some(i) = pick {
        roles[i] = role;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cv_arithmetic() {
        assert_eq!(coefficient_of_variation(&[3.0, 3.0]).unwrap(), 0.0);
        assert!((coefficient_of_variation(&[0.5, 1.0]).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert!(matches!(
            coefficient_of_variation(&[-1.0, 1.0]),
            Err(Error::ZeroMean)
        ));
    }

    #[test]
    fn elbow_examples() {
        assert_eq!(elbow_cut(&[0.0, 0.0, 0.0, 10.0]).unwrap(), 0.0);
        assert_eq!(elbow_cut(&[1.0, 2.0, 3.0, 4.0]).unwrap(), 1.0);
        assert_eq!(elbow_cut(&[1.0, 1.1, 1.2, 9.0, 9.1]).unwrap(), 1.2);
        assert_eq!(elbow_cut(&[1.0, 3.0]).unwrap(), 2.0);
        assert!(matches!(elbow_cut(&[1.0]), Err(Error::TooShort(1))));
    }

    #[test]
    fn constant_column_scores_zero() {
        let m = DenseMatrix::from_rows(&[
            vec![1.0, 0.0],
            vec![1.0, 1.0],
            vec![1.0, 2.0],
            vec![1.0, 5.0],
        ]);
        assert_eq!(laplacian_score(&m, 0, 2).unwrap(), 0.0);
        assert!(laplacian_score(&m, 1, 2).unwrap() > 0.0);
    }

    #[test]
    fn degenerate_and_small() {
        let m = DenseMatrix::from_rows(&[vec![1.0], vec![1.0], vec![1.0]]);
        assert!(matches!(
            KnnGraph::build(&m, 1),
            Err(Error::DegenerateGraph)
        ));
        let m = DenseMatrix::from_rows(&[vec![1.0], vec![2.0]]);
        assert!(matches!(
            KnnGraph::build(&m, 2),
            Err(Error::TooFewRows { .. })
        ));
    }

    #[test]
    fn blob_structure_separates_roles() {
        // Column 0 follows two tight blobs, column 1 is noise across them.
        let rows: Vec<Vec<f64>> = (0..12)
            .map(|j| {
                let blob = if j < 6 { 0.1 } else { 0.9 };
                vec![
                    blob + 0.001 * j as f64,
                    [0.45, 0.6, 0.5, 0.55, 0.4, 0.58][j % 6],
                ]
            })
            .collect();
        let m = DenseMatrix::from_rows(&rows);
        let p = laplacian_heuristic(
            &m,
            &LaplacianConfig {
                k_nn: 3,
                centered: false,
            },
        )
        .unwrap();
        assert_eq!(p.group(), [0]);
        assert_eq!(p.compare(), [1]);
        assert!(p.unused().is_empty());
    }

    #[test]
    fn identical_columns_are_repaired() {
        let rows: Vec<Vec<f64>> = (0..6).map(|j| vec![j as f64 + 1.0; 3]).collect();
        let p = laplacian_heuristic(&DenseMatrix::from_rows(&rows), &LaplacianConfig::default())
            .unwrap();
        assert!(!p.compare().is_empty() && !p.group().is_empty());
    }
}
