use serde::{Deserialize, Serialize};

use super::partition::ThreePartition;
use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;

/// Sum of absolute differences over the comparison indicators.
pub fn significance(a: &[f64], b: &[f64], compare: &[usize]) -> f64 {
    compare.iter().map(|&i| (a[i] - b[i]).abs()).sum()
}

/// Sum of squared differences over the grouping indicators.
pub fn sq_distance(a: &[f64], b: &[f64], group: &[usize]) -> f64 {
    group.iter().map(|&i| (a[i] - b[i]).powi(2)).sum()
}

/// Weights of the two objective terms: `(|pS|/|P|, 1 - |pD|/|P|)`.
pub fn term_weights(p: &ThreePartition) -> (f64, f64) {
    let n = p.len() as f64;
    (
        p.compare().len() as f64 / n,
        1.0 - p.group().len() as f64 / n,
    )
}

/// A crisp clustering of matrix rows, optionally with the fuzzy memberships
/// it was derived from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Clustering {
    pub k: usize,
    /// Cluster of each row.
    pub assignment: Vec<usize>,
    /// Medoid row of each cluster.
    pub medoids: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub memberships: Option<Vec<Vec<f64>>>,
}

impl Clustering {
    /// Rows of every cluster, each in ascending order.
    pub fn clusters(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.k];
        for (row, &c) in self.assignment.iter().enumerate() {
            out[c].push(row);
        }
        out
    }

    pub fn check(&self, n_rows: usize) -> Result<()> {
        let bad = |m: String| Err(Error::ConstraintViolation(m));
        if self.assignment.len() != n_rows {
            return bad(format!(
                "{} assignments for {n_rows} rows",
                self.assignment.len()
            ));
        }
        if self.medoids.len() != self.k || self.assignment.iter().any(|&c| c >= self.k) {
            return bad("cluster ids out of range".into());
        }
        if let Some((k, rows)) = self
            .clusters()
            .iter()
            .enumerate()
            .find(|(_, rows)| rows.len() < 2)
        {
            return bad(format!("cluster {k} has {} member(s)", rows.len()));
        }
        if let Some(u) = &self.memberships {
            if u.len() != n_rows || u.iter().any(|r| r.len() != self.k) {
                return bad("membership matrix has the wrong shape".into());
            }
            if u.iter()
                .any(|r| r.iter().any(|&x| x < 0.0) || (r.iter().sum::<f64>() - 1.0).abs() > 1e-9)
            {
                return bad("membership rows must be non-negative and sum to 1".into());
            }
        }
        Ok(())
    }
}

fn pairwise_abs_sum(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let n = values.len() as f64;
    values
        .iter()
        .enumerate()
        .map(|(i, &x)| x * (2.0 * i as f64 - (n - 1.0)))
        .sum()
}

fn pairwise_sq_sum(values: &[f64]) -> f64 {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    n * values.iter().map(|x| (x - mean).powi(2)).sum::<f64>()
}

/// Objective value of a partition and clustering, over unordered pairs of
/// distinct rows within each cluster.
pub fn objective_score(m: &DenseMatrix, p: &ThreePartition, c: &Clustering) -> Result<f64> {
    if p.len() != m.n_cols() {
        return Err(Error::ConstraintViolation(format!(
            "partition covers {} indicators, matrix has {}",
            p.len(),
            m.n_cols()
        )));
    }
    c.check(m.n_rows())?;
    let (w_s, w_d) = term_weights(p);
    let (compare, group) = (p.compare(), p.group());
    let mut score = 0.0;
    for rows in c.clusters() {
        let size = rows.len() as f64;
        let mut buf: Vec<f64> = Vec::with_capacity(rows.len());
        let mut sig = 0.0;
        for &i in &compare {
            buf.clear();
            buf.extend(rows.iter().map(|&r| m.get(r, i)));
            sig += pairwise_abs_sum(&mut buf);
        }
        let mut dist = 0.0;
        for &i in &group {
            buf.clear();
            buf.extend(rows.iter().map(|&r| m.get(r, i)));
            dist += pairwise_sq_sum(&buf);
        }
        score += (w_s * sig - w_d * dist) / size;
    }
    Ok(score)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::insight::partition::Role;

    fn brute(m: &DenseMatrix, p: &ThreePartition, c: &Clustering) -> f64 {
        let (w_s, w_d) = term_weights(p);
        let mut total = 0.0;
        for rows in c.clusters() {
            let mut sig = 0.0;
            let mut dist = 0.0;
            for (x, &a) in rows.iter().enumerate() {
                for &b in &rows[x + 1..] {
                    sig += significance(m.row(a), m.row(b), &p.compare());
                    dist += sq_distance(m.row(a), m.row(b), &p.group());
                }
            }
            total += (w_s * sig - w_d * dist) / rows.len() as f64;
        }
        total
    }

    #[test]
    fn elementary_terms() {
        assert_eq!(significance(&[0.2], &[0.9], &[0]), (0.9f64 - 0.2).abs());
        assert_eq!(sq_distance(&[0.0, 1.0], &[0.5, 3.0], &[0]), 0.25);
        assert_eq!(significance(&[1.0, 2.0], &[1.0, 2.0], &[0, 1]), 0.0);
    }

    #[test]
    fn identical_rows_score_zero() {
        let m = DenseMatrix::from_rows(&[vec![0.3, 0.7, 0.1], vec![0.3, 0.7, 0.1]]);
        let p = ThreePartition::new(vec![Role::Compare, Role::Group, Role::Unused]).unwrap();
        let c = Clustering {
            k: 1,
            assignment: vec![0, 0],
            medoids: vec![0],
            memberships: None,
        };
        assert_eq!(objective_score(&m, &p, &c).unwrap(), 0.0);
    }

    #[test]
    fn four_rows_by_hand() {
        // Column 0 compares: |0.1-0.4|+|0.1-0.5|+|0.1-1|+|0.4-0.5|+|0.4-1|+|0.5-1| = 2.8.
        // Column 1 groups: squared gaps from (0, 0.5, 0.5, 1) = 0.25+0.25+1+0+0.25+0.25 = 2.
        // Weights |pS|/|P| = 1/2 and 1 - |pD|/|P| = 1/2, one cluster of 4.
        let m = DenseMatrix::from_rows(&[
            vec![0.1, 0.0],
            vec![0.4, 0.5],
            vec![0.5, 0.5],
            vec![1.0, 1.0],
        ]);
        let p = ThreePartition::from_sets(2, &[0], &[1]).unwrap();
        let c = Clustering {
            k: 1,
            assignment: vec![0; 4],
            medoids: vec![0],
            memberships: None,
        };
        let expected = (0.5 * 2.8 - 0.5 * 2.0) / 4.0;
        assert!((objective_score(&m, &p, &c).unwrap() - expected).abs() < 1e-15);
        assert!((brute(&m, &p, &c) - expected).abs() < 1e-15);
    }

    #[test]
    fn singleton_cluster_is_a_violation() {
        let m = DenseMatrix::from_rows(&[vec![0.0, 0.0], vec![1.0, 1.0], vec![2.0, 2.0]]);
        let p = ThreePartition::from_sets(2, &[0], &[1]).unwrap();
        let c = Clustering {
            k: 2,
            assignment: vec![0, 0, 1],
            medoids: vec![0, 2],
            memberships: None,
        };
        assert!(matches!(
            objective_score(&m, &p, &c),
            Err(Error::ConstraintViolation(_))
        ));
    }
}
