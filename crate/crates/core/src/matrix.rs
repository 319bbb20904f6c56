//! Indicator matrices: nullable cells while indicators are collected and
//! validated, dense cells once rows with nulls have been dropped.

use crate::context::Indicator;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ColumnMeta {
    pub scaled: bool,
    pub attenuated: bool,
}

/// Rows are instance nodes of one node type, columns are indicators.
#[derive(Debug, Clone, PartialEq)]
pub struct IndicatorMatrix {
    row_ids: Vec<String>,
    indicators: Vec<Indicator>,
    cells: Vec<Option<f64>>,
    meta: Vec<ColumnMeta>,
}

impl IndicatorMatrix {
    /// `cells` is row-major.
    pub fn new(
        row_ids: Vec<String>,
        indicators: Vec<Indicator>,
        cells: Vec<Option<f64>>,
    ) -> Result<Self> {
        if cells.len() != row_ids.len() * indicators.len() {
            return Err(Error::Parse(format!(
                "{} cells do not fill a {}x{} grid",
                cells.len(),
                row_ids.len(),
                indicators.len()
            )));
        }
        let meta = vec![ColumnMeta::default(); indicators.len()];
        Ok(IndicatorMatrix {
            row_ids,
            indicators,
            cells,
            meta,
        })
    }

    pub fn from_columns(
        row_ids: Vec<String>,
        indicators: Vec<Indicator>,
        columns: Vec<Vec<Option<f64>>>,
    ) -> Self {
        let n_rows = row_ids.len();
        let n_cols = columns.len();
        let mut cells = vec![None; n_rows * n_cols];
        for (c, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), n_rows, "column length must match row count");
            for (r, v) in col.iter().enumerate() {
                cells[r * n_cols + c] = *v;
            }
        }
        let meta = vec![ColumnMeta::default(); n_cols];
        IndicatorMatrix {
            row_ids,
            indicators,
            cells,
            meta,
        }
    }

    pub fn n_rows(&self) -> usize {
        self.row_ids.len()
    }

    pub fn n_cols(&self) -> usize {
        self.indicators.len()
    }

    pub fn row_ids(&self) -> &[String] {
        &self.row_ids
    }

    pub fn indicators(&self) -> &[Indicator] {
        &self.indicators
    }

    pub fn meta(&self) -> &[ColumnMeta] {
        &self.meta
    }

    pub fn set_meta(&mut self, col: usize, meta: ColumnMeta) {
        self.meta[col] = meta;
    }

    pub fn get(&self, row: usize, col: usize) -> Option<f64> {
        self.cells[row * self.n_cols() + col]
    }

    pub fn row(&self, row: usize) -> &[Option<f64>] {
        let w = self.n_cols();
        &self.cells[row * w..(row + 1) * w]
    }

    pub fn column(&self, col: usize) -> Vec<Option<f64>> {
        (0..self.n_rows()).map(|r| self.get(r, col)).collect()
    }

    pub fn column_index(&self, i: &Indicator) -> Option<usize> {
        self.indicators.iter().position(|x| x == i)
    }

    pub fn replace_column(&mut self, col: usize, values: &[Option<f64>]) {
        assert_eq!(values.len(), self.n_rows());
        let w = self.n_cols();
        for (r, v) in values.iter().enumerate() {
            self.cells[r * w + col] = *v;
        }
    }

    /// Keep only the given columns, in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> IndicatorMatrix {
        let columns = cols.iter().map(|&c| self.column(c)).collect();
        let mut out = IndicatorMatrix::from_columns(
            self.row_ids.clone(),
            cols.iter().map(|&c| self.indicators[c].clone()).collect(),
            columns,
        );
        out.meta = cols.iter().map(|&c| self.meta[c]).collect();
        out
    }

    /// Drop every row holding at least one null.
    pub fn complete_rows(&self) -> IndicatorMatrix {
        let keep: Vec<usize> = (0..self.n_rows())
            .filter(|&r| self.row(r).iter().all(Option::is_some))
            .collect();
        IndicatorMatrix {
            row_ids: keep.iter().map(|&r| self.row_ids[r].clone()).collect(),
            indicators: self.indicators.clone(),
            cells: keep
                .iter()
                .flat_map(|&r| self.row(r).iter().copied())
                .collect(),
            meta: self.meta.clone(),
        }
    }
}

/// A null-free matrix, the input of the insight engine.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    row_ids: Vec<String>,
    labels: Vec<String>,
    n_cols: usize,
    values: Vec<f64>,
}

impl DenseMatrix {
    /// Build from explicit rows; rows are named `r0, r1, ..` and columns `c0, c1, ..`.
    pub fn from_rows(rows: &[Vec<f64>]) -> DenseMatrix {
        let n_cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == n_cols), "ragged rows");
        DenseMatrix {
            row_ids: (0..rows.len()).map(|i| format!("r{i}")).collect(),
            labels: (0..n_cols).map(|i| format!("c{i}")).collect(),
            n_cols,
            values: rows.iter().flatten().copied().collect(),
        }
    }

    pub fn with_names(mut self, row_ids: Vec<String>, labels: Vec<String>) -> DenseMatrix {
        assert_eq!(row_ids.len(), self.n_rows());
        assert_eq!(labels.len(), self.n_cols);
        self.row_ids = row_ids;
        self.labels = labels;
        self
    }

    pub fn n_rows(&self) -> usize {
        self.row_ids.len()
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn row_ids(&self) -> &[String] {
        &self.row_ids
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.n_cols + col]
    }

    #[inline]
    pub fn row(&self, row: usize) -> &[f64] {
        &self.values[row * self.n_cols..(row + 1) * self.n_cols]
    }

    pub fn column(&self, col: usize) -> Vec<f64> {
        (0..self.n_rows()).map(|r| self.get(r, col)).collect()
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.values.chunks(self.n_cols.max(1)).take(self.n_rows())
    }
}

impl TryFrom<&IndicatorMatrix> for DenseMatrix {
    type Error = Error;

    fn try_from(m: &IndicatorMatrix) -> Result<Self> {
        let mut values = Vec::with_capacity(m.n_rows() * m.n_cols());
        for r in 0..m.n_rows() {
            for (c, v) in m.row(r).iter().enumerate() {
                values.push(v.ok_or(Error::NullCell { row: r, col: c })?);
            }
        }
        Ok(DenseMatrix {
            row_ids: m.row_ids.clone(),
            labels: m.indicators.iter().map(ToString::to_string).collect(),
            n_cols: m.n_cols(),
            values,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ind(s: &str) -> Indicator {
        s.parse().unwrap()
    }

    #[test]
    fn complete_rows_drops_nulls() {
        let m = IndicatorMatrix::new(
            vec!["a".into(), "b".into(), "c".into()],
            vec![ind("|x|node|id"), ind("|y|node|id")],
            vec![Some(1.0), Some(2.0), None, Some(3.0), Some(4.0), Some(5.0)],
        )
        .unwrap();
        let c = m.complete_rows();
        assert_eq!(c.row_ids(), ["a", "c"]);
        assert_eq!(c.row(1), [Some(4.0), Some(5.0)]);
        let d = DenseMatrix::try_from(&c).unwrap();
        assert_eq!(d.column(1), [2.0, 5.0]);
        assert!(matches!(
            DenseMatrix::try_from(&m),
            Err(Error::NullCell { row: 1, col: 0 })
        ));
    }

    #[test]
    fn dimensions_are_checked() {
        assert!(IndicatorMatrix::new(vec!["a".into()], vec![ind("|x|node|id")], vec![]).is_err());
    }

    #[test]
    fn select_keeps_order() {
        let m = IndicatorMatrix::from_columns(
            vec!["a".into()],
            vec![ind("|x|node|id"), ind("|y|node|id")],
            vec![vec![Some(1.0)], vec![Some(2.0)]],
        );
        let s = m.select_columns(&[1, 0]);
        assert_eq!(s.row(0), [Some(2.0), Some(1.0)]);
        assert_eq!(s.indicators()[0].prop, "y");
    }
}
