//! Indicator collection with validation.
//!
//! Candidates are filtered in a fixed canonical order against six
//! validation properties: acceptable density, non-redundancy, discarded
//! properties, acceptable variance, then scaling and contextualization of
//! the survivors. The lazy mode evaluates every candidate before filtering;
//! the eager mode rejects discarded and sparse properties before any value
//! is computed. Both modes accept the same indicators.

mod scaling;
mod stats;

pub use scaling::{attenuation, percentile_scale, percentile_scale_all};
pub use stats::{pearson, pearson_dense};

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::context::{
    compute_context, derive_candidate_indicators, enumerate_indicator_paths, evaluate_indicator,
    Candidate, Elem, Indicator, Op, OpDict, PropSource,
};
use crate::error::{Error, Result};
use crate::graph::{GraphType, PropertyGraph};
use crate::matrix::{ColumnMeta, IndicatorMatrix};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ValidationConfig {
    /// Minimum number of distinct values, as a fraction of the instance count.
    pub alpha_ratio: f64,
    /// Maximum number of distinct values, as a fraction of the instance count.
    pub beta_ratio: f64,
    /// Minimum fraction of non-null values of the source property.
    pub gamma_ratio: f64,
    /// Absolute Pearson correlation above which an indicator is redundant.
    pub corr_threshold: f64,
    pub discard_props: BTreeSet<String>,
    pub max_len: usize,
    pub op_dict: OpDict,
}

impl Default for ValidationConfig {
    fn default() -> Self {
        ValidationConfig {
            alpha_ratio: 1e-6,
            beta_ratio: 1.0,
            gamma_ratio: 0.8,
            corr_threshold: 0.98,
            discard_props: BTreeSet::from(["identifier".to_owned()]),
            max_len: 3,
            op_dict: OpDict::new(),
        }
    }
}

impl ValidationConfig {
    pub fn check(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if !(0.0 <= self.alpha_ratio
            && self.alpha_ratio <= self.beta_ratio
            && self.beta_ratio <= 1.0)
        {
            return bad(format!(
                "need 0 <= alpha ({}) <= beta ({}) <= 1",
                self.alpha_ratio, self.beta_ratio
            ));
        }
        if !(0.0..=1.0).contains(&self.gamma_ratio) {
            return bad(format!("gamma {} outside [0, 1]", self.gamma_ratio));
        }
        if !(self.corr_threshold > 0.0 && self.corr_threshold <= 1.0) {
            return bad(format!(
                "correlation threshold {} outside (0, 1]",
                self.corr_threshold
            ));
        }
        if self.max_len < 1 {
            return bad("max_len must be at least 1".into());
        }
        if self.op_dict.values().any(|ops| ops.contains(&Op::Id)) {
            return bad("op_dict may only name aggregation operators".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[default]
    Lazy,
    Eager,
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lazy" => Ok(Mode::Lazy),
            "eager" => Ok(Mode::Eager),
            _ => Err(Error::InvalidConfig(format!("unknown mode `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Reason {
    Variance,
    Density,
    /// Correlated with the named, already accepted indicator.
    Redundant(String),
    DiscardedProp,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Accepted,
    Rejected(Reason),
}

impl fmt::Display for Reason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            Reason::Variance => "VARIANCE",
            Reason::Density => "DENSITY",
            Reason::Redundant(_) => "REDUNDANT",
            Reason::DiscardedProp => "DISCARDED_PROP",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceEntry {
    pub indicator: Indicator,
    pub outcome: Outcome,
    pub detail: String,
}

/// One outcome per candidate, in canonical candidate order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationTrace {
    pub entries: Vec<TraceEntry>,
}

impl ValidationTrace {
    pub fn accepted(&self) -> impl Iterator<Item = &Indicator> {
        self.entries
            .iter()
            .filter(|e| e.outcome == Outcome::Accepted)
            .map(|e| &e.indicator)
    }

    pub fn outcome_of(&self, label: &str) -> Option<&Outcome> {
        self.entries
            .iter()
            .find(|e| e.indicator.to_string() == label)
            .map(|e| &e.outcome)
    }
}

#[derive(Debug, Clone, Default)]
pub struct CollectionStats {
    pub candidates: usize,
    /// Candidates whose values were computed, in evaluation order.
    pub evaluated: Vec<Indicator>,
    pub candidate_secs: f64,
    pub validation_secs: f64,
}

#[derive(Debug, Clone)]
pub struct ValidationOutput {
    /// Accepted columns, rows with nulls dropped, scaled then attenuated.
    pub matrix: IndicatorMatrix,
    pub trace: ValidationTrace,
    pub stats: CollectionStats,
}

/// Fraction of instances of the source element type carrying a non-null value.
pub fn property_density(g: &PropertyGraph, s: &GraphType, source: &PropSource) -> Result<f64> {
    let (present, total) = match source.elem {
        Elem::Node => {
            let ids = s.node_instances(g, &source.type_name)?;
            let present = ids
                .iter()
                .filter(|&&n| {
                    g.node(n)
                        .props
                        .get(&source.prop)
                        .is_some_and(|v| !v.is_null())
                })
                .count();
            (present, ids.len())
        }
        Elem::Edge => {
            let ids = s.edge_instances(g, &source.type_name);
            let present = ids
                .iter()
                .filter(|&&e| {
                    g.edge(e)
                        .props
                        .get(&source.prop)
                        .is_some_and(|v| !v.is_null())
                })
                .count();
            (present, ids.len())
        }
    };
    Ok(if total == 0 {
        0.0
    } else {
        present as f64 / total as f64
    })
}

fn distinct_values(col: &[Option<f64>]) -> usize {
    let mut bits: Vec<u64> = col.iter().flatten().map(|x| (x + 0.0).to_bits()).collect();
    bits.sort_unstable();
    bits.dedup();
    bits.len()
}

fn variance_ok(col: &[Option<f64>], instances: usize, cfg: &ValidationConfig) -> (bool, usize) {
    let d = distinct_values(col);
    let n = instances as f64;
    let ok = cfg.alpha_ratio * n <= d as f64 && d as f64 <= cfg.beta_ratio * n;
    (ok, d)
}

fn candidates_for(
    s: &GraphType,
    node_type: &str,
    cfg: &ValidationConfig,
) -> Result<Vec<Candidate>> {
    let ctx = compute_context(s, node_type)?;
    let paths = enumerate_indicator_paths(s, &ctx, cfg.max_len);
    Ok(derive_candidate_indicators(s, &paths, &cfg.op_dict))
}

fn evaluate_columns(
    g: &PropertyGraph,
    s: &GraphType,
    node_type: &str,
    indicators: &[&Indicator],
) -> Result<Vec<Vec<Option<f64>>>> {
    let rows = s.node_instances(g, node_type)?;
    indicators
        .par_iter()
        .map(|i| rows.iter().map(|&n| evaluate_indicator(g, n, i)).collect())
        .collect()
}

/// Every candidate indicator of `node_type`, evaluated, in canonical order.
pub fn candidate_matrix(
    g: &PropertyGraph,
    s: &GraphType,
    node_type: &str,
    cfg: &ValidationConfig,
) -> Result<(IndicatorMatrix, Vec<PropSource>)> {
    let cands = candidates_for(s, node_type, cfg)?;
    let refs: Vec<&Indicator> = cands.iter().map(|c| &c.indicator).collect();
    let columns = evaluate_columns(g, s, node_type, &refs)?;
    let rows = s.node_instances(g, node_type)?;
    let row_ids = rows.iter().map(|&n| g.node(n).id.clone()).collect();
    let m = IndicatorMatrix::from_columns(
        row_ids,
        cands.iter().map(|c| c.indicator.clone()).collect(),
        columns,
    );
    Ok((m, cands.into_iter().map(|c| c.source).collect()))
}

/// Collect, validate, scale and contextualize the indicators of `node_type`.
pub fn validate_indicators(
    g: &PropertyGraph,
    s: &GraphType,
    node_type: &str,
    cfg: &ValidationConfig,
    mode: Mode,
) -> Result<ValidationOutput> {
    cfg.check()?;
    let started = Instant::now();
    let candidates = candidates_for(s, node_type, cfg)?;
    let instances = s.node_instances(g, node_type)?;

    let mut density: BTreeMap<&PropSource, f64> = BTreeMap::new();
    for c in &candidates {
        if !density.contains_key(&c.source) {
            density.insert(&c.source, property_density(g, s, &c.source)?);
        }
    }
    let dense_enough = |c: &Candidate| density[&c.source] >= cfg.gamma_ratio;
    let discarded = |c: &Candidate| cfg.discard_props.contains(&c.source.prop);

    let to_evaluate: Vec<usize> = match mode {
        Mode::Lazy => (0..candidates.len()).collect(),
        Mode::Eager => (0..candidates.len())
            .filter(|&k| !discarded(&candidates[k]) && dense_enough(&candidates[k]))
            .collect(),
    };
    let refs: Vec<&Indicator> = to_evaluate
        .iter()
        .map(|&k| &candidates[k].indicator)
        .collect();
    let evaluated_cols = evaluate_columns(g, s, node_type, &refs)?;
    let mut columns: HashMap<usize, Vec<Option<f64>>> =
        to_evaluate.iter().copied().zip(evaluated_cols).collect();
    let candidate_secs = started.elapsed().as_secs_f64();

    let validation_started = Instant::now();
    let mut accepted: Vec<usize> = Vec::new();
    let mut entries = Vec::with_capacity(candidates.len());
    for (k, cand) in candidates.iter().enumerate() {
        let redundant_with = |col: &[Option<f64>], accepted: &[usize]| -> Option<(usize, f64)> {
            accepted.iter().find_map(|&a| {
                let r = pearson(col, &columns[&a]).ok()?;
                (r.abs() > cfg.corr_threshold).then_some((a, r))
            })
        };
        let density_detail = || format!("density {:.6}", density[&cand.source]);
        let (outcome, detail) = match mode {
            Mode::Eager if discarded(cand) => {
                (Outcome::Rejected(Reason::DiscardedProp), String::new())
            }
            _ if !dense_enough(cand) => (Outcome::Rejected(Reason::Density), density_detail()),
            _ => {
                let col = &columns[&k];
                if let Some((a, r)) = redundant_with(col, &accepted) {
                    let other = candidates[a].indicator.to_string();
                    (
                        Outcome::Rejected(Reason::Redundant(other.clone())),
                        format!("pearson {r:.6} with {other}"),
                    )
                } else if discarded(cand) {
                    (Outcome::Rejected(Reason::DiscardedProp), String::new())
                } else {
                    let (ok, d) = variance_ok(col, instances.len(), cfg);
                    if ok {
                        accepted.push(k);
                        (Outcome::Accepted, format!("{d} distinct values"))
                    } else {
                        (
                            Outcome::Rejected(Reason::Variance),
                            format!("{d} distinct values"),
                        )
                    }
                }
            }
        };
        entries.push(TraceEntry {
            indicator: cand.indicator.clone(),
            outcome,
            detail,
        });
    }

    if accepted.is_empty() {
        return Err(Error::NoIndicatorsSurvive);
    }

    let row_ids = instances.iter().map(|&n| g.node(n).id.clone()).collect();
    let mut matrix = IndicatorMatrix::from_columns(
        row_ids,
        accepted
            .iter()
            .map(|&k| candidates[k].indicator.clone())
            .collect(),
        accepted
            .iter()
            .map(|k| columns.remove(k).expect("accepted columns were evaluated"))
            .collect(),
    )
    .complete_rows();
    scale_and_attenuate(&mut matrix);

    Ok(ValidationOutput {
        matrix,
        trace: ValidationTrace { entries },
        stats: CollectionStats {
            candidates: candidates.len(),
            evaluated: refs.into_iter().cloned().collect(),
            candidate_secs,
            validation_secs: validation_started.elapsed().as_secs_f64(),
        },
    })
}

/// Percentile-scale each column over its non-null values, then multiply by
/// the path-length attenuation.
pub fn scale_and_attenuate(m: &mut IndicatorMatrix) {
    for c in 0..m.n_cols() {
        let col = m.column(c);
        let present: Vec<f64> = col.iter().flatten().copied().collect();
        let scaled = percentile_scale_all(&present);
        let factor = attenuation(m.indicators()[c].path.len());
        let mut it = scaled.into_iter();
        let out: Vec<Option<f64>> = col
            .iter()
            .map(|v| v.map(|_| it.next().expect("one scaled value per present cell") * factor))
            .collect();
        m.replace_column(c, &out);
        m.set_meta(
            c,
            ColumnMeta {
                scaled: true,
                attenuated: true,
            },
        );
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::graph::{compute_cardinalities, infer_graph_type, Props, Value};

    fn schema(g: &PropertyGraph) -> GraphType {
        compute_cardinalities(g, &infer_graph_type(g)).unwrap()
    }

    fn tabular(rows: &[(&str, &[(&str, Option<f64>)])]) -> PropertyGraph {
        let mut b = PropertyGraph::builder();
        for (id, cells) in rows {
            let props: Props = cells
                .iter()
                .map(|(k, v)| (k.to_string(), v.map_or(Value::Null, Value::Number)))
                .collect();
            b.add_node(id, "T", props).unwrap();
        }
        b.build().unwrap()
    }

    #[test]
    fn config_bounds() {
        assert!(ValidationConfig::default().check().is_ok());
        let bad = ValidationConfig {
            alpha_ratio: 0.5,
            beta_ratio: 0.2,
            ..Default::default()
        };
        assert!(bad.check().is_err());
        let bad = ValidationConfig {
            corr_threshold: 0.0,
            ..Default::default()
        };
        assert!(bad.check().is_err());
    }

    #[test]
    fn identifiers_are_discarded() {
        let g = fixtures::mini_airports();
        let s = schema(&g);
        let out = validate_indicators(&g, &s, "AIRPORT", &ValidationConfig::default(), Mode::Lazy)
            .unwrap();
        let id = out.trace.outcome_of("|identifier|node|id").unwrap();
        assert_eq!(id, &Outcome::Rejected(Reason::DiscardedProp));
    }

    #[test]
    fn duplicate_columns_are_redundant() {
        let g = tabular(&[
            ("a", &[("x", Some(1.0)), ("y", Some(1.0))]),
            ("b", &[("x", Some(2.0)), ("y", Some(2.0))]),
            ("c", &[("x", Some(5.0)), ("y", Some(5.0))]),
        ]);
        let s = schema(&g);
        let out =
            validate_indicators(&g, &s, "T", &ValidationConfig::default(), Mode::Lazy).unwrap();
        assert_eq!(out.trace.outcome_of("|x|node|id"), Some(&Outcome::Accepted));
        assert_eq!(
            out.trace.outcome_of("|y|node|id"),
            Some(&Outcome::Rejected(Reason::Redundant("|x|node|id".into())))
        );
    }

    #[test]
    fn full_density_rejects_sparse_props() {
        let g = tabular(&[
            ("a", &[("x", Some(1.0)), ("y", None)]),
            ("b", &[("x", Some(2.0)), ("y", Some(7.0))]),
            ("c", &[("x", Some(5.0)), ("y", Some(1.0))]),
        ]);
        let s = schema(&g);
        let cfg = ValidationConfig {
            gamma_ratio: 1.0,
            ..Default::default()
        };
        for mode in [Mode::Lazy, Mode::Eager] {
            let out = validate_indicators(&g, &s, "T", &cfg, mode).unwrap();
            assert_eq!(
                out.trace.outcome_of("|y|node|id"),
                Some(&Outcome::Rejected(Reason::Density))
            );
        }
    }

    #[test]
    fn nothing_survives() {
        let g = tabular(&[
            ("a", &[("identifier", Some(1.0))]),
            ("b", &[("identifier", Some(2.0))]),
        ]);
        let s = schema(&g);
        assert!(matches!(
            validate_indicators(&g, &s, "T", &ValidationConfig::default(), Mode::Eager),
            Err(Error::NoIndicatorsSurvive)
        ));
    }

    #[test]
    fn eager_skips_discarded_evaluations() {
        let g = fixtures::mini_airports();
        let s = schema(&g);
        let cfg = ValidationConfig::default();
        let lazy = validate_indicators(&g, &s, "AIRPORT", &cfg, Mode::Lazy).unwrap();
        let eager = validate_indicators(&g, &s, "AIRPORT", &cfg, Mode::Eager).unwrap();
        assert_eq!(lazy.matrix, eager.matrix);
        assert!(eager.stats.evaluated.len() < lazy.stats.evaluated.len());
        assert!(eager
            .stats
            .evaluated
            .iter()
            .all(|i| !cfg.discard_props.contains(&i.prop)));
    }

    #[test]
    fn output_is_scaled_and_attenuated() {
        let g = fixtures::mini_airports();
        let s = schema(&g);
        let cfg = ValidationConfig {
            gamma_ratio: 0.5,
            max_len: 1,
            ..Default::default()
        };
        let out = validate_indicators(&g, &s, "AIRPORT", &cfg, Mode::Lazy).unwrap();
        let m = &out.matrix;
        assert!(m.n_cols() > 0 && m.n_rows() > 0);
        for c in 0..m.n_cols() {
            let k = m.indicators()[c].path.len();
            let col: Vec<f64> = m.column(c).into_iter().flatten().collect();
            assert!(col.iter().all(|&v| v > 0.0 && v <= 1.0));
            let max = col.iter().copied().fold(0.0, f64::max);
            assert!((max * (1.0 + k as f64) - 1.0).abs() < 1e-12);
            assert!(m.meta()[c].scaled && m.meta()[c].attenuated);
        }
    }
}
