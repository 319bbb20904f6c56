use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::path::{Direction, Hierarchy, PathLabel, TypePath};
use crate::error::{Error, Result};
use crate::graph::{EdgeId, GraphType, NodeId, PropertyGraph, Value};
use crate::matrix::IndicatorMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Elem {
    Node,
    Edge,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Op {
    Id,
    Sum,
    Avg,
    Min,
    Max,
    Count,
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Elem::Node => "node",
            Elem::Edge => "edge",
        })
    }
}

impl fmt::Display for Op {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Op::Id => "id",
            Op::Sum => "sum",
            Op::Avg => "avg",
            Op::Min => "min",
            Op::Max => "max",
            Op::Count => "count",
        })
    }
}

impl FromStr for Op {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "id" => Op::Id,
            "sum" => Op::Sum,
            "avg" => Op::Avg,
            "min" => Op::Min,
            "max" => Op::Max,
            "count" => Op::Count,
            _ => return Err(Error::Parse(format!("unknown operator `{s}`"))),
        })
    }
}

/// Aggregation operators allowed per property name for multi-valued paths.
pub type OpDict = BTreeMap<String, BTreeSet<Op>>;

/// An indicator name: path label, property, element kind and operator.
///
/// Ordering is the canonical candidate order: shorter paths first, then
/// path label, property, element kind and operator.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Indicator {
    pub path: PathLabel,
    pub prop: String,
    pub elem: Elem,
    pub op: Op,
}

impl Indicator {
    fn sort_key(&self) -> (usize, String, &str, Elem, Op) {
        (
            self.path.len(),
            self.path.to_string(),
            &self.prop,
            self.elem,
            self.op,
        )
    }
}

impl Ord for Indicator {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl PartialOrd for Indicator {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Indicator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}|{}|{}|{}", self.path, self.prop, self.elem, self.op)
    }
}

impl FromStr for Indicator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("malformed indicator label `{s}`"));
        let parts: Vec<&str> = s.split('|').collect();
        let [path, prop, elem, op] = parts[..] else {
            return Err(bad());
        };
        let path = PathLabel::parse(path).ok_or_else(bad)?;
        let elem = match elem {
            "node" => Elem::Node,
            "edge" => Elem::Edge,
            _ => return Err(bad()),
        };
        if prop.is_empty() || (elem == Elem::Edge && path.is_empty()) {
            return Err(bad());
        }
        Ok(Indicator {
            path,
            prop: prop.to_owned(),
            elem,
            op: op.parse()?,
        })
    }
}

/// The schema element a candidate's property is read from.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PropSource {
    pub elem: Elem,
    pub type_name: String,
    pub prop: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Candidate {
    pub indicator: Indicator,
    pub source: PropSource,
}

fn ops_for(path: &TypePath, prop: &str, numeric: bool, op_dict: &OpDict) -> Vec<Op> {
    if path.hierarchy == Hierarchy::Card1 {
        return if numeric { vec![Op::Id] } else { Vec::new() };
    }
    let configured = match op_dict.get(prop) {
        Some(ops) => ops.iter().copied().filter(|&op| op != Op::Id).collect(),
        None => vec![Op::Sum, Op::Count],
    };
    configured
        .into_iter()
        .filter(|&op| numeric || op == Op::Count)
        .collect()
}

/// Candidate indicators for `paths`, in canonical order.
///
/// Single-valued paths (cardinality-1 or empty) yield `id` over numeric
/// properties; multi-valued paths yield the operators from `op_dict`
/// (default `sum` and `count`), with only `count` admitted for non-numeric
/// properties.
pub fn derive_candidate_indicators(
    s: &GraphType,
    paths: &[TypePath],
    op_dict: &OpDict,
) -> Vec<Candidate> {
    let mut out: BTreeMap<Indicator, PropSource> = BTreeMap::new();
    for path in paths {
        let label = path.label(s);
        let terminal = &s.node_types[&path.terminal];
        for prop in &terminal.base.props {
            for op in ops_for(path, prop, terminal.is_numeric(prop), op_dict) {
                out.entry(Indicator {
                    path: label.clone(),
                    prop: prop.clone(),
                    elem: Elem::Node,
                    op,
                })
                .or_insert_with(|| PropSource {
                    elem: Elem::Node,
                    type_name: path.terminal.clone(),
                    prop: prop.clone(),
                });
            }
        }
        if let Some(last) = path.steps.last() {
            let edge = &s.edge_types[&last.edge_type];
            for prop in &edge.base.props {
                for op in ops_for(path, prop, edge.is_numeric(prop), op_dict) {
                    out.entry(Indicator {
                        path: label.clone(),
                        prop: prop.clone(),
                        elem: Elem::Edge,
                        op,
                    })
                    .or_insert_with(|| PropSource {
                        elem: Elem::Edge,
                        type_name: last.edge_type.clone(),
                        prop: prop.clone(),
                    });
                }
            }
        }
    }
    out.into_iter()
        .map(|(indicator, source)| Candidate { indicator, source })
        .collect()
}

/// Like [`derive_candidate_indicators`], keeping only candidates whose
/// property source passes `keep`.
pub fn derive_candidates_filtered(
    s: &GraphType,
    paths: &[TypePath],
    op_dict: &OpDict,
    keep: impl Fn(&PropSource) -> bool,
) -> Vec<Candidate> {
    derive_candidate_indicators(s, paths, op_dict)
        .into_iter()
        .filter(|c| keep(&c.source))
        .collect()
}

/// Nodes reached from `start` along `path`, and the edges used by the last step.
fn reach(g: &PropertyGraph, start: NodeId, path: &PathLabel) -> (Vec<NodeId>, Vec<EdgeId>) {
    let mut frontier = vec![start];
    let mut last_edges = Vec::new();
    for (i, step) in path.steps().iter().enumerate() {
        let is_last = i + 1 == path.len();
        let mut seen_nodes = HashSet::new();
        let mut seen_edges = HashSet::new();
        let mut next = Vec::new();
        for &n in &frontier {
            let incident = match step.direction {
                Direction::Forward => g.out_edges(n),
                Direction::Reverse => g.in_edges(n),
            };
            for &eid in incident {
                let e = g.edge(eid);
                if e.label != step.label {
                    continue;
                }
                let far = match step.direction {
                    Direction::Forward => e.tgt,
                    Direction::Reverse => e.src,
                };
                if seen_nodes.insert(far) {
                    next.push(far);
                }
                if is_last && seen_edges.insert(eid) {
                    last_edges.push(eid);
                }
            }
        }
        frontier = next;
        if frontier.is_empty() {
            break;
        }
    }
    (frontier, last_edges)
}

fn numbers(values: &[&Value], i: &Indicator) -> Result<Vec<f64>> {
    values
        .iter()
        .map(|v| {
            v.as_number().ok_or_else(|| Error::TypeMismatch {
                indicator: i.to_string(),
                reason: format!("non-numeric value `{v}` under `{}`", i.op),
            })
        })
        .collect()
}

fn distinct_count(values: &[&Value]) -> usize {
    let mut seen: HashSet<String> = HashSet::new();
    for v in values {
        let key = match v {
            // Normalize -0.0 so it counts as 0.0.
            Value::Number(x) => format!("n{}", (x + 0.0).to_bits()),
            Value::Text(s) => format!("t{s}"),
            Value::Bool(b) => format!("b{b}"),
            Value::Null => continue,
        };
        seen.insert(key);
    }
    seen.len()
}

/// Value of indicator `i` for node `n`.
///
/// `None` when the path reaches nothing or every collected value is null.
pub fn evaluate_indicator(g: &PropertyGraph, n: NodeId, i: &Indicator) -> Result<Option<f64>> {
    let (nodes, edges) = reach(g, n, &i.path);
    if nodes.is_empty() {
        return Ok(None);
    }
    let values: Vec<&Value> = match i.elem {
        Elem::Node => nodes
            .iter()
            .filter_map(|&id| g.node(id).props.get(&i.prop))
            .filter(|v| !v.is_null())
            .collect(),
        Elem::Edge => edges
            .iter()
            .filter_map(|&id| g.edge(id).props.get(&i.prop))
            .filter(|v| !v.is_null())
            .collect(),
    };
    if values.is_empty() {
        return Ok(None);
    }
    let out = match i.op {
        Op::Count => distinct_count(&values) as f64,
        Op::Id => {
            if values.len() > 1 {
                return Err(Error::TypeMismatch {
                    indicator: i.to_string(),
                    reason: format!("`id` over {} values", values.len()),
                });
            }
            numbers(&values, i)?[0]
        }
        Op::Sum => numbers(&values, i)?.iter().sum(),
        Op::Avg => {
            let xs = numbers(&values, i)?;
            xs.iter().sum::<f64>() / xs.len() as f64
        }
        Op::Min => numbers(&values, i)?
            .into_iter()
            .fold(f64::INFINITY, f64::min),
        Op::Max => numbers(&values, i)?
            .into_iter()
            .fold(f64::NEG_INFINITY, f64::max),
    };
    Ok(Some(out))
}

/// Evaluate `indicators` for every instance of `node_type`.
pub fn build_indicator_matrix(
    g: &PropertyGraph,
    s: &GraphType,
    node_type: &str,
    indicators: &[Indicator],
) -> Result<IndicatorMatrix> {
    let rows = s.node_instances(g, node_type)?;
    let columns: Vec<Vec<Option<f64>>> = indicators
        .par_iter()
        .map(|i| rows.iter().map(|&n| evaluate_indicator(g, n, i)).collect())
        .collect::<Result<_>>()?;
    let row_ids = rows.iter().map(|&n| g.node(n).id.clone()).collect();
    Ok(IndicatorMatrix::from_columns(
        row_ids,
        indicators.to_vec(),
        columns,
    ))
}
