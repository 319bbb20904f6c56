//! Reference implementations used by the integration and acceptance tests.
//! Each one is written from the definitions, without calling the library
//! routine it checks.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::path::PathBuf;

use pgcompare::context::{Direction, Elem, Indicator, Op};
use pgcompare::graph::{EdgeId, NodeId, PropertyGraph, Value};
use pgcompare::io::{generate_synthetic_graph, read_config, SyntheticSpec};
use pgcompare::DenseMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

pub fn small_synth(seed: u64) -> PropertyGraph {
    let spec: SyntheticSpec = read_config(&fixture("small_synth.toml")).unwrap();
    generate_synthetic_graph(&spec, seed).unwrap()
}

pub fn rel_eq(a: f64, b: f64, tol: f64) -> bool {
    a == b || (a - b).abs() <= tol * a.abs().max(b.abs())
}

/// Edge lists keyed by (node, label, direction), built by scanning every edge.
pub struct Walker<'g> {
    g: &'g PropertyGraph,
    index: HashMap<(NodeId, String, Direction), Vec<EdgeId>>,
}

impl<'g> Walker<'g> {
    pub fn new(g: &'g PropertyGraph) -> Self {
        let mut index: HashMap<(NodeId, String, Direction), Vec<EdgeId>> = HashMap::new();
        for (id, e) in g.edges() {
            index
                .entry((e.src, e.label.clone(), Direction::Forward))
                .or_default()
                .push(id);
            index
                .entry((e.tgt, e.label.clone(), Direction::Reverse))
                .or_default()
                .push(id);
        }
        Walker { g, index }
    }

    /// Every walk from `at` following `steps`, as (end node, last edge).
    fn walks(
        &self,
        at: NodeId,
        steps: &[(String, Direction)],
        last: Option<EdgeId>,
        out: &mut Vec<(NodeId, Option<EdgeId>)>,
    ) {
        let Some(((label, dir), rest)) = steps.split_first() else {
            out.push((at, last));
            return;
        };
        let Some(edges) = self.index.get(&(at, label.clone(), *dir)) else {
            return;
        };
        for &eid in edges {
            let e = self.g.edge(eid);
            let far = if *dir == Direction::Forward {
                e.tgt
            } else {
                e.src
            };
            self.walks(far, rest, Some(eid), out);
        }
    }

    /// Indicator value by re-walking the instance graph.
    pub fn value(&self, n: NodeId, i: &Indicator) -> Option<f64> {
        let steps: Vec<(String, Direction)> = i
            .path
            .steps()
            .iter()
            .map(|s| (s.label.clone(), s.direction))
            .collect();
        let mut ends = Vec::new();
        self.walks(n, &steps, None, &mut ends);
        if ends.is_empty() {
            return None;
        }
        let mut values: Vec<&Value> = Vec::new();
        match i.elem {
            Elem::Node => {
                let nodes: BTreeSet<NodeId> = ends.iter().map(|(n, _)| *n).collect();
                for n in nodes {
                    values.extend(self.g.node(n).props.get(&i.prop));
                }
            }
            Elem::Edge => {
                let edges: BTreeSet<EdgeId> = ends.iter().filter_map(|(_, e)| *e).collect();
                for e in edges {
                    values.extend(self.g.edge(e).props.get(&i.prop));
                }
            }
        }
        values.retain(|v| !matches!(v, Value::Null));
        if values.is_empty() {
            return None;
        }
        if i.op == Op::Count {
            let mut distinct: Vec<&Value> = Vec::new();
            for v in values {
                if !distinct.contains(&v) {
                    distinct.push(v);
                }
            }
            return Some(distinct.len() as f64);
        }
        let xs: Vec<f64> = values
            .iter()
            .map(|v| match v {
                Value::Number(x) => *x,
                other => panic!("non-numeric value {other:?} under {i}"),
            })
            .collect();
        Some(match i.op {
            Op::Id => {
                assert_eq!(xs.len(), 1, "{i} is single-valued");
                xs[0]
            }
            Op::Sum => xs.iter().sum(),
            Op::Avg => xs.iter().sum::<f64>() / xs.len() as f64,
            Op::Min => xs.iter().copied().fold(f64::INFINITY, f64::min),
            Op::Max => xs.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            Op::Count => unreachable!(),
        })
    }

    /// Raw column of `i` over `rows`.
    pub fn column(&self, rows: &[NodeId], i: &Indicator) -> Vec<Option<f64>> {
        rows.iter().map(|&n| self.value(n, i)).collect()
    }
}

pub fn nodes_labelled(g: &PropertyGraph, label: &str) -> Vec<NodeId> {
    g.nodes()
        .filter(|(_, n)| n.label == label)
        .map(|(id, _)| id)
        .collect()
}

/// `(ONE/MANY at source, ONE/MANY at target)` for every edge label, by
/// counting edges per endpoint.
pub fn cardinality_by_counting(g: &PropertyGraph) -> BTreeMap<String, (bool, bool)> {
    let mut out_deg: BTreeMap<(String, NodeId), usize> = BTreeMap::new();
    let mut in_deg: BTreeMap<(String, NodeId), usize> = BTreeMap::new();
    for (_, e) in g.edges() {
        *out_deg.entry((e.label.clone(), e.src)).or_default() += 1;
        *in_deg.entry((e.label.clone(), e.tgt)).or_default() += 1;
    }
    let mut out: BTreeMap<String, (bool, bool)> = BTreeMap::new();
    for (_, e) in g.edges() {
        out.entry(e.label.clone()).or_insert((false, false));
    }
    for ((l, _), d) in out_deg {
        if d > 1 {
            out.get_mut(&l).unwrap().0 = true;
        }
    }
    for ((l, _), d) in in_deg {
        if d > 1 {
            out.get_mut(&l).unwrap().1 = true;
        }
    }
    out
}

/// Textbook Pearson over rows where both values are present; `None` with
/// fewer than two such rows, 0 when either side is constant.
pub fn pearson_ref(u: &[Option<f64>], v: &[Option<f64>]) -> Option<f64> {
    let pairs: Vec<(f64, f64)> = u
        .iter()
        .zip(v)
        .filter_map(|(a, b)| Some(((*a)?, (*b)?)))
        .collect();
    if pairs.len() < 2 {
        return None;
    }
    let n = pairs.len() as f64;
    let mu = pairs.iter().map(|p| p.0).sum::<f64>() / n;
    let mv = pairs.iter().map(|p| p.1).sum::<f64>() / n;
    let cov: f64 = pairs.iter().map(|p| (p.0 - mu) * (p.1 - mv)).sum();
    let su: f64 = pairs.iter().map(|p| (p.0 - mu).powi(2)).sum();
    let sv: f64 = pairs.iter().map(|p| (p.1 - mv).powi(2)).sum();
    if su == 0.0 || sv == 0.0 {
        return Some(0.0);
    }
    Some(cov / (su * sv).sqrt())
}

pub fn distinct_count(col: &[Option<f64>]) -> usize {
    let mut seen: Vec<f64> = Vec::new();
    for x in col.iter().flatten() {
        if !seen.contains(x) {
            seen.push(*x);
        }
    }
    seen.len()
}

/// Label of the element type that carries the property read by `i`.
pub fn source_label(g: &PropertyGraph, root: &str, i: &Indicator) -> String {
    let Some(last) = i.path.steps().last() else {
        return root.to_owned();
    };
    let (_, e) = g
        .edges()
        .find(|(_, e)| e.label == last.label)
        .expect("label has instances");
    match (i.elem, last.direction) {
        (Elem::Edge, _) => last.label.clone(),
        (Elem::Node, Direction::Forward) => g.node(e.tgt).label.clone(),
        (Elem::Node, Direction::Reverse) => g.node(e.src).label.clone(),
    }
}

/// Share of the elements labelled like `i`'s source that carry a non-null
/// value of its property.
pub fn density_ref(g: &PropertyGraph, root: &str, i: &Indicator) -> f64 {
    let label = source_label(g, root, i);
    let present = |v: Option<&Value>| v.is_some_and(|v| !matches!(v, Value::Null));
    let (have, total) = match i.elem {
        Elem::Node => g
            .nodes()
            .filter(|(_, n)| n.label == label)
            .fold((0, 0), |(h, t), (_, n)| {
                (h + present(n.props.get(&i.prop)) as usize, t + 1)
            }),
        Elem::Edge => g
            .edges()
            .filter(|(_, e)| e.label == label)
            .fold((0, 0), |(h, t), (_, e)| {
                (h + present(e.props.get(&i.prop)) as usize, t + 1)
            }),
    };
    if total == 0 {
        0.0
    } else {
        have as f64 / total as f64
    }
}

/// Objective value from scratch: per cluster, over unordered pairs, the
/// weighted comparison differences minus the weighted grouping distances,
/// divided by the cluster size.
pub fn objective_ref(
    m: &DenseMatrix,
    compare: &[usize],
    group: &[usize],
    clusters: &[Vec<usize>],
) -> f64 {
    let p = m.n_cols() as f64;
    let w_s = compare.len() as f64 / p;
    let w_d = 1.0 - group.len() as f64 / p;
    let mut total = 0.0;
    for c in clusters {
        let mut sig = 0.0;
        let mut dist = 0.0;
        for (x, &a) in c.iter().enumerate() {
            for &b in &c[x + 1..] {
                for &i in compare {
                    sig += (m.get(a, i) - m.get(b, i)).abs();
                }
                for &i in group {
                    dist += (m.get(a, i) - m.get(b, i)).powi(2);
                }
            }
        }
        total += (w_s * sig - w_d * dist) / c.len() as f64;
    }
    total
}

/// Rows drawn around `centers` blob centres with Gaussian-ish noise on the
/// first `informative` columns and uniform noise on the rest.
pub fn toy_matrix(
    rows: usize,
    cols: usize,
    informative: usize,
    centers: usize,
    seed: u64,
) -> DenseMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let centre: Vec<Vec<f64>> = (0..centers)
        .map(|_| {
            (0..informative)
                .map(|_| rng.random_range(0.1..0.9))
                .collect()
        })
        .collect();
    let data: Vec<Vec<f64>> = (0..rows)
        .map(|r| {
            let c = &centre[r % centers];
            (0..cols)
                .map(|j| {
                    if j < informative {
                        (c[j] + rng.random_range(-0.05..0.05)).clamp(0.01, 1.0)
                    } else {
                        rng.random_range(0.01..1.0)
                    }
                })
                .collect()
        })
        .collect();
    DenseMatrix::from_rows(&data)
}
