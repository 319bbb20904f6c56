use std::collections::{BTreeMap, BTreeSet, HashSet};

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution as _, LogNormal, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{
    Cardinality, EdgeType, FormalBaseType, GraphType, NodeType, PropKind, PropertyGraph, Props,
    Value,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "dist", rename_all = "lowercase")]
pub enum Distribution {
    Uniform {
        low: f64,
        high: f64,
    },
    Normal {
        mean: f64,
        sd: f64,
    },
    LogNormal {
        mu: f64,
        sigma: f64,
    },
    /// Uniform integers in `[low, high]`.
    Integer {
        low: i64,
        high: i64,
    },
    /// `start`, `start + 1`, ... in generation order.
    Sequence {
        start: i64,
    },
    Category {
        values: Vec<String>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropSpec {
    #[serde(flatten)]
    pub dist: Distribution,
    #[serde(default)]
    pub null_rate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeSpec {
    pub label: String,
    pub count: usize,
    #[serde(default)]
    pub props: BTreeMap<String, PropSpec>,
}

fn full() -> f64 {
    1.0
}

fn three() -> usize {
    3
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeSpec {
    pub label: String,
    pub src: String,
    pub tgt: String,
    pub card_src: Cardinality,
    pub card_tgt: Cardinality,
    /// Fraction of the driving endpoint's nodes that get edges.
    #[serde(default = "full")]
    pub coverage: f64,
    /// Upper bound on the out-degree of sources when both ends are `*`.
    #[serde(default = "three")]
    pub max_degree: usize,
    #[serde(default)]
    pub props: BTreeMap<String, PropSpec>,
}

/// Node and edge types with instance counts, cardinality classes and
/// property distributions.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SyntheticSpec {
    #[serde(default)]
    pub nodes: Vec<NodeSpec>,
    #[serde(default)]
    pub edges: Vec<EdgeSpec>,
}

fn inconsistent(msg: String) -> Error {
    Error::InconsistentSpec(msg)
}

fn check_props(owner: &str, props: &BTreeMap<String, PropSpec>) -> Result<()> {
    for (name, p) in props {
        let what = format!("{owner}.{name}");
        if !(0.0..=1.0).contains(&p.null_rate) {
            return Err(inconsistent(format!("{what}: null_rate outside [0, 1]")));
        }
        let ok = match &p.dist {
            Distribution::Uniform { low, high } => low <= high,
            Distribution::Normal { sd, .. } => *sd >= 0.0,
            Distribution::LogNormal { sigma, .. } => *sigma >= 0.0,
            Distribution::Integer { low, high } => low <= high,
            Distribution::Sequence { .. } => true,
            Distribution::Category { values } => !values.is_empty(),
        };
        if !ok {
            return Err(inconsistent(format!(
                "{what}: invalid distribution parameters"
            )));
        }
    }
    Ok(())
}

impl SyntheticSpec {
    pub fn check(&self) -> Result<()> {
        let mut labels = HashSet::new();
        for n in &self.nodes {
            if !labels.insert(n.label.as_str()) {
                return Err(inconsistent(format!(
                    "node label {} declared twice",
                    n.label
                )));
            }
            check_props(&n.label, &n.props)?;
        }
        let mut edge_labels = HashSet::new();
        for e in &self.edges {
            if !edge_labels.insert(e.label.as_str()) {
                return Err(inconsistent(format!(
                    "edge label {} declared twice",
                    e.label
                )));
            }
            for end in [&e.src, &e.tgt] {
                if !labels.contains(end.as_str()) {
                    return Err(inconsistent(format!(
                        "edge {} references undeclared node type {end}",
                        e.label
                    )));
                }
            }
            if !(0.0..=1.0).contains(&e.coverage) {
                return Err(inconsistent(format!(
                    "edge {}: coverage outside [0, 1]",
                    e.label
                )));
            }
            let (ns, nt) = (self.count(&e.src), self.count(&e.tgt));
            if ns > 0 && nt > 0 && e.coverage > 0.0 {
                let many = |c: Cardinality| c == Cardinality::Many;
                let (needs_src, needs_tgt) = match (e.card_src, e.card_tgt) {
                    (Cardinality::One, Cardinality::One) => (1, 1),
                    (Cardinality::One, Cardinality::Many) => (2, 1),
                    (Cardinality::Many, Cardinality::One) => (1, 2),
                    (Cardinality::Many, Cardinality::Many) => (2, 2),
                };
                if ns < needs_src || nt < needs_tgt {
                    return Err(inconsistent(format!(
                        "edge {}: {} sources and {} targets cannot realise {}:{}",
                        e.label, ns, nt, e.card_src, e.card_tgt
                    )));
                }
                if many(e.card_src) && many(e.card_tgt) && e.max_degree < 2 {
                    return Err(inconsistent(format!(
                        "edge {}: max_degree must be at least 2",
                        e.label
                    )));
                }
            }
            check_props(&e.label, &e.props)?;
        }
        Ok(())
    }

    fn count(&self, label: &str) -> usize {
        self.nodes
            .iter()
            .find(|n| n.label == label)
            .map_or(0, |n| n.count)
    }

    fn realised(&self, e: &EdgeSpec) -> bool {
        self.count(&e.src) > 0 && self.count(&e.tgt) > 0 && e.coverage > 0.0
    }

    /// The graph type a generated graph is expected to have.
    pub fn declared_graph_type(&self) -> GraphType {
        let kinds = |props: &BTreeMap<String, PropSpec>| -> BTreeMap<String, PropKind> {
            props
                .iter()
                .map(|(k, p)| {
                    let kind = match (&p.dist, p.null_rate >= 1.0) {
                        (_, true) => PropKind::Null,
                        (Distribution::Category { .. }, _) => PropKind::Text,
                        _ => PropKind::Number,
                    };
                    (k.clone(), kind)
                })
                .collect()
        };
        let base = |label: &str, props: &BTreeMap<String, PropSpec>| FormalBaseType {
            label: label.to_owned(),
            props: props.keys().cloned().collect::<BTreeSet<_>>(),
        };
        let node_types: BTreeMap<String, NodeType> = self
            .nodes
            .iter()
            .filter(|n| n.count > 0)
            .map(|n| {
                (
                    n.label.clone(),
                    NodeType {
                        base: base(&n.label, &n.props),
                        prop_kinds: kinds(&n.props),
                    },
                )
            })
            .collect();
        let mut edge_types = BTreeMap::new();
        for e in self.edges.iter().filter(|e| self.realised(e)) {
            let mut name = e.label.clone();
            while node_types.contains_key(&name) {
                name.push_str("_REL");
            }
            edge_types.insert(
                name,
                EdgeType {
                    base: base(&e.label, &e.props),
                    src: e.src.clone(),
                    tgt: e.tgt.clone(),
                    card_src: e.card_src,
                    card_tgt: e.card_tgt,
                    prop_kinds: kinds(&e.props),
                },
            );
        }
        GraphType {
            node_types,
            edge_types,
            cardinalities_computed: true,
        }
    }
}

fn draw_props(rng: &mut ChaCha8Rng, props: &BTreeMap<String, PropSpec>, index: usize) -> Props {
    props
        .iter()
        .map(|(name, p)| {
            let null = rng.random::<f64>() < p.null_rate;
            let v = match &p.dist {
                Distribution::Uniform { low, high } => {
                    Value::Number(low + (high - low) * rng.random::<f64>())
                }
                Distribution::Normal { mean, sd } => {
                    Value::Number(Normal::new(*mean, *sd).expect("checked sd").sample(rng))
                }
                Distribution::LogNormal { mu, sigma } => Value::Number(
                    LogNormal::new(*mu, *sigma)
                        .expect("checked sigma")
                        .sample(rng),
                ),
                Distribution::Integer { low, high } => {
                    Value::Number(rng.random_range(*low..=*high) as f64)
                }
                Distribution::Sequence { start } => Value::Number((start + index as i64) as f64),
                Distribution::Category { values } => {
                    Value::Text(values[rng.random_range(0..values.len())].clone())
                }
            };
            (name.clone(), if null { Value::Null } else { v })
        })
        .collect()
}

fn covered(n: usize, coverage: f64, at_least: usize) -> usize {
    ((n as f64 * coverage).round() as usize).clamp(at_least.min(n), n)
}

/// Endpoint index pairs realising the requested cardinality classes.
fn edge_pairs(rng: &mut ChaCha8Rng, e: &EdgeSpec, ns: usize, nt: usize) -> Vec<(usize, usize)> {
    use Cardinality::{Many, One};
    let pick = |rng: &mut ChaCha8Rng, n: usize, k: usize| -> Vec<usize> {
        let mut v = sample(rng, n, k).into_vec();
        v.sort_unstable();
        v
    };
    match (e.card_src, e.card_tgt) {
        (One, One) => {
            let k = covered(ns.min(nt), e.coverage, 1);
            let src = pick(rng, ns, k);
            let tgt = sample(rng, nt, k).into_vec();
            src.into_iter().zip(tgt).collect()
        }
        (One, Many) => {
            let src = pick(rng, ns, covered(ns, e.coverage, 2));
            let mut tgt: Vec<usize> = src.iter().map(|_| rng.random_range(0..nt)).collect();
            if tgt.iter().collect::<HashSet<_>>().len() == tgt.len() {
                tgt[1] = tgt[0];
            }
            src.into_iter().zip(tgt).collect()
        }
        (Many, One) => {
            let tgt = pick(rng, nt, covered(nt, e.coverage, 2));
            let mut src: Vec<usize> = tgt.iter().map(|_| rng.random_range(0..ns)).collect();
            if src.iter().collect::<HashSet<_>>().len() == src.len() {
                src[1] = src[0];
            }
            src.into_iter().zip(tgt).collect()
        }
        (Many, Many) => {
            let sources = pick(rng, ns, covered(ns, e.coverage, 2));
            let max_deg = e.max_degree.min(nt);
            let mut pairs = Vec::new();
            let mut first_target = None;
            for (x, &s) in sources.iter().enumerate() {
                let lo = if x == 0 { 2 } else { 1 };
                let d = rng.random_range(lo..=max_deg);
                let mut targets = sample(rng, nt, d).into_vec();
                targets.sort_unstable();
                match (x, first_target) {
                    (0, _) => first_target = Some(targets[0]),
                    (1, Some(t)) if !targets.contains(&t) => targets[0] = t,
                    _ => {}
                }
                pairs.extend(targets.into_iter().map(|t| (s, t)));
            }
            pairs
        }
    }
}

/// Generate a graph from `spec`; identical seeds give identical graphs.
///
/// Node ids are `<label>:<index>`, edge ids `<label>/<index>`.
pub fn generate_synthetic_graph(spec: &SyntheticSpec, seed: u64) -> Result<PropertyGraph> {
    spec.check()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut b = PropertyGraph::builder();
    for n in &spec.nodes {
        for i in 0..n.count {
            let props = draw_props(&mut rng, &n.props, i);
            b.add_node(&format!("{}:{i}", n.label), &n.label, props)?;
        }
    }
    for e in &spec.edges {
        if !spec.realised(e) {
            continue;
        }
        let pairs = edge_pairs(&mut rng, e, spec.count(&e.src), spec.count(&e.tgt));
        for (i, (s, t)) in pairs.into_iter().enumerate() {
            let props = draw_props(&mut rng, &e.props, i);
            b.add_edge(
                &format!("{}/{i}", e.label),
                &e.label,
                &format!("{}:{s}", e.src),
                &format!("{}:{t}", e.tgt),
                props,
            )?;
        }
    }
    b.build()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{compute_cardinalities, infer_graph_type};

    fn spec() -> SyntheticSpec {
        toml::from_str(
            r#"
            [[nodes]]
            label = "A"
            count = 30
            props.identifier = { dist = "sequence", start = 1 }
            props.x = { dist = "normal", mean = 5.0, sd = 1.0, null_rate = 0.1 }

            [[nodes]]
            label = "B"
            count = 6
            props.kind = { dist = "category", values = ["p", "q"] }

            [[edges]]
            label = "IN"
            src = "A"
            tgt = "B"
            card_src = "1"
            card_tgt = "*"

            [[edges]]
            label = "LINK"
            src = "A"
            tgt = "A"
            card_src = "*"
            card_tgt = "*"
            props.w = { dist = "uniform", low = 0.0, high = 1.0 }
            "#,
        )
        .unwrap()
    }

    #[test]
    fn inferred_schema_matches_declaration() {
        let s = spec();
        let g = generate_synthetic_graph(&s, 7).unwrap();
        let inferred = compute_cardinalities(&g, &infer_graph_type(&g)).unwrap();
        assert_eq!(inferred, s.declared_graph_type());
    }

    #[test]
    fn deterministic() {
        let s = spec();
        assert_eq!(
            generate_synthetic_graph(&s, 3).unwrap(),
            generate_synthetic_graph(&s, 3).unwrap()
        );
        assert_ne!(
            generate_synthetic_graph(&s, 3).unwrap(),
            generate_synthetic_graph(&s, 4).unwrap()
        );
    }

    #[test]
    fn empty_and_inconsistent() {
        let g = generate_synthetic_graph(&SyntheticSpec::default(), 0).unwrap();
        assert_eq!((g.node_count(), g.edge_count()), (0, 0));
        let mut s = spec();
        s.edges[0].tgt = "C".into();
        assert!(matches!(
            generate_synthetic_graph(&s, 0),
            Err(Error::InconsistentSpec(_))
        ));
        let mut s = spec();
        s.nodes[1].count = 1;
        s.edges[0].card_tgt = Cardinality::One;
        s.edges[0].card_src = Cardinality::Many;
        assert!(matches!(
            generate_synthetic_graph(&s, 0),
            Err(Error::InconsistentSpec(_))
        ));
    }
}
