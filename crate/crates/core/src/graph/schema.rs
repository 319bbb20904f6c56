//! Graph types: inference from an instance, instance checking and
//! relationship cardinalities.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{Edge, EdgeId, Node, NodeId, PropertyGraph, Props, Value};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Cardinality {
    #[serde(rename = "1")]
    One,
    #[serde(rename = "*")]
    Many,
}

impl fmt::Display for Cardinality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            Cardinality::One => "1",
            Cardinality::Many => "*",
        })
    }
}

/// Observed kind of the non-null values of a property.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PropKind {
    Number,
    Text,
    Bool,
    Mixed,
    /// Only nulls were observed.
    Null,
}

impl PropKind {
    fn of(v: &Value) -> PropKind {
        match v {
            Value::Null => PropKind::Null,
            Value::Bool(_) => PropKind::Bool,
            Value::Number(_) => PropKind::Number,
            Value::Text(_) => PropKind::Text,
        }
    }

    fn merge(self, other: PropKind) -> PropKind {
        match (self, other) {
            (PropKind::Null, k) | (k, PropKind::Null) => k,
            (a, b) if a == b => a,
            _ => PropKind::Mixed,
        }
    }

    pub fn is_numeric(self) -> bool {
        self == PropKind::Number
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormalBaseType {
    pub label: String,
    pub props: BTreeSet<String>,
}

impl FormalBaseType {
    /// Element validity: same label and property names contained in the type's.
    pub fn admits(&self, label: &str, props: &Props) -> bool {
        self.label == label && props.keys().all(|k| self.props.contains(k))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeType {
    pub base: FormalBaseType,
    #[serde(default)]
    pub prop_kinds: BTreeMap<String, PropKind>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeType {
    pub base: FormalBaseType,
    pub src: String,
    pub tgt: String,
    pub card_src: Cardinality,
    pub card_tgt: Cardinality,
    #[serde(default)]
    pub prop_kinds: BTreeMap<String, PropKind>,
}

impl NodeType {
    pub fn is_numeric(&self, prop: &str) -> bool {
        self.prop_kinds.get(prop).is_some_and(|k| k.is_numeric())
    }
}

impl EdgeType {
    pub fn is_numeric(&self, prop: &str) -> bool {
        self.prop_kinds.get(prop).is_some_and(|k| k.is_numeric())
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct GraphType {
    pub node_types: BTreeMap<String, NodeType>,
    pub edge_types: BTreeMap<String, EdgeType>,
    #[serde(default)]
    pub cardinalities_computed: bool,
}

impl GraphType {
    pub fn node_type(&self, name: &str) -> Result<&NodeType> {
        self.node_types
            .get(name)
            .ok_or_else(|| Error::UnknownNodeType(name.to_owned()))
    }

    /// Nodes of `g` that are instances of the node type `name`, in graph order.
    pub fn node_instances(&self, g: &PropertyGraph, name: &str) -> Result<Vec<NodeId>> {
        let t = self.node_type(name)?;
        Ok(g.nodes()
            .filter(|(_, n)| t.base.admits(&n.label, &n.props))
            .map(|(id, _)| id)
            .collect())
    }

    /// Edges of `g` that are instances of the edge type `name`, in graph order.
    pub fn edge_instances(&self, g: &PropertyGraph, name: &str) -> Vec<EdgeId> {
        match self.edge_types.get(name) {
            Some(t) => g
                .edges()
                .filter(|(_, e)| t.base.admits(&e.label, &e.props))
                .map(|(id, _)| id)
                .collect(),
            None => Vec::new(),
        }
    }
}

fn observe(kinds: &mut BTreeMap<String, PropKind>, props: &Props) {
    for (k, v) in props {
        let kind = PropKind::of(v);
        kinds
            .entry(k.clone())
            .and_modify(|e| *e = e.merge(kind))
            .or_insert(kind);
    }
}

/// Infer one node type per node label and one edge type per edge label.
///
/// Type names are the labels themselves; an edge label that collides with a
/// node label gets a `_REL` suffix so both name spaces stay disjoint.
/// Cardinalities are left as `One` until [`compute_cardinalities`] runs.
pub fn infer_graph_type(g: &PropertyGraph) -> GraphType {
    let mut node_types: BTreeMap<String, NodeType> = BTreeMap::new();
    for (_, n) in g.nodes() {
        let t = node_types
            .entry(n.label.clone())
            .or_insert_with(|| NodeType {
                base: FormalBaseType {
                    label: n.label.clone(),
                    props: BTreeSet::new(),
                },
                prop_kinds: BTreeMap::new(),
            });
        t.base.props.extend(n.props.keys().cloned());
        observe(&mut t.prop_kinds, &n.props);
    }

    let mut by_label: BTreeMap<String, EdgeType> = BTreeMap::new();
    for (_, e) in g.edges() {
        let t = by_label.entry(e.label.clone()).or_insert_with(|| EdgeType {
            base: FormalBaseType {
                label: e.label.clone(),
                props: BTreeSet::new(),
            },
            src: g.node(e.src).label.clone(),
            tgt: g.node(e.tgt).label.clone(),
            card_src: Cardinality::One,
            card_tgt: Cardinality::One,
            prop_kinds: BTreeMap::new(),
        });
        t.base.props.extend(e.props.keys().cloned());
        observe(&mut t.prop_kinds, &e.props);
    }

    let mut edge_types = BTreeMap::new();
    for (label, t) in by_label {
        let mut name = label;
        while node_types.contains_key(&name) {
            name.push_str("_REL");
        }
        edge_types.insert(name, t);
    }

    GraphType {
        node_types,
        edge_types,
        cardinalities_computed: false,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    NoMatchingNodeType { node: String, label: String },
    NodePropsNotContained { node: String, extra: Vec<String> },
    NoMatchingEdgeType { edge: String, label: String },
    EdgePropsNotContained { edge: String, extra: Vec<String> },
    EdgeEndpointMismatch { edge: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoMatchingNodeType { node, label } => {
                write!(f, "node `{node}`: no node type with label {label}")
            }
            Violation::NodePropsNotContained { node, extra } => {
                write!(
                    f,
                    "node `{node}`: properties {extra:?} not declared by its type"
                )
            }
            Violation::NoMatchingEdgeType { edge, label } => {
                write!(f, "edge `{edge}`: no edge type with label {label}")
            }
            Violation::EdgePropsNotContained { edge, extra } => {
                write!(
                    f,
                    "edge `{edge}`: properties {extra:?} not declared by its type"
                )
            }
            Violation::EdgeEndpointMismatch { edge } => {
                write!(f, "edge `{edge}`: endpoints do not match any edge type")
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidityReport {
    pub violations: Vec<Violation>,
}

impl ValidityReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

fn extra_props(props: &Props, base: &FormalBaseType) -> Vec<String> {
    props
        .keys()
        .filter(|k| !base.props.contains(*k))
        .cloned()
        .collect()
}

fn check_node(n: &Node, s: &GraphType) -> Option<Violation> {
    let same_label: Vec<&NodeType> = s
        .node_types
        .values()
        .filter(|t| t.base.label == n.label)
        .collect();
    if same_label.is_empty() {
        return Some(Violation::NoMatchingNodeType {
            node: n.id.clone(),
            label: n.label.clone(),
        });
    }
    if same_label.iter().any(|t| t.base.admits(&n.label, &n.props)) {
        return None;
    }
    // Report against the closest type: the one with the fewest missing names.
    let extra = same_label
        .iter()
        .map(|t| extra_props(&n.props, &t.base))
        .min_by_key(Vec::len)
        .unwrap_or_default();
    Some(Violation::NodePropsNotContained {
        node: n.id.clone(),
        extra,
    })
}

fn check_edge(g: &PropertyGraph, e: &Edge, s: &GraphType) -> Option<Violation> {
    let same_label: Vec<&EdgeType> = s
        .edge_types
        .values()
        .filter(|t| t.base.label == e.label)
        .collect();
    if same_label.is_empty() {
        return Some(Violation::NoMatchingEdgeType {
            edge: e.id.clone(),
            label: e.label.clone(),
        });
    }
    let admitted: Vec<&&EdgeType> = same_label
        .iter()
        .filter(|t| t.base.admits(&e.label, &e.props))
        .collect();
    if admitted.is_empty() {
        let extra = same_label
            .iter()
            .map(|t| extra_props(&e.props, &t.base))
            .min_by_key(Vec::len)
            .unwrap_or_default();
        return Some(Violation::EdgePropsNotContained {
            edge: e.id.clone(),
            extra,
        });
    }
    let src = g.node(e.src);
    let tgt = g.node(e.tgt);
    let endpoint_ok = |ty: &str, n: &Node| {
        s.node_types
            .get(ty)
            .is_some_and(|t| t.base.admits(&n.label, &n.props))
    };
    if admitted
        .iter()
        .any(|t| endpoint_ok(&t.src, src) && endpoint_ok(&t.tgt, tgt))
    {
        None
    } else {
        Some(Violation::EdgeEndpointMismatch { edge: e.id.clone() })
    }
}

/// List every reason why `g` is not an instance of `s`.
pub fn check_instance(g: &PropertyGraph, s: &GraphType) -> ValidityReport {
    let mut violations: Vec<Violation> = g.nodes().filter_map(|(_, n)| check_node(n, s)).collect();
    violations.extend(g.edges().filter_map(|(_, e)| check_edge(g, e, s)));
    ValidityReport { violations }
}

/// Decide `1` vs `*` for both endpoints of every edge type from the instance.
pub fn compute_cardinalities(g: &PropertyGraph, s: &GraphType) -> Result<GraphType> {
    let report = check_instance(g, s);
    if !report.is_valid() {
        return Err(Error::InvalidInstance(report.violations.len()));
    }
    let mut out = s.clone();
    for (name, t) in out.edge_types.iter_mut() {
        let src_type = &s.node_types[&t.src];
        let tgt_type = &s.node_types[&t.tgt];
        let mut out_deg: HashMap<NodeId, usize> = HashMap::new();
        let mut in_deg: HashMap<NodeId, usize> = HashMap::new();
        for eid in s.edge_instances(g, name) {
            let e = g.edge(eid);
            let src = g.node(e.src);
            if src_type.base.admits(&src.label, &src.props) {
                *out_deg.entry(e.src).or_default() += 1;
            }
            let tgt = g.node(e.tgt);
            if tgt_type.base.admits(&tgt.label, &tgt.props) {
                *in_deg.entry(e.tgt).or_default() += 1;
            }
        }
        let card = |deg: &HashMap<NodeId, usize>| {
            if deg.values().any(|&d| d > 1) {
                Cardinality::Many
            } else {
                Cardinality::One
            }
        };
        t.card_src = card(&out_deg);
        t.card_tgt = card(&in_deg);
    }
    out.cardinalities_computed = true;
    Ok(out)
}
