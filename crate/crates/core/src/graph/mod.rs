//! In-memory property graph.
//!
//! Nodes and edges are addressed by dense integer handles ([`NodeId`],
//! [`EdgeId`]); the string identifiers found in input files are kept for
//! export and lookup. A [`PropertyGraph`] is immutable once built and is
//! always constructed through [`GraphBuilder`], which enforces the
//! structural invariants (disjoint ids, total endpoint map, label
//! homogeneity of edges).

mod schema;

pub use schema::{
    check_instance, compute_cardinalities, infer_graph_type, Cardinality, EdgeType, FormalBaseType,
    GraphType, NodeType, PropKind, ValidityReport, Violation,
};

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A property value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Value {
    Null,
    Bool(bool),
    Number(f64),
    Text(String),
}

impl Value {
    pub fn as_number(&self) -> Option<f64> {
        match self {
            Value::Number(x) => Some(*x),
            _ => None,
        }
    }

    pub fn is_null(&self) -> bool {
        matches!(self, Value::Null)
    }
}

impl From<f64> for Value {
    fn from(x: f64) -> Self {
        Value::Number(x)
    }
}

impl From<&str> for Value {
    fn from(s: &str) -> Self {
        Value::Text(s.to_owned())
    }
}

impl From<bool> for Value {
    fn from(b: bool) -> Self {
        Value::Bool(b)
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Null => f.write_str("null"),
            Value::Bool(b) => write!(f, "{b}"),
            Value::Number(x) => write!(f, "{x}"),
            Value::Text(s) => f.write_str(s),
        }
    }
}

pub type Props = BTreeMap<String, Value>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeId(pub u32);

impl NodeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl EdgeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Node {
    pub id: String,
    pub label: String,
    pub props: Props,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Edge {
    pub id: String,
    pub label: String,
    pub src: NodeId,
    pub tgt: NodeId,
    pub props: Props,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PropertyGraph {
    nodes: Vec<Node>,
    edges: Vec<Edge>,
    node_index: HashMap<String, NodeId>,
    out_adj: Vec<Vec<EdgeId>>,
    in_adj: Vec<Vec<EdgeId>>,
}

impl PropertyGraph {
    pub fn builder() -> GraphBuilder {
        GraphBuilder::default()
    }

    /// A builder pre-populated with this graph's nodes and edges.
    pub fn to_builder(&self) -> GraphBuilder {
        let mut b = GraphBuilder::default();
        for n in &self.nodes {
            b.add_node(&n.id, &n.label, n.props.clone())
                .expect("ids of a built graph are unique");
        }
        for e in &self.edges {
            b.add_edge(
                &e.id,
                &e.label,
                &self.nodes[e.src.index()].id,
                &self.nodes[e.tgt.index()].id,
                e.props.clone(),
            )
            .expect("ids of a built graph are unique");
        }
        b
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn nodes(&self) -> impl ExactSizeIterator<Item = (NodeId, &Node)> {
        self.nodes
            .iter()
            .enumerate()
            .map(|(i, n)| (NodeId(i as u32), n))
    }

    pub fn edges(&self) -> impl ExactSizeIterator<Item = (EdgeId, &Edge)> {
        self.edges
            .iter()
            .enumerate()
            .map(|(i, e)| (EdgeId(i as u32), e))
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id.index()]
    }

    pub fn edge(&self, id: EdgeId) -> &Edge {
        &self.edges[id.index()]
    }

    pub fn node_id(&self, external: &str) -> Option<NodeId> {
        self.node_index.get(external).copied()
    }

    pub fn out_edges(&self, n: NodeId) -> &[EdgeId] {
        &self.out_adj[n.index()]
    }

    pub fn in_edges(&self, n: NodeId) -> &[EdgeId] {
        &self.in_adj[n.index()]
    }
}

#[derive(Debug, Clone)]
struct PendingEdge {
    id: String,
    label: String,
    src: String,
    tgt: String,
    props: Props,
}

/// Accumulates nodes and edges, then validates them into a [`PropertyGraph`].
///
/// Edges may be added before their endpoints; endpoints are resolved in
/// [`GraphBuilder::build`].
#[derive(Debug, Clone, Default)]
pub struct GraphBuilder {
    nodes: Vec<Node>,
    node_index: HashMap<String, NodeId>,
    edges: Vec<PendingEdge>,
    ids: HashSet<String>,
}

impl GraphBuilder {
    pub fn add_node(&mut self, id: &str, label: &str, props: Props) -> Result<NodeId> {
        if !self.ids.insert(id.to_owned()) {
            return Err(Error::DuplicateId(id.to_owned()));
        }
        let handle = NodeId(self.nodes.len() as u32);
        self.node_index.insert(id.to_owned(), handle);
        self.nodes.push(Node {
            id: id.to_owned(),
            label: label.to_owned(),
            props,
        });
        Ok(handle)
    }

    pub fn add_edge(
        &mut self,
        id: &str,
        label: &str,
        src: &str,
        tgt: &str,
        props: Props,
    ) -> Result<()> {
        if !self.ids.insert(id.to_owned()) {
            return Err(Error::DuplicateId(id.to_owned()));
        }
        self.edges.push(PendingEdge {
            id: id.to_owned(),
            label: label.to_owned(),
            src: src.to_owned(),
            tgt: tgt.to_owned(),
            props,
        });
        Ok(())
    }

    pub fn build(self) -> Result<PropertyGraph> {
        let n = self.nodes.len();
        let mut out_adj = vec![Vec::new(); n];
        let mut in_adj = vec![Vec::new(); n];
        let mut endpoint_labels: HashMap<&str, (&str, &str)> = HashMap::new();
        let mut edges = Vec::with_capacity(self.edges.len());

        for (i, pe) in self.edges.iter().enumerate() {
            let resolve = |id: &str| {
                self.node_index
                    .get(id)
                    .copied()
                    .ok_or_else(|| Error::DanglingEdge {
                        edge: pe.id.clone(),
                        node: id.to_owned(),
                    })
            };
            let src = resolve(&pe.src)?;
            let tgt = resolve(&pe.tgt)?;
            let ends = (
                self.nodes[src.index()].label.as_str(),
                self.nodes[tgt.index()].label.as_str(),
            );
            match endpoint_labels.get(pe.label.as_str()) {
                Some(&seen) if seen != ends => {
                    return Err(Error::LabelHeterogeneity {
                        label: pe.label.clone(),
                        first: format!("{}->{}", seen.0, seen.1),
                        second: format!("{}->{}", ends.0, ends.1),
                    });
                }
                Some(_) => {}
                None => {
                    endpoint_labels.insert(pe.label.as_str(), ends);
                }
            }
            let eid = EdgeId(i as u32);
            out_adj[src.index()].push(eid);
            in_adj[tgt.index()].push(eid);
            edges.push(Edge {
                id: pe.id.clone(),
                label: pe.label.clone(),
                src,
                tgt,
                props: pe.props.clone(),
            });
        }

        Ok(PropertyGraph {
            nodes: self.nodes,
            edges,
            node_index: self.node_index,
            out_adj,
            in_adj,
        })
    }
}
