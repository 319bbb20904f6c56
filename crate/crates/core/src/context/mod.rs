//! Comparison context of a node type and the indicators derived from it.
//!
//! The context of a node type is the part of the graph type made of its
//! hierarchical environment (every type reachable through a chain of
//! cardinality-1 steps) plus the edge types incident to it. Candidate
//! indicators are read off paths inside that context.

mod indicator;
mod path;

pub use indicator::{
    build_indicator_matrix, derive_candidate_indicators, derive_candidates_filtered,
    evaluate_indicator, Candidate, Elem, Indicator, Op, OpDict, PropSource,
};
pub use path::{Direction, Hierarchy, LabelStep, PathLabel, TypePath, TypeStep};

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::graph::GraphType;

#[derive(Debug, Clone, PartialEq)]
pub struct ContextGraph {
    pub root: String,
    pub node_types: BTreeSet<String>,
    pub edge_types: BTreeSet<String>,
    /// Every cardinality-1 path from the root, prefixes included.
    pub hier_paths: Vec<TypePath>,
    /// Edge types incident to the root, with the direction that leaves it.
    pub one_hop: BTreeSet<(String, Direction)>,
}

/// Steps available from node type `at`, in schema order.
fn steps_from(s: &GraphType, at: &str) -> Vec<TypeStep> {
    let mut steps = Vec::new();
    for (name, t) in &s.edge_types {
        if t.src == at {
            steps.push(TypeStep {
                edge_type: name.clone(),
                direction: Direction::Forward,
            });
        }
        if t.tgt == at {
            steps.push(TypeStep {
                edge_type: name.clone(),
                direction: Direction::Reverse,
            });
        }
    }
    steps
}

pub fn compute_context(s: &GraphType, root: &str) -> Result<ContextGraph> {
    s.node_type(root)?;
    if !s.cardinalities_computed {
        return Err(Error::CardinalitiesMissing);
    }

    let mut hier_paths = Vec::new();
    let mut stack = vec![TypePath::empty(root)];
    while let Some(path) = stack.pop() {
        let visited: BTreeSet<&str> = std::iter::once(path.origin.as_str())
            .chain(path.steps.iter().map(|st| st.far_end(s)))
            .collect();
        let mut next = Vec::new();
        for step in steps_from(s, &path.terminal) {
            if step.is_card_one(s) && !visited.contains(step.far_end(s)) {
                next.push(path.push(step, s));
            }
        }
        // Reverse so the DFS pops in schema order.
        stack.extend(next.into_iter().rev());
        if !path.is_empty() {
            hier_paths.push(path);
        }
    }

    let one_hop: BTreeSet<(String, Direction)> = steps_from(s, root)
        .into_iter()
        .map(|st| (st.edge_type, st.direction))
        .collect();

    let mut node_types = BTreeSet::from([root.to_owned()]);
    let mut edge_types = BTreeSet::new();
    for p in &hier_paths {
        for st in &p.steps {
            node_types.insert(st.far_end(s).to_owned());
            edge_types.insert(st.edge_type.clone());
        }
    }
    for (e, dir) in &one_hop {
        let st = TypeStep {
            edge_type: e.clone(),
            direction: *dir,
        };
        node_types.insert(st.far_end(s).to_owned());
        edge_types.insert(e.clone());
    }

    Ok(ContextGraph {
        root: root.to_owned(),
        node_types,
        edge_types,
        hier_paths,
        one_hop,
    })
}

/// All paths from the context root of length `0..=max_len` that use only
/// context edge types, where an edge type occurs at most once per direction.
///
/// The empty path comes first; the rest follow in depth-first schema order.
pub fn enumerate_indicator_paths(
    s: &GraphType,
    ctx: &ContextGraph,
    max_len: usize,
) -> Vec<TypePath> {
    let mut out = vec![TypePath::empty(&ctx.root)];
    let mut stack: Vec<TypePath> = Vec::new();
    let extend = |path: &TypePath| -> Vec<TypePath> {
        if path.len() >= max_len {
            return Vec::new();
        }
        steps_from(s, &path.terminal)
            .into_iter()
            .filter(|st| ctx.edge_types.contains(&st.edge_type))
            .filter(|st| !path.steps.contains(st))
            .map(|st| path.push(st, s))
            .collect()
    };
    stack.extend(extend(&out[0]).into_iter().rev());
    while let Some(path) = stack.pop() {
        stack.extend(extend(&path).into_iter().rev());
        out.push(path);
    }
    out
}
