use std::fmt;

use serde::{Deserialize, Serialize};

use crate::graph::{Cardinality, GraphType};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Direction {
    Forward,
    Reverse,
}

/// One edge-type traversal on a schema path.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TypeStep {
    pub edge_type: String,
    pub direction: Direction,
}

impl TypeStep {
    /// Whether this step reaches at most one node from any instance of the
    /// node type it starts from.
    pub fn is_card_one(&self, s: &GraphType) -> bool {
        let t = &s.edge_types[&self.edge_type];
        match self.direction {
            Direction::Forward => t.card_src == Cardinality::One,
            Direction::Reverse => t.card_tgt == Cardinality::One,
        }
    }

    /// Node type on the far side of the step.
    pub fn far_end<'a>(&self, s: &'a GraphType) -> &'a str {
        let t = &s.edge_types[&self.edge_type];
        match self.direction {
            Direction::Forward => &t.tgt,
            Direction::Reverse => &t.src,
        }
    }

    /// Node type the step departs from.
    pub fn near_end<'a>(&self, s: &'a GraphType) -> &'a str {
        let t = &s.edge_types[&self.edge_type];
        match self.direction {
            Direction::Forward => &t.src,
            Direction::Reverse => &t.tgt,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Hierarchy {
    /// Every step has cardinality 1 from the traversal side (or the path is empty).
    Card1,
    Star,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TypePath {
    pub origin: String,
    pub steps: Vec<TypeStep>,
    pub terminal: String,
    pub hierarchy: Hierarchy,
}

impl TypePath {
    pub fn empty(origin: &str) -> Self {
        TypePath {
            origin: origin.to_owned(),
            steps: Vec::new(),
            terminal: origin.to_owned(),
            hierarchy: Hierarchy::Card1,
        }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Extend by one step, recomputing terminal and hierarchy flag.
    pub fn push(&self, step: TypeStep, s: &GraphType) -> TypePath {
        let hierarchy = if self.hierarchy == Hierarchy::Card1 && step.is_card_one(s) {
            Hierarchy::Card1
        } else {
            Hierarchy::Star
        };
        let terminal = step.far_end(s).to_owned();
        let mut steps = self.steps.clone();
        steps.push(step);
        TypePath {
            origin: self.origin.clone(),
            steps,
            terminal,
            hierarchy,
        }
    }

    /// The edge-label sequence of the path.
    pub fn label(&self, s: &GraphType) -> PathLabel {
        PathLabel(
            self.steps
                .iter()
                .map(|st| LabelStep {
                    label: s.edge_types[&st.edge_type].base.label.clone(),
                    direction: st.direction,
                })
                .collect(),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LabelStep {
    pub label: String,
    pub direction: Direction,
}

/// Sequence of edge labels with directions, serialized as `A.B~.C`
/// (`~` marks a reverse traversal, the empty string is the empty path).
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PathLabel(pub Vec<LabelStep>);

impl PathLabel {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn steps(&self) -> &[LabelStep] {
        &self.0
    }

    pub fn parse(s: &str) -> Option<PathLabel> {
        if s.is_empty() {
            return Some(PathLabel::default());
        }
        s.split('.')
            .map(|part| {
                let (label, direction) = match part.strip_suffix('~') {
                    Some(l) => (l, Direction::Reverse),
                    None => (part, Direction::Forward),
                };
                (!label.is_empty()).then(|| LabelStep {
                    label: label.to_owned(),
                    direction,
                })
            })
            .collect::<Option<Vec<_>>>()
            .map(PathLabel)
    }
}

impl fmt::Display for PathLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, st) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(".")?;
            }
            f.write_str(&st.label)?;
            if st.direction == Direction::Reverse {
                f.write_str("~")?;
            }
        }
        Ok(())
    }
}
