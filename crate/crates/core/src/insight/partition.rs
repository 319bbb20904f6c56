use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Use of an indicator in a solution. The declaration order is the
/// tie-breaking order when partitions are compared lexicographically.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Role {
    Compare,
    Group,
    Unused,
}

pub const ROLES: [Role; 3] = [Role::Compare, Role::Group, Role::Unused];

/// Assignment of every indicator to exactly one of the comparison, grouping
/// and unused sets, with non-empty comparison and grouping sets.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ThreePartition {
    roles: Vec<Role>,
}

impl ThreePartition {
    pub fn new(roles: Vec<Role>) -> Result<Self> {
        if !feasible(&roles) {
            return Err(Error::ConstraintViolation(
                "comparison and grouping sets must both be non-empty".into(),
            ));
        }
        Ok(ThreePartition { roles })
    }

    /// Build from explicit index sets; indices in neither set are unused.
    pub fn from_sets(n: usize, compare: &[usize], group: &[usize]) -> Result<Self> {
        let mut roles = vec![Role::Unused; n];
        for &i in compare {
            roles[i] = Role::Compare;
        }
        for &i in group {
            if roles[i] == Role::Compare {
                return Err(Error::ConstraintViolation(format!(
                    "indicator {i} is in two sets"
                )));
            }
            roles[i] = Role::Group;
        }
        ThreePartition::new(roles)
    }

    /// Decode the `code`-th assignment of `n` indicators, base 3 with the
    /// first indicator as most significant digit. Infeasible codes give `None`.
    pub fn from_code(n: usize, mut code: u64) -> Option<Self> {
        let mut roles = vec![Role::Compare; n];
        for slot in roles.iter_mut().rev() {
            *slot = ROLES[(code % 3) as usize];
            code /= 3;
        }
        feasible(&roles).then_some(ThreePartition { roles })
    }

    /// A uniformly drawn feasible partition of `n` indicators.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Self> {
        if n < 2 {
            return Err(Error::TooFewIndicators(n));
        }
        loop {
            let roles: Vec<Role> = (0..n).map(|_| ROLES[rng.random_range(0..3)]).collect();
            if feasible(&roles) {
                return Ok(ThreePartition { roles });
            }
        }
    }

    pub fn len(&self) -> usize {
        self.roles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roles.is_empty()
    }

    pub fn roles(&self) -> &[Role] {
        &self.roles
    }

    pub fn role(&self, i: usize) -> Role {
        self.roles[i]
    }

    pub fn members(&self, role: Role) -> Vec<usize> {
        (0..self.roles.len())
            .filter(|&i| self.roles[i] == role)
            .collect()
    }

    pub fn compare(&self) -> Vec<usize> {
        self.members(Role::Compare)
    }

    pub fn group(&self) -> Vec<usize> {
        self.members(Role::Group)
    }

    pub fn unused(&self) -> Vec<usize> {
        self.members(Role::Unused)
    }

    /// The partition with indicator `i` moved to `role`, if that is a
    /// different and feasible partition.
    pub fn moved(&self, i: usize, role: Role) -> Option<ThreePartition> {
        if self.roles[i] == role {
            return None;
        }
        let mut roles = self.roles.clone();
        roles[i] = role;
        feasible(&roles).then_some(ThreePartition { roles })
    }

    /// Every feasible single-indicator move, in lexicographic order.
    pub fn neighbours(&self) -> Vec<ThreePartition> {
        let mut out: Vec<ThreePartition> = (0..self.len())
            .flat_map(|i| ROLES.iter().filter_map(move |&r| self.moved(i, r)))
            .collect();
        out.sort();
        out
    }
}

fn feasible(roles: &[Role]) -> bool {
    roles.contains(&Role::Compare) && roles.contains(&Role::Group)
}

impl fmt::Display for ThreePartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.roles {
            f.write_str(match r {
                Role::Compare => "S",
                Role::Group => "D",
                Role::Unused => "U",
            })?;
        }
        Ok(())
    }
}
