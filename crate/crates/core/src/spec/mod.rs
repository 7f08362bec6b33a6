//! Curve descriptions: state systems, b-specifications and k^d specifications.

mod catalog;
mod globalize;
mod io;
mod kd;

use std::collections::VecDeque;

use thiserror::Error;

use crate::geometry::{GeometryError, PointMatrix, TransitionMatrix};

pub use catalog::{builtin, builtin_kd, catalog_names, gosper2d, hilbert3d_search, CatalogEntry};
pub use globalize::globalize;
pub use io::{load_spec, parse_spec, save_spec, spec_to_json};
pub use kd::{kd_to_b_spec, CubeSymmetry, KdMode, KdSpecification, KdStates};

pub type StateId = usize;

#[derive(Debug, Error)]
pub enum SpecError {
    #[error("shape violation ({clause}): {detail}")]
    Shape { clause: &'static str, detail: String },
    #[error("M^({state},{child}) is not a transition matrix: a column does not sum to 1")]
    NotTransition { state: StateId, child: u32 },
    #[error("state {0} is not reachable from the root state")]
    Unreachable(StateId),
    #[error("parse error in {field}: {detail}")]
    Parse { field: String, detail: String },
    #[error("unknown builtin curve `{0}`")]
    UnknownBuiltin(String),
    #[error("invalid k^d specification: {0}")]
    InvalidKd(String),
    #[error("construction failed: {0}")]
    Construction(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Branching factor, states and the child-state function `S^c`.
/// The parent-state function `S^p` exists iff every `σ_j = S^c(·, j)` is a bijection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BStateSystem {
    b: u32,
    state_count: usize,
    child: Vec<StateId>,
    parent: Option<Vec<StateId>>,
}

impl BStateSystem {
    /// `child[s][j]`; the root state is 0.
    pub fn new(b: u32, child: Vec<Vec<StateId>>) -> Result<Self, SpecError> {
        let state_count = child.len();
        if b < 2 {
            return Err(SpecError::Shape { clause: "branching", detail: format!("b = {b} < 2") });
        }
        if state_count == 0 {
            return Err(SpecError::Shape { clause: "state_count", detail: "no states".into() });
        }
        for (s, row) in child.iter().enumerate() {
            if row.len() != b as usize {
                return Err(SpecError::Shape {
                    clause: "child_state",
                    detail: format!("row {s} has {} entries, expected {b}", row.len()),
                });
            }
            if let Some(&bad) = row.iter().find(|&&t| t >= state_count) {
                return Err(SpecError::Shape {
                    clause: "child_state",
                    detail: format!("row {s} refers to state {bad} of {state_count}"),
                });
            }
        }
        let flat: Vec<StateId> = child.into_iter().flatten().collect();
        let parent = invert(b, state_count, &flat);
        Ok(BStateSystem { b, state_count, child: flat, parent })
    }

    pub fn branching(&self) -> u32 {
        self.b
    }

    pub fn state_count(&self) -> usize {
        self.state_count
    }

    pub fn root(&self) -> StateId {
        0
    }

    #[inline]
    pub fn child_state(&self, s: StateId, j: u32) -> StateId {
        self.child[s * self.b as usize + j as usize]
    }

    /// `S^p(s, j)`: the parent state of a node with state `s` and index `j`.
    #[inline]
    pub fn parent_state(&self, s: StateId, j: u32) -> Option<StateId> {
        self.parent.as_ref().map(|p| p[s * self.b as usize + j as usize])
    }

    pub fn is_invertible(&self) -> bool {
        self.parent.is_some()
    }

    pub fn child_table(&self) -> &[StateId] {
        &self.child
    }

    pub fn parent_table(&self) -> Option<&[StateId]> {
        self.parent.as_deref()
    }

    pub fn child_rows(&self) -> Vec<Vec<StateId>> {
        self.child.chunks(self.b as usize).map(|c| c.to_vec()).collect()
    }

    /// States reachable from the root, in BFS order.
    pub fn reachable(&self) -> Vec<StateId> {
        let mut seen = vec![false; self.state_count];
        let mut order = vec![0];
        seen[0] = true;
        let mut q = VecDeque::from([0]);
        while let Some(s) = q.pop_front() {
            for j in 0..self.b {
                let t = self.child_state(s, j);
                if !seen[t] {
                    seen[t] = true;
                    order.push(t);
                    q.push_back(t);
                }
            }
        }
        order
    }
}

fn invert(b: u32, n: usize, child: &[StateId]) -> Option<Vec<StateId>> {
    let mut parent = vec![usize::MAX; n * b as usize];
    for j in 0..b as usize {
        for s in 0..n {
            let t = child[s * b as usize + j];
            let slot = &mut parent[t * b as usize + j];
            if *slot != usize::MAX {
                return None;
            }
            *slot = s;
        }
    }
    Some(parent)
}

/// A state system with geometry: root points and transition matrices `M^{s,j}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BSpecification {
    pub name: String,
    pub dimension: usize,
    pub system: BStateSystem,
    pub vertex_counts: Vec<usize>,
    pub root_points: PointMatrix,
    /// Indexed by `s * b + j`.
    pub matrices: Vec<TransitionMatrix>,
    pub state_labels: Vec<String>,
}

impl BSpecification {
    pub fn branching(&self) -> u32 {
        self.system.branching()
    }

    pub fn state_count(&self) -> usize {
        self.system.state_count()
    }

    pub fn matrix(&self, s: StateId, j: u32) -> &TransitionMatrix {
        &self.matrices[s * self.branching() as usize + j as usize]
    }

    pub fn label(&self, s: StateId) -> &str {
        &self.state_labels[s]
    }

    pub fn state_by_label(&self, label: &str) -> Option<StateId> {
        self.state_labels.iter().position(|l| l == label)
    }

    /// Resolves a state given as label or number.
    pub fn parse_state(&self, text: &str) -> Option<StateId> {
        self.state_by_label(text).or_else(|| text.parse::<usize>().ok().filter(|&s| s < self.state_count()))
    }
}

pub fn default_labels(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("s{i}")).collect()
}

/// Checks the shape, transition and reachability clauses of a specification.
pub fn validate_spec(spec: &BSpecification) -> Result<(), SpecError> {
    let b = spec.branching();
    let n = spec.state_count();
    if spec.vertex_counts.len() != n {
        return Err(SpecError::Shape {
            clause: "vertex_counts",
            detail: format!("{} entries for {n} states", spec.vertex_counts.len()),
        });
    }
    if spec.state_labels.len() != n {
        return Err(SpecError::Shape { clause: "state_names", detail: "one label per state".into() });
    }
    if spec.root_points.dim() != spec.dimension {
        return Err(SpecError::Shape {
            clause: "root_points",
            detail: format!("{} rows, dimension {}", spec.root_points.dim(), spec.dimension),
        });
    }
    if spec.root_points.ncols() != spec.vertex_counts[spec.system.root()] {
        return Err(SpecError::Shape {
            clause: "root_points",
            detail: format!("{} columns, root state has {} vertices", spec.root_points.ncols(), spec.vertex_counts[0]),
        });
    }
    if spec.matrices.len() != n * b as usize {
        return Err(SpecError::Shape {
            clause: "matrices",
            detail: format!("{} matrices, expected {}", spec.matrices.len(), n * b as usize),
        });
    }
    for s in 0..n {
        for j in 0..b {
            let m = spec.matrix(s, j);
            let t = spec.system.child_state(s, j);
            if m.nrows() != spec.vertex_counts[s] || m.ncols() != spec.vertex_counts[t] {
                return Err(SpecError::Shape {
                    clause: "matrices",
                    detail: format!(
                        "M^({s},{j}) is {}x{}, expected {}x{}",
                        m.nrows(),
                        m.ncols(),
                        spec.vertex_counts[s],
                        spec.vertex_counts[t]
                    ),
                });
            }
            if !m.is_transition() {
                return Err(SpecError::NotTransition { state: s, child: j });
            }
        }
    }
    let reach = spec.system.reachable();
    if reach.len() != n {
        let missing = (0..n).find(|s| !reach.contains(s)).expect("some state missing");
        return Err(SpecError::Unreachable(missing));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parent_state_is_inverse() {
        let sys =
            BStateSystem::new(4, vec![vec![1, 0, 0, 2], vec![0, 1, 1, 3], vec![3, 2, 2, 0], vec![2, 3, 3, 1]]).unwrap();
        assert!(sys.is_invertible());
        for s in 0..4 {
            for j in 0..4 {
                assert_eq!(sys.parent_state(sys.child_state(s, j), j), Some(s));
            }
        }
    }

    #[test]
    fn non_invertible_has_no_parent_map() {
        let sys = BStateSystem::new(2, vec![vec![0, 1], vec![0, 0]]).unwrap();
        assert!(!sys.is_invertible());
        assert_eq!(sys.parent_state(0, 0), None);
    }

    #[test]
    fn rejects_bad_rows() {
        assert!(BStateSystem::new(2, vec![vec![0]]).is_err());
        assert!(BStateSystem::new(2, vec![vec![0, 5]]).is_err());
        assert!(BStateSystem::new(1, vec![vec![0]]).is_err());
    }
}
