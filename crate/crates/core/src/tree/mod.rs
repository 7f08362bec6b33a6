//! b-index-trees: level-position, algebraic, history, coordinate and geometric.

mod iso;
mod position;

use std::fmt::Debug;
use std::marker::PhantomData;
use std::sync::Arc;

use num_bigint::BigUint;
use thiserror::Error;

use crate::geometry::{GeometryError, PointMatrix};
use crate::spec::{BSpecification, BStateSystem, KdSpecification, KdStates, StateId};

pub use iso::{compute_state, coords_to_position, isomorphism_map, node_point_matrix, position_to_coords};
pub use position::{digits, from_digits, Position};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("child index {index} out of range for branching factor {b}")]
    InvalidIndex { index: u32, b: u32 },
    #[error("the root has no parent and no index")]
    Root,
    #[error("parent state undefined: the state system is not invertible (use history nodes)")]
    NotInvertible,
    #[error("position {position} is not on level {level}")]
    OutOfRange { level: u32, position: String },
    #[error("positions on level {level} do not fit the chosen integer type")]
    Capacity { level: u32 },
    #[error("state {0} does not exist")]
    UnknownState(StateId),
    #[error("no reachable node has coordinates {0:?} with a consistent state")]
    Inconsistent(Vec<u64>),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// A b-index-tree: every node has `b` children, a parent (except the root),
/// an index among its siblings and a level.
pub trait IndexTree {
    type Node: Clone + Debug + PartialEq;

    fn branching(&self) -> u32;
    fn root(&self) -> Self::Node;
    fn level(&self, v: &Self::Node) -> u32;
    fn index(&self, v: &Self::Node) -> Result<u32, TreeError>;
    fn child(&self, v: &Self::Node, i: u32) -> Result<Self::Node, TreeError>;
    fn parent(&self, v: &Self::Node) -> Result<Self::Node, TreeError>;
}

/// Index trees whose nodes carry a state.
pub trait StateTree: IndexTree {
    fn state(&self, v: &Self::Node) -> StateId;
}

fn check_index(i: u32, b: u32) -> Result<(), TreeError> {
    if i < b {
        Ok(())
    } else {
        Err(TreeError::InvalidIndex { index: i, b })
    }
}

/// Node `(l, j)` of the level-position tree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LevelPos<P = u64> {
    pub level: u32,
    pub position: P,
}

#[derive(Clone, Copy, Debug)]
pub struct LevelPositionTree<P = u64> {
    b: u32,
    _p: PhantomData<P>,
}

impl<P: Position> LevelPositionTree<P> {
    pub fn new(b: u32) -> Self {
        LevelPositionTree { b, _p: PhantomData }
    }
}

impl<P: Position> IndexTree for LevelPositionTree<P> {
    type Node = LevelPos<P>;

    fn branching(&self) -> u32 {
        self.b
    }
    fn root(&self) -> LevelPos<P> {
        LevelPos { level: 0, position: P::zero() }
    }
    fn level(&self, v: &LevelPos<P>) -> u32 {
        v.level
    }
    fn index(&self, v: &LevelPos<P>) -> Result<u32, TreeError> {
        if v.level == 0 {
            return Err(TreeError::Root);
        }
        Ok(v.position.div_rem_small(self.b).1)
    }
    fn child(&self, v: &LevelPos<P>, i: u32) -> Result<LevelPos<P>, TreeError> {
        check_index(i, self.b)?;
        let position = v.position.mul_add_small(self.b, i).ok_or(TreeError::Capacity { level: v.level + 1 })?;
        Ok(LevelPos { level: v.level + 1, position })
    }
    fn parent(&self, v: &LevelPos<P>) -> Result<LevelPos<P>, TreeError> {
        if v.level == 0 {
            return Err(TreeError::Root);
        }
        Ok(LevelPos { level: v.level - 1, position: v.position.div_rem_small(self.b).0 })
    }
}

/// Node `(l, j, s)` of the algebraic tree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AlgebraicNode<P = u64> {
    pub level: u32,
    pub position: P,
    pub state: StateId,
}

impl<P: Position> AlgebraicNode<P> {
    pub fn new(level: u32, position: P, state: StateId) -> Self {
        AlgebraicNode { level, position, state }
    }
}

/// The algebraic tree of a state system. Parents need `S^p`.
#[derive(Clone, Copy, Debug)]
pub struct AlgebraicTree<'a, P = u64> {
    system: &'a BStateSystem,
    _p: PhantomData<P>,
}

impl<'a, P: Position> AlgebraicTree<'a, P> {
    pub fn new(system: &'a BStateSystem) -> Self {
        AlgebraicTree { system, _p: PhantomData }
    }

    pub fn system(&self) -> &'a BStateSystem {
        self.system
    }

    /// Checks that `position < b^level` and that the state exists.
    pub fn node(&self, level: u32, position: P, state: StateId) -> Result<AlgebraicNode<P>, TreeError> {
        validate_position(&position, self.system.branching(), level)?;
        if state >= self.system.state_count() {
            return Err(TreeError::UnknownState(state));
        }
        Ok(AlgebraicNode { level, position, state })
    }
}

pub(crate) fn validate_position<P: Position>(j: &P, b: u32, level: u32) -> Result<(), TreeError> {
    if !P::fits(b, level) {
        return Err(TreeError::Capacity { level });
    }
    if let Some(limit) = P::power(b, level) {
        if *j >= limit {
            return Err(TreeError::OutOfRange { level, position: j.to_string() });
        }
    }
    Ok(())
}

impl<P: Position> IndexTree for AlgebraicTree<'_, P> {
    type Node = AlgebraicNode<P>;

    fn branching(&self) -> u32 {
        self.system.branching()
    }
    fn root(&self) -> AlgebraicNode<P> {
        AlgebraicNode { level: 0, position: P::zero(), state: self.system.root() }
    }
    fn level(&self, v: &AlgebraicNode<P>) -> u32 {
        v.level
    }
    #[inline]
    fn index(&self, v: &AlgebraicNode<P>) -> Result<u32, TreeError> {
        if v.level == 0 {
            return Err(TreeError::Root);
        }
        Ok(v.position.div_rem_small(self.system.branching()).1)
    }
    #[inline]
    fn child(&self, v: &AlgebraicNode<P>, i: u32) -> Result<AlgebraicNode<P>, TreeError> {
        let b = self.system.branching();
        check_index(i, b)?;
        let position = v.position.mul_add_small(b, i).ok_or(TreeError::Capacity { level: v.level + 1 })?;
        Ok(AlgebraicNode { level: v.level + 1, position, state: self.system.child_state(v.state, i) })
    }
    #[inline]
    fn parent(&self, v: &AlgebraicNode<P>) -> Result<AlgebraicNode<P>, TreeError> {
        if v.level == 0 {
            return Err(TreeError::Root);
        }
        let (q, j) = v.position.div_rem_small(self.system.branching());
        let state = self.system.parent_state(v.state, j).ok_or(TreeError::NotInvertible)?;
        Ok(AlgebraicNode { level: v.level - 1, position: q, state })
    }
}

impl<P: Position> StateTree for AlgebraicTree<'_, P> {
    #[inline]
    fn state(&self, v: &AlgebraicNode<P>) -> StateId {
        v.state
    }
}

/// Persistent chain of states from a node up to the root; children share their parent's chain.
#[derive(Debug, PartialEq, Eq)]
pub struct HistoryLink {
    pub state: StateId,
    pub up: Option<Arc<HistoryLink>>,
}

/// Node of the history tree: level, position and the full state history.
/// Works for non-invertible state systems.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HistoryNode<P = u64> {
    pub level: u32,
    pub position: P,
    pub history: Arc<HistoryLink>,
}

impl<P> HistoryNode<P> {
    pub fn state(&self) -> StateId {
        self.history.state
    }

    /// States from this node up to the root.
    pub fn states(&self) -> Vec<StateId> {
        let mut out = vec![];
        let mut cur = Some(&self.history);
        while let Some(l) = cur {
            out.push(l.state);
            cur = l.up.as_ref();
        }
        out
    }
}

#[derive(Clone, Copy, Debug)]
pub struct HistoryTree<'a, P = u64> {
    system: &'a BStateSystem,
    _p: PhantomData<P>,
}

impl<'a, P: Position> HistoryTree<'a, P> {
    pub fn new(system: &'a BStateSystem) -> Self {
        HistoryTree { system, _p: PhantomData }
    }

    /// Builds the node at `(level, position)` by descending from the root.
    pub fn node(&self, level: u32, position: &P) -> Result<HistoryNode<P>, TreeError> {
        let b = self.system.branching();
        validate_position(position, b, level)?;
        let mut v = self.root();
        for d in digits(position, b, level) {
            v = self.child(&v, d)?;
        }
        Ok(v)
    }
}

impl<P: Position> IndexTree for HistoryTree<'_, P> {
    type Node = HistoryNode<P>;

    fn branching(&self) -> u32 {
        self.system.branching()
    }
    fn root(&self) -> HistoryNode<P> {
        HistoryNode {
            level: 0,
            position: P::zero(),
            history: Arc::new(HistoryLink { state: self.system.root(), up: None }),
        }
    }
    fn level(&self, v: &HistoryNode<P>) -> u32 {
        v.level
    }
    fn index(&self, v: &HistoryNode<P>) -> Result<u32, TreeError> {
        if v.level == 0 {
            return Err(TreeError::Root);
        }
        Ok(v.position.div_rem_small(self.system.branching()).1)
    }
    fn child(&self, v: &HistoryNode<P>, i: u32) -> Result<HistoryNode<P>, TreeError> {
        let b = self.system.branching();
        check_index(i, b)?;
        let position = v.position.mul_add_small(b, i).ok_or(TreeError::Capacity { level: v.level + 1 })?;
        let state = self.system.child_state(v.history.state, i);
        Ok(HistoryNode {
            level: v.level + 1,
            position,
            history: Arc::new(HistoryLink { state, up: Some(v.history.clone()) }),
        })
    }
    fn parent(&self, v: &HistoryNode<P>) -> Result<HistoryNode<P>, TreeError> {
        let up = v.history.up.clone().ok_or(TreeError::Root)?;
        Ok(HistoryNode {
            level: v.level - 1,
            position: v.position.div_rem_small(self.system.branching()).0,
            history: up,
        })
    }
}

impl<P: Position> StateTree for HistoryTree<'_, P> {
    fn state(&self, v: &HistoryNode<P>) -> StateId {
        v.history.state
    }
}

/// Node `(l, u, s)` of the coordinate tree: grid coordinates on level `l`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CoordNode {
    pub level: u32,
    pub coords: Vec<u64>,
    pub state: StateId,
}

/// Coordinate tree of a k^d pattern, using its global state table.
#[derive(Clone, Debug)]
pub struct CoordTree<'a> {
    kd: &'a KdSpecification,
    states: KdStates,
    parent: Vec<StateId>,
}

impl<'a> CoordTree<'a> {
    pub fn new(kd: &'a KdSpecification) -> Self {
        let states = kd.expand();
        let b = kd.branching() as usize;
        let n = states.syms.len();
        let mut parent = vec![usize::MAX; n * b];
        for s in 0..n {
            for j in 0..b {
                parent[states.child[s][j] * b + j] = s;
            }
        }
        CoordTree { kd, states, parent }
    }

    pub fn states(&self) -> &KdStates {
        &self.states
    }

    /// Index `j` and parent state of a non-root node.
    fn locate(&self, v: &CoordNode) -> Result<(u32, StateId), TreeError> {
        if v.level == 0 {
            return Err(TreeError::Root);
        }
        let k = self.kd.k as u64;
        let digit: Vec<u32> = v.coords.iter().map(|&u| (u % k) as u32).collect();
        let b = self.kd.branching();
        for j in 0..b {
            let sp = self.parent[v.state * b as usize + j as usize];
            if sp != usize::MAX && self.states.cell(self.kd, sp, j) == digit {
                return Ok((j, sp));
            }
        }
        Err(TreeError::Inconsistent(v.coords.clone()))
    }
}

impl IndexTree for CoordTree<'_> {
    type Node = CoordNode;

    fn branching(&self) -> u32 {
        self.kd.branching()
    }
    fn root(&self) -> CoordNode {
        CoordNode { level: 0, coords: vec![0; self.kd.d], state: 0 }
    }
    fn level(&self, v: &CoordNode) -> u32 {
        v.level
    }
    fn index(&self, v: &CoordNode) -> Result<u32, TreeError> {
        Ok(self.locate(v)?.0)
    }
    fn child(&self, v: &CoordNode, i: u32) -> Result<CoordNode, TreeError> {
        check_index(i, self.branching())?;
        let k = self.kd.k as u64;
        let cell = self.states.cell(self.kd, v.state, i);
        let coords = v
            .coords
            .iter()
            .zip(&cell)
            .map(|(&u, &c)| u.checked_mul(k).and_then(|x| x.checked_add(c as u64)))
            .collect::<Option<Vec<u64>>>()
            .ok_or(TreeError::Capacity { level: v.level + 1 })?;
        Ok(CoordNode { level: v.level + 1, coords, state: self.states.child[v.state][i as usize] })
    }
    fn parent(&self, v: &CoordNode) -> Result<CoordNode, TreeError> {
        let (_, sp) = self.locate(v)?;
        let k = self.kd.k as u64;
        Ok(CoordNode { level: v.level - 1, coords: v.coords.iter().map(|u| u / k).collect(), state: sp })
    }
}

impl StateTree for CoordTree<'_> {
    fn state(&self, v: &CoordNode) -> StateId {
        v.state
    }
}

/// Node of the geometric tree: an algebraic node plus its point matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeometricNode {
    pub level: u32,
    pub position: BigUint,
    pub state: StateId,
    pub points: PointMatrix,
}

#[derive(Clone, Copy, Debug)]
pub struct GeometricTree<'a> {
    spec: &'a BSpecification,
}

impl<'a> GeometricTree<'a> {
    pub fn new(spec: &'a BSpecification) -> Self {
        GeometricTree { spec }
    }

    pub fn spec(&self) -> &'a BSpecification {
        self.spec
    }
}

impl IndexTree for GeometricTree<'_> {
    type Node = GeometricNode;

    fn branching(&self) -> u32 {
        self.spec.branching()
    }
    fn root(&self) -> GeometricNode {
        GeometricNode { level: 0, position: BigUint::default(), state: 0, points: self.spec.root_points.clone() }
    }
    fn level(&self, v: &GeometricNode) -> u32 {
        v.level
    }
    fn index(&self, v: &GeometricNode) -> Result<u32, TreeError> {
        if v.level == 0 {
            return Err(TreeError::Root);
        }
        Ok(v.position.div_rem_small(self.branching()).1)
    }
    fn child(&self, v: &GeometricNode, i: u32) -> Result<GeometricNode, TreeError> {
        check_index(i, self.branching())?;
        Ok(GeometricNode {
            level: v.level + 1,
            position: &v.position * self.branching() + i,
            state: self.spec.system.child_state(v.state, i),
            points: v.points.mul(self.spec.matrix(v.state, i))?,
        })
    }
    /// Recomputed from the root along the position's digits.
    fn parent(&self, v: &GeometricNode) -> Result<GeometricNode, TreeError> {
        if v.level == 0 {
            return Err(TreeError::Root);
        }
        let q = v.position.div_rem_small(self.branching()).0;
        let mut cur = self.root();
        for d in digits(&q, self.branching(), v.level - 1) {
            cur = self.child(&cur, d)?;
        }
        Ok(cur)
    }
}

impl StateTree for GeometricTree<'_> {
    fn state(&self, v: &GeometricNode) -> StateId {
        v.state
    }
}
