//! Table-driven neighbor finding: recursive and iterative forms, multi-level
//! tables, traversal, neighbor-depth statistics and the geometric oracle.

mod multilevel;
mod oracle;

use std::marker::PhantomData;

use thiserror::Error;

use crate::spec::StateId;
use crate::tables::CurveTables;
use crate::tree::{validate_position, AlgebraicNode, IndexTree, Position, StateTree, TreeError};

pub use multilevel::{neighbor_multilevel, MultiLevelTables};
pub use oracle::GeometricOracle;

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("facet {f} out of range: state has {count} facets")]
    FacetOutOfRange { f: usize, count: usize },
    #[error("the state system is not invertible")]
    NotInvertible,
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error("resource limit: {0}")]
    Resource(String),
    #[error("oracle found several {f}-neighbors of position {j}: {candidates:?}")]
    OracleInconsistent { j: u64, f: usize, candidates: Vec<u64> },
    #[error(transparent)]
    Geometry(#[from] crate::geometry::GeometryError),
    #[error("tables do not match this kernel: {0}")]
    KernelMismatch(String),
}

fn check_facet(t: &CurveTables, s: StateId, f: usize) -> Result<(), EngineError> {
    let count = t.facets.count(s);
    if f >= count {
        return Err(EngineError::FacetOutOfRange { f, count });
    }
    Ok(())
}

/// The algebraic tree of compiled tables (needs `S^p` for parents).
#[derive(Clone, Copy, Debug)]
pub struct TableTree<'a, P = u64> {
    tables: &'a CurveTables,
    _p: PhantomData<P>,
}

impl<'a, P: Position> TableTree<'a, P> {
    pub fn new(tables: &'a CurveTables) -> Self {
        TableTree { tables, _p: PhantomData }
    }

    /// Node `(l, j, s)` with `j < b^l` checked.
    pub fn node(&self, level: u32, position: P, state: StateId) -> Result<AlgebraicNode<P>, TreeError> {
        validate_position(&position, self.tables.b, level)?;
        if state >= self.tables.state_count {
            return Err(TreeError::UnknownState(state));
        }
        Ok(AlgebraicNode { level, position, state })
    }

    /// Node at `(l, j)` with its state computed from the root.
    pub fn locate(&self, level: u32, position: P) -> Result<AlgebraicNode<P>, TreeError> {
        validate_position(&position, self.tables.b, level)?;
        let state =
            crate::tree::digits(&position, self.tables.b, level).into_iter().fold(0, |s, d| self.tables.child(s, d));
        Ok(AlgebraicNode { level, position, state })
    }
}

impl<P: Position> IndexTree for TableTree<'_, P> {
    type Node = AlgebraicNode<P>;

    fn branching(&self) -> u32 {
        self.tables.b
    }
    fn root(&self) -> AlgebraicNode<P> {
        AlgebraicNode { level: 0, position: P::zero(), state: 0 }
    }
    fn level(&self, v: &AlgebraicNode<P>) -> u32 {
        v.level
    }
    fn index(&self, v: &AlgebraicNode<P>) -> Result<u32, TreeError> {
        if v.level == 0 {
            return Err(TreeError::Root);
        }
        Ok(v.position.div_rem_small(self.tables.b).1)
    }
    fn child(&self, v: &AlgebraicNode<P>, i: u32) -> Result<AlgebraicNode<P>, TreeError> {
        if i >= self.tables.b {
            return Err(TreeError::InvalidIndex { index: i, b: self.tables.b });
        }
        let position = v.position.mul_add_small(self.tables.b, i).ok_or(TreeError::Capacity { level: v.level + 1 })?;
        Ok(AlgebraicNode { level: v.level + 1, position, state: self.tables.child(v.state, i) })
    }
    fn parent(&self, v: &AlgebraicNode<P>) -> Result<AlgebraicNode<P>, TreeError> {
        if v.level == 0 {
            return Err(TreeError::Root);
        }
        let (q, j) = v.position.div_rem_small(self.tables.b);
        let state = self.tables.parent(v.state, j).ok_or(TreeError::NotInvertible)?;
        Ok(AlgebraicNode { level: v.level - 1, position: q, state })
    }
}

impl<P: Position> StateTree for TableTree<'_, P> {
    fn state(&self, v: &AlgebraicNode<P>) -> StateId {
        v.state
    }
}

/// Recursive neighbor search on any tree with states, returning the result
/// and the recursion depth used.
fn neighbor_rec<T: StateTree>(
    t: &CurveTables,
    tree: &T,
    v: &T::Node,
    f: usize,
) -> Result<(Option<T::Node>, u32), EngineError> {
    if tree.level(v) == 0 {
        return Ok((None, 1));
    }
    let pv = tree.parent(v)?;
    let jv = tree.index(v)?;
    let sp = tree.state(&pv);
    if let Some(jw) = t.n(jv, sp, f) {
        return Ok((Some(tree.child(&pv, jw)?), 1));
    }
    let Some(fp) = t.fp(jv, sp, f) else {
        return Ok((None, tree.level(v) + 1));
    };
    let (pw, depth) = neighbor_rec(t, tree, &pv, fp)?;
    let Some(pw) = pw else {
        return Ok((None, tree.level(v) + 1));
    };
    match t.omega(jv, sp, tree.state(&pw), f) {
        Some(jw) => Ok((Some(tree.child(&pw, jw)?), depth + 1)),
        None => Ok((None, tree.level(v) + 1)),
    }
}

/// The `f`-neighbor of `v`, or `None`.
pub fn neighbor<T: StateTree>(
    t: &CurveTables,
    tree: &T,
    v: &T::Node,
    f: usize,
) -> Result<Option<T::Node>, EngineError> {
    check_facet(t, tree.state(v), f)?;
    Ok(neighbor_rec(t, tree, v, f)?.0)
}

/// Shorthand for [`neighbor`] on the algebraic tree of the tables.
pub fn neighbor_node<P: Position>(
    t: &CurveTables,
    v: &AlgebraicNode<P>,
    f: usize,
) -> Result<Option<AlgebraicNode<P>>, EngineError> {
    neighbor(t, &TableTree::<P>::new(t), v, f)
}

/// Number of levels the search ascends: `k` for a depth-`k` neighbor, `ℓ(v) + 1` if there is none.
pub fn neighbor_depth<T: StateTree>(t: &CurveTables, tree: &T, v: &T::Node, f: usize) -> Result<u32, EngineError> {
    check_facet(t, tree.state(v), f)?;
    Ok(neighbor_rec(t, tree, v, f)?.1)
}

/// Ascent records for [`neighbor_iterative`]: `(index, parent state, facet)` per level.
#[derive(Clone, Debug, Default)]
pub struct Scratch {
    stack: Vec<(u32, u32, u32)>,
}

impl Scratch {
    pub fn with_levels(levels: usize) -> Self {
        Scratch { stack: Vec::with_capacity(levels) }
    }

    /// Capacity from `SFC_SCRATCH_LEVELS`, 64 levels when unset.
    pub fn from_env() -> Self {
        let levels = std::env::var("SFC_SCRATCH_LEVELS").ok().and_then(|v| v.parse().ok()).unwrap_or(64);
        Self::with_levels(levels)
    }

    pub fn capacity(&self) -> usize {
        self.stack.capacity()
    }
}

/// Loop form of [`neighbor`]: one ascent loop recording `(j, s_p, f)` in
/// `scratch`, then one descent loop through `Ω`.
pub fn neighbor_iterative<P: Position>(
    t: &CurveTables,
    v: &AlgebraicNode<P>,
    f: usize,
    scratch: &mut Scratch,
) -> Result<Option<AlgebraicNode<P>>, EngineError> {
    check_facet(t, v.state, f)?;
    if !t.is_invertible() {
        return Err(EngineError::NotInvertible);
    }
    if v.level == 0 {
        return Ok(None);
    }
    let b = t.b;
    scratch.stack.clear();
    let (mut pos, jv) = v.position.div_rem_small(b);
    let mut sp = t.parent(v.state, jv).expect("invertible");
    // first iteration unrolled: most queries end here
    if let Some(jw) = t.n(jv, sp, f) {
        let position = pos.mul_add_small(b, jw).expect("same level");
        return Ok(Some(AlgebraicNode { level: v.level, position, state: t.child(sp, jw) }));
    }
    let mut level = v.level - 1;
    let mut jv = jv;
    let mut f = f;
    let (mut wpos, mut ws) = loop {
        let Some(fp) = t.fp(jv, sp, f) else { return Ok(None) };
        scratch.stack.push((jv, sp as u32, f as u32));
        f = fp;
        if level == 0 {
            return Ok(None);
        }
        let (q, j) = pos.div_rem_small(b);
        let s = t.parent(sp, j).expect("invertible");
        if let Some(jw) = t.n(j, s, f) {
            break (q.mul_add_small(b, jw).expect("same level"), t.child(s, jw));
        }
        pos = q;
        jv = j;
        sp = s;
        level -= 1;
    };
    for &(j, s, f) in scratch.stack.iter().rev() {
        let Some(jw) = t.omega(j, s as StateId, ws, f as usize) else { return Ok(None) };
        wpos = wpos.mul_add_small(b, jw).expect("same level");
        ws = t.child(ws, jw);
    }
    Ok(Some(AlgebraicNode { level: v.level, position: wpos, state: ws }))
}

/// Exhaustive neighbor-depth statistics on one level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DepthHistogram {
    pub level: u32,
    /// `counts[k - 1] = |{(v, f) : D(v, f) ≥ k}|` for `k = 1..=level + 1`.
    pub counts: Vec<u64>,
    /// `|V_l| · |F|`.
    pub total: u64,
    /// Per facet, the number of level-`l` nodes without an `f`-neighbor.
    pub no_neighbor: Vec<u64>,
}

impl DepthHistogram {
    /// `counts[k] / total` for `k ≥ 1`.
    pub fn fraction(&self, k: usize) -> f64 {
        self.counts[k - 1] as f64 / self.total as f64
    }
}

/// Upper bound on `b^l · |F|` for exhaustive enumeration.
pub const ENUMERATION_CAP: u64 = 1 << 26;

pub fn depth_histogram(t: &CurveTables, level: u32) -> Result<DepthHistogram, EngineError> {
    let nodes = (t.b as u64)
        .checked_pow(level)
        .filter(|n| n.saturating_mul(t.facet_count as u64) <= ENUMERATION_CAP)
        .ok_or_else(|| EngineError::Resource(format!("level {level} is too large to enumerate")))?;
    let tree = TableTree::<u64>::new(t);
    let mut at_least = vec![0u64; level as usize + 2];
    let mut no_neighbor = vec![0u64; t.facet_count];
    let mut total = 0;
    for j in 0..nodes {
        let v = tree.locate(level, j)?;
        for f in 0..t.facets.count(v.state) {
            let (w, depth) = neighbor_rec(t, &tree, &v, f)?;
            at_least[depth as usize] += 1;
            if w.is_none() {
                no_neighbor[f] += 1;
            }
            total += 1;
        }
    }
    let mut counts = vec![0u64; level as usize + 1];
    let mut acc = 0;
    for k in (1..=level as usize + 1).rev() {
        acc += at_least[k];
        counts[k - 1] = acc;
    }
    Ok(DepthHistogram { level, counts, total, no_neighbor })
}

/// Depth-first visit of all level-`l` nodes in curve order. States are
/// carried down the recursion; the visitor sees every facet's neighbor.
pub fn traverse<E, V>(t: &CurveTables, level: u32, mut visitor: V) -> Result<(), E>
where
    E: From<EngineError>,
    V: FnMut(&AlgebraicNode<u64>, &[Option<AlgebraicNode<u64>>]) -> Result<(), E>,
{
    if !u64::fits(t.b, level) {
        return Err(EngineError::Tree(TreeError::Capacity { level }).into());
    }
    let tree = TableTree::<u64>::new(t);
    let mut out = Vec::with_capacity(t.facet_count);
    fn go<E, V>(
        t: &CurveTables,
        tree: &TableTree<'_, u64>,
        v: AlgebraicNode<u64>,
        level: u32,
        out: &mut Vec<Option<AlgebraicNode<u64>>>,
        visitor: &mut V,
    ) -> Result<(), E>
    where
        E: From<EngineError>,
        V: FnMut(&AlgebraicNode<u64>, &[Option<AlgebraicNode<u64>>]) -> Result<(), E>,
    {
        if v.level == level {
            out.clear();
            for f in 0..t.facets.count(v.state) {
                out.push(neighbor(t, tree, &v, f)?);
            }
            return visitor(&v, out);
        }
        for i in 0..t.b {
            let c = AlgebraicNode {
                level: v.level + 1,
                position: v.position * t.b as u64 + i as u64,
                state: t.child(v.state, i),
            };
            go(t, tree, c, level, out, visitor)?;
        }
        Ok(())
    }
    go(t, &tree, tree.root(), level, &mut out, &mut visitor)
}

/// Runs the search for every facet pretending the node at `(l, j)` has state
/// `assumed`. With a state group and facet symmetries the set of returned
/// positions equals the true one.
pub fn neighbor_with_wrong_state(
    t: &CurveTables,
    level: u32,
    j: u64,
    assumed: StateId,
) -> Result<Vec<Option<AlgebraicNode<u64>>>, EngineError> {
    if !t.is_invertible() {
        return Err(EngineError::NotInvertible);
    }
    let tree = TableTree::<u64>::new(t);
    let v = tree.node(level, j, assumed)?;
    (0..t.facets.count(assumed)).map(|f| neighbor(t, &tree, &v, f)).collect()
}
