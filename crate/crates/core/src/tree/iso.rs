use crate::geometry::PointMatrix;
use crate::spec::{BSpecification, BStateSystem, KdSpecification, StateId};

use super::{
    digits, validate_position, CoordTree, GeometricTree, IndexTree, LevelPos, LevelPositionTree, Position, TreeError,
};

/// The unique isomorphism between two b-index-trees applied to `v`:
/// `iso(root) = root'`, `iso(v) = C'(iso(P(v)), I(v))`.
pub fn isomorphism_map<A: IndexTree, B: IndexTree>(src: &A, dst: &B, v: &A::Node) -> Result<B::Node, TreeError> {
    assert_eq!(src.branching(), dst.branching(), "trees with different branching factors");
    let mut idx = Vec::with_capacity(src.level(v) as usize);
    let mut cur = v.clone();
    while src.level(&cur) > 0 {
        idx.push(src.index(&cur)?);
        cur = src.parent(&cur)?;
    }
    let mut out = dst.root();
    for &i in idx.iter().rev() {
        out = dst.child(&out, i)?;
    }
    Ok(out)
}

/// State of the node at `(l, j)`, found by descending from the root.
pub fn compute_state<P: Position>(system: &BStateSystem, l: u32, j: &P) -> Result<StateId, TreeError> {
    let b = system.branching();
    validate_position(j, b, l)?;
    Ok(digits(j, b, l).into_iter().fold(system.root(), |s, d| system.child_state(s, d)))
}

/// Grid coordinates of the cell at position `j` on level `l` of a k^d curve.
pub fn position_to_coords(kd: &KdSpecification, l: u32, j: u64) -> Result<Vec<u64>, TreeError> {
    validate_position(&j, kd.branching(), l)?;
    let lp = LevelPositionTree::<u64>::new(kd.branching());
    let ct = CoordTree::new(kd);
    Ok(isomorphism_map(&lp, &ct, &LevelPos { level: l, position: j })?.coords)
}

/// Position of the cell with grid coordinates `u` on level `l`.
pub fn coords_to_position(kd: &KdSpecification, l: u32, u: &[u64]) -> Result<u64, TreeError> {
    let b = kd.branching();
    if !u64::fits(b, l) {
        return Err(TreeError::Capacity { level: l });
    }
    let side = (kd.k as u64).checked_pow(l).ok_or(TreeError::Capacity { level: l })?;
    if u.len() != kd.d || u.iter().any(|&x| x >= side) {
        return Err(TreeError::Inconsistent(u.to_vec()));
    }
    let states = kd.expand();
    let mut s = 0;
    let mut pos = 0u64;
    for i in (0..l).rev() {
        let scale = (kd.k as u64).pow(i);
        let digit: Vec<u32> = u.iter().map(|&x| ((x / scale) % kd.k as u64) as u32).collect();
        let j = (0..b).find(|&j| states.cell(kd, s, j) == digit).ok_or_else(|| TreeError::Inconsistent(u.to_vec()))?;
        pos = pos * b as u64 + j as u64;
        s = states.child[s][j as usize];
    }
    Ok(pos)
}

/// State and point matrix of the node at `(l, j)`.
pub fn node_point_matrix<P: Position>(
    spec: &BSpecification,
    l: u32,
    j: &P,
) -> Result<(StateId, PointMatrix), TreeError> {
    let b = spec.branching();
    validate_position(j, b, l)?;
    let g = GeometricTree::new(spec);
    let mut v = g.root();
    for d in digits(j, b, l) {
        v = g.child(&v, d)?;
    }
    Ok((v.state, v.points))
}
