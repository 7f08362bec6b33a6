use std::collections::{HashMap, VecDeque};

use crate::geometry::{PointMatrix, Rational, TransitionMatrix};

use super::{default_labels, BSpecification, BStateSystem, SpecError, StateId};

/// Signed coordinate permutation acting on the unit cube:
/// `(g·x)_i = flip_i ? 1 - x_{perm_i} : x_{perm_i}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CubeSymmetry {
    pub perm: Vec<usize>,
    pub flip: Vec<bool>,
}

impl CubeSymmetry {
    pub fn identity(d: usize) -> Self {
        CubeSymmetry { perm: (0..d).collect(), flip: vec![false; d] }
    }

    pub fn new(perm: Vec<usize>, flip: Vec<bool>) -> Self {
        CubeSymmetry { perm, flip }
    }

    /// Swap of axes 0 and 1 in 2D.
    pub fn swap2() -> Self {
        CubeSymmetry::new(vec![1, 0], vec![false, false])
    }

    /// Reflection in the anti-diagonal in 2D: `(x, y) ↦ (1 - y, 1 - x)`.
    pub fn antidiagonal2() -> Self {
        CubeSymmetry::new(vec![1, 0], vec![true, true])
    }

    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    pub fn is_valid(&self) -> bool {
        let d = self.perm.len();
        let mut seen = vec![false; d];
        self.flip.len() == d && self.perm.iter().all(|&p| p < d && !std::mem::replace(&mut seen[p], true))
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &CubeSymmetry) -> CubeSymmetry {
        let perm = self.perm.iter().map(|&p| other.perm[p]).collect();
        let flip = self.perm.iter().zip(&self.flip).map(|(&p, &f)| f ^ other.flip[p]).collect();
        CubeSymmetry { perm, flip }
    }

    pub fn inverse(&self) -> CubeSymmetry {
        let d = self.dim();
        let mut perm = vec![0; d];
        let mut flip = vec![false; d];
        for i in 0..d {
            perm[self.perm[i]] = i;
            flip[self.perm[i]] = self.flip[i];
        }
        CubeSymmetry { perm, flip }
    }

    /// Action on grid cells `{0..k-1}^d`.
    pub fn apply_cell(&self, u: &[u32], k: u32) -> Vec<u32> {
        self.perm.iter().zip(&self.flip).map(|(&p, &f)| if f { k - 1 - u[p] } else { u[p] }).collect()
    }

    /// Action on corners `{0,1}^d` encoded as bit masks (bit `i` = coordinate `i`).
    pub fn apply_corner(&self, c: usize) -> usize {
        let mut out = 0;
        for (i, (&p, &f)) in self.perm.iter().zip(&self.flip).enumerate() {
            let bit = (c >> p) & 1 == 1;
            if bit ^ f {
                out |= 1 << i;
            }
        }
        out
    }

    /// All `2^d d!` symmetries in a fixed order.
    pub fn all(d: usize) -> Vec<CubeSymmetry> {
        let mut perms = vec![vec![]];
        for _ in 0..d {
            let mut next = Vec::new();
            for p in &perms {
                for x in 0..d {
                    if !p.contains(&x) {
                        let mut q = p.clone();
                        q.push(x);
                        next.push(q);
                    }
                }
            }
            perms = next;
        }
        let mut out = Vec::new();
        for p in perms {
            for mask in 0..(1usize << d) {
                out.push(CubeSymmetry::new(p.clone(), (0..d).map(|i| (mask >> i) & 1 == 1).collect()));
            }
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum KdMode {
    /// Columns of every cell keep the global corner order; orientation lives in the states.
    Global,
    /// One state; each child's columns are reordered into its own frame.
    Local,
}

/// A curve on the `k^d` grid given by the root pattern: the visiting order of
/// the `k^d` sub-cubes and the orientation of each sub-cube's copy of the pattern.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KdSpecification {
    pub name: String,
    pub k: u32,
    pub d: usize,
    pub mode: KdMode,
    /// `κ(j)`: the cell visited at position `j` by the root pattern.
    pub order: Vec<Vec<u32>>,
    /// Orientation of child `j` relative to its parent.
    pub orientations: Vec<CubeSymmetry>,
    /// Optional naming of expanded states by their symmetry.
    pub labels: Vec<(CubeSymmetry, String)>,
}

/// The global state table of a k^d pattern: one state per reachable orientation.
#[derive(Clone, Debug)]
pub struct KdStates {
    pub syms: Vec<CubeSymmetry>,
    pub child: Vec<Vec<StateId>>,
    pub labels: Vec<String>,
}

impl KdStates {
    /// `κ_s(j)`.
    pub fn cell(&self, kd: &KdSpecification, s: StateId, j: u32) -> Vec<u32> {
        self.syms[s].apply_cell(&kd.order[j as usize], kd.k)
    }
}

impl KdSpecification {
    pub fn branching(&self) -> u32 {
        self.k.pow(self.d as u32)
    }

    pub fn validate(&self) -> Result<(), SpecError> {
        let b = self.branching() as usize;
        if self.k < 2 || self.d == 0 {
            return Err(SpecError::InvalidKd(format!("k = {}, d = {}", self.k, self.d)));
        }
        if self.order.len() != b || self.orientations.len() != b {
            return Err(SpecError::InvalidKd(format!("need {b} cells and orientations")));
        }
        let mut seen = vec![false; b];
        for c in &self.order {
            if c.len() != self.d || c.iter().any(|&x| x >= self.k) {
                return Err(SpecError::InvalidKd(format!("cell {c:?} outside the grid")));
            }
            let idx = c.iter().rev().fold(0usize, |a, &x| a * self.k as usize + x as usize);
            if std::mem::replace(&mut seen[idx], true) {
                return Err(SpecError::InvalidKd(format!("cell {c:?} visited twice")));
            }
        }
        if let Some(g) = self.orientations.iter().find(|g| g.dim() != self.d || !g.is_valid()) {
            return Err(SpecError::InvalidKd(format!("bad orientation {g:?}")));
        }
        Ok(())
    }

    /// Global state table generated from the identity by `o ↦ o ∘ g_j`.
    pub fn expand(&self) -> KdStates {
        let b = self.branching();
        let mut syms = vec![CubeSymmetry::identity(self.d)];
        let mut index: HashMap<CubeSymmetry, StateId> = HashMap::from([(syms[0].clone(), 0)]);
        let mut child: Vec<Vec<StateId>> = Vec::new();
        let mut q = VecDeque::from([0usize]);
        while let Some(s) = q.pop_front() {
            let mut row = Vec::with_capacity(b as usize);
            for j in 0..b as usize {
                let t = syms[s].compose(&self.orientations[j]);
                let id = *index.entry(t.clone()).or_insert_with(|| {
                    syms.push(t);
                    q.push_back(syms.len() - 1);
                    syms.len() - 1
                });
                row.push(id);
            }
            if child.len() <= s {
                child.resize(s + 1, Vec::new());
            }
            child[s] = row;
        }
        let mut labels = default_labels(syms.len());
        for (i, g) in syms.iter().enumerate() {
            if let Some((_, l)) = self.labels.iter().find(|(h, _)| h == g) {
                labels[i] = l.clone();
            }
        }
        KdStates { syms, child, labels }
    }
}

/// Multilinear weights of a point of the unit cube with respect to its corners.
fn corner_weights(p: &[Rational]) -> Vec<Rational> {
    let d = p.len();
    (0..1usize << d)
        .map(|q| {
            let mut w = Rational::one();
            for (t, x) in p.iter().enumerate() {
                let f = if (q >> t) & 1 == 1 { x.clone() } else { Rational::one() - x };
                if f.is_zero() {
                    return Rational::zero();
                }
                w = w * f;
            }
            w
        })
        .collect()
}

fn corner_point(c: usize, d: usize) -> Vec<u32> {
    (0..d).map(|t| ((c >> t) & 1) as u32).collect()
}

fn child_matrix(k: u32, d: usize, cell: &[u32], orient: Option<&CubeSymmetry>) -> TransitionMatrix {
    let kk = Rational::from_int(k as i64);
    let cols = (0..1usize << d)
        .map(|c| {
            let c = orient.map_or(c, |g| g.apply_corner(c));
            let corner = corner_point(c, d);
            let p: Vec<Rational> =
                cell.iter().zip(&corner).map(|(&u, &e)| Rational::from_int((u + e) as i64) / &kk).collect();
            corner_weights(&p)
        })
        .collect();
    TransitionMatrix::from_columns(cols).expect("non-empty")
}

/// Converts a k^d specification to a b-specification with `b = k^d`.
/// Root points are the cube corners, column `i` having coordinate `t` equal to bit `t` of `i`.
pub fn kd_to_b_spec(kd: &KdSpecification) -> Result<BSpecification, SpecError> {
    kd.validate()?;
    let d = kd.d;
    let n = 1usize << d;
    let root_cols =
        (0..n).map(|c| corner_point(c, d).into_iter().map(|x| Rational::from_int(x as i64)).collect()).collect();
    let root_points = PointMatrix::from_columns(d, root_cols)?;
    let b = kd.branching();
    let (system, matrices, labels) = match kd.mode {
        KdMode::Global => {
            let st = kd.expand();
            let mut mats = Vec::new();
            for s in 0..st.syms.len() {
                for j in 0..b {
                    mats.push(child_matrix(kd.k, d, &st.cell(kd, s, j), None));
                }
            }
            (BStateSystem::new(b, st.child.clone())?, mats, st.labels)
        }
        KdMode::Local => {
            let mats =
                (0..b as usize).map(|j| child_matrix(kd.k, d, &kd.order[j], Some(&kd.orientations[j]))).collect();
            let label = kd
                .labels
                .iter()
                .find(|(g, _)| *g == CubeSymmetry::identity(d))
                .map_or("G".to_string(), |(_, l)| l.clone());
            (BStateSystem::new(b, vec![vec![0; b as usize]])?, mats, vec![label])
        }
    };
    let vertex_counts = vec![n; system.state_count()];
    Ok(BSpecification {
        name: kd.name.clone(),
        dimension: d,
        system,
        vertex_counts,
        root_points,
        matrices,
        state_labels: labels,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compose_matches_application() {
        let all = CubeSymmetry::all(3);
        assert_eq!(all.len(), 48);
        for g in all.iter().step_by(5) {
            for h in all.iter().step_by(7) {
                let gh = g.compose(h);
                for c in 0..8 {
                    assert_eq!(gh.apply_corner(c), g.apply_corner(h.apply_corner(c)));
                }
                assert_eq!(g.compose(&g.inverse()), CubeSymmetry::identity(3));
            }
        }
    }

    #[test]
    fn cell_and_corner_actions_agree() {
        let g = CubeSymmetry::antidiagonal2();
        assert_eq!(g.apply_cell(&[0, 0], 2), vec![1, 1]);
        assert_eq!(g.apply_corner(0b00), 0b11);
        assert_eq!(g.apply_cell(&[1, 0], 3), vec![2, 1]);
    }

    #[test]
    fn weights_of_corners_are_unit_vectors() {
        let w = corner_weights(&[Rational::one(), Rational::zero()]);
        assert_eq!(w, vec![Rational::zero(), Rational::one(), Rational::zero(), Rational::zero()]);
    }
}
