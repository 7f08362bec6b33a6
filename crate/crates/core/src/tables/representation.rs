use std::collections::{BTreeMap, VecDeque};

use crate::geometry::{facet_plane, intersection_equals_face, matrix_pair_equivalence, HalfSpace, Rational, Vector};
use crate::spec::{BSpecification, StateId};
use crate::tree::{GeometricNode, GeometricTree, IndexTree};

use super::facets::FacetSpecification;
use super::report::Witness;

/// `u_s` for every state: the first node with state `s` in breadth-first order.
#[derive(Clone, Debug)]
pub struct PreRepresentation {
    pub reps: Vec<GeometricNode>,
}

/// Breadth-first search for a node of every state. States never reached keep no representative.
pub fn find_pre_representation(spec: &BSpecification) -> Result<PreRepresentation, crate::tree::TreeError> {
    let g = GeometricTree::new(spec);
    let n = spec.state_count();
    let mut reps: Vec<Option<GeometricNode>> = vec![None; n];
    let root = g.root();
    reps[root.state] = Some(root.clone());
    let mut found = 1;
    let mut q = VecDeque::from([root]);
    while let Some(v) = q.pop_front() {
        if found == n {
            break;
        }
        for j in 0..spec.branching() {
            let t = spec.system.child_state(v.state, j);
            if reps[t].is_none() {
                let c = g.child(&v, j)?;
                reps[t] = Some(c.clone());
                found += 1;
                q.push_back(c);
            }
        }
    }
    let reps = reps
        .into_iter()
        .enumerate()
        .map(|(s, r)| r.ok_or(crate::tree::TreeError::UnknownState(s)))
        .collect::<Result<_, _>>()?;
    Ok(PreRepresentation { reps })
}

/// A node with its facet planes and bounding box, for repeated neighbor tests.
#[derive(Clone, Debug)]
pub(crate) struct Cell {
    pub node: GeometricNode,
    pub planes: Vec<Option<HalfSpace>>,
    pub lo: Vector,
    pub hi: Vector,
}

fn normalized(h: HalfSpace) -> HalfSpace {
    let s = h.normal.iter().find(|x| !x.is_zero()).map(|x| x.abs().recip()).unwrap_or_else(Rational::one);
    HalfSpace { normal: h.normal.iter().map(|x| x * &s).collect(), offset: &h.offset * &s }
}

impl Cell {
    pub fn new(node: GeometricNode, facets: &FacetSpecification) -> Self {
        let planes = facets.sets[node.state].iter().map(|idx| facet_plane(&node.points, idx).map(normalized)).collect();
        let (lo, hi) = node.points.bbox();
        Cell { node, planes, lo, hi }
    }

    pub fn touches(&self, other: &Cell) -> bool {
        (0..self.lo.len()).all(|k| self.lo[k] <= other.hi[k] && other.lo[k] <= self.hi[k])
    }

    pub fn children(&self, spec: &BSpecification, facets: &FacetSpecification) -> Vec<Cell> {
        let g = GeometricTree::new(spec);
        (0..spec.branching()).map(|j| Cell::new(g.child(&self.node, j).expect("valid index"), facets)).collect()
    }

    /// The facet `f2` of `other` such that `other` is a geometric f-neighbor of `self`
    /// (the intersection equals facet `f` of `self` and facet `f2` of `other`).
    pub fn neighbor_facet(&self, f: usize, other: &Cell, facets: &FacetSpecification) -> Option<usize> {
        let p = self.planes.get(f)?.as_ref()?;
        let neg: Vector = p.normal.iter().map(|x| -x).collect();
        let neg_off = -&p.offset;
        for (f2, q) in other.planes.iter().enumerate() {
            let Some(q) = q else { continue };
            if q.normal == neg
                && q.offset == neg_off
                && intersection_equals_face(
                    &self.node.points,
                    &facets.sets[self.node.state][f],
                    &other.node.points,
                    &facets.sets[other.node.state][f2],
                )
            {
                return Some(f2);
            }
        }
        None
    }
}

/// Where a neighboring child pair was observed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Source {
    /// Two children of `u_s`.
    Siblings(StateId),
    /// A child of `v` and a child of `w` for the representative pair of `(s, t, f)`.
    Pair(StateId, StateId, usize),
}

/// `y = C(·, j2)` is a geometric `f`-neighbor of `x = C(·, j)` (through `f2` on its side).
#[derive(Clone, Debug)]
pub struct Observation {
    pub source: Source,
    pub j: u32,
    pub j2: u32,
    pub f: usize,
    pub f2: usize,
    pub x_state: StateId,
    pub y_state: StateId,
}

pub type PairKey = (StateId, StateId, usize);

/// Representatives `(v_{s,t,f}, w_{s,t,f})` of neighboring pairs plus everything
/// observed while discovering them.
#[derive(Clone, Debug)]
pub struct Representation {
    pub pre: PreRepresentation,
    pub pairs: BTreeMap<PairKey, (GeometricNode, GeometricNode)>,
    pub observations: Vec<Observation>,
    pub r1_violations: Vec<Witness>,
}

fn describe(v: &GeometricNode, spec: &BSpecification) -> String {
    format!("({},{},{})", v.level, v.position, spec.label(v.state))
}

/// Fixpoint discovery of neighbor-pair representatives with a work queue.
/// Condition R1' is checked on every pair found along the way.
pub fn find_representation(
    spec: &BSpecification,
    pre: &PreRepresentation,
    facets: &FacetSpecification,
) -> Representation {
    let mut pairs: BTreeMap<PairKey, (GeometricNode, GeometricNode)> = BTreeMap::new();
    let mut observations = Vec::new();
    let mut r1 = Vec::new();
    let mut queue: VecDeque<PairKey> = VecDeque::new();

    let mut register = |x: &Cell,
                        y: &Cell,
                        f: usize,
                        pairs: &mut BTreeMap<PairKey, (GeometricNode, GeometricNode)>,
                        queue: &mut VecDeque<PairKey>| {
        let key = (x.node.state, y.node.state, f);
        match pairs.get(&key) {
            None => {
                pairs.insert(key, (x.node.clone(), y.node.clone()));
                queue.push_back(key);
            }
            Some((v, w)) => {
                if matrix_pair_equivalence(&x.node.points, &y.node.points, &v.points, &w.points).is_none() {
                    r1.push(Witness {
                        clause: "R1'",
                        detail: format!(
                            "pair {} / {} (facet {f}) is not affinely equivalent to representative {} / {}",
                            describe(&x.node, spec),
                            describe(&y.node, spec),
                            describe(v, spec),
                            describe(w, spec)
                        ),
                        nodes: vec![x.node.clone(), y.node.clone(), v.clone(), w.clone()],
                    });
                }
            }
        }
    };

    for (s, rep) in pre.reps.iter().enumerate() {
        let kids = Cell::new(rep.clone(), facets).children(spec, facets);
        for (j, x) in kids.iter().enumerate() {
            for (j2, y) in kids.iter().enumerate() {
                if j == j2 || !x.touches(y) {
                    continue;
                }
                for f in 0..facets.count(x.node.state) {
                    if let Some(f2) = x.neighbor_facet(f, y, facets) {
                        observations.push(Observation {
                            source: Source::Siblings(s),
                            j: j as u32,
                            j2: j2 as u32,
                            f,
                            f2,
                            x_state: x.node.state,
                            y_state: y.node.state,
                        });
                        register(x, y, f, &mut pairs, &mut queue);
                    }
                }
            }
        }
    }

    while let Some(key) = queue.pop_front() {
        let (v, w) = pairs[&key].clone();
        let cv = Cell::new(v, facets).children(spec, facets);
        let cw = Cell::new(w, facets).children(spec, facets);
        for (j, x) in cv.iter().enumerate() {
            for (j2, y) in cw.iter().enumerate() {
                if !x.touches(y) {
                    continue;
                }
                for f in 0..facets.count(x.node.state) {
                    if let Some(f2) = x.neighbor_facet(f, y, facets) {
                        observations.push(Observation {
                            source: Source::Pair(key.0, key.1, key.2),
                            j: j as u32,
                            j2: j2 as u32,
                            f,
                            f2,
                            x_state: x.node.state,
                            y_state: y.node.state,
                        });
                        register(x, y, f, &mut pairs, &mut queue);
                    }
                }
            }
        }
    }

    Representation { pre: pre.clone(), pairs, observations, r1_violations: r1 }
}
