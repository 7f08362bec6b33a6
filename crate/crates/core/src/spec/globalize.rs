use std::collections::{HashMap, VecDeque};

use crate::geometry::{matrix_equivalence, PointMatrix, Vector};

use super::{BSpecification, BStateSystem, SpecError, StateId};

const MAX_STATES: usize = 4096;

/// Refines the states of a specification by the orientation of each node's
/// frame, so that neighboring pairs with equal states are also equal up to a
/// common affine map. Point matrices are left untouched.
///
/// Two nodes share a refined state when they share the original state and
/// the linear parts of their frames agree up to a positive factor.
pub fn globalize(spec: &BSpecification) -> Result<BSpecification, SpecError> {
    let b = spec.branching();
    let n = spec.state_count();
    // first node found for every original state
    let mut reps: Vec<Option<PointMatrix>> = vec![None; n];
    reps[0] = Some(spec.root_points.clone());
    let mut q = VecDeque::from([(0usize, spec.root_points.clone())]);
    while let Some((s, pts)) = q.pop_front() {
        for j in 0..b {
            let t = spec.system.child_state(s, j);
            if reps[t].is_none() {
                let c = pts.mul(spec.matrix(s, j))?;
                reps[t] = Some(c.clone());
                q.push_back((t, c));
            }
        }
    }
    let reps: Vec<PointMatrix> =
        reps.into_iter().collect::<Option<_>>().ok_or_else(|| SpecError::Construction("unreachable state".into()))?;

    let class_of = |s: StateId, pts: &PointMatrix| -> Result<Vec<Vector>, SpecError> {
        let tau = matrix_equivalence(&reps[s], pts).ok_or_else(|| {
            SpecError::Construction(format!("node with state {s} is not equivalent to its representative"))
        })?;
        Ok(tau.linear_class())
    };

    let mut index: HashMap<(StateId, Vec<Vector>), StateId> = HashMap::new();
    let mut origin: Vec<StateId> = Vec::new();
    let mut nodes: Vec<PointMatrix> = Vec::new();
    let root_key = (0, class_of(0, &spec.root_points)?);
    index.insert(root_key, 0);
    origin.push(0);
    nodes.push(spec.root_points.clone());
    let mut child_rows: Vec<Vec<StateId>> = Vec::new();
    let mut next = 0;
    while next < nodes.len() {
        let s = origin[next];
        let pts = nodes[next].clone();
        let mut row = Vec::with_capacity(b as usize);
        for j in 0..b {
            let t = spec.system.child_state(s, j);
            let c = pts.mul(spec.matrix(s, j))?;
            let key = (t, class_of(t, &c)?);
            let id = match index.get(&key) {
                Some(&id) => id,
                None => {
                    let id = nodes.len();
                    if id >= MAX_STATES {
                        return Err(SpecError::Construction("too many refined states".into()));
                    }
                    index.insert(key, id);
                    origin.push(t);
                    nodes.push(c);
                    id
                }
            };
            row.push(id);
        }
        child_rows.push(row);
        next += 1;
    }
    let m = origin.len();
    let mut matrices = Vec::with_capacity(m * b as usize);
    for &s in &origin {
        for j in 0..b {
            matrices.push(spec.matrix(s, j).clone());
        }
    }
    let labels = (0..m).map(|i| format!("{}{}", spec.label(origin[i]), i)).collect();
    Ok(BSpecification {
        name: format!("{}_global", spec.name.trim_end_matches("_local")),
        dimension: spec.dimension,
        system: BStateSystem::new(b, child_rows)?,
        vertex_counts: origin.iter().map(|&s| spec.vertex_counts[s]).collect(),
        root_points: spec.root_points.clone(),
        matrices,
        state_labels: labels,
    })
}
