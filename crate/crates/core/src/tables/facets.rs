use serde::{Deserialize, Serialize};

use crate::geometry::{hull_with_planes, GeometryError};
use crate::spec::{BSpecification, StateId};

use super::PreRepresentation;

/// `Φ_s`: for every state, the facets of its representative as sorted
/// 0-based column index sets. Facet ids are positions in these lists.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FacetSpecification {
    pub sets: Vec<Vec<Vec<usize>>>,
}

impl FacetSpecification {
    pub fn count(&self, s: StateId) -> usize {
        self.sets[s].len()
    }

    /// `F = max_s |F_s|`.
    pub fn max_count(&self) -> usize {
        self.sets.iter().map(|f| f.len()).max().unwrap_or(0)
    }

    pub fn get(&self, s: StateId, f: usize) -> Option<&[usize]> {
        self.sets.get(s)?.get(f).map(|v| v.as_slice())
    }

    /// Index sets with 1-based column numbers, as printed in reports.
    pub fn one_based(&self, s: StateId) -> Vec<Vec<usize>> {
        self.sets[s].iter().map(|f| f.iter().map(|i| i + 1).collect()).collect()
    }
}

/// Facets of each representative. Axis-aligned boxes use the normal rule
/// (facet `2a` has outward normal `-e_a`, facet `2a+1` has `+e_a`); every
/// other shape orders its facets lexicographically by index set.
pub fn enumerate_facets(spec: &BSpecification, pre: &PreRepresentation) -> Result<FacetSpecification, GeometryError> {
    let d = spec.dimension;
    let mut sets = Vec::with_capacity(pre.reps.len());
    for rep in &pre.reps {
        let hull = hull_with_planes(&rep.points)?;
        let axis_of = |n: &[crate::geometry::Rational]| -> Option<usize> {
            let nz: Vec<usize> = (0..n.len()).filter(|&i| !n[i].is_zero()).collect();
            (nz.len() == 1).then(|| 2 * nz[0] + usize::from(n[nz[0]].is_positive()))
        };
        let slots: Vec<Option<usize>> = hull.iter().map(|f| axis_of(&f.plane.normal)).collect();
        let is_box = hull.len() == 2 * d && {
            let mut seen = vec![false; 2 * d];
            slots.iter().all(|s| matches!(s, Some(k) if !std::mem::replace(&mut seen[*k], true)))
        };
        let facets: Vec<Vec<usize>> = if is_box {
            let mut out = vec![Vec::new(); 2 * d];
            for (f, slot) in hull.into_iter().zip(slots) {
                out[slot.expect("box facet")] = f.indices;
            }
            out
        } else {
            hull.into_iter().map(|f| f.indices).collect()
        };
        sets.push(facets);
    }
    Ok(FacetSpecification { sets })
}
