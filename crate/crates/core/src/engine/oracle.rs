use std::collections::HashMap;

use crate::geometry::{Rational, Vector};
use crate::spec::BSpecification;
use crate::tables::representation::Cell;
use crate::tables::FacetSpecification;
use crate::tree::{GeometricTree, IndexTree};

use super::EngineError;

/// Brute-force geometric neighbors on one level: all cells with exact facet
/// planes, indexed by plane so that candidates are found without a full scan.
pub struct GeometricOracle<'a> {
    facets: &'a FacetSpecification,
    level: u32,
    cells: Vec<Cell>,
    by_plane: HashMap<(Vector, Rational), Vec<(u64, usize)>>,
}

/// Upper bound on the number of cells the oracle materializes.
pub const ORACLE_CAP: u64 = 1 << 16;

impl<'a> GeometricOracle<'a> {
    pub fn new(spec: &BSpecification, facets: &'a FacetSpecification, level: u32) -> Result<Self, EngineError> {
        let count = (spec.branching() as u64)
            .checked_pow(level)
            .filter(|&c| c <= ORACLE_CAP)
            .ok_or_else(|| EngineError::Resource(format!("oracle level {level} too large")))?;
        let g = GeometricTree::new(spec);
        let mut nodes = vec![g.root()];
        for _ in 0..level {
            let mut next = Vec::with_capacity(nodes.len() * spec.branching() as usize);
            for v in &nodes {
                for i in 0..spec.branching() {
                    next.push(g.child(v, i)?);
                }
            }
            nodes = next;
        }
        debug_assert_eq!(nodes.len() as u64, count);
        let cells: Vec<Cell> = nodes.into_iter().map(|v| Cell::new(v, facets)).collect();
        let mut by_plane: HashMap<(Vector, Rational), Vec<(u64, usize)>> = HashMap::new();
        for (j, c) in cells.iter().enumerate() {
            for (f, p) in c.planes.iter().enumerate() {
                if let Some(p) = p {
                    by_plane.entry((p.normal.clone(), p.offset.clone())).or_default().push((j as u64, f));
                }
            }
        }
        Ok(GeometricOracle { facets, level, cells, by_plane })
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn len(&self) -> u64 {
        self.cells.len() as u64
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn state(&self, j: u64) -> usize {
        self.cells[j as usize].node.state
    }

    /// Position of the unique geometric `f`-neighbor of cell `j`, if any.
    pub fn neighbor(&self, j: u64, f: usize) -> Result<Option<u64>, EngineError> {
        let x = &self.cells[j as usize];
        let count = self.facets.count(x.node.state);
        if f >= count {
            return Err(EngineError::FacetOutOfRange { f, count });
        }
        let Some(p) = &x.planes[f] else { return Ok(None) };
        let key: (Vector, Rational) = (p.normal.iter().map(|v| -v).collect(), -&p.offset);
        let mut found: Vec<u64> = Vec::new();
        if let Some(list) = self.by_plane.get(&key) {
            for &(j2, _) in list {
                if j2 != j
                    && !found.contains(&j2)
                    && x.touches(&self.cells[j2 as usize])
                    && x.neighbor_facet(f, &self.cells[j2 as usize], self.facets).is_some()
                {
                    found.push(j2);
                }
            }
        }
        match found.len() {
            0 => Ok(None),
            1 => Ok(Some(found[0])),
            _ => Err(EngineError::OracleInconsistent { j, f, candidates: found }),
        }
    }
}
