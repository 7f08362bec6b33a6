//! Table compiler: representations, regularity checks, facet enumeration,
//! the lookup tables `N`, `F^p`, `Ω` and the state group.

mod curve;
mod facets;
mod group;
mod regularity;
mod report;
pub(crate) mod representation;

use thiserror::Error;

use crate::geometry::GeometryError;
use crate::spec::BSpecification;
use crate::tree::TreeError;

pub use curve::{check_palindrome, compute_tables, CurveTables, NONE};
pub use facets::{enumerate_facets, FacetSpecification};
pub use group::{compose, cycle_notation, state_group, Permutation, StateGroupInfo};
pub use regularity::{check_pre_regularity, check_regularity};
pub use report::{ClauseResult, RegularityReport, Witness};
pub use representation::{
    find_pre_representation, find_representation, Observation, PairKey, PreRepresentation, Representation, Source,
};

#[derive(Debug, Error)]
pub enum TableError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error("specification is not pre-regular:\n{0}")]
    NotPreRegular(RegularityReport),
    #[error("specification is not regular:\n{0}")]
    NotRegular(RegularityReport),
    #[error("conflicting values in table {table}: {detail}")]
    Conflict { table: &'static str, detail: String },
    #[error("tables line {line}: {detail}")]
    Parse { line: usize, detail: String },
}

/// Everything the pipeline learned about a specification, whether or not it is regular.
#[derive(Clone, Debug)]
pub struct Analysis {
    pub pre: PreRepresentation,
    /// Present once pre-regularity holds.
    pub facets: Option<FacetSpecification>,
    pub representation: Option<Representation>,
    /// P1', P2' and, when reached, R1'–R3'.
    pub report: RegularityReport,
}

impl Analysis {
    pub fn is_regular(&self) -> bool {
        self.representation.is_some() && self.report.ok()
    }
}

/// Runs every check without failing on a negative verdict.
pub fn analyze(spec: &BSpecification) -> Result<Analysis, TableError> {
    let pre = find_pre_representation(spec)?;
    let mut report = check_pre_regularity(spec, &pre);
    if !report.ok() {
        return Ok(Analysis { pre, facets: None, representation: None, report });
    }
    let facets = enumerate_facets(spec, &pre)?;
    let rep = find_representation(spec, &pre, &facets);
    report.extend(check_regularity(spec, &rep, &facets));
    Ok(Analysis { pre, facets: Some(facets), representation: Some(rep), report })
}

/// The full pipeline: regularity verification followed by table extraction.
pub fn compile(spec: &BSpecification) -> Result<CurveTables, TableError> {
    let a = analyze(spec)?;
    if a.representation.is_none() {
        return Err(TableError::NotPreRegular(a.report));
    }
    if !a.report.ok() {
        return Err(TableError::NotRegular(a.report));
    }
    compute_tables(spec, a.representation.as_ref().expect("checked"), a.facets.as_ref().expect("checked"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spec::builtin;

    const LEFT: usize = 0;
    const RIGHT: usize = 1;
    const UP: usize = 3;

    #[test]
    fn hilbert_tables() {
        let spec = builtin("hilbert2d_global").unwrap();
        let t = compile(&spec).unwrap();
        let a = t.state_by_label("A").unwrap();
        let b = t.state_by_label("B").unwrap();
        assert_eq!(t.n(1, a, UP), Some(2));
        assert_eq!(t.n(1, a, RIGHT), None);
        assert_eq!(t.omega(1, a, b, RIGHT), Some(2));
        assert_eq!(t.n(0, a, LEFT), None);
        assert!(!t.palindrome);
        assert_eq!(t.parent_state, Some(t.child_state.clone()));
    }

    #[test]
    fn verdicts() {
        for name in ["morton2", "morton3", "peano2_global", "sierpinski2d_local", "hilbert3d_global"] {
            let a = analyze(&builtin(name).unwrap()).unwrap();
            assert!(a.is_regular(), "{name}:\n{}", a.report);
        }
        let a = analyze(&builtin("hilbert2d_local").unwrap()).unwrap();
        assert_eq!(a.report.failing(), vec!["R1'"], "{}", a.report);
        let a = analyze(&builtin("gosper2d").unwrap()).unwrap();
        assert!(a.report.failing().contains(&"R2'"), "{}", a.report);
    }

    #[test]
    fn palindromes() {
        assert!(compile(&builtin("peano2_global").unwrap()).unwrap().palindrome);
        assert!(compile(&builtin("sierpinski2d_local").unwrap()).unwrap().palindrome);
    }

    #[test]
    fn text_round_trip() {
        let t = compile(&builtin("hilbert2d_global").unwrap()).unwrap();
        let text = t.to_text();
        assert_eq!(CurveTables::from_text(&text).unwrap(), t);
    }

    #[test]
    fn groups() {
        let spec = builtin("hilbert2d_global").unwrap();
        let g = state_group(&spec.system).unwrap();
        assert_eq!(g.order, 4);
        assert!(g.is_abelian);
        let names: Vec<String> = g.elements.iter().map(|p| cycle_notation(p, &spec.state_labels)).collect();
        assert!(names.contains(&"(HR)(AB)".to_string()), "{names:?}");
        let g3 = state_group(&builtin("hilbert3d_global").unwrap().system).unwrap();
        assert_eq!(g3.order, 12);
        assert!(!g3.is_abelian);
    }
}
