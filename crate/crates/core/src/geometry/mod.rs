//! Exact polytope geometry over rationals.

mod affine;
mod hull;
pub mod linalg;
mod matrix;
mod polytope;
mod rational;

use thiserror::Error;

pub use affine::{matrix_equivalence, matrix_pair_equivalence, point_set_equivalence, AffineMap};
pub use hull::{HalfSpace, HullFacet};
pub use linalg::Vector;
pub use matrix::{is_transition_matrix, PointMatrix, TransitionMatrix};
pub use polytope::{extreme_points, facet_plane, h_representation, intersection_dimension, intersection_equals_face};
pub use rational::{ParseRationalError, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("point set has affine dimension {found}, expected {expected}")]
    Degenerate { expected: i32, found: i32 },
    #[error("shape error: {0}")]
    Shape(String),
}

/// Facets of `conv(Q)` as sorted 0-based column index sets, each set holding
/// every column that lies in the facet. Requires `conv(Q)` to be full-dimensional.
pub fn hull_facets(q: &PointMatrix) -> Result<Vec<Vec<usize>>, GeometryError> {
    Ok(hull_with_planes(q)?.into_iter().map(|f| f.indices).collect())
}

/// Like [`hull_facets`] but keeps the supporting half-spaces.
pub fn hull_with_planes(q: &PointMatrix) -> Result<Vec<HullFacet>, GeometryError> {
    hull::hull(q.columns(), q.dim())
}

/// Affine dimension of the column set of `Q`.
pub fn affine_dimension(q: &PointMatrix) -> i32 {
    q.affine_dimension()
}
