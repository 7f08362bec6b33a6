use serde::{Deserialize, Serialize};

use super::linalg::{self, Vector};
use super::rational::Rational;
use super::GeometryError;

/// A `d × m` matrix whose columns are points in `R^d`. Stored column-wise.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PointMatrix {
    dim: usize,
    cols: Vec<Vector>,
}

impl PointMatrix {
    pub fn from_columns(dim: usize, cols: Vec<Vector>) -> Result<Self, GeometryError> {
        if cols.is_empty() {
            return Err(GeometryError::Shape("point matrix needs at least one column".into()));
        }
        if let Some(c) = cols.iter().find(|c| c.len() != dim) {
            return Err(GeometryError::Shape(format!(
                "column of length {} in a {}-dimensional point matrix",
                c.len(),
                dim
            )));
        }
        Ok(PointMatrix { dim, cols })
    }

    pub fn from_rows(rows: Vec<Vector>) -> Result<Self, GeometryError> {
        let dim = rows.len();
        if dim == 0 {
            return Err(GeometryError::Shape("point matrix needs at least one row".into()));
        }
        let m = rows[0].len();
        if rows.iter().any(|r| r.len() != m) {
            return Err(GeometryError::Shape("ragged rows".into()));
        }
        let cols = (0..m).map(|c| rows.iter().map(|r| r[c].clone()).collect()).collect();
        Self::from_columns(dim, cols)
    }

    /// Convenience constructor from integer-ratio column literals `(num, den)`.
    pub fn from_ratio_columns(cols: &[&[(i64, i64)]]) -> Self {
        let dim = cols.first().map_or(0, |c| c.len());
        let cols = cols.iter().map(|c| c.iter().map(|&(n, d)| Rational::new(n, d)).collect()).collect();
        Self::from_columns(dim, cols).expect("well-formed literal")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn col(&self, i: usize) -> &[Rational] {
        &self.cols[i]
    }

    pub fn columns(&self) -> &[Vector] {
        &self.cols
    }

    pub fn rows(&self) -> Vec<Vector> {
        (0..self.dim).map(|r| self.cols.iter().map(|c| c[r].clone()).collect()).collect()
    }

    /// `self · m`.
    pub fn mul(&self, m: &TransitionMatrix) -> Result<PointMatrix, GeometryError> {
        if m.nrows() != self.ncols() {
            return Err(GeometryError::Shape(format!(
                "cannot multiply {}-column point matrix by {}x{} matrix",
                self.ncols(),
                m.nrows(),
                m.ncols()
            )));
        }
        let cols = (0..m.ncols())
            .map(|c| {
                let mut acc = vec![Rational::zero(); self.dim];
                for i in 0..m.nrows() {
                    linalg::axpy(&mut acc, m.get(i, c), &self.cols[i]);
                }
                acc
            })
            .collect();
        Ok(PointMatrix { dim: self.dim, cols })
    }

    /// Columns `i` selected by `idx`, in order.
    pub fn select(&self, idx: &[usize]) -> Vec<Vector> {
        idx.iter().map(|&i| self.cols[i].clone()).collect()
    }

    /// Affine dimension of the column set.
    pub fn affine_dimension(&self) -> i32 {
        linalg::affine_dimension(&self.cols)
    }

    /// Per-coordinate bounding box `(min, max)`.
    pub fn bbox(&self) -> (Vector, Vector) {
        let mut lo = self.cols[0].clone();
        let mut hi = self.cols[0].clone();
        for c in &self.cols[1..] {
            for k in 0..self.dim {
                if c[k] < lo[k] {
                    lo[k] = c[k].clone();
                }
                if c[k] > hi[k] {
                    hi[k] = c[k].clone();
                }
            }
        }
        (lo, hi)
    }
}

impl Serialize for PointMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.rows().serialize(s)
    }
}

impl<'de> Deserialize<'de> for PointMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let rows = Vec::<Vector>::deserialize(d)?;
        PointMatrix::from_rows(rows).map_err(serde::de::Error::custom)
    }
}

/// An `n × m` matrix, stored row-wise. A transition matrix has columns that sum to one.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TransitionMatrix {
    rows: Vec<Vector>,
    ncols: usize,
}

impl TransitionMatrix {
    pub fn from_rows(rows: Vec<Vector>) -> Result<Self, GeometryError> {
        if rows.is_empty() || rows[0].is_empty() {
            return Err(GeometryError::Shape("empty matrix".into()));
        }
        let ncols = rows[0].len();
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(GeometryError::Shape("ragged rows".into()));
        }
        Ok(TransitionMatrix { rows, ncols })
    }

    /// Builds from columns.
    pub fn from_columns(cols: Vec<Vector>) -> Result<Self, GeometryError> {
        if cols.is_empty() || cols[0].is_empty() {
            return Err(GeometryError::Shape("empty matrix".into()));
        }
        let n = cols[0].len();
        if cols.iter().any(|c| c.len() != n) {
            return Err(GeometryError::Shape("ragged columns".into()));
        }
        let rows = (0..n).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect();
        Self::from_rows(rows)
    }

    pub fn from_ratio_rows(rows: &[&[(i64, i64)]]) -> Self {
        let rows = rows.iter().map(|r| r.iter().map(|&(n, d)| Rational::new(n, d)).collect()).collect();
        Self::from_rows(rows).expect("well-formed literal")
    }

    pub fn identity(n: usize) -> Self {
        let rows =
            (0..n).map(|i| (0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect()).collect();
        TransitionMatrix { rows, ncols: n }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn get(&self, r: usize, c: usize) -> &Rational {
        &self.rows[r][c]
    }

    pub fn rows(&self) -> &[Vector] {
        &self.rows
    }

    pub fn column(&self, c: usize) -> Vector {
        self.rows.iter().map(|r| r[c].clone()).collect()
    }

    pub fn mul(&self, other: &TransitionMatrix) -> Result<TransitionMatrix, GeometryError> {
        if self.ncols != other.nrows() {
            return Err(GeometryError::Shape("inner dimensions differ".into()));
        }
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let mut acc = vec![Rational::zero(); other.ncols];
                for (k, a) in r.iter().enumerate() {
                    linalg::axpy(&mut acc, a, &other.rows[k]);
                }
                acc
            })
            .collect();
        Ok(TransitionMatrix { rows, ncols: other.ncols })
    }

    /// Every column sums to exactly one. Entries may be negative.
    pub fn is_transition(&self) -> bool {
        (0..self.ncols).all(|c| {
            let s: Rational = self.rows.iter().map(|r| r[c].clone()).sum();
            s.is_one()
        })
    }
}

impl Serialize for TransitionMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for TransitionMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let rows = Vec::<Vector>::deserialize(d)?;
        TransitionMatrix::from_rows(rows).map_err(serde::de::Error::custom)
    }
}

pub fn is_transition_matrix(m: &TransitionMatrix) -> bool {
    m.is_transition()
}
