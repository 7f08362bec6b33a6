use super::linalg::{self, sub, Vector};
use super::matrix::PointMatrix;
use super::rational::Rational;

/// Invertible affine map `x ↦ A x + b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineMap {
    pub a: Vec<Vector>,
    pub b: Vector,
}

impl AffineMap {
    pub fn apply(&self, x: &[Rational]) -> Vector {
        self.a.iter().zip(&self.b).map(|(row, bi)| linalg::dot(row, x) + bi).collect()
    }

    /// The linear part scaled so its first non-zero entry has absolute value one.
    pub fn linear_class(&self) -> Vec<Vector> {
        let s = self.a.iter().flatten().find(|x| !x.is_zero()).map(|x| x.abs().recip()).unwrap_or_else(Rational::one);
        self.a.iter().map(|r| linalg::scale(r, &s)).collect()
    }
}

fn complete_basis(mut dirs: Vec<Vector>, d: usize) -> Vec<Vector> {
    for i in 0..d {
        if dirs.len() == d {
            break;
        }
        let mut e = vec![Rational::zero(); d];
        e[i] = Rational::one();
        dirs.push(e);
        if linalg::rank(&dirs) < dirs.len() {
            dirs.pop();
        }
    }
    dirs
}

/// Finds an invertible affine `τ` with `τ(x_i) = y_i` for every column pair.
pub fn point_set_equivalence(x: &[Vector], y: &[Vector], d: usize) -> Option<AffineMap> {
    if x.len() != y.len() || x.is_empty() {
        return None;
    }
    let basis = linalg::affine_basis(x);
    let xd: Vec<Vector> = basis[1..].iter().map(|&i| sub(&x[i], &x[basis[0]])).collect();
    let yd: Vec<Vector> = basis[1..].iter().map(|&i| sub(&y[i], &y[basis[0]])).collect();
    if linalg::rank(&yd) < yd.len() {
        return None;
    }
    let xd = complete_basis(xd, d);
    let yd = complete_basis(yd, d);
    // A · X = Y with X, Y holding the direction vectors as columns  =>  A = Y X^{-1}
    let xcols: Vec<Vector> = (0..d).map(|r| xd.iter().map(|v| v[r].clone()).collect()).collect();
    let xinv = linalg::inverse(&xcols)?;
    let a: Vec<Vector> =
        (0..d).map(|r| (0..d).map(|c| (0..d).map(|k| &yd[k][r] * &xinv[k][c]).sum()).collect()).collect();
    let ax0: Vector = a.iter().map(|row| linalg::dot(row, &x[basis[0]])).collect();
    let b = sub(&y[basis[0]], &ax0);
    let map = AffineMap { a, b };
    if x.iter().zip(y).all(|(p, q)| map.apply(p) == *q) {
        Some(map)
    } else {
        None
    }
}

/// `Q ~ Q'`: some invertible affine map sends each column of `Q` to the
/// matching column of `Q'`.
pub fn matrix_equivalence(q1: &PointMatrix, q2: &PointMatrix) -> Option<AffineMap> {
    if q1.dim() != q2.dim() || q1.ncols() != q2.ncols() {
        return None;
    }
    point_set_equivalence(q1.columns(), q2.columns(), q1.dim())
}

/// `(Q1, R1) ~ (Q2, R2)`: one affine map for both pairs simultaneously.
pub fn matrix_pair_equivalence(
    q1: &PointMatrix,
    r1: &PointMatrix,
    q2: &PointMatrix,
    r2: &PointMatrix,
) -> Option<AffineMap> {
    if q1.dim() != q2.dim() || q1.ncols() != q2.ncols() || r1.ncols() != r2.ncols() {
        return None;
    }
    let x: Vec<Vector> = q1.columns().iter().chain(r1.columns()).cloned().collect();
    let y: Vec<Vector> = q2.columns().iter().chain(r2.columns()).cloned().collect();
    point_set_equivalence(&x, &y, q1.dim())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn translated_squares_are_equivalent() {
        let q = PointMatrix::from_ratio_columns(&[
            &[(0, 1), (0, 1)],
            &[(1, 1), (0, 1)],
            &[(0, 1), (1, 1)],
            &[(1, 1), (1, 1)],
        ]);
        let r = PointMatrix::from_ratio_columns(&[
            &[(1, 1), (0, 1)],
            &[(2, 1), (0, 1)],
            &[(1, 1), (1, 1)],
            &[(2, 1), (1, 1)],
        ]);
        assert!(matrix_equivalence(&q, &r).is_some());
        // reflected pair: left/right swapped cannot map as an ordered pair
        assert!(matrix_pair_equivalence(&q, &r, &q, &r).is_some());
        assert!(matrix_pair_equivalence(&q, &r, &r, &q).is_none());
    }

    #[test]
    fn collapse_is_not_equivalence() {
        let q = PointMatrix::from_ratio_columns(&[&[(0, 1), (0, 1)], &[(1, 1), (0, 1)], &[(0, 1), (1, 1)]]);
        let flat = PointMatrix::from_ratio_columns(&[&[(0, 1), (0, 1)], &[(1, 1), (0, 1)], &[(2, 1), (0, 1)]]);
        assert!(matrix_equivalence(&q, &flat).is_none());
        assert!(matrix_equivalence(&flat, &q).is_none());
    }
}
