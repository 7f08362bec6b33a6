//! H-representations, intersection dimension and face equality.

use std::collections::BTreeSet;

use super::hull::{hull, HalfSpace};
use super::linalg::{self, dot, sub, Vector};
use super::matrix::PointMatrix;
use super::rational::Rational;

/// Half-spaces describing `conv(points)` for any affine dimension.
/// Lower-dimensional sets get equality constraints as pairs of half-spaces.
pub fn h_representation(points: &[Vector], d: usize) -> Vec<HalfSpace> {
    let basis = linalg::affine_basis(points);
    let k = basis.len() - 1;
    if k == d {
        return hull(points, d).expect("full-dimensional").into_iter().map(|f| f.plane).collect();
    }
    let p0 = &points[basis[0]];
    let dirs: Vec<Vector> = basis[1..].iter().map(|&b| sub(&points[b], p0)).collect();
    let mut out = Vec::new();
    for e in linalg::nullspace(&dirs, d) {
        let c = dot(&e, p0);
        out.push(HalfSpace { normal: e.iter().map(|x| -x).collect(), offset: -&c });
        out.push(HalfSpace { normal: e, offset: c });
    }
    if k == 0 {
        return out;
    }
    // Gram matrix for coordinates inside the affine hull
    let gram: Vec<Vector> = dirs.iter().map(|a| dirs.iter().map(|b| dot(a, b)).collect()).collect();
    let local: Vec<Vector> = points
        .iter()
        .map(|p| {
            let diff = sub(p, p0);
            let rhs: Vector = dirs.iter().map(|a| dot(a, &diff)).collect();
            linalg::solve(&gram, &rhs).expect("independent directions")
        })
        .collect();
    for f in hull(&local, k).expect("full-dimensional in its hull") {
        let y = linalg::solve(&gram, &f.plane.normal).expect("independent directions");
        let mut n = vec![Rational::zero(); d];
        for (yi, a) in y.iter().zip(&dirs) {
            linalg::axpy(&mut n, yi, a);
        }
        let offset = dot(&n, &points[f.indices[0]]);
        out.push(HalfSpace { normal: n, offset });
    }
    out
}

fn tight_rows(constraints: &[HalfSpace], v: &[Rational]) -> Vec<usize> {
    (0..constraints.len()).filter(|&i| constraints[i].eval(v).is_zero()).collect()
}

fn rank_of(constraints: &[HalfSpace], idx: &[usize]) -> usize {
    let rows: Vec<Vector> = idx.iter().map(|&i| constraints[i].normal.clone()).collect();
    linalg::rank(&rows)
}

fn strictly_separated(a: &PointMatrix, b: &PointMatrix) -> bool {
    let (alo, ahi) = a.bbox();
    let (blo, bhi) = b.bbox();
    (0..a.dim()).any(|k| ahi[k] < blo[k] || bhi[k] < alo[k])
}

/// Affine dimension of `conv(Q1) ∩ conv(Q2)`, or -1 when empty.
///
/// Double description: the vertices of `conv(Q2)` are clipped by each
/// half-space of `conv(Q1)`, generating new vertices only along edges.
pub fn intersection_dimension(q1: &PointMatrix, q2: &PointMatrix) -> i32 {
    assert_eq!(q1.dim(), q2.dim(), "dimension mismatch");
    if strictly_separated(q1, q2) {
        return -1;
    }
    let d = q1.dim();
    let h1 = h_representation(q1.columns(), d);
    let mut cons = h_representation(q2.columns(), d);
    let mut verts: Vec<Vector> = Vec::new();
    let mut seen = BTreeSet::new();
    for p in q2.columns() {
        if seen.insert(p.clone()) && rank_of(&cons, &tight_rows(&cons, p)) == d {
            verts.push(p.clone());
        }
    }
    for h in h1 {
        let vals: Vec<Rational> = verts.iter().map(|v| h.eval(v)).collect();
        if vals.iter().all(|x| !x.is_positive()) {
            cons.push(h);
            continue;
        }
        let mut next: Vec<Vector> = Vec::new();
        let inside: Vec<usize> = (0..verts.len()).filter(|&i| vals[i].is_negative()).collect();
        let outside: Vec<usize> = (0..verts.len()).filter(|&i| vals[i].is_positive()).collect();
        for i in 0..verts.len() {
            if !vals[i].is_positive() {
                next.push(verts[i].clone());
            }
        }
        let tights: Vec<Vec<usize>> = verts.iter().map(|v| tight_rows(&cons, v)).collect();
        for &u in &inside {
            for &w in &outside {
                let common: Vec<usize> = tights[u].iter().copied().filter(|c| tights[w].contains(c)).collect();
                if rank_of(&cons, &common) + 1 != d {
                    continue;
                }
                // point on segment u -> w where h is tight
                let t = &vals[u] / &(&vals[u] - &vals[w]);
                let mut p = verts[u].clone();
                linalg::axpy(&mut p, &t, &sub(&verts[w], &verts[u]));
                next.push(p);
            }
        }
        cons.push(h);
        let mut seen = BTreeSet::new();
        next.retain(|p| seen.insert(p.clone()));
        verts = next;
        if verts.is_empty() {
            return -1;
        }
    }
    linalg::affine_dimension(&verts)
}

/// Supporting plane of the face given by `idx`, oriented so that all columns
/// satisfy `normal · x <= offset`. `None` if the columns do not span a facet.
pub fn facet_plane(q: &PointMatrix, idx: &[usize]) -> Option<HalfSpace> {
    let d = q.dim();
    let pts = q.select(idx);
    let basis = linalg::affine_basis(&pts);
    if basis.len() != d {
        return None;
    }
    let dirs: Vec<Vector> = basis[1..].iter().map(|&b| sub(&pts[b], &pts[basis[0]])).collect();
    let mut n = linalg::nullspace(&dirs, d).pop()?;
    let c = dot(&n, &pts[0]);
    let mut above = false;
    let mut below = false;
    for p in q.columns() {
        let v = dot(&n, p) - &c;
        above |= v.is_positive();
        below |= v.is_negative();
    }
    if above && below {
        return None;
    }
    if above {
        n = n.iter().map(|x| -x).collect();
    }
    let offset = dot(&n, &pts[0]);
    Some(HalfSpace { normal: n, offset })
}

/// Extreme points of a point set, sorted and deduplicated.
pub fn extreme_points(points: &[Vector], d: usize) -> Vec<Vector> {
    let uniq: BTreeSet<Vector> = points.iter().cloned().collect();
    let uniq: Vec<Vector> = uniq.into_iter().collect();
    if uniq.len() <= 2 {
        return uniq;
    }
    let cons = h_representation(&uniq, d);
    uniq.into_iter().filter(|p| rank_of(&cons, &tight_rows(&cons, p)) == d).collect()
}

/// True when `conv(Q1) ∩ conv(Q2)` is exactly the facet `f1` of `Q1` and the
/// facet `f2` of `Q2`, with both facets equal as point sets.
pub fn intersection_equals_face(q1: &PointMatrix, f1: &[usize], q2: &PointMatrix, f2: &[usize]) -> bool {
    let d = q1.dim();
    let a: BTreeSet<Vector> = q1.select(f1).into_iter().collect();
    let b: BTreeSet<Vector> = q2.select(f2).into_iter().collect();
    if a != b {
        let a: Vec<Vector> = a.into_iter().collect();
        let b: Vec<Vector> = b.into_iter().collect();
        if extreme_points(&a, d) != extreme_points(&b, d) {
            return false;
        }
    }
    let (Some(p1), Some(_)) = (facet_plane(q1, f1), facet_plane(q2, f2)) else {
        return false;
    };
    // Q2 must lie on the far side of the shared plane
    q2.columns().iter().all(|p| !p1.eval(p).is_negative())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square(x: i64, y: i64, s: i64) -> PointMatrix {
        PointMatrix::from_ratio_columns(&[
            &[(x, 1), (y, 1)],
            &[(x + s, 1), (y, 1)],
            &[(x, 1), (y + s, 1)],
            &[(x + s, 1), (y + s, 1)],
        ])
    }

    #[test]
    fn dims_of_square_intersections() {
        assert_eq!(intersection_dimension(&square(0, 0, 2), &square(1, 1, 2)), 2);
        assert_eq!(intersection_dimension(&square(0, 0, 1), &square(1, 0, 1)), 1);
        assert_eq!(intersection_dimension(&square(0, 0, 1), &square(1, 1, 1)), 0);
        assert_eq!(intersection_dimension(&square(0, 0, 1), &square(2, 0, 1)), -1);
    }

    #[test]
    fn diamond_touching_square_corner() {
        let diamond = PointMatrix::from_ratio_columns(&[
            &[(2, 1), (1, 1)],
            &[(3, 1), (0, 1)],
            &[(4, 1), (1, 1)],
            &[(3, 1), (2, 1)],
        ]);
        // bboxes overlap on [2,2]x[0,2] but shapes only share (2,1)
        let sq = square(0, 0, 2);
        assert_eq!(intersection_dimension(&sq, &diamond), 0);
        let sq2 = PointMatrix::from_ratio_columns(&[
            &[(0, 1), (0, 1)],
            &[(5, 2), (0, 1)],
            &[(0, 1), (2, 1)],
            &[(5, 2), (2, 1)],
        ]);
        assert_eq!(intersection_dimension(&sq2, &diamond), 2);
    }

    #[test]
    fn shared_edge_is_face() {
        let a = square(0, 0, 1);
        let b = square(1, 0, 1);
        assert!(intersection_equals_face(&a, &[1, 3], &b, &[0, 2]));
        assert!(!intersection_equals_face(&a, &[0, 2], &b, &[0, 2]));
        let half = PointMatrix::from_ratio_columns(&[
            &[(1, 1), (0, 1)],
            &[(2, 1), (0, 1)],
            &[(1, 1), (1, 2)],
            &[(2, 1), (1, 2)],
        ]);
        assert!(!intersection_equals_face(&a, &[1, 3], &half, &[0, 2]));
    }

    #[test]
    fn lower_dimensional_hrep() {
        let seg = vec![
            vec![Rational::from_int(0), Rational::from_int(0)],
            vec![Rational::from_int(2), Rational::from_int(2)],
        ];
        let h = h_representation(&seg, 2);
        let inside = vec![Rational::from_int(1), Rational::from_int(1)];
        let off = vec![Rational::from_int(1), Rational::from_int(0)];
        let beyond = vec![Rational::from_int(3), Rational::from_int(3)];
        assert!(h.iter().all(|c| !c.eval(&inside).is_positive()));
        assert!(h.iter().any(|c| c.eval(&off).is_positive()));
        assert!(h.iter().any(|c| c.eval(&beyond).is_positive()));
    }
}
