//! Exact facet enumeration by gift wrapping. Ridges of a facet come from a
//! recursive hull of the facet's points in one dimension less.

use std::collections::{BTreeSet, VecDeque};

use super::linalg::{self, dot, sub, Vector};
use super::rational::Rational;
use super::GeometryError;

/// Half-space `normal · x <= offset`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfSpace {
    pub normal: Vector,
    pub offset: Rational,
}

impl HalfSpace {
    /// `normal · x - offset`; positive means outside.
    pub fn eval(&self, x: &[Rational]) -> Rational {
        dot(&self.normal, x) - &self.offset
    }
}

/// A facet of a full-dimensional point set: the indices of all points on it
/// (sorted, 0-based) and its supporting half-space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HullFacet {
    pub indices: Vec<usize>,
    pub plane: HalfSpace,
}

fn normalize(mut n: Vector) -> Vector {
    if let Some(first) = n.iter().find(|x| !x.is_zero()) {
        let s = first.abs().recip();
        for x in n.iter_mut() {
            *x = &*x * &s;
        }
    }
    n
}

fn tight(points: &[Vector], n: &[Rational], c: &Rational) -> Vec<usize> {
    (0..points.len()).filter(|&i| dot(n, &points[i]) == *c).collect()
}

fn max_dot(points: &[Vector], n: &[Rational]) -> Rational {
    points.iter().map(|p| dot(n, p)).max().expect("non-empty")
}

/// Direction vectors spanning the affine hull of `idx` (a basis).
fn affine_dirs(points: &[Vector], idx: &[usize]) -> Vec<Vector> {
    let sub_pts: Vec<Vector> = idx.iter().map(|&i| points[i].clone()).collect();
    let basis = linalg::affine_basis(&sub_pts);
    basis[1..].iter().map(|&b| sub(&sub_pts[b], &sub_pts[basis[0]])).collect()
}

/// Rotates the supporting hyperplane `(n, a)` about the affine subspace through
/// `a` spanned by `axis` (dimension d-2). `r` is orthogonal to `axis` and `n`
/// and points away from the points already on the plane. Returns the first
/// supporting hyperplane hit.
fn wrap(points: &[Vector], n: &[Rational], r: &[Rational], a: &[Rational]) -> Vector {
    let mut best: Option<(Rational, Rational)> = None;
    for q in points {
        let diff = sub(q, a);
        let alpha = dot(n, &diff);
        if !alpha.is_negative() {
            continue;
        }
        let beta = dot(r, &diff);
        best = match best {
            None => Some((alpha, beta)),
            Some((ab, bb)) => {
                // smaller angle atan2(-alpha, beta) wins
                let cross = &(&alpha * &bb) - &(&beta * &ab);
                if cross.is_positive() {
                    Some((alpha, beta))
                } else {
                    Some((ab, bb))
                }
            }
        };
    }
    let (alpha, beta) = best.expect("full-dimensional set has points off every supporting plane");
    let mut out = linalg::scale(n, &beta);
    linalg::axpy(&mut out, &(-alpha), r);
    normalize(out)
}

fn initial_facet(points: &[Vector], d: usize) -> (Vector, Vec<usize>) {
    let mut n = vec![Rational::zero(); d];
    n[0] = -Rational::one();
    loop {
        let c = max_dot(points, &n);
        let g = tight(points, &n, &c);
        let mut dirs = affine_dirs(points, &g);
        if dirs.len() == d - 1 {
            return (n, g);
        }
        // extend to a (d-2)-dimensional axis inside the plane
        for h in linalg::nullspace(&[n.clone()], d) {
            if dirs.len() == d - 2 {
                break;
            }
            dirs.push(h);
            if linalg::rank(&dirs) < dirs.len() {
                dirs.pop();
            }
        }
        let mut rows = dirs.clone();
        rows.push(n.clone());
        let m = linalg::nullspace(&rows, d).pop().expect("one-dimensional complement");
        n = wrap(points, &n, &m, &points[g[0]]);
    }
}

fn facets_1d(points: &[Vector]) -> Vec<HullFacet> {
    let min = points.iter().map(|p| p[0].clone()).min().expect("non-empty");
    let max = points.iter().map(|p| p[0].clone()).max().expect("non-empty");
    let lo = (0..points.len()).filter(|&i| points[i][0] == min).collect();
    let hi = (0..points.len()).filter(|&i| points[i][0] == max).collect();
    vec![
        HullFacet { indices: lo, plane: HalfSpace { normal: vec![-Rational::one()], offset: -min } },
        HullFacet { indices: hi, plane: HalfSpace { normal: vec![Rational::one()], offset: max } },
    ]
}

/// Facets of the convex hull of a full-dimensional point set in `R^d`.
pub fn hull(points: &[Vector], d: usize) -> Result<Vec<HullFacet>, GeometryError> {
    if points.is_empty() || d == 0 {
        return Err(GeometryError::Degenerate { expected: d as i32, found: -1 });
    }
    let dim = linalg::affine_dimension(points);
    if dim != d as i32 {
        return Err(GeometryError::Degenerate { expected: d as i32, found: dim });
    }
    if d == 1 {
        return Ok(facets_1d(points));
    }
    let (n0, g0) = initial_facet(points, d);
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut out = Vec::new();
    let mut queue = VecDeque::new();
    seen.insert(g0.clone());
    queue.push_back((n0, g0));
    while let Some((n, g)) = queue.pop_front() {
        let c = dot(&n, &points[g[0]]);
        // project the facet's points by dropping one coordinate the normal depends on
        let drop = n.iter().position(|x| !x.is_zero()).expect("non-zero normal");
        let proj: Vec<Vector> = g
            .iter()
            .map(|&i| points[i].iter().enumerate().filter(|(k, _)| *k != drop).map(|(_, x)| x.clone()).collect())
            .collect();
        let ridges = hull(&proj, d - 1)?;
        for ridge in ridges {
            let ridx: Vec<usize> = ridge.indices.iter().map(|&k| g[k]).collect();
            let a = points[ridx[0]].clone();
            let mut rows = affine_dirs(points, &ridx);
            rows.push(n.clone());
            let mut r = linalg::nullspace(&rows, d).pop().expect("one-dimensional complement");
            let other = g.iter().find(|i| !ridx.contains(i)).expect("facet larger than ridge");
            if dot(&r, &sub(&points[*other], &a)).is_positive() {
                r = r.iter().map(|x| -x).collect();
            }
            let n2 = wrap(points, &n, &r, &a);
            let c2 = dot(&n2, &a);
            let g2 = tight(points, &n2, &c2);
            if seen.insert(g2.clone()) {
                queue.push_back((n2, g2));
            }
        }
        out.push(HullFacet { indices: g, plane: HalfSpace { normal: n, offset: c } });
    }
    out.sort_by(|a, b| a.indices.cmp(&b.indices));
    Ok(out)
}
