//! Small exact linear algebra over [`Rational`].

use super::rational::Rational;

pub type Vector = Vec<Rational>;

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    let mut acc = Rational::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc += &(x * y);
        }
    }
    acc
}

pub fn sub(a: &[Rational], b: &[Rational]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale(a: &[Rational], s: &Rational) -> Vector {
    a.iter().map(|x| x * s).collect()
}

pub fn axpy(acc: &mut [Rational], s: &Rational, x: &[Rational]) {
    if s.is_zero() {
        return;
    }
    for (a, v) in acc.iter_mut().zip(x) {
        if !v.is_zero() {
            *a += &(s * v);
        }
    }
}

/// Row echelon form in place; returns pivot columns.
fn echelon(rows: &mut Vec<Vector>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        let pivot_row: Vector = rows[r].iter().map(|x| x * &inv).collect();
        rows[r] = pivot_row;
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let factor = rows[i][c].clone();
                let pr = rows[r].clone();
                for (a, b) in rows[i].iter_mut().zip(&pr) {
                    if !b.is_zero() {
                        *a -= &(&factor * b);
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(rows: &[Vector]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let n = rows[0].len();
    let mut m = rows.to_vec();
    echelon(&mut m, n).len()
}

/// Basis of `{x : rows · x = 0}`.
pub fn nullspace(rows: &[Vector], n: usize) -> Vec<Vector> {
    let mut m = rows.to_vec();
    let pivots = echelon(&mut m, n);
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![Rational::zero(); n];
            v[fc] = Rational::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -&m[r][fc];
            }
            v
        })
        .collect()
}

/// Solves `a · x = b` for square invertible `a`.
pub fn solve(a: &[Vector], b: &[Rational]) -> Option<Vector> {
    let n = a.len();
    let mut aug: Vec<Vector> = a
        .iter()
        .zip(b)
        .map(|(row, v)| {
            let mut r = row.clone();
            r.push(v.clone());
            r
        })
        .collect();
    let pivots = echelon(&mut aug, n);
    if pivots.len() < n {
        return None;
    }
    Some(aug.iter().map(|r| r[n].clone()).collect())
}

/// Inverse of a square matrix given by rows.
pub fn inverse(a: &[Vector]) -> Option<Vec<Vector>> {
    let n = a.len();
    let mut aug: Vec<Vector> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            for j in 0..n {
                r.push(if i == j { Rational::one() } else { Rational::zero() });
            }
            r
        })
        .collect();
    let pivots = echelon(&mut aug, n);
    if pivots.len() < n {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Indices of a maximal affinely independent subset, chosen greedily in order.
pub fn affine_basis(points: &[Vector]) -> Vec<usize> {
    let mut basis = Vec::new();
    if points.is_empty() {
        return basis;
    }
    basis.push(0);
    let mut dirs: Vec<Vector> = Vec::new();
    for i in 1..points.len() {
        let d = sub(&points[i], &points[0]);
        if d.iter().all(|x| x.is_zero()) {
            continue;
        }
        dirs.push(d);
        if rank(&dirs) == dirs.len() {
            basis.push(i);
        } else {
            dirs.pop();
        }
    }
    basis
}

/// Affine dimension of a point set; -1 for the empty set.
pub fn affine_dimension(points: &[Vector]) -> i32 {
    affine_basis(points).len() as i32 - 1
}
