use std::collections::{HashSet, VecDeque};
use std::sync::OnceLock;

use crate::geometry::{PointMatrix, Rational, TransitionMatrix, Vector};

use super::kd::{kd_to_b_spec, CubeSymmetry, KdMode, KdSpecification};
use super::{globalize, BSpecification, BStateSystem, SpecError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub description: &'static str,
}

const CATALOG: &[CatalogEntry] = &[
    CatalogEntry { name: "morton2", description: "Z-order curve in 2D" },
    CatalogEntry { name: "morton3", description: "Z-order curve in 3D" },
    CatalogEntry { name: "hilbert2d_global", description: "Hilbert curve, four states H A B R" },
    CatalogEntry { name: "hilbert2d_local", description: "Hilbert curve, single state in local frames" },
    CatalogEntry { name: "hilbert3d_global", description: "3D Hilbert curve from a searched pattern" },
    CatalogEntry { name: "peano2_global", description: "Peano curve in 2D, reflection states P Q R S" },
    CatalogEntry { name: "peano2_local", description: "Peano curve in 2D, single state" },
    CatalogEntry { name: "peano3_global", description: "Peano curve in 3D, reflection states" },
    CatalogEntry { name: "peano3_local", description: "Peano curve in 3D, single state" },
    CatalogEntry { name: "sierpinski2d_local", description: "Sierpinski curve on right triangles, single state" },
    CatalogEntry { name: "sierpinski2d_global", description: "Sierpinski curve with orientation states" },
    CatalogEntry { name: "gosper2d", description: "Gosper flowsnake cells (two states, cells leave the parent)" },
];

pub fn catalog_names() -> Vec<CatalogEntry> {
    CATALOG.to_vec()
}

fn split_mode(name: &str) -> (&str, Option<KdMode>) {
    if let Some(base) = name.strip_suffix("_global") {
        (base, Some(KdMode::Global))
    } else if let Some(base) = name.strip_suffix("_local") {
        (base, Some(KdMode::Local))
    } else {
        (name, None)
    }
}

fn dim_suffix(base: &str, prefix: &str) -> Option<usize> {
    let rest = base.strip_prefix(prefix)?;
    let rest = rest.strip_suffix('d').unwrap_or(rest);
    rest.parse().ok().filter(|&d| (1..=8).contains(&d))
}

/// The k^d pattern behind a builtin name, if it has one.
pub fn builtin_kd(name: &str) -> Result<KdSpecification, SpecError> {
    let (base, mode) = split_mode(name);
    let mode = mode.unwrap_or(KdMode::Global);
    let mut kd = if let Some(d) = dim_suffix(base, "morton") {
        morton(d)
    } else if let Some(d) = dim_suffix(base, "peano") {
        peano(d)
    } else if base == "hilbert2d" || base == "hilbert2" {
        hilbert2d()
    } else if base == "hilbert3d" || base == "hilbert3" {
        hilbert3d_search().clone()
    } else {
        return Err(SpecError::UnknownBuiltin(name.to_string()));
    };
    kd.mode = mode;
    kd.name = match mode {
        KdMode::Global if base.starts_with("morton") => base.to_string(),
        KdMode::Global => format!("{}_global", kd.name),
        KdMode::Local => format!("{}_local", kd.name),
    };
    Ok(kd)
}

/// Builds a catalog curve by name. Aliases: `hilbert2d`, `hilbert3d`, `peanoN` and
/// `sierpinski2d` pick the model used throughout the documentation.
pub fn builtin(name: &str) -> Result<BSpecification, SpecError> {
    let (base, mode) = split_mode(name);
    match base {
        "sierpinski2d" | "sierpinski2" => {
            let local = sierpinski2d_local();
            match mode {
                Some(KdMode::Global) => globalize(&local),
                _ => Ok(local),
            }
        }
        "gosper2d" | "gosper" => Ok(gosper2d()),
        _ => kd_to_b_spec(&builtin_kd(name)?),
    }
}

fn morton(d: usize) -> KdSpecification {
    let b = 1usize << d;
    KdSpecification {
        name: format!("morton{d}"),
        k: 2,
        d,
        mode: KdMode::Global,
        order: (0..b).map(|j| (0..d).map(|t| ((j >> t) & 1) as u32).collect()).collect(),
        orientations: vec![CubeSymmetry::identity(d); b],
        labels: vec![(CubeSymmetry::identity(d), "Z".into())],
    }
}

fn hilbert2d() -> KdSpecification {
    let id = CubeSymmetry::identity(2);
    let rot = CubeSymmetry::new(vec![0, 1], vec![true, true]);
    KdSpecification {
        name: "hilbert2d".into(),
        k: 2,
        d: 2,
        mode: KdMode::Global,
        order: vec![vec![0, 0], vec![0, 1], vec![1, 1], vec![1, 0]],
        orientations: vec![CubeSymmetry::swap2(), id.clone(), id.clone(), CubeSymmetry::antidiagonal2()],
        labels: vec![
            (id, "H".into()),
            (CubeSymmetry::swap2(), "A".into()),
            (CubeSymmetry::antidiagonal2(), "B".into()),
            (rot, "R".into()),
        ],
    }
}

/// Boustrophedon order on `{0,1,2}^d`; child copies are reflected so that
/// consecutive sub-curves join.
fn peano(d: usize) -> KdSpecification {
    let b = 3usize.pow(d as u32);
    let mut order = Vec::with_capacity(b);
    let mut orientations = Vec::with_capacity(b);
    for j in 0..b {
        let digits: Vec<u32> = (0..d).map(|t| ((j / 3usize.pow(t as u32)) % 3) as u32).collect();
        let cell = (0..d)
            .map(|i| {
                let higher: u32 = digits[i + 1..].iter().sum();
                if higher % 2 == 0 {
                    digits[i]
                } else {
                    2 - digits[i]
                }
            })
            .collect();
        let total: u32 = digits.iter().sum();
        let flip = (0..d).map(|i| (total - digits[i]) % 2 == 1).collect();
        order.push(cell);
        orientations.push(CubeSymmetry::new((0..d).collect(), flip));
    }
    let mut labels = Vec::new();
    if d == 2 {
        for (mask, l) in ["P", "Q", "R", "S"].iter().enumerate() {
            let flip = vec![mask & 1 == 1, mask & 2 == 2];
            labels.push((CubeSymmetry::new(vec![0, 1], flip), l.to_string()));
        }
    } else {
        labels.push((CubeSymmetry::identity(d), "P".to_string()));
    }
    KdSpecification { name: format!("peano{d}"), k: 3, d, mode: KdMode::Global, order, orientations, labels }
}

fn group_order(gens: &[CubeSymmetry]) -> (usize, bool) {
    let d = gens[0].dim();
    let mut seen: HashSet<CubeSymmetry> = HashSet::from([CubeSymmetry::identity(d)]);
    let mut q = VecDeque::from([CubeSymmetry::identity(d)]);
    while let Some(g) = q.pop_front() {
        for h in gens {
            let gh = g.compose(h);
            if seen.insert(gh.clone()) {
                q.push_back(gh);
            }
        }
    }
    let abelian = gens.iter().all(|a| gens.iter().all(|b| a.compose(b) == b.compose(a)));
    (seen.len(), abelian)
}

/// A 3D Hilbert pattern found by backtracking: Gray-code cell order, entry at
/// the origin corner and exit at `(0,0,1)`, each child oriented so that it
/// starts where the previous child ended. Among the solutions, the first one
/// whose orientations generate a non-abelian group of order 12 is taken.
pub fn hilbert3d_search() -> &'static KdSpecification {
    static CELL: OnceLock<KdSpecification> = OnceLock::new();
    CELL.get_or_init(|| {
        let order: Vec<Vec<u32>> = (0..8u32)
            .map(|j| {
                let g = j ^ (j >> 1);
                (0..3).map(|t| (g >> t) & 1).collect()
            })
            .collect();
        let syms = CubeSymmetry::all(3);
        let entry = 0usize;
        let exit = 0b100usize;
        let corner = |c: usize| -> [u32; 3] { [(c & 1) as u32, ((c >> 1) & 1) as u32, ((c >> 2) & 1) as u32] };
        let add = |a: &[u32], c: usize| -> [u32; 3] {
            let c = corner(c);
            [a[0] + c[0], a[1] + c[1], a[2] + c[2]]
        };
        let mut chosen: Vec<usize> = Vec::new();
        let mut found: Option<Vec<CubeSymmetry>> = None;
        // iterative DFS over choices
        fn dfs(
            j: usize,
            at: [u32; 3],
            order: &[Vec<u32>],
            syms: &[CubeSymmetry],
            chosen: &mut Vec<usize>,
            found: &mut Option<Vec<CubeSymmetry>>,
            entry: usize,
            exit: usize,
            add: &dyn Fn(&[u32], usize) -> [u32; 3],
        ) {
            if found.is_some() {
                return;
            }
            if j == 8 {
                if at != [0, 0, 2] {
                    return;
                }
                let gens: Vec<CubeSymmetry> = chosen.iter().map(|&i| syms[i].clone()).collect();
                let (n, abelian) = group_order(&gens);
                if n == 12 && !abelian {
                    *found = Some(gens);
                }
                return;
            }
            for (i, g) in syms.iter().enumerate() {
                if add(&order[j], g.apply_corner(entry)) != at {
                    continue;
                }
                let out = add(&order[j], g.apply_corner(exit));
                chosen.push(i);
                dfs(j + 1, out, order, syms, chosen, found, entry, exit, add);
                chosen.pop();
            }
        }
        dfs(0, [0, 0, 0], &order, &syms, &mut chosen, &mut found, entry, exit, &add);
        let orientations = found.expect("a 3D Hilbert pattern exists");
        KdSpecification {
            name: "hilbert3d".into(),
            k: 2,
            d: 3,
            mode: KdMode::Global,
            order,
            orientations,
            labels: vec![(CubeSymmetry::identity(3), "H".into())],
        }
    })
}

fn col(v: &[(i64, i64)]) -> Vector {
    v.iter().map(|&(n, d)| Rational::new(n, d)).collect()
}

/// Right triangle `(p0, p1, p2)` with the right angle at `p1`; each child is
/// a half triangle cut at the hypotenuse midpoint `m`: `(p0, m, p1)` then `(p1, m, p2)`.
pub fn sierpinski2d_local() -> BSpecification {
    let root = PointMatrix::from_ratio_columns(&[&[(0, 1), (0, 1)], &[(1, 1), (0, 1)], &[(1, 1), (1, 1)]]);
    let m = col(&[(1, 2), (0, 1), (1, 2)]);
    let e = |i: usize| -> Vector { (0..3).map(|k| if k == i { Rational::one() } else { Rational::zero() }).collect() };
    let m0 = TransitionMatrix::from_columns(vec![e(0), m.clone(), e(1)]).expect("3x3");
    let m1 = TransitionMatrix::from_columns(vec![e(1), m, e(2)]).expect("3x3");
    BSpecification {
        name: "sierpinski2d_local".into(),
        dimension: 2,
        system: BStateSystem::new(2, vec![vec![0, 0]]).expect("valid"),
        vertex_counts: vec![3],
        root_points: root,
        matrices: vec![m0, m1],
        state_labels: vec!["G".into()],
    }
}

/// Gosper flowsnake cells in lattice coordinates (basis `1`, `ω = e^{iπ/3}`),
/// which is an affine image of the regular hexagonal picture. Children are the
/// seven hexagons of a flower scaled down by multiplication with `1/(2+ω)`.
/// The seven cells do not fit inside the parent hexagon.
pub fn gosper2d() -> BSpecification {
    let units: [(i64, i64); 6] = [(1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1)];
    let ring: [(i64, i64); 6] = [(1, 1), (-1, 2), (-2, 1), (-1, -1), (1, -2), (2, -1)];
    // cell centres along the curve: a Hamiltonian path through the flower
    let centres: [(i64, i64); 7] = [ring[4], ring[3], (0, 0), ring[5], ring[0], ring[1], ring[2]];
    // inverse of multiplication by 2+ω: (1/7) [[3, 1], [-1, 2]]
    let shrink = |x: i64, y: i64| -> Vector { vec![Rational::new(3 * x + y, 7), Rational::new(-x + 2 * y, 7)] };
    let root_cols: Vec<Vector> =
        units.iter().map(|&(x, y)| vec![Rational::from_int(x), Rational::from_int(y)]).collect();
    let root = PointMatrix::from_columns(2, root_cols.clone()).expect("2D");
    // barycentric coordinates w.r.t. root vertices 0, 1, 2
    let bary = |p: &Vector| -> Vector {
        let (a, b, c) = (&root_cols[0], &root_cols[1], &root_cols[2]);
        let rows = vec![vec![&b[0] - &a[0], &c[0] - &a[0]], vec![&b[1] - &a[1], &c[1] - &a[1]]];
        let rhs = vec![&p[0] - &a[0], &p[1] - &a[1]];
        let t = crate::geometry::linalg::solve(&rows, &rhs).expect("independent");
        let mut w = vec![Rational::zero(); 6];
        w[0] = Rational::one() - &t[0] - &t[1];
        w[1] = t[0].clone();
        w[2] = t[1].clone();
        w
    };
    let child_state = vec![vec![0, 1, 1, 0, 0, 0, 1], vec![0, 1, 1, 1, 0, 0, 1]];
    let mut matrices = Vec::new();
    for _s in 0..2 {
        for &(cx, cy) in &centres {
            let cols: Vec<Vector> = units.iter().map(|&(ux, uy)| bary(&shrink(ux + cx, uy + cy))).collect();
            matrices.push(TransitionMatrix::from_columns(cols).expect("6x6"));
        }
    }
    BSpecification {
        name: "gosper2d".into(),
        dimension: 2,
        system: BStateSystem::new(7, child_state).expect("valid"),
        vertex_counts: vec![6, 6],
        root_points: root,
        matrices,
        state_labels: vec!["A".into(), "B".into()],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spec::validate_spec;

    #[test]
    fn every_catalog_entry_builds_and_validates() {
        for e in catalog_names() {
            let s = builtin(e.name).unwrap_or_else(|err| panic!("{}: {err}", e.name));
            validate_spec(&s).unwrap_or_else(|err| panic!("{}: {err}", e.name));
        }
    }

    #[test]
    fn state_counts() {
        assert_eq!(builtin("morton2").unwrap().state_count(), 1);
        assert_eq!(builtin("hilbert2d_global").unwrap().state_count(), 4);
        assert_eq!(builtin("hilbert3d_global").unwrap().state_count(), 12);
        assert_eq!(builtin("peano2").unwrap().state_count(), 4);
        assert_eq!(builtin("peano3").unwrap().state_count(), 4);
        assert_eq!(builtin("sierpinski2d").unwrap().state_count(), 1);
        assert!(builtin("nonsense").is_err());
    }

    #[test]
    fn gosper_is_not_invertible() {
        assert!(!gosper2d().system.is_invertible());
    }
}
