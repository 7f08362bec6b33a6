//! Property tests for the invariants of each module.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigUint;
use proptest::prelude::*;

use sfc_core::engine::{neighbor_iterative, neighbor_multilevel, neighbor_node, MultiLevelTables, Scratch, TableTree};
use sfc_core::fast::{hilbert2d_state_fast, morton_neighbor, sierpinski2d_neighbor_fast, PalindromeKernel};
use sfc_core::geometry::{
    hull_facets, hull_with_planes, intersection_equals_face, is_transition_matrix, matrix_equivalence,
    matrix_pair_equivalence, PointMatrix, Rational, TransitionMatrix,
};
use sfc_core::render::{render_svg, RenderOptions};
use sfc_core::spec::{builtin, builtin_kd, catalog_names, validate_spec};
use sfc_core::tables::{compile, find_pre_representation, CurveTables};
use sfc_core::tree::{
    compute_state, isomorphism_map, node_point_matrix, AlgebraicTree, CoordTree, GeometricTree, HistoryTree, IndexTree,
    LevelPos, LevelPositionTree, StateTree,
};

fn tables(name: &str) -> &'static CurveTables {
    static CACHE: OnceLock<Mutex<HashMap<String, &'static CurveTables>>> = OnceLock::new();
    let mut m = CACHE.get_or_init(Default::default).lock().unwrap();
    m.entry(name.to_string()).or_insert_with(|| Box::leak(Box::new(compile(&builtin(name).unwrap()).unwrap())))
}

fn r(n: i64) -> Rational {
    Rational::from_int(n)
}

fn points(d: usize, raw: &[Vec<i64>]) -> PointMatrix {
    PointMatrix::from_columns(d, raw.iter().map(|p| p.iter().map(|&x| r(x)).collect()).collect()).unwrap()
}

/// Integer affine map with a non-zero determinant applied to every column.
fn transform(q: &PointMatrix, a: &[Vec<i64>], b: &[i64]) -> PointMatrix {
    let cols = q
        .columns()
        .iter()
        .map(|c| {
            (0..a.len()).map(|i| (0..a.len()).map(|k| r(a[i][k]) * c[k].clone()).sum::<Rational>() + r(b[i])).collect()
        })
        .collect();
    PointMatrix::from_columns(a.len(), cols).unwrap()
}

fn det2(a: &[Vec<i64>]) -> i64 {
    a[0][0] * a[1][1] - a[0][1] * a[1][0]
}

fn full_dim_2d() -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-4i64..5, 2), 3..8)
        .prop_filter("full dimensional", |p| points(2, p).affine_dimension() == 2)
}

fn invertible_2d() -> impl Strategy<Value = (Vec<Vec<i64>>, Vec<i64>)> {
    (prop::collection::vec(prop::collection::vec(-3i64..4, 2), 2), prop::collection::vec(-5i64..6, 2))
        .prop_filter("invertible", |(a, _)| det2(a) != 0)
}

fn sorted(mut v: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
    v.sort();
    v
}

/// Tree axioms along a random path from the root.
fn check_axioms<T: IndexTree>(t: &T, path: &[u32]) -> Result<(), TestCaseError> {
    let mut v = t.root();
    for &i in path {
        let c = t.child(&v, i).unwrap();
        prop_assert_eq!(t.parent(&c).unwrap(), v.clone());
        prop_assert_eq!(t.index(&c).unwrap(), i);
        prop_assert_eq!(t.level(&c), t.level(&v) + 1);
        v = c;
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 96, ..ProptestConfig::default() })]

    #[test]
    fn facets_cover_the_boundary(raw in full_dim_2d(), probe in prop::collection::vec(-8i64..9, 2)) {
        let q = points(2, &raw);
        let facets = hull_with_planes(&q).unwrap();
        // every point lies inside every facet half-space and on exactly the planes listing it
        for (i, p) in q.columns().iter().enumerate() {
            for f in &facets {
                let e = f.plane.eval(p);
                prop_assert!(!e.is_positive());
                prop_assert_eq!(e.is_zero(), f.indices.contains(&i));
            }
        }
        // a probe inside the hull is on the boundary iff it lies on a facet segment
        let x: Vec<Rational> = probe.iter().map(|&v| r(v) / r(2)).collect();
        let inside = facets.iter().all(|f| !f.plane.eval(&x).is_positive());
        if inside {
            let on_plane = facets.iter().any(|f| f.plane.eval(&x).is_zero());
            let on_segment = facets.iter().any(|f| {
                let pts = q.select(&f.indices);
                f.plane.eval(&x).is_zero()
                    && (0..2).all(|k| {
                        let lo = pts.iter().map(|p| p[k].clone()).min().unwrap();
                        let hi = pts.iter().map(|p| p[k].clone()).max().unwrap();
                        lo <= x[k] && x[k] <= hi
                    })
            });
            prop_assert_eq!(on_plane, on_segment);
        }
    }

    #[test]
    fn equivalence_is_reflexive_symmetric_transitive(raw in full_dim_2d(), (a, b) in invertible_2d(), (c, e) in invertible_2d()) {
        let q = points(2, &raw);
        let q1 = transform(&q, &a, &b);
        let q2 = transform(&q1, &c, &e);
        let id = matrix_equivalence(&q, &q).unwrap();
        for p in q.columns() {
            prop_assert_eq!(&id.apply(p), p);
        }
        let fwd = matrix_equivalence(&q, &q1).unwrap();
        let back = matrix_equivalence(&q1, &q).unwrap();
        for (p, p1) in q.columns().iter().zip(q1.columns()) {
            prop_assert_eq!(&fwd.apply(p), p1);
            prop_assert_eq!(&back.apply(p1), p);
        }
        let both = matrix_equivalence(&q, &q2).unwrap();
        for (p, p2) in q.columns().iter().zip(q2.columns()) {
            prop_assert_eq!(&both.apply(p), p2);
        }
        let empty = PointMatrix::from_columns(2, vec![]).ok();
        if let Some(z) = empty {
            prop_assert!(matrix_pair_equivalence(&q, &z, &q1, &z).is_some());
        }
    }

    #[test]
    fn facets_are_affine_invariant(raw in full_dim_2d(), (a, b) in invertible_2d()) {
        let q = points(2, &raw);
        let q1 = transform(&q, &a, &b);
        prop_assert_eq!(sorted(hull_facets(&q).unwrap()), sorted(hull_facets(&q1).unwrap()));
    }

    #[test]
    fn transition_products(m in prop::collection::vec(prop::collection::vec(-4i64..5, 3), 3), n in prop::collection::vec(prop::collection::vec(-4i64..5, 2), 3)) {
        let stochastic = |rows: &[Vec<i64>]| {
            let cols = rows[0].len();
            let mut out: Vec<Vec<Rational>> = rows[..rows.len() - 1].iter().map(|r0| r0.iter().map(|&x| r(x) / r(4)).collect()).collect();
            let last = (0..cols).map(|c| r(1) - out.iter().map(|row| row[c].clone()).sum::<Rational>()).collect();
            out.push(last);
            TransitionMatrix::from_rows(out).unwrap()
        };
        let a = stochastic(&m);
        let b = stochastic(&n);
        prop_assert!(is_transition_matrix(&a) && is_transition_matrix(&b));
        prop_assert!(is_transition_matrix(&a.mul(&b).unwrap()));
    }

    #[test]
    fn tree_axioms(path in prop::collection::vec(0u32..4, 0..12), ppath in prop::collection::vec(0u32..9, 0..12)) {
        let h = builtin("hilbert2d_global").unwrap();
        check_axioms(&LevelPositionTree::<u64>::new(4), &path)?;
        check_axioms(&AlgebraicTree::<u64>::new(&h.system), &path)?;
        check_axioms(&AlgebraicTree::<BigUint>::new(&h.system), &path)?;
        check_axioms(&HistoryTree::<u64>::new(&h.system), &path)?;
        check_axioms(&TableTree::<u128>::new(tables("hilbert2d_global")), &path)?;
        let kd = builtin_kd("hilbert2d_global").unwrap();
        check_axioms(&CoordTree::new(&kd), &path)?;
        let p = builtin("peano2_global").unwrap();
        check_axioms(&AlgebraicTree::<u64>::new(&p.system), &ppath)?;
        let short: Vec<u32> = path.iter().take(4).copied().collect();
        check_axioms(&GeometricTree::new(&h), &short)?;
    }

    #[test]
    fn isomorphisms_round_trip(l in 0u32..=8, seed in any::<u64>()) {
        let h = builtin("hilbert2d_global").unwrap();
        let kd = builtin_kd("hilbert2d_global").unwrap();
        let j = seed % 4u64.pow(l);
        let lp = LevelPositionTree::<u64>::new(4);
        let alg = AlgebraicTree::<u64>::new(&h.system);
        let ct = CoordTree::new(&kd);
        let v = LevelPos { level: l, position: j };
        let a = isomorphism_map(&lp, &alg, &v).unwrap();
        prop_assert_eq!(a.level, l);
        prop_assert_eq!(a.position, j);
        prop_assert_eq!(alg.state(&a), compute_state(&h.system, l, &j).unwrap());
        let c = isomorphism_map(&alg, &ct, &a).unwrap();
        prop_assert_eq!(ct.state(&c), a.state);
        prop_assert_eq!(isomorphism_map(&ct, &lp, &c).unwrap(), v.clone());
        if l > 0 {
            let p = isomorphism_map(&lp, &alg, &lp.parent(&v).unwrap()).unwrap();
            prop_assert_eq!(p, alg.parent(&a).unwrap());
        }
    }

    #[test]
    fn engines_agree(l in 0u32..=30, seed in any::<u64>(), f in 0usize..4) {
        let t = tables("hilbert2d_global");
        let j = if l == 0 { 0 } else { seed % (1u64 << (2 * l)) };
        let v = TableTree::<u64>::new(t).locate(l, j).unwrap();
        let want = neighbor_node(t, &v, f).unwrap();
        let mut scratch = Scratch::with_levels(4);
        prop_assert_eq!(&neighbor_iterative(t, &v, f, &mut scratch).unwrap(), &want);
        for k in 1..=3 {
            let m = multilevel(k);
            prop_assert_eq!(&neighbor_multilevel(m, &v, f).unwrap(), &want);
        }
        let big = TableTree::<BigUint>::new(t).locate(l, BigUint::from(j)).unwrap();
        let wide = neighbor_node(t, &big, f).unwrap().map(|w| w.position);
        prop_assert_eq!(wide, want.as_ref().map(|w| BigUint::from(w.position)));
    }

    #[test]
    fn neighbors_are_mutual_and_keep_level(idx in 0usize..5, l in 0u32..=20, seed in any::<u64>(), fseed in any::<usize>()) {
        let name = ["hilbert2d_global", "peano2_global", "sierpinski2d_local", "morton3", "morton2"][idx];
        let t = tables(name);
        let count = (t.b as u128).pow(l.min(if t.b == 9 { 18 } else { 20 }));
        let l = l.min(if t.b == 9 { 18 } else { 20 });
        let j = (seed as u128 % count) as u64;
        let tree = TableTree::<u64>::new(t);
        let v = tree.locate(l, j).unwrap();
        let f = fseed % t.facets.count(v.state);
        if let Some(w) = neighbor_node(t, &v, f).unwrap() {
            prop_assert_eq!(w.level, l);
            prop_assert_eq!(w.state, tree.locate(l, w.position).unwrap().state);
            let back = (0..t.facets.count(w.state)).any(|g| neighbor_node(t, &w, g).unwrap().map(|x| x.position) == Some(j));
            prop_assert!(back, "{} is not a neighbor of its neighbor {}", j, w.position);
        }
    }

    #[test]
    fn morton_moves_one_cell(d in 2u32..=3, seed in any::<u64>(), f in 0usize..6, lsel in any::<u32>()) {
        let l = 1 + lsel % (63 / d);
        let f = f % (2 * d as usize);
        let j = seed & ((1u64 << (d * l)) - 1);
        let coords = |p: u64| -> Vec<u64> {
            (0..d).map(|a| (0..l).map(|bit| ((p >> (bit * d + a)) & 1) << bit).sum()).collect()
        };
        let axis = f / 2;
        let u = coords(j);
        let step: i64 = if f % 2 == 1 { 1 } else { -1 };
        let target = u[axis] as i64 + step;
        match morton_neighbor(d, l, j, f).unwrap() {
            Some(w) => {
                let mut want = u.clone();
                want[axis] = target as u64;
                prop_assert_eq!(coords(w), want);
            }
            None => prop_assert!(target < 0 || target >= 1i64 << l),
        }
    }

    #[test]
    fn fast_kernels_match(l in 1u32..=31, seed in any::<u64>(), f in 0usize..3) {
        prop_assert_eq!(
            hilbert2d_state_fast(l, seed % (1u64 << (2 * l))).unwrap() as usize,
            compute_state(&builtin("hilbert2d_global").unwrap().system, l, &(seed % (1u64 << (2 * l)))).unwrap()
        );
        let s = tables("sierpinski2d_local");
        let j = seed % (1u64 << l);
        let fast = sierpinski2d_neighbor_fast(l, j, f);
        let v = TableTree::<u64>::new(s).locate(l, j).unwrap();
        prop_assert_eq!(fast, neighbor_node(s, &v, f).unwrap().map(|w| w.position));
        let p = tables("peano2_global");
        let k = PalindromeKernel::new(p).unwrap();
        let lp = l.min(38);
        let jp = (seed as u128 * 0x9e37_79b9_7f4a_7c15) % 9u128.pow(lp);
        let vp = TableTree::<u128>::new(p).locate(lp, jp).unwrap();
        let fp = (f + seed as usize) % 4;
        prop_assert_eq!(k.neighbor(lp, jp, vp.state, fp), neighbor_node(p, &vp, fp).unwrap().map(|w| w.position));
    }
}

fn multilevel(k: u32) -> &'static MultiLevelTables {
    static CACHE: OnceLock<Vec<MultiLevelTables>> = OnceLock::new();
    let all = CACHE
        .get_or_init(|| (1..=3).map(|k| MultiLevelTables::build(tables("hilbert2d_global"), k).unwrap()).collect());
    &all[k as usize - 1]
}

#[test]
fn catalog_validates() {
    for e in catalog_names() {
        validate_spec(&builtin(e.name).unwrap()).unwrap_or_else(|err| panic!("{}: {err}", e.name));
    }
}

#[test]
fn global_kd_matrices_are_non_negative() {
    for name in ["morton2", "morton3", "hilbert2d_global", "hilbert3d_global", "peano2_global", "peano3_global"] {
        let spec = builtin(name).unwrap();
        for m in &spec.matrices {
            assert!(m.rows().iter().flatten().all(|x| !x.is_negative()), "{name}");
        }
    }
}

#[test]
fn hilbert_child_maps_are_involutions() {
    let h = builtin("hilbert2d_global").unwrap();
    for s in 0..4 {
        for j in 0..4 {
            assert_eq!(h.system.child_state(h.system.child_state(s, j), j), s);
        }
    }
}

#[test]
fn global_curves_keep_the_facet() {
    for name in ["morton2", "morton3", "hilbert2d_global", "peano2_global"] {
        let t = tables(name);
        for s in 0..t.state_count {
            for j in 0..t.b {
                for f in 0..t.facets.count(s) {
                    if let Some(p) = t.fp(j, s, f) {
                        assert_eq!(p, f, "{name}");
                    }
                }
            }
        }
    }
    let s = tables("sierpinski2d_local");
    let moved = (0..2).any(|j| (0..3).any(|f| s.fp(j, 0, f).is_some_and(|p| p != f)));
    assert!(moved, "the single-state triangle curve changes facets between levels");
}

#[test]
fn sibling_entries_have_geometric_witnesses() {
    for name in ["hilbert2d_global", "peano2_global", "sierpinski2d_local", "morton3"] {
        let spec = builtin(name).unwrap();
        let t = tables(name);
        let pre = find_pre_representation(&spec).unwrap();
        let g = GeometricTree::new(&spec);
        for (s, u) in pre.reps.iter().enumerate() {
            for j in 0..t.b {
                for f in 0..t.facets.count(t.child(s, j)) {
                    let Some(j2) = t.n(j, s, f) else { continue };
                    let x = g.child(u, j).unwrap();
                    let y = g.child(u, j2).unwrap();
                    let fx = t.facets.get(x.state, f).unwrap();
                    let hit = (0..t.facets.count(y.state)).any(|f2| {
                        intersection_equals_face(&x.points, fx, &y.points, t.facets.get(y.state, f2).unwrap())
                    });
                    assert!(hit, "{name}: N({j},{s},{f}) = {j2} has no witness");
                }
            }
        }
    }
}

#[test]
fn tables_text_round_trip() {
    for name in ["morton2", "hilbert2d_global", "peano2_global", "sierpinski2d_local", "sierpinski2d_global"] {
        let t = tables(name);
        let back = CurveTables::from_text(&t.to_text()).unwrap();
        assert_eq!(&back, t);
        assert_eq!(back.to_text(), t.to_text());
    }
}

#[test]
fn polyline_passes_through_centroids() {
    for (name, level) in [("hilbert2d_global", 2u32), ("sierpinski2d_local", 4), ("peano2_global", 1)] {
        let spec = builtin(name).unwrap();
        let svg = render_svg(&spec, &RenderOptions { level, ..Default::default() }).unwrap();
        let pts = svg.split("<polyline").nth(1).unwrap().split("points=\"").nth(1).unwrap().split('"').next().unwrap();
        let pts: Vec<&str> = pts.split(' ').collect();
        let count = (spec.branching() as u64).pow(level);
        assert_eq!(pts.len() as u64, count);
        for (j, text) in pts.iter().enumerate() {
            let (_, q) = node_point_matrix(&spec, level, &(j as u64)).unwrap();
            let n = r(q.ncols() as i64);
            let cx = q.columns().iter().map(|c| c[0].clone()).sum::<Rational>() / n.clone();
            let cy = q.columns().iter().map(|c| c[1].clone()).sum::<Rational>() / n;
            // root cells span [0,1]^2, so the frame only flips y
            let want = format!("{},{}", cx.to_decimal(9), (r(1) - cy).to_decimal(9));
            assert_eq!(*text, want, "{name} point {j}");
        }
    }
}
