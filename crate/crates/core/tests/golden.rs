//! Fixed input/output vectors through the public API. Values checked
//! against hand-worked examples; derived values come from small
//! independent oracles defined here.

use sfc_core::engine::{
    depth_histogram, neighbor, neighbor_depth, neighbor_multilevel, neighbor_node, neighbor_with_wrong_state, traverse,
    EngineError, MultiLevelTables, TableTree,
};
use sfc_core::fast::{
    hilbert2d_state_fast, morton_neighbor, sierpinski2d_neighbor_fast, Hilbert2dKernel, PalindromeKernel,
};
use sfc_core::geometry::{
    affine_dimension, hull_facets, intersection_dimension, intersection_equals_face, is_transition_matrix,
    matrix_equivalence, PointMatrix, Rational, TransitionMatrix,
};
use sfc_core::render::{render_svg, LabelMode, RenderOptions};
use sfc_core::spec::{builtin, builtin_kd, parse_spec, spec_to_json, validate_spec};
use sfc_core::tables::{analyze, compile, find_pre_representation, state_group, CurveTables};
use sfc_core::tree::{compute_state, coords_to_position, node_point_matrix, position_to_coords, AlgebraicNode};

fn r(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

fn pm(cols: &[(i64, i64)]) -> PointMatrix {
    let cols: Vec<Vec<Rational>> = cols.iter().map(|&(x, y)| vec![r(x, 1), r(y, 1)]).collect();
    PointMatrix::from_columns(2, cols).unwrap()
}

fn tables(name: &str) -> CurveTables {
    compile(&builtin(name).unwrap()).unwrap()
}

fn sorted(mut v: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
    v.iter_mut().for_each(|x| x.sort());
    v.sort();
    v
}

#[test]
fn affine_dimension_examples() {
    assert_eq!(affine_dimension(&pm(&[(0, 0), (1, 0), (0, 1), (1, 1)])), 2);
    assert_eq!(affine_dimension(&pm(&[(0, 0), (1, 1), (2, 2)])), 1);
    assert_eq!(sfc_core::geometry::linalg::affine_dimension(&[]), -1);
}

#[test]
fn square_triangle_and_cube_facets() {
    let square = pm(&[(0, 0), (1, 0), (0, 1), (1, 1)]);
    assert_eq!(sorted(hull_facets(&square).unwrap()), vec![vec![0, 1], vec![0, 2], vec![1, 3], vec![2, 3]]);
    let tri = pm(&[(0, 0), (1, 0), (0, 1)]);
    assert_eq!(sorted(hull_facets(&tri).unwrap()), vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
    let cube: Vec<Vec<Rational>> = (0..8).map(|i| (0..3).map(|t| r((i >> t) & 1, 1)).collect()).collect();
    let facets = hull_facets(&PointMatrix::from_columns(3, cube).unwrap()).unwrap();
    assert_eq!(facets.len(), 6);
    assert!(facets.iter().all(|f| f.len() == 4));
}

#[test]
fn intersection_examples() {
    let a = pm(&[(0, 0), (1, 0), (0, 1), (1, 1)]);
    let b = pm(&[(1, 0), (2, 0), (1, 1), (2, 1)]);
    let far = pm(&[(5, 5), (6, 5), (5, 6), (6, 6)]);
    assert_eq!(intersection_dimension(&a, &b), 1);
    assert_eq!(intersection_dimension(&a, &a), 2);
    assert_eq!(intersection_dimension(&a, &far), -1);
    assert!(intersection_equals_face(&a, &[1, 3], &b, &[0, 2]));
    assert!(!intersection_equals_face(&a, &[2, 3], &b, &[0, 2]));
}

#[test]
fn sierpinski_cells_share_the_hypotenuse() {
    let spec = builtin("sierpinski2d_local").unwrap();
    let t = compile(&spec).unwrap();
    let (_, q1) = node_point_matrix(&spec, 2, &1u64).unwrap();
    let (_, q2) = node_point_matrix(&spec, 2, &2u64).unwrap();
    let hyp = t.facets.get(0, 1).unwrap();
    assert!(intersection_equals_face(&q1, hyp, &q2, hyp));
}

#[test]
fn translation_equivalence() {
    let a = pm(&[(0, 0), (1, 0), (0, 1), (1, 1)]);
    let b = pm(&[(1, 0), (2, 0), (1, 1), (2, 1)]);
    let tau = matrix_equivalence(&a, &b).unwrap();
    assert_eq!(tau.apply(&[r(0, 1), r(0, 1)]), vec![r(1, 1), r(0, 1)]);
}

#[test]
fn local_hilbert_matrices() {
    let spec = builtin("hilbert2d_local").unwrap();
    let expect: [[[(i64, i64); 4]; 4]; 3] = [
        [
            [(1, 1), (1, 2), (1, 2), (1, 4)],
            [(0, 1), (0, 1), (1, 2), (1, 4)],
            [(0, 1), (1, 2), (0, 1), (1, 4)],
            [(0, 1), (0, 1), (0, 1), (1, 4)],
        ],
        [
            [(1, 2), (1, 4), (0, 1), (0, 1)],
            [(0, 1), (1, 4), (0, 1), (0, 1)],
            [(1, 2), (1, 4), (1, 1), (1, 2)],
            [(0, 1), (1, 4), (0, 1), (1, 2)],
        ],
        [
            [(1, 4), (0, 1), (0, 1), (0, 1)],
            [(1, 4), (1, 2), (0, 1), (0, 1)],
            [(1, 4), (0, 1), (1, 2), (0, 1)],
            [(1, 4), (1, 2), (1, 2), (1, 1)],
        ],
    ];
    for (j, rows) in expect.iter().enumerate() {
        let m = spec.matrix(0, j as u32);
        assert!(is_transition_matrix(m));
        for (i, row) in rows.iter().enumerate() {
            for (c, &(n, d)) in row.iter().enumerate() {
                assert_eq!(m.get(i, c), &r(n, d), "M^(G,{j}) entry ({i},{c})");
            }
        }
    }
    // the lower-left child in the local frame has its second and third vertex exchanged
    let (_, l) = node_point_matrix(&spec, 1, &0u64).unwrap();
    assert_eq!(
        l.columns(),
        pm(&[(0, 0), (0, 1), (1, 0), (1, 1)])
            .columns()
            .iter()
            .map(|c| c.iter().map(|x| x.clone() * r(1, 2)).collect::<Vec<_>>())
            .collect::<Vec<_>>()
            .as_slice()
    );
}

#[test]
fn morton_lower_left_matrix() {
    let spec = builtin("morton2").unwrap();
    let want = TransitionMatrix::from_ratio_rows(&[
        &[(1, 1), (1, 2), (1, 2), (1, 4)],
        &[(0, 1), (1, 2), (0, 1), (1, 4)],
        &[(0, 1), (0, 1), (1, 2), (1, 4)],
        &[(0, 1), (0, 1), (0, 1), (1, 4)],
    ]);
    assert_eq!(spec.matrix(0, 0), &want);
    let short = TransitionMatrix::from_ratio_rows(&[&[(1, 2)], &[(1, 4)], &[(0, 1)], &[(0, 1)]]);
    assert!(!is_transition_matrix(&short));
}

#[test]
fn catalog_shapes() {
    let h = builtin("hilbert2d_global").unwrap();
    assert_eq!(h.state_labels, ["H", "A", "B", "R"]);
    let row: Vec<&str> = (0..4).map(|j| h.label(h.system.child_state(0, j))).collect();
    assert_eq!(row, ["A", "H", "H", "B"]);
    let m = builtin("morton2").unwrap();
    assert_eq!((m.state_count(), m.branching()), (1, 4));
    let p = builtin("peano2_global").unwrap();
    assert_eq!((p.state_count(), p.branching()), (4, 9));
    let mut labels = p.state_labels.clone();
    labels.sort();
    assert_eq!(labels, ["P", "Q", "R", "S"]);
    assert_eq!(p.label(0), "P");
    for name in ["morton2", "morton3", "hilbert2d_global", "peano2_global", "sierpinski2d_local"] {
        validate_spec(&builtin(name).unwrap()).unwrap();
    }
    assert!(builtin("koch").is_err());
}

#[test]
fn spec_document_round_trip() {
    let h = builtin("hilbert2d_global").unwrap();
    let back = parse_spec(&spec_to_json(&h)).unwrap();
    assert_eq!(back.system.child_rows(), h.system.child_rows());
    assert_eq!(spec_to_json(&back), spec_to_json(&h));
    let mut doc: serde_json::Value = serde_json::from_str(&spec_to_json(&h)).unwrap();
    doc.as_object_mut().unwrap().remove("root_points");
    assert!(parse_spec(&doc.to_string()).is_err());
}

#[test]
fn states_and_representatives() {
    let h = builtin("hilbert2d_global").unwrap();
    let name = |s| h.label(s).to_string();
    assert_eq!(name(compute_state(&h.system, 2, &1u64).unwrap()), "A");
    assert_eq!(name(compute_state(&h.system, 3, &28u64).unwrap()), "R");
    assert_eq!(compute_state(&h.system, 0, &0u64).unwrap(), 0);
    let pre = find_pre_representation(&h).unwrap();
    let at: Vec<(u32, String)> = pre.reps.iter().map(|v| (v.level, v.position.to_string())).collect();
    let want = [(0, "0"), (1, "0"), (1, "3"), (2, "3")];
    for (s, (l, j)) in want.iter().enumerate() {
        assert_eq!(at[s], (*l, j.to_string()), "representative of {}", h.label(s));
    }
    let p = find_pre_representation(&builtin("peano2_global").unwrap()).unwrap();
    assert!(p.reps.iter().all(|v| v.level <= 2));
}

/// Lower-left corner of the cell, scaled to integer grid coordinates.
fn grid_cell(spec_name: &str, k: u64, l: u32, j: u64) -> Vec<u64> {
    let spec = builtin(spec_name).unwrap();
    let (_, q) = node_point_matrix(&spec, l, &j).unwrap();
    let (lo, _) = q.bbox();
    let side = r(k.pow(l) as i64, 1);
    lo.iter().map(|x| (x.clone() * side.clone()).to_decimal(20).parse().unwrap()).collect()
}

#[test]
fn coordinates_match_geometry() {
    let kd = builtin_kd("hilbert2d_global").unwrap();
    assert_eq!(position_to_coords(&kd, 2, 1).unwrap(), vec![1, 0]);
    assert_eq!(position_to_coords(&kd, 2, 14).unwrap(), vec![2, 0]);
    for j in 0..64 {
        assert_eq!(position_to_coords(&kd, 3, j).unwrap(), grid_cell("hilbert2d_global", 2, 3, j));
    }
    let mk = builtin_kd("morton2").unwrap();
    assert_eq!(coords_to_position(&mk, 2, &[1, 1]).unwrap(), 3);
    for j in 0..16u64 {
        let interleave = vec![(j & 1) | ((j >> 1) & 2), ((j >> 1) & 1) | ((j >> 2) & 2)];
        assert_eq!(position_to_coords(&mk, 2, j).unwrap(), interleave);
    }
}

#[test]
fn hilbert_neighbors_and_depths() {
    let t = tables("hilbert2d_global");
    let tree = TableTree::<u64>::new(&t);
    let v = tree.locate(2, 1).unwrap();
    let labelled = |w: Option<AlgebraicNode>| w.map(|w| (w.position, t.labels[w.state].clone()));
    assert_eq!(labelled(neighbor(&t, &tree, &v, 3).unwrap()), Some((2, "A".into())));
    assert_eq!(labelled(neighbor(&t, &tree, &v, 1).unwrap()), Some((14, "B".into())));
    assert_eq!(labelled(neighbor(&t, &tree, &v, 0).unwrap()), Some((0, "H".into())));
    assert_eq!(neighbor(&t, &tree, &v, 2).unwrap(), None);
    assert_eq!(neighbor_depth(&t, &tree, &v, 3).unwrap(), 1);
    assert_eq!(neighbor_depth(&t, &tree, &v, 1).unwrap(), 2);
    assert_eq!(neighbor_depth(&t, &tree, &v, 2).unwrap(), 3);
    assert!(matches!(neighbor(&t, &tree, &v, 4), Err(EngineError::FacetOutOfRange { .. })));
}

#[test]
fn multilevel_example() {
    let t = tables("hilbert2d_global");
    let m = MultiLevelTables::build(&t, 2).unwrap();
    let tree = TableTree::<u64>::new(&t);
    let h = t.state_by_label("H").unwrap();
    assert_eq!(m.n_hat(12, h, 1), None);
    let v = tree.locate(3, 28).unwrap();
    let w = neighbor_multilevel(&m, &v, 1).unwrap().unwrap();
    assert_eq!((w.position, t.labels[w.state].as_str()), (35, "R"));
    assert_eq!(neighbor_multilevel(&m, &tree.locate(2, 1).unwrap(), 2).unwrap(), None);
    let m1 = MultiLevelTables::build(&t, 1).unwrap();
    assert_eq!(m1.n, t.n);
    assert_eq!(m1.omega, t.omega);
}

#[test]
fn peano_and_sierpinski_neighbors() {
    let p = tables("peano2_global");
    let tree = TableTree::<u64>::new(&p);
    let v = tree.locate(2, 2).unwrap();
    assert_eq!(p.labels[v.state], "P");
    let w = neighbor_node(&p, &v, 1).unwrap().unwrap();
    assert_eq!((w.position, p.labels[w.state].as_str()), (15, "R"));
    let w = neighbor_node(&p, &tree.locate(1, 0).unwrap(), 1).unwrap().unwrap();
    assert_eq!((w.position, p.labels[w.state].as_str()), (1, "R"));
    assert_eq!(neighbor_node(&p, &tree.locate(2, 0).unwrap(), 0).unwrap(), None);

    let k = PalindromeKernel::new(&p).unwrap();
    assert_eq!(k.neighbor(2, 2, v.state, 1), Some(15));
    assert_eq!(k.neighbor(1, 0, 0, 1), Some(1));
    assert_eq!(k.neighbor(2, 0, 0, 0), None);

    let s = tables("sierpinski2d_local");
    let w = neighbor_node(&s, &AlgebraicNode::new(2, 1u64, 0), 1).unwrap().unwrap();
    assert_eq!((w.position, s.labels[w.state].as_str()), (2, "G"));
    assert_eq!(sierpinski2d_neighbor_fast(2, 1, 1), Some(2));
    assert_eq!(
        sierpinski2d_neighbor_fast(2, 0, 1),
        neighbor_node(&s, &AlgebraicNode::new(2, 0u64, 0), 1).unwrap().map(|w| w.position)
    );
    for l in 0..6 {
        // cell 0 touches the two legs of the root triangle
        let root_legs: Vec<usize> =
            (0..3).filter(|&f| neighbor_node(&s, &AlgebraicNode::new(l, 0u64, 0), f).unwrap().is_none()).collect();
        assert!(!root_legs.is_empty());
    }
}

#[test]
fn morton_fast_vectors() {
    // x in the low bit: position 3 is (1,1), position 6 is (2,1), position 2 is (0,1)
    assert_eq!(morton_neighbor(2, 2, 3, 1).unwrap(), Some(6));
    assert_eq!(morton_neighbor(2, 2, 3, 0).unwrap(), Some(2));
    let kd = builtin_kd("morton2").unwrap();
    let east_edge = coords_to_position(&kd, 2, &[3, 1]).unwrap();
    assert_eq!(morton_neighbor(2, 2, east_edge, 1).unwrap(), None);
}

#[test]
fn hilbert_fast_vectors() {
    assert_eq!(hilbert2d_state_fast(2, 1).unwrap(), 1);
    assert_eq!(hilbert2d_state_fast(3, 28).unwrap(), 3);
    assert_eq!(hilbert2d_state_fast(0, 0).unwrap(), 0);
    let t = tables("hilbert2d_global");
    let k = Hilbert2dKernel::new(&t).unwrap();
    assert_eq!(k.neighbor(2, 1, 1, 1), Some((14, 2)));
    assert_eq!(k.neighbor(2, 1, 1, 3), Some((2, 1)));
    assert_eq!(k.neighbor(2, 1, 1, 2), None);
}

#[test]
fn traversal_and_histograms() {
    let t = tables("hilbert2d_global");
    let mut seen = Vec::new();
    traverse::<EngineError, _>(&t, 2, |v, ns| {
        seen.push(v.position);
        if v.position == 1 {
            let ps: Vec<Option<u64>> = ns.iter().map(|w| w.as_ref().map(|w| w.position)).collect();
            assert_eq!(ps, vec![Some(0), Some(14), None, Some(2)]);
        }
        Ok(())
    })
    .unwrap();
    assert_eq!(seen, (0..16).collect::<Vec<_>>());

    let m = tables("morton2");
    traverse::<EngineError, _>(&m, 1, |_, ns| {
        assert_eq!(ns.iter().flatten().count(), 2);
        Ok(())
    })
    .unwrap();

    let h = depth_histogram(&t, 2).unwrap();
    assert_eq!(h.no_neighbor, vec![4, 4, 4, 4]);
    let root = depth_histogram(&t, 0).unwrap();
    assert_eq!((root.total, root.counts[0]), (4, 4));
}

#[test]
fn peano_depth_bound() {
    let t = tables("peano2_global");
    for l in 1..=5u32 {
        let h = depth_histogram(&t, l).unwrap();
        for k in 1..=(l as usize + 1) {
            assert!(h.counts[k - 1] * 3u64.pow(k as u32 - 1) <= h.total, "level {l} depth {k}");
        }
        assert!(h.no_neighbor.iter().all(|&c| c == 3u64.pow(l)));
    }
}

#[test]
fn wrong_state_queries() {
    let t = tables("hilbert2d_global");
    let h = t.state_by_label("H").unwrap();
    let r = neighbor_with_wrong_state(&t, 2, 1, h).unwrap();
    assert_eq!(r[3].as_ref().map(|w| w.position), Some(14));
    for s in 0..4 {
        let mut ps: Vec<u64> =
            neighbor_with_wrong_state(&t, 2, 1, s).unwrap().into_iter().flatten().map(|w| w.position).collect();
        ps.sort();
        assert_eq!(ps, vec![0, 2, 14]);
    }
}

#[test]
fn verdicts_and_groups() {
    let a = analyze(&builtin("hilbert2d_local").unwrap()).unwrap();
    assert_eq!(a.report.failing(), vec!["R1'"]);
    let g = analyze(&sfc_core::spec::gosper2d()).unwrap();
    assert!(g.report.failing().contains(&"R2'"));
    assert!(tables("peano2_global").palindrome);
    assert!(tables("sierpinski2d_local").palindrome);
    assert!(!tables("hilbert2d_global").palindrome);
    assert_eq!(state_group(&builtin("morton2").unwrap().system).unwrap().order, 1);
    // root points on a line: y = x
    let mut doc: serde_json::Value = serde_json::from_str(&spec_to_json(&builtin("morton2").unwrap())).unwrap();
    doc["root_points"][1] = doc["root_points"][0].clone();
    let a = analyze(&parse_spec(&doc.to_string()).unwrap()).unwrap();
    assert!(a.report.failing().contains(&"P2'"), "{:?}", a.report.failing());
}

#[test]
fn render_counts() {
    let h = builtin("hilbert2d_global").unwrap();
    let svg = render_svg(&h, &RenderOptions { level: 1, ..Default::default() }).unwrap();
    assert_eq!(svg.matches("<polygon").count(), 4);
    let pts = svg.split("<polyline").nth(1).unwrap().split("points=\"").nth(1).unwrap().split('"').next().unwrap();
    assert_eq!(pts.split(' ').count(), 4);
    let svg =
        render_svg(&h, &RenderOptions { level: 2, labels: LabelMode::Positions, label_base: 4, ..Default::default() })
            .unwrap();
    assert_eq!(svg.matches("<polygon").count(), 16);
    for label in ["00", "13", "33"] {
        assert!(svg.contains(&format!(">{label}</text>")));
    }
    let p = builtin("peano2_global").unwrap();
    assert_eq!(
        render_svg(&p, &RenderOptions { level: 1, ..Default::default() }).unwrap().matches("<polygon").count(),
        9
    );
    let s = builtin("sierpinski2d_local").unwrap();
    assert_eq!(
        render_svg(&s, &RenderOptions { level: 5, ..Default::default() }).unwrap().matches("<polygon").count(),
        32
    );
    assert!(render_svg(&builtin("morton3").unwrap(), &RenderOptions::default()).is_err());
}
