use crate::geometry::{intersection_dimension, matrix_equivalence, PointMatrix, Vector};
use crate::spec::BSpecification;
use crate::tree::{GeometricNode, GeometricTree, IndexTree};

use super::facets::FacetSpecification;
use super::report::{RegularityReport, Witness};
use super::representation::{Cell, PreRepresentation, Representation};

fn describe(v: &GeometricNode, spec: &BSpecification) -> String {
    format!("({},{},{})", v.level, v.position, spec.label(v.state))
}

/// Clauses P1' (children of representatives are equivalent to the
/// representative of their state) and P2' (representatives are full-dimensional).
pub fn check_pre_regularity(spec: &BSpecification, pre: &PreRepresentation) -> RegularityReport {
    let d = spec.dimension as i32;
    let g = GeometricTree::new(spec);
    let mut p1 = Vec::new();
    let mut p2 = Vec::new();
    for (s, u) in pre.reps.iter().enumerate() {
        let dim = u.points.affine_dimension();
        if dim != d {
            p2.push(Witness {
                clause: "P2'",
                detail: format!(
                    "representative {} of state {} spans dimension {dim}",
                    describe(u, spec),
                    spec.label(s)
                ),
                nodes: vec![u.clone()],
            });
        }
        for j in 0..spec.branching() {
            let c = g.child(u, j).expect("valid index");
            let rep = &pre.reps[c.state];
            if matrix_equivalence(&c.points, &rep.points).is_none() {
                p1.push(Witness {
                    clause: "P1'",
                    detail: format!(
                        "child {} of {} is not equivalent to {}",
                        describe(&c, spec),
                        describe(u, spec),
                        describe(rep, spec)
                    ),
                    nodes: vec![c, rep.clone()],
                });
            }
        }
    }
    let mut r = RegularityReport::default();
    r.push("P1'", p1);
    r.push("P2'", p2);
    r
}

fn project(points: &[Vector], drop: usize) -> Vec<Vector> {
    points.iter().map(|p| p.iter().enumerate().filter(|(k, _)| *k != drop).map(|(_, x)| x.clone()).collect()).collect()
}

/// Exact affine dimension of `conv(x) ∩ conv(y)`, shortcutting through a
/// weakly separating facet plane when there is one.
pub(crate) fn section_dimension(x: &Cell, y: &Cell) -> i32 {
    if !x.touches(y) {
        return -1;
    }
    let d = x.node.points.dim();
    for (a, b) in [(x, y), (y, x)] {
        for plane in a.planes.iter().flatten() {
            let vals: Vec<_> = b.node.points.columns().iter().map(|p| plane.eval(p)).collect();
            if vals.iter().any(|v| v.is_negative()) {
                continue;
            }
            let on_b: Vec<Vector> = b
                .node
                .points
                .columns()
                .iter()
                .zip(&vals)
                .filter(|(_, v)| v.is_zero())
                .map(|(p, _)| p.clone())
                .collect();
            if on_b.is_empty() {
                return -1;
            }
            let on_a: Vec<Vector> =
                a.node.points.columns().iter().filter(|p| plane.eval(p).is_zero()).cloned().collect();
            if d == 1 {
                return if on_a[0] == on_b[0] { 0 } else { -1 };
            }
            let drop = plane.normal.iter().position(|v| !v.is_zero()).expect("non-zero normal");
            let pa = PointMatrix::from_columns(d - 1, project(&on_a, drop)).expect("non-empty");
            let pb = PointMatrix::from_columns(d - 1, project(&on_b, drop)).expect("non-empty");
            return intersection_dimension(&pa, &pb);
        }
    }
    intersection_dimension(&x.node.points, &y.node.points)
}

/// Clauses R1' (from discovery), R2' (children inside representatives) and
/// R3' (full-dimensional overlaps only for equal nodes, (d-1)-dimensional
/// overlaps only between geometric neighbors).
pub fn check_regularity(spec: &BSpecification, rep: &Representation, facets: &FacetSpecification) -> RegularityReport {
    let d = spec.dimension as i32;
    let mut report = RegularityReport::default();
    report.push("R1'", rep.r1_violations.clone());

    let mut r2 = Vec::new();
    let mut r3 = Vec::new();
    let check_pair = |x: &Cell, y: &Cell, r3: &mut Vec<Witness>| {
        let dim = section_dimension(x, y);
        if dim == d && x.node != y.node {
            r3.push(Witness {
                clause: "R3'",
                detail: format!(
                    "{} and {} overlap with full dimension",
                    describe(&x.node, spec),
                    describe(&y.node, spec)
                ),
                nodes: vec![x.node.clone(), y.node.clone()],
            });
        } else if dim == d - 1 && (0..facets.count(x.node.state)).all(|f| x.neighbor_facet(f, y, facets).is_none()) {
            r3.push(Witness {
                clause: "R3'",
                detail: format!(
                    "{} and {} share a (d-1)-dimensional section that is not a common facet",
                    describe(&x.node, spec),
                    describe(&y.node, spec)
                ),
                nodes: vec![x.node.clone(), y.node.clone()],
            });
        }
    };

    for u in &rep.pre.reps {
        let cell = Cell::new(u.clone(), facets);
        let kids = cell.children(spec, facets);
        for (j, k) in kids.iter().enumerate() {
            for p in k.node.points.columns() {
                if let Some(f) = cell.planes.iter().flatten().position(|h| h.eval(p).is_positive()) {
                    r2.push(Witness {
                        clause: "R2'",
                        detail: format!(
                            "child {j} = {} of {} has a vertex beyond facet {f}",
                            describe(&k.node, spec),
                            describe(u, spec)
                        ),
                        nodes: vec![k.node.clone(), u.clone()],
                    });
                    break;
                }
            }
        }
        for a in 0..kids.len() {
            for b in a + 1..kids.len() {
                check_pair(&kids[a], &kids[b], &mut r3);
            }
        }
    }
    for (v, w) in rep.pairs.values() {
        let cv = Cell::new(v.clone(), facets).children(spec, facets);
        let cw = Cell::new(w.clone(), facets).children(spec, facets);
        for x in &cv {
            for y in &cw {
                check_pair(x, y, &mut r3);
            }
        }
    }
    report.push("R2'", r2);
    report.push("R3'", r3);
    report
}
