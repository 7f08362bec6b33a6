//! Neighbor queries on the 2D Hilbert curve with the recursive, the
//! iterative and the multi-level engine.

use sfc_core::engine::{
    neighbor_depth, neighbor_iterative, neighbor_multilevel, neighbor_node, MultiLevelTables, Scratch, TableTree,
};
use sfc_core::spec::builtin;
use sfc_core::tables::compile;

const FACETS: [&str; 4] = ["left", "right", "down", "up"];

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let t = compile(&builtin("hilbert2d_global")?)?;
    let tree = TableTree::<u64>::new(&t);
    let m = MultiLevelTables::build(&t, 2)?;
    let mut scratch = Scratch::with_levels(64);

    for (l, j) in [(2u32, 1u64), (3, 28), (20, 123_456_789)] {
        let v = tree.locate(l, j)?;
        println!("node ({l}, {j}, {})", t.labels[v.state]);
        for (f, name) in FACETS.iter().enumerate() {
            let w = neighbor_node(&t, &v, f)?;
            assert_eq!(w, neighbor_iterative(&t, &v, f, &mut scratch)?);
            assert_eq!(w, neighbor_multilevel(&m, &v, f)?);
            let depth = neighbor_depth(&t, &tree, &v, f)?;
            match w {
                Some(w) => println!("  {name:>5}: ({}, {}, {})  depth {depth}", w.level, w.position, t.labels[w.state]),
                None => println!("  {name:>5}: none  depth {depth}"),
            }
        }
    }
    Ok(())
}
