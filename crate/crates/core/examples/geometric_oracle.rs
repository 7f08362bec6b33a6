//! Compare the table-driven neighbors with brute-force exact geometry.

use sfc_core::engine::{neighbor_node, GeometricOracle, TableTree};
use sfc_core::spec::builtin;
use sfc_core::tables::compile;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (name, level) in [("hilbert2d_global", 3), ("sierpinski2d_global", 4), ("peano2_global", 2)] {
        let spec = builtin(name)?;
        let t = compile(&spec)?;
        let oracle = GeometricOracle::new(&spec, &t.facets, level)?;
        let tree = TableTree::<u64>::new(&t);
        let mut queries = 0;
        let mut bad = 0;
        for j in 0..oracle.len() {
            let v = tree.locate(level, j)?;
            for f in 0..t.facets.count(v.state) {
                queries += 1;
                if neighbor_node(&t, &v, f)?.map(|w| w.position) != oracle.neighbor(j, f)? {
                    bad += 1;
                }
            }
        }
        println!("{name} level {level}: {queries} queries, {bad} disagreements");
    }
    Ok(())
}
