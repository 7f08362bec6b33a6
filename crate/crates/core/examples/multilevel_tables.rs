//! Tables that resolve several levels per lookup.

use sfc_core::engine::{neighbor_multilevel, MultiLevelTables, TableTree};
use sfc_core::spec::builtin;
use sfc_core::tables::compile;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let t = compile(&builtin("hilbert2d_global")?)?;
    for k in 1..=4 {
        let m = MultiLevelTables::build(&t, k)?;
        println!("K = {k}: width {:>3}, {:>7} Omega entries", m.width, m.omega.len());
    }
    let m = MultiLevelTables::build(&t, 2)?;
    let h = t.state_by_label("H").unwrap();
    println!("N-hat(12, H, right) = {:?}", m.n_hat(12, h, 1));
    let v = TableTree::<u64>::new(&t).locate(3, 28)?;
    let w = neighbor_multilevel(&m, &v, 1)?.expect("has a right neighbor");
    println!("(3, 28, {}) right -> ({}, {}, {})", t.labels[v.state], w.level, w.position, t.labels[w.state]);
    Ok(())
}
