//! Visit every cell of a level in curve order together with its neighbors,
//! and count the edges of the face-adjacency graph.

use sfc_core::engine::{traverse, EngineError};
use sfc_core::spec::builtin;
use sfc_core::tables::compile;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let t = compile(&builtin("hilbert2d_global")?)?;
    let mut edges = 0usize;
    let mut consecutive = 0usize;
    traverse::<EngineError, _>(&t, 3, |v, ns| {
        let ps: Vec<u64> = ns.iter().flatten().map(|w| w.position).collect();
        edges += ps.len();
        consecutive += ps.iter().filter(|&&p| p == v.position + 1).count();
        if v.position < 6 {
            println!("{:>2} ({}): {:?}", v.position, t.labels[v.state], ps);
        }
        Ok(())
    })?;
    println!("level 3: {} adjacency edges, {} between consecutive cells", edges / 2, consecutive);
    Ok(())
}
