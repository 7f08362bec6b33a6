//! How far the neighbor search climbs: fraction of queries reaching depth k.

use sfc_core::engine::depth_histogram;
use sfc_core::spec::builtin;
use sfc_core::tables::compile;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (name, level) in [("hilbert2d_global", 8), ("peano2_global", 5), ("sierpinski2d_local", 14), ("morton3", 5)] {
        let t = compile(&builtin(name)?)?;
        let h = depth_histogram(&t, level)?;
        let fr: Vec<String> = (1..=5.min(level as usize + 1)).map(|k| format!("{:.4}", h.fraction(k))).collect();
        let mean = h.counts.iter().sum::<u64>() as f64 / h.total as f64;
        println!("{name} level {level}: P(depth >= k), k = 1.. : {}  mean depth {mean:.3}", fr.join(" "));
        println!("  queries without neighbor per facet: {:?}", h.no_neighbor);
    }
    Ok(())
}
