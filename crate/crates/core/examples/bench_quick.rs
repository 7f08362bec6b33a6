//! A short timing run of every kernel, printed as CSV.

use sfc_core::bench::{run_bench, to_csv, BenchConfig, Kernel};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut rows = Vec::new();
    for (curve, kernel, depth) in [
        ("hilbert2d_global", Kernel::General, 1),
        ("hilbert2d_global", Kernel::General, 3),
        ("hilbert2d_global", Kernel::Iterative, 1),
        ("hilbert2d_global", Kernel::Fast, 1),
        ("peano2_global", Kernel::Fast, 1),
        ("morton2", Kernel::Fast, 1),
        ("sierpinski2d_local", Kernel::Fast, 1),
    ] {
        let mut cfg = BenchConfig::new(curve, kernel, vec![5, 15, 25]);
        cfg.samples = 200_000;
        cfg.reps = 5;
        cfg.depth = depth;
        rows.extend(run_bench(&cfg)?);
    }
    print!("{}", to_csv(&rows));
    Ok(())
}
