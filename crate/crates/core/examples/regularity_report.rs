//! Run the regularity checker on several curves, including two that fail.

use sfc_core::spec::builtin;
use sfc_core::tables::analyze;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for name in ["morton2", "hilbert2d_global", "hilbert2d_local", "sierpinski2d_local", "gosper2d"] {
        let a = analyze(&builtin(name)?)?;
        println!("{name}: {}", if a.is_regular() { "regular" } else { "NOT regular" });
        for c in &a.report.clauses {
            println!("  {:<4} {}", c.clause, if c.ok { "ok" } else { "violated" });
            for w in c.witnesses.iter().take(2) {
                println!("         {w}");
            }
        }
    }
    Ok(())
}
