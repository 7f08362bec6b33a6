//! The permutation group generated by the child-state maps.

use sfc_core::spec::builtin;
use sfc_core::tables::{cycle_notation, state_group};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for name in ["hilbert2d_global", "peano2_global", "hilbert3d_global", "sierpinski2d_global"] {
        let spec = builtin(name)?;
        match state_group(&spec.system) {
            Some(g) => {
                println!("{name}: order {}, abelian {}", g.order, g.is_abelian);
                if g.order <= 4 {
                    let els: Vec<String> = g.elements.iter().map(|p| cycle_notation(p, &spec.state_labels)).collect();
                    println!("  {{{}}}", els.join(", "));
                }
            }
            None => println!("{name}: child-state maps are not permutations"),
        }
    }
    Ok(())
}
