//! Curve-specific kernels next to the general engine.

use sfc_core::engine::{neighbor_node, TableTree};
use sfc_core::fast::{
    hilbert2d_state_fast, morton_neighbor, sierpinski2d_neighbor_fast, Hilbert2dKernel, PalindromeKernel,
};
use sfc_core::spec::builtin;
use sfc_core::tables::compile;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // Morton: masked add on the interleaved bits
    println!("morton2 (2, 3) right -> {:?}", morton_neighbor(2, 2, 3, 1)?);
    println!("morton3 (10, 12345) top -> {:?}", morton_neighbor(3, 10, 12345, 5)?);

    // Hilbert: state from bit counts, neighbor through XOR states
    let h = compile(&builtin("hilbert2d_global")?)?;
    let hk = Hilbert2dKernel::new(&h)?;
    let s = hilbert2d_state_fast(3, 28)?;
    println!("hilbert state (3, 28) = {}", h.labels[s as usize]);
    let (p, s2) = hk.neighbor(3, 28, s, 1).expect("neighbor exists");
    println!("hilbert (3, 28) right -> ({p}, {})", h.labels[s2 as usize]);

    // Peano: closed-form digit rewrite, 128-bit positions
    let p = compile(&builtin("peano2_global")?)?;
    let pk = PalindromeKernel::new(&p)?;
    let j: u128 = 9u128.pow(38) / 3;
    let tree = TableTree::<u128>::new(&p);
    let v = tree.locate(38, j)?;
    for (f, name) in ["left", "right", "down", "up"].iter().enumerate() {
        let fast = pk.neighbor(38, j, v.state, f);
        let general = neighbor_node(&p, &v, f)?.map(|w| w.position);
        println!("peano level 38, {j} {name} -> {fast:?} (engine agrees: {})", fast == general);
    }

    // Sierpinski: flip low bits
    println!("sierpinski (2, 1) hypotenuse -> {:?}", sierpinski2d_neighbor_fast(2, 1, 1));
    Ok(())
}
