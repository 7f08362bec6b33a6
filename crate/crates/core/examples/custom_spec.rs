//! Define a curve from a child order, check it, save it as JSON and load it back.

use sfc_core::engine::{neighbor_node, TableTree};
use sfc_core::spec::{kd_to_b_spec, load_spec, save_spec, CubeSymmetry, KdMode, KdSpecification};
use sfc_core::tables::{analyze, compile};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // "N" order: columns first, every child in the parent's frame
    let kd = KdSpecification {
        name: "n_order".into(),
        k: 2,
        d: 2,
        mode: KdMode::Global,
        order: vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]],
        orientations: vec![CubeSymmetry::identity(2); 4],
        labels: vec![(CubeSymmetry::identity(2), "N".into())],
    };
    let spec = kd_to_b_spec(&kd)?;
    let a = analyze(&spec)?;
    println!("n_order regular: {}", a.is_regular());

    let path = std::env::temp_dir().join("n_order.json");
    save_spec(&spec, &path)?;
    let back = load_spec(&path)?;
    println!("saved to {} and reloaded", path.display());

    let t = compile(&back)?;
    let v = TableTree::<u64>::new(&t).locate(2, 1)?;
    for (f, name) in ["left", "right", "down", "up"].iter().enumerate() {
        println!("  (2, 1) {name:>5} -> {:?}", neighbor_node(&t, &v, f)?.map(|w| w.position));
    }
    Ok(())
}
