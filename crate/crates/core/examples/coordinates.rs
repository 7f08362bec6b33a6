//! Positions to grid coordinates and back.

use sfc_core::spec::builtin_kd;
use sfc_core::tree::{coords_to_position, position_to_coords};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for name in ["hilbert2d_global", "morton2", "peano2_global"] {
        let kd = builtin_kd(name)?;
        let side = (kd.k as u64).pow(2);
        println!("{name}, level 2 (rows from the top):");
        let mut grid = vec![vec![0u64; side as usize]; side as usize];
        for j in 0..side * side {
            let u = position_to_coords(&kd, 2, j)?;
            assert_eq!(coords_to_position(&kd, 2, &u)?, j);
            grid[u[1] as usize][u[0] as usize] = j;
        }
        for row in grid.iter().rev() {
            let cells: Vec<String> = row.iter().map(|j| format!("{j:>3}")).collect();
            println!("  {}", cells.join(""));
        }
    }
    Ok(())
}
