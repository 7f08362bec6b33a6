//! Write SVG figures of several curves.
//!
//! cargo run --example render_svg -- out_dir

use sfc_core::render::{render_svg, LabelMode, RenderOptions};
use sfc_core::spec::builtin;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::path::PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "figures".into()));
    std::fs::create_dir_all(&dir)?;
    let figures = [
        ("hilbert2d_global", 2, LabelMode::Positions, 4, 0),
        ("hilbert2d_global", 1, LabelMode::States, 10, 1),
        ("peano2_global", 2, LabelMode::None, 10, 0),
        ("sierpinski2d_local", 5, LabelMode::None, 10, 0),
        ("gosper2d", 2, LabelMode::None, 10, 0),
    ];
    for (name, level, labels, label_base, curve_offset) in figures {
        let opts = RenderOptions { level, labels, label_base, curve_offset, ..Default::default() };
        let svg = render_svg(&builtin(name)?, &opts)?;
        let path = dir.join(format!("{name}_l{level}.svg"));
        std::fs::write(&path, svg)?;
        println!("wrote {}", path.display());
    }
    Ok(())
}
