//! SVG figures of a specification's cells and curve.

use std::fmt::Write as _;

use thiserror::Error;

use crate::geometry::{extreme_points, Rational, Vector};
use crate::spec::BSpecification;
use crate::tree::{GeometricNode, GeometricTree, IndexTree, TreeError};

/// Upper bound on the number of cells drawn.
pub const MAX_CELLS: u64 = 100_000;

#[derive(Debug, Error)]
pub enum RenderError {
    #[error("only 2D specifications can be rendered (dimension {0})")]
    Dimension(usize),
    #[error("{0} cells exceed the limit of {MAX_CELLS}")]
    TooManyCells(u64),
    #[error("curve level offset must be 0 or 1, got {0}")]
    Offset(u32),
    #[error("label base must lie in 2..=36, got {0}")]
    Base(u32),
    #[error(transparent)]
    Tree(#[from] TreeError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LabelMode {
    None,
    Positions,
    States,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RenderOptions {
    pub level: u32,
    pub labels: LabelMode,
    /// Base for position labels; base `b` prints `l` digits per label.
    pub label_base: u32,
    /// Draw the curve this many levels below the grid (0 or 1).
    pub curve_offset: u32,
    pub cell_stroke: f64,
    pub curve_stroke: f64,
    /// Width and height in pixels.
    pub canvas: u32,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions {
            level: 2,
            labels: LabelMode::None,
            label_base: 10,
            curve_offset: 0,
            cell_stroke: 0.004,
            curve_stroke: 0.008,
            canvas: 512,
        }
    }
}

fn cells(spec: &BSpecification, level: u32) -> Result<Vec<GeometricNode>, RenderError> {
    let count = (spec.branching() as u64).checked_pow(level).filter(|&c| c <= MAX_CELLS);
    let count = count.ok_or(RenderError::TooManyCells((spec.branching() as u64).saturating_pow(level)))?;
    let g = GeometricTree::new(spec);
    let mut out = Vec::with_capacity(count as usize);
    fn go(g: &GeometricTree<'_>, v: GeometricNode, level: u32, out: &mut Vec<GeometricNode>) -> Result<(), TreeError> {
        if v.level == level {
            out.push(v);
            return Ok(());
        }
        for i in 0..g.branching() {
            go(g, g.child(&v, i)?, level, out)?;
        }
        Ok(())
    }
    go(&g, g.root(), level, &mut out)?;
    Ok(out)
}

/// Hull vertices in counter-clockwise order and their average.
fn ring(v: &GeometricNode) -> (Vec<Vector>, Vector) {
    let mut verts = extreme_points(v.points.columns(), 2);
    let n = Rational::from_int(verts.len() as i64);
    let c: Vector = (0..2).map(|k| verts.iter().map(|p| p[k].clone()).sum::<Rational>() / n.clone()).collect();
    let angle = |p: &Vector| (p[1].clone() - c[1].clone()).to_f64().atan2((p[0].clone() - c[0].clone()).to_f64());
    verts.sort_by(|a, b| angle(a).total_cmp(&angle(b)));
    (verts, c)
}

fn label_text(position: u64, level: u32, base: u32, b: u32) -> String {
    if base == 10 && base != b {
        return position.to_string();
    }
    let mut digits = Vec::new();
    let mut x = position;
    for _ in 0..level.max(1) {
        digits.push(std::char::from_digit((x % base as u64) as u32, base).expect("base ≤ 36"));
        x /= base as u64;
    }
    digits.iter().rev().collect()
}

struct Frame {
    x0: Rational,
    y1: Rational,
    scale: Rational,
}

impl Frame {
    fn point(&self, p: &[Rational]) -> String {
        let x = (p[0].clone() - self.x0.clone()) * self.scale.clone();
        let y = (self.y1.clone() - p[1].clone()) * self.scale.clone();
        format!("{},{}", x.to_decimal(9), y.to_decimal(9))
    }
}

/// Cell outlines at `level`, the curve through cell centroids at
/// `level + curve_offset` and optional labels. Output is byte-deterministic.
pub fn render_svg(spec: &BSpecification, opts: &RenderOptions) -> Result<String, RenderError> {
    if spec.dimension != 2 {
        return Err(RenderError::Dimension(spec.dimension));
    }
    if opts.curve_offset > 1 {
        return Err(RenderError::Offset(opts.curve_offset));
    }
    if !(2..=36).contains(&opts.label_base) {
        return Err(RenderError::Base(opts.label_base));
    }
    let grid = cells(spec, opts.level)?;
    let fine = if opts.curve_offset == 0 { grid.clone() } else { cells(spec, opts.level + opts.curve_offset)? };

    let (lo, hi) = spec.root_points.bbox();
    let extent = std::cmp::max(hi[0].clone() - lo[0].clone(), hi[1].clone() - lo[1].clone());
    let frame = Frame { x0: lo[0].clone(), y1: hi[1].clone(), scale: extent.recip() };
    let width = ((hi[0].clone() - lo[0].clone()) * frame.scale.clone()).to_decimal(9);
    let height = ((hi[1].clone() - lo[1].clone()) * frame.scale.clone()).to_decimal(9);

    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{c}" height="{c}" viewBox="-0.02 -0.02 {w} {h}">"#,
        c = opts.canvas,
        w = (width.parse::<f64>().unwrap_or(1.0) + 0.04),
        h = (height.parse::<f64>().unwrap_or(1.0) + 0.04),
    );
    let _ = writeln!(out, "<title>{} level {}</title>", spec.name, opts.level);
    let _ = writeln!(out, r#"<g fill="none" stroke="black" stroke-width="{}">"#, opts.cell_stroke);
    let mut centers = Vec::with_capacity(grid.len());
    for v in &grid {
        let (verts, c) = ring(v);
        let pts: Vec<String> = verts.iter().map(|p| frame.point(p)).collect();
        let _ = writeln!(out, r#"<polygon points="{}"/>"#, pts.join(" "));
        let (blo, bhi) = v.points.bbox();
        let size = std::cmp::min(bhi[0].clone() - blo[0].clone(), bhi[1].clone() - blo[1].clone());
        centers.push((c, size * frame.scale.clone()));
    }
    let _ = writeln!(out, "</g>");
    let curve: Vec<String> = fine.iter().map(|v| frame.point(&ring(v).1)).collect();
    let _ = writeln!(
        out,
        r#"<polyline fill="none" stroke="red" stroke-width="{}" stroke-linejoin="round" points="{}"/>"#,
        opts.curve_stroke,
        curve.join(" ")
    );
    if opts.labels != LabelMode::None {
        let _ = writeln!(out, r#"<g font-family="sans-serif" text-anchor="middle" dominant-baseline="central">"#);
        for (v, (c, size)) in grid.iter().zip(&centers) {
            let text = match opts.labels {
                LabelMode::States => spec.label(v.state).to_string(),
                _ => {
                    let pos: u64 = v.position.to_string().parse().expect("capped cell count");
                    label_text(pos, opts.level, opts.label_base, spec.branching())
                }
            };
            let font = (size.clone() * Rational::new(3, 10)).to_decimal(9);
            let p = frame.point(c);
            let (x, y) = p.split_once(',').expect("pair");
            let _ = writeln!(out, r#"<text x="{x}" y="{y}" font-size="{font}">{text}</text>"#);
        }
        let _ = writeln!(out, "</g>");
    }
    let _ = writeln!(out, "</svg>");
    Ok(out)
}
