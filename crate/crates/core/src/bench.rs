//! Timing harness: chained random queries at a fixed level, baseline of the
//! random number generation subtracted, median over repetitions.

use std::fmt::Write as _;
use std::hint::black_box;
use std::time::Instant;

use rand::rngs::SmallRng;
use rand::{Rng, SeedableRng};
use thiserror::Error;

use crate::engine::{neighbor_iterative, neighbor_multilevel, neighbor_node, EngineError, MultiLevelTables, Scratch};
use crate::fast::{morton_max_level, morton_neighbor, sierpinski2d_neighbor_fast, Hilbert2dKernel, PalindromeKernel};
use crate::spec::{builtin, SpecError};
use crate::tables::{compile, CurveTables, TableError};
use crate::tree::AlgebraicNode;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error(transparent)]
    Tables(#[from] TableError),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error("no fast kernel for curve {0}")]
    NoFastKernel(String),
    #[error("level {level} is not supported by {what}")]
    Level { level: u32, what: String },
    #[error("invalid configuration: {0}")]
    Config(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kernel {
    General,
    Iterative,
    Fast,
}

impl Kernel {
    pub fn name(self) -> &'static str {
        match self {
            Kernel::General => "general",
            Kernel::Iterative => "iterative",
            Kernel::Fast => "fast",
        }
    }
}

impl std::str::FromStr for Kernel {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "general" => Ok(Kernel::General),
            "iterative" => Ok(Kernel::Iterative),
            "fast" => Ok(Kernel::Fast),
            _ => Err(format!("unknown kernel `{s}` (general, iterative, fast)")),
        }
    }
}

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub curve: String,
    pub kernel: Kernel,
    pub levels: Vec<u32>,
    /// Queries per repetition.
    pub samples: u64,
    pub reps: u32,
    /// Table depth `K` for the general kernel.
    pub depth: u32,
    pub seed: u64,
}

impl BenchConfig {
    pub fn new(curve: &str, kernel: Kernel, levels: Vec<u32>) -> Self {
        BenchConfig { curve: curve.into(), kernel, levels, samples: 5_000_000, reps: 15, depth: 1, seed: 1 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRow {
    pub curve: String,
    pub kernel: String,
    pub level: u32,
    pub depth: u32,
    pub median_ns: f64,
    pub samples: u64,
    pub reps: u32,
}

pub const CSV_HEADER: &str = "curve,kernel,level,depth,median_ns,samples,reps";

pub fn to_csv(rows: &[BenchRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{:.3},{},{}",
            r.curve, r.kernel, r.level, r.depth, r.median_ns, r.samples, r.reps
        );
    }
    out
}

/// Runs `n` queries where each position and facet depends on the previous
/// result, returning the elapsed nanoseconds.
fn timed<Q: FnMut(u128, usize) -> u128>(mut q: Q, rng: &mut SmallRng, count: u128, facets: usize, n: u64) -> f64 {
    let mut prev = 0u128;
    let start = Instant::now();
    for _ in 0..n {
        let j = (rng.gen_range(0..count) + prev) % count;
        let f = (rng.gen_range(0..facets) + prev as usize) % facets;
        prev = q(j, f);
    }
    black_box(prev);
    start.elapsed().as_nanos() as f64
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let m = xs.len() / 2;
    if xs.len() % 2 == 1 {
        xs[m]
    } else {
        (xs[m - 1] + xs[m]) / 2.0
    }
}

fn measure<Q: FnMut(u128, usize) -> u128>(mut q: Q, cfg: &BenchConfig, level: u32, count: u128, facets: usize) -> f64 {
    let mut per_rep = Vec::with_capacity(cfg.reps as usize);
    for r in 0..cfg.reps {
        let seed = cfg.seed.wrapping_add(r as u64);
        let mut rng = SmallRng::seed_from_u64(seed ^ level as u64);
        let t = timed(&mut q, &mut rng, count, facets, cfg.samples);
        let mut rng = SmallRng::seed_from_u64(seed ^ level as u64);
        let base = timed(|j, f| black_box(j ^ f as u128), &mut rng, count, facets, cfg.samples);
        per_rep.push(((t - base) / cfg.samples as f64).max(0.0));
    }
    median(per_rep)
}

fn fast_level_ok(t: &CurveTables, curve: &str, level: u32) -> Result<(), BenchError> {
    let max = match curve {
        c if c.starts_with("morton") => morton_max_level(t.dimension as u32),
        "hilbert2d_global" => 32,
        "sierpinski2d_local" => 63,
        _ => return Ok(()),
    };
    if level > max {
        return Err(BenchError::Level { level, what: format!("the fast {curve} kernel") });
    }
    Ok(())
}

/// One row per level.
pub fn run_bench(cfg: &BenchConfig) -> Result<Vec<BenchRow>, BenchError> {
    if cfg.samples == 0 || cfg.reps == 0 {
        return Err(BenchError::Config("samples and reps must be positive".into()));
    }
    let spec = builtin(&cfg.curve)?;
    let t = compile(&spec)?;
    let ml = if cfg.kernel == Kernel::General && cfg.depth > 1 {
        Some(MultiLevelTables::build(&t, cfg.depth)?)
    } else {
        None
    };
    let hilbert = if cfg.kernel == Kernel::Fast && spec.name == "hilbert2d_global" {
        Some(Hilbert2dKernel::new(&t)?)
    } else {
        None
    };
    let palin = if cfg.kernel == Kernel::Fast && t.palindrome && spec.name.starts_with("peano") {
        Some(PalindromeKernel::new(&t)?)
    } else {
        None
    };
    let is_morton = spec.name.starts_with("morton");
    let is_sierpinski = spec.name == "sierpinski2d_local";
    if cfg.kernel == Kernel::Fast && hilbert.is_none() && palin.is_none() && !is_morton && !is_sierpinski {
        return Err(BenchError::NoFastKernel(cfg.curve.clone()));
    }
    let facets = t.facets.count(0);
    let d = t.dimension as u32;
    let mut rows = Vec::new();
    for &level in &cfg.levels {
        let count = (t.b as u128)
            .checked_pow(level)
            .ok_or_else(|| BenchError::Level { level, what: "128-bit positions".into() })?;
        let mut scratch = Scratch::with_levels(level as usize + 1);
        let ns = match cfg.kernel {
            Kernel::General => match &ml {
                Some(m) => measure(
                    |j, f| {
                        let v = AlgebraicNode::new(level, j, 0);
                        neighbor_multilevel(m, &v, f).ok().flatten().map_or(0, |w| w.position)
                    },
                    cfg,
                    level,
                    count,
                    facets,
                ),
                None => measure(
                    |j, f| {
                        let v = AlgebraicNode::new(level, j, 0);
                        neighbor_node(&t, &v, f).ok().flatten().map_or(0, |w| w.position)
                    },
                    cfg,
                    level,
                    count,
                    facets,
                ),
            },
            Kernel::Iterative => measure(
                |j, f| {
                    let v = AlgebraicNode::new(level, j, 0);
                    neighbor_iterative(&t, &v, f, &mut scratch).ok().flatten().map_or(0, |w| w.position)
                },
                cfg,
                level,
                count,
                facets,
            ),
            Kernel::Fast => {
                fast_level_ok(&t, &spec.name, level)?;
                if let Some(k) = &hilbert {
                    measure(
                        |j, f| k.neighbor(level, j as u64, 0, f).map_or(0, |w| w.0 as u128),
                        cfg,
                        level,
                        count,
                        facets,
                    )
                } else if let Some(k) = &palin {
                    measure(|j, f| k.neighbor(level, j, 0, f).unwrap_or(0), cfg, level, count, facets)
                } else if is_morton {
                    measure(
                        |j, f| morton_neighbor(d, level, j as u64, f).ok().flatten().unwrap_or(0) as u128,
                        cfg,
                        level,
                        count,
                        facets,
                    )
                } else {
                    measure(
                        |j, f| sierpinski2d_neighbor_fast(level, j as u64, f).unwrap_or(0) as u128,
                        cfg,
                        level,
                        count,
                        facets,
                    )
                }
            }
        };
        rows.push(BenchRow {
            curve: cfg.curve.clone(),
            kernel: cfg.kernel.name().into(),
            level,
            depth: if cfg.kernel == Kernel::General { cfg.depth } else { 1 },
            median_ns: ns,
            samples: cfg.samples,
            reps: cfg.reps,
        });
    }
    Ok(rows)
}
