//! The `sfc` command line.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bench::{run_bench, to_csv, BenchConfig, Kernel};
use crate::engine::{neighbor_multilevel, neighbor_node, EngineError, MultiLevelTables, TableTree};
use crate::fast::hilbert2d_state_fast;
use crate::render::{render_svg, LabelMode, RenderOptions};
use crate::spec::{builtin, builtin_kd, load_spec, BSpecification};
use crate::tables::{analyze, compile, cycle_notation, state_group, CurveTables, TableError};
use crate::tree::{coords_to_position, position_to_coords, AlgebraicNode};

#[derive(Parser, Debug)]
#[command(name = "sfc", version, about = "Neighbor tables and queries for space-filling curves")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Source {
    /// Builtin curve name (see `sfc verify --help` for the list)
    #[arg(long, conflicts_with = "spec")]
    pub curve: Option<String>,
    /// Specification file (JSON)
    #[arg(long)]
    pub spec: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Labels {
    None,
    Positions,
    States,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Compile lookup tables and write their canonical text form
    Tables {
        #[command(flatten)]
        source: Source,
        /// Levels per lookup
        #[arg(long, default_value_t = 1)]
        depth: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the regularity clauses and the palindrome property
    Verify {
        #[command(flatten)]
        source: Source,
        /// Print the report as JSON
        #[arg(long)]
        json: bool,
    },
    /// Print the group generated by the child-state permutations
    Group {
        #[command(flatten)]
        source: Source,
    },
    /// Find the neighbor of a node through a facet
    Neighbor {
        #[arg(long)]
        curve: String,
        #[arg(long)]
        level: u32,
        #[arg(long)]
        position: u128,
        /// Facet number or name (left, right, down, up, bottom, top)
        #[arg(long)]
        facet: String,
        /// Run the search with this state instead of the true one
        #[arg(long)]
        assume_state: Option<String>,
        #[arg(long, default_value_t = 1)]
        depth: u32,
    },
    /// Print the state of a node
    State {
        #[arg(long)]
        curve: String,
        #[arg(long)]
        level: u32,
        #[arg(long)]
        position: u128,
        /// Use the bit-count formula (2D Hilbert only)
        #[arg(long)]
        fast: bool,
    },
    /// Convert between positions and grid coordinates
    Coords {
        #[arg(long)]
        curve: String,
        #[arg(long)]
        level: u32,
        #[arg(long, conflicts_with = "coords", required_unless_present = "coords")]
        position: Option<u64>,
        /// Space- or comma-separated grid coordinates
        #[arg(long)]
        coords: Option<String>,
    },
    /// Draw cells and curve as SVG
    Render {
        #[arg(long)]
        curve: String,
        #[arg(long)]
        level: u32,
        #[arg(long, value_enum, default_value_t = Labels::None)]
        labels: Labels,
        /// Base of position labels (10 or the branching factor)
        #[arg(long, default_value_t = 10)]
        base: u32,
        /// Draw the curve one level finer than the grid
        #[arg(long)]
        fine: bool,
        #[arg(long, default_value_t = 512)]
        canvas: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Time neighbor queries and print CSV
    Bench {
        #[arg(long)]
        curve: String,
        #[arg(long, default_value = "general")]
        kernel: Kernel,
        /// Inclusive range `a..b` or a single level
        #[arg(long, default_value = "5..30")]
        levels: String,
        #[arg(long, default_value_t = 5_000_000)]
        samples: u64,
        #[arg(long, default_value_t = 15)]
        reps: u32,
        #[arg(long, default_value_t = 1)]
        depth: u32,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Spec(#[from] crate::spec::SpecError),
    #[error(transparent)]
    Tables(#[from] TableError),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Tree(#[from] crate::tree::TreeError),
    #[error(transparent)]
    Render(#[from] crate::render::RenderError),
    #[error(transparent)]
    Bench(#[from] crate::bench::BenchError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn load(source: &Source) -> Result<BSpecification, CliError> {
    match (&source.curve, &source.spec) {
        (Some(c), None) => Ok(builtin(c)?),
        (None, Some(p)) => Ok(load_spec(p)?),
        _ => Err(CliError::Usage("give exactly one of --curve or --spec".into())),
    }
}

/// Facet by number or by name for box-shaped cells.
pub fn parse_facet(t: &CurveTables, text: &str) -> Result<usize, CliError> {
    if let Ok(f) = text.parse::<usize>() {
        return Ok(f);
    }
    let names = ["left", "right", "down", "up", "bottom", "top"];
    let f = names.iter().position(|n| *n == text).ok_or_else(|| CliError::Usage(format!("unknown facet `{text}`")))?;
    if t.facet_count != 2 * t.dimension || f >= t.facet_count {
        return Err(CliError::Usage(format!("facet names need box cells; use a number below {}", t.facet_count)));
    }
    Ok(f)
}

fn parse_levels(text: &str) -> Result<Vec<u32>, CliError> {
    let bad = || CliError::Usage(format!("bad level range `{text}`"));
    if let Some((a, b)) = text.split_once("..") {
        let a: u32 = a.trim().parse().map_err(|_| bad())?;
        let b: u32 = b.trim_start_matches('=').trim().parse().map_err(|_| bad())?;
        if a > b {
            return Err(bad());
        }
        Ok((a..=b).collect())
    } else {
        Ok(vec![text.trim().parse().map_err(|_| bad())?])
    }
}

fn emit(out: &mut dyn Write, path: &Option<PathBuf>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn show(t: &CurveTables, w: Option<AlgebraicNode<u128>>) -> String {
    match w {
        Some(w) => format!("{} {}", w.position, t.labels[w.state]),
        None => "none".into(),
    }
}

/// Runs one command; returns the process exit code.
pub fn execute(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    match cli.command {
        Command::Tables { source, depth, out: path } => {
            let spec = load(&source)?;
            let t = match compile(&spec) {
                Ok(t) => t,
                Err(TableError::NotPreRegular(r) | TableError::NotRegular(r)) => {
                    writeln!(err, "{}: not regular", spec.name)?;
                    write!(err, "{r}")?;
                    return Ok(1);
                }
                Err(e) => return Err(e.into()),
            };
            let text = if depth > 1 { MultiLevelTables::build(&t, depth)?.to_text() } else { t.to_text() };
            emit(out, &path, &text)?;
            Ok(0)
        }
        Command::Verify { source, json } => {
            let spec = load(&source)?;
            let a = analyze(&spec)?;
            let palindrome = if a.is_regular() { Some(compile(&spec)?.palindrome) } else { None };
            if json {
                let v = serde_json::json!({
                    "curve": spec.name,
                    "regular": a.is_regular(),
                    "clauses": a.report.clauses,
                    "palindrome": palindrome,
                });
                writeln!(out, "{}", serde_json::to_string_pretty(&v).expect("json"))?;
            } else {
                writeln!(out, "{}", spec.name)?;
                write!(out, "{}", a.report)?;
                match palindrome {
                    Some(p) => writeln!(out, "palindrome={p}")?,
                    None => writeln!(out, "palindrome=n/a")?,
                }
            }
            Ok(if a.is_regular() { 0 } else { 1 })
        }
        Command::Group { source } => {
            let spec = load(&source)?;
            match state_group(&spec.system) {
                None => {
                    writeln!(out, "not invertible: some child-state map is not a bijection")?;
                    Ok(1)
                }
                Some(g) => {
                    writeln!(out, "order {}", g.order)?;
                    writeln!(out, "abelian {}", g.is_abelian)?;
                    for (j, p) in g.generators.iter().enumerate() {
                        writeln!(out, "sigma_{j} = {}", cycle_notation(p, &spec.state_labels))?;
                    }
                    let elems: Vec<String> = g.elements.iter().map(|p| cycle_notation(p, &spec.state_labels)).collect();
                    writeln!(out, "elements {{{}}}", elems.join(", "))?;
                    Ok(0)
                }
            }
        }
        Command::Neighbor { curve, level, position, facet, assume_state, depth } => {
            let spec = builtin(&curve)?;
            let t = compile(&spec)?;
            let f = parse_facet(&t, &facet)?;
            let tree = TableTree::<u128>::new(&t);
            let v = match &assume_state {
                Some(s) => {
                    let s = spec.parse_state(s).ok_or_else(|| CliError::Usage(format!("unknown state `{s}`")))?;
                    if !t.is_invertible() {
                        return Err(EngineError::NotInvertible.into());
                    }
                    tree.node(level, position, s)?
                }
                None => tree.locate(level, position)?,
            };
            let w = if depth > 1 {
                neighbor_multilevel(&MultiLevelTables::build(&t, depth)?, &v, f)?
            } else {
                neighbor_node(&t, &v, f)?
            };
            writeln!(out, "{}", show(&t, w))?;
            Ok(0)
        }
        Command::State { curve, level, position, fast } => {
            let spec = builtin(&curve)?;
            if fast {
                if spec.name != "hilbert2d_global" {
                    return Err(CliError::Usage("--fast is only available for hilbert2d_global".into()));
                }
                let j = u64::try_from(position).map_err(|_| CliError::Usage("position too large".into()))?;
                let s = hilbert2d_state_fast(level, j)?;
                writeln!(out, "{}", spec.label(s as usize))?;
            } else {
                let s = crate::tree::compute_state(&spec.system, level, &position)?;
                writeln!(out, "{}", spec.label(s))?;
            }
            Ok(0)
        }
        Command::Coords { curve, level, position, coords } => {
            let kd = builtin_kd(&curve)?;
            match (position, coords) {
                (Some(j), _) => {
                    let u = position_to_coords(&kd, level, j)?;
                    let u: Vec<String> = u.iter().map(|x| x.to_string()).collect();
                    writeln!(out, "{}", u.join(" "))?;
                }
                (None, Some(c)) => {
                    let u: Vec<u64> = c
                        .split(|ch: char| ch == ',' || ch.is_whitespace())
                        .filter(|s| !s.is_empty())
                        .map(|s| s.parse().map_err(|_| CliError::Usage(format!("bad coordinate `{s}`"))))
                        .collect::<Result<_, _>>()?;
                    writeln!(out, "{}", coords_to_position(&kd, level, &u)?)?;
                }
                (None, None) => return Err(CliError::Usage("give --position or --coords".into())),
            }
            Ok(0)
        }
        Command::Render { curve, level, labels, base, fine, canvas, out: path } => {
            let spec = builtin(&curve)?;
            let opts = RenderOptions {
                level,
                labels: match labels {
                    Labels::None => LabelMode::None,
                    Labels::Positions => LabelMode::Positions,
                    Labels::States => LabelMode::States,
                },
                label_base: base,
                curve_offset: u32::from(fine),
                canvas,
                ..RenderOptions::default()
            };
            emit(out, &path, &render_svg(&spec, &opts)?)?;
            Ok(0)
        }
        Command::Bench { curve, kernel, levels, samples, reps, depth, seed, out: path } => {
            let cfg = BenchConfig { curve, kernel, levels: parse_levels(&levels)?, samples, reps, depth, seed };
            emit(out, &path, &to_csv(&run_bench(&cfg)?))?;
            Ok(0)
        }
    }
}

/// Parses `args` (program name first) and runs the command, printing errors to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(err, "{e}");
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

pub fn main() -> i32 {
    run(std::env::args_os(), &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}
