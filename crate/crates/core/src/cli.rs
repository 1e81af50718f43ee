//! `gridbend` command line.
//!
//! Exit codes: 0 success (or verification pass), 1 verification failure,
//! 2 usage or input error.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::analysis::{analyze, AnalysisError};
use crate::drawer::{draw_graph, BendRecord, DrawError, DrawOptions, DrawStats, EdgeOrder, ZStart};
use crate::geometry::{GridPoint, COORD_LIMIT};
use crate::model::{
    self, load_drawing, load_drawing_unchecked, load_instance, save_drawing, save_graph,
    save_placement, Drawing, Graph, ModelError, Placement,
};
use crate::verifier::verify;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Draw(#[from] DrawError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error("{0}")]
    Invalid(String),
    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Parser)]
#[command(name = "gridbend", version, about = "One-bend 3D grid drawings with fixed vertex positions")]
pub struct Cli {
    /// Worker threads for verification and cutwidth search (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a graph and a vertex placement.
    Gen(GenArgs),
    /// Route every edge with one bend.
    Draw(DrawArgs),
    /// Check a drawing for crossings and vertex collisions.
    Verify(VerifyArgs),
    /// Report volume and the upper/lower bounds.
    Analyze(AnalyzeArgs),
    /// Write the drawing as Wavefront OBJ polylines.
    Export(ExportArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Complete,
    Gnm,
    Path,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlacementKind {
    /// `(1,0,0), ..., (n,0,0)`
    Line,
    /// Distinct random points of `[1,X]×[1,Y]×[1,Z]`.
    Box(u64, u64, u64),
}

impl FromStr for PlacementKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "line" {
            return Ok(PlacementKind::Line);
        }
        let dims = s
            .strip_prefix("box:")
            .ok_or_else(|| format!("expected `line` or `box:X,Y,Z`, got `{s}`"))?;
        let parts: Vec<u64> = dims
            .split(',')
            .map(|p| p.trim().parse::<u64>())
            .collect::<Result<_, _>>()
            .map_err(|e| format!("bad box dimensions `{dims}`: {e}"))?;
        match parts[..] {
            [x, y, z] if x >= 1 && y >= 1 && z >= 1 => Ok(PlacementKind::Box(x, y, z)),
            _ => Err(format!("box needs three positive dimensions, got `{dims}`")),
        }
    }
}

fn parse_order(s: &str) -> Result<EdgeOrder, String> {
    if s == "input" {
        return Ok(EdgeOrder::Input);
    }
    s.strip_prefix("random:")
        .and_then(|seed| seed.parse().ok())
        .map(EdgeOrder::Random)
        .ok_or_else(|| format!("expected `input` or `random:SEED`, got `{s}`"))
}

#[derive(Debug, clap::Args)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    pub family: Family,
    #[arg(long)]
    pub n: usize,
    /// Edge count, required for `gnm`.
    #[arg(long)]
    pub m: Option<usize>,
    /// `line` or `box:X,Y,Z`.
    #[arg(long)]
    pub placement: PlacementKind,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out_graph: PathBuf,
    #[arg(long)]
    pub out_placement: PathBuf,
}

#[derive(Debug, clap::Args)]
pub struct DrawArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long)]
    pub placement: PathBuf,
    /// `input` or `random:SEED`.
    #[arg(long, default_value = "input", value_parser = parse_order)]
    pub order: EdgeOrder,
    /// First z tried on each anchor line (default: lowest vertex z).
    #[arg(long, allow_hyphen_values = true)]
    pub z_start: Option<i64>,
    /// Report bends outside the expected bounding box.
    #[arg(long)]
    pub bound_check: bool,
    #[arg(long)]
    pub out: PathBuf,
    /// Per-edge statistics as JSON; a summary goes to stderr otherwise.
    #[arg(long)]
    pub stats: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub drawing: PathBuf,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
pub struct AnalyzeArgs {
    #[arg(long)]
    pub drawing: PathBuf,
    /// Defaults to stdout.
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Cross-check the cutwidth formula by exhaustive search (n <= 9).
    #[arg(long)]
    pub brute_cutwidth: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExportFormat {
    Obj,
}

#[derive(Debug, clap::Args)]
pub struct ExportArgs {
    #[arg(long)]
    pub drawing: PathBuf,
    #[arg(long, value_enum, default_value = "obj")]
    pub format: ExportFormat,
    #[arg(long)]
    pub out: PathBuf,
}

/// Parses `args` (including the program name) and runs the command,
/// returning the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    if let Some(threads) = cli.threads {
        // Only fails if a pool already exists, which is harmless.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    }
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

fn dispatch(command: Command) -> Result<i32, CliError> {
    match command {
        Command::Gen(a) => cmd_gen(&a).map(|_| EXIT_OK),
        Command::Draw(a) => cmd_draw(&a).map(|_| EXIT_OK),
        Command::Verify(a) => cmd_verify(&a),
        Command::Analyze(a) => cmd_analyze(&a).map(|_| EXIT_OK),
        Command::Export(a) => cmd_export(&a).map(|_| EXIT_OK),
    }
}

fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Write {
        path: path.to_owned(),
        source,
    })
}

fn pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports always serialize");
    s.push('\n');
    s
}

/// Builds the requested instance.
pub fn generate(
    family: Family,
    n: usize,
    m: Option<usize>,
    placement: PlacementKind,
    seed: u64,
) -> Result<(Graph, Placement), CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let max_edges = n * n.saturating_sub(1) / 2;
    let graph = match family {
        Family::Complete => Graph::complete(n),
        Family::Path => Graph::path(n),
        Family::Gnm => {
            let m = m.ok_or_else(|| CliError::Invalid("--m is required for the gnm family".into()))?;
            if m > max_edges {
                return Err(CliError::Invalid(format!(
                    "m = {m} exceeds n(n-1)/2 = {max_edges} for n = {n}"
                )));
            }
            let all: Vec<(usize, usize)> = (0..n)
                .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
                .collect();
            let mut picked = sample(&mut rng, all.len(), m).into_vec();
            picked.sort_unstable();
            Graph::new(n, picked.into_iter().map(|i| all[i]))?
        }
    };

    let placement = match placement {
        PlacementKind::Line => {
            if n as i64 > COORD_LIMIT {
                return Err(CliError::Invalid(format!("n = {n} does not fit on the coordinate range")));
            }
            Placement::on_x_axis(n)
        }
        PlacementKind::Box(x, y, z) => {
            let limit = COORD_LIMIT as u64;
            if x > limit || y > limit || z > limit {
                return Err(CliError::Invalid(format!(
                    "box {x}x{y}x{z} exceeds the coordinate limit {limit}"
                )));
            }
            let cells = x as u128 * y as u128 * z as u128;
            if cells < n as u128 {
                return Err(CliError::Invalid(format!(
                    "box {x}x{y}x{z} has {cells} points, fewer than n = {n}"
                )));
            }
            let mut seen = HashSet::with_capacity(n);
            let mut positions = Vec::with_capacity(n);
            while positions.len() < n {
                let p = GridPoint::new(
                    rng.gen_range(1..=x as i64),
                    rng.gen_range(1..=y as i64),
                    rng.gen_range(1..=z as i64),
                );
                if seen.insert(p) {
                    positions.push(p);
                }
            }
            Placement::new(positions)?
        }
    };
    Ok((graph, placement))
}

pub fn cmd_gen(a: &GenArgs) -> Result<(), CliError> {
    let (graph, placement) = generate(a.family, a.n, a.m, a.placement, a.seed)?;
    save_graph(&graph, &a.out_graph)?;
    save_placement(&placement, &a.out_placement)?;
    Ok(())
}

#[derive(Serialize)]
struct StatsFile<'a> {
    n: usize,
    m: usize,
    z_start: i64,
    total_rejected: u64,
    max_rejected: u64,
    wall_time_ms: f64,
    bounds: Option<crate::drawer::BendBounds>,
    bound_violations: &'a [crate::drawer::BoundViolation],
    edges: Vec<EdgeStat<'a>>,
}

#[derive(Serialize)]
struct EdgeStat<'a> {
    u: usize,
    v: usize,
    #[serde(flatten)]
    record: &'a BendRecord,
}

fn stats_json(graph: &Graph, stats: &DrawStats, millis: f64) -> String {
    let edges = stats
        .records
        .iter()
        .map(|r| {
            let e = graph.edges()[r.edge];
            EdgeStat {
                u: e.u,
                v: e.v,
                record: r,
            }
        })
        .collect();
    pretty(&StatsFile {
        n: graph.n(),
        m: graph.m(),
        z_start: stats.z_start,
        total_rejected: stats.total_rejected(),
        max_rejected: stats.max_rejected(),
        wall_time_ms: millis,
        bounds: stats.bounds,
        bound_violations: &stats.bound_violations,
        edges,
    })
}

pub fn cmd_draw(a: &DrawArgs) -> Result<(), CliError> {
    let (graph, placement) = load_instance(&a.graph, &a.placement)?;
    let opts = DrawOptions {
        edge_order: a.order,
        z_start: a.z_start.map_or(ZStart::Auto, ZStart::Fixed),
        bound_check: a.bound_check,
    };
    let started = Instant::now();
    let out = draw_graph(&graph, &placement, &opts)?;
    let millis = started.elapsed().as_secs_f64() * 1e3;
    save_drawing(&out.drawing, &a.out)?;

    match &a.stats {
        Some(path) => write_text(path, &stats_json(&graph, &out.stats, millis))?,
        None => eprintln!(
            "routed {} edges in {:.1} ms; {} candidates rejected (max {} on one edge)",
            graph.m(),
            millis,
            out.stats.total_rejected(),
            out.stats.max_rejected()
        ),
    }
    for v in &out.stats.bound_violations {
        eprintln!(
            "warning: edge {} bend {} outside expected bounds x{:?} y{:?} z{:?}",
            v.edge, v.bend, v.bounds.x, v.bounds.y, v.bounds.z
        );
    }
    Ok(())
}

pub fn cmd_verify(a: &VerifyArgs) -> Result<i32, CliError> {
    let drawing = load_drawing_unchecked(&a.drawing)?;
    let report = verify(&drawing);
    if let Some(path) = &a.report {
        write_text(path, &pretty(&report))?;
    }
    if report.pass {
        println!("pass: {} edges, no violations", drawing.graph().m());
        Ok(EXIT_OK)
    } else {
        println!("FAIL: {} violations", report.violations.len());
        for v in &report.violations {
            println!("  {}", serde_json::to_string(v).expect("violations serialize"));
        }
        Ok(EXIT_VERIFY_FAILED)
    }
}

pub fn cmd_analyze(a: &AnalyzeArgs) -> Result<(), CliError> {
    let drawing = load_drawing(&a.drawing)?;
    let report = analyze(&drawing, a.brute_cutwidth)?;
    let text = pretty(&report);
    match &a.report {
        Some(path) => write_text(path, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// OBJ text: vertices first, then bends, then one `l` element per half edge.
pub fn to_obj(d: &Drawing) -> String {
    let n = d.graph().n();
    let mut out = String::new();
    let _ = writeln!(out, "# gridbend one-bend drawing");
    let _ = writeln!(out, "# {} vertices, {} edges", n, d.graph().m());
    for p in d.placement().positions().iter().copied().chain(d.bends()) {
        let _ = writeln!(out, "v {} {} {}", p.x, p.y, p.z);
    }
    // OBJ indices are 1-based; bend i is element n + i + 1.
    for (i, r) in d.routed().iter().enumerate() {
        let bend = n + i + 1;
        let _ = writeln!(out, "l {} {}", r.edge.u + 1, bend);
        let _ = writeln!(out, "l {} {}", bend, r.edge.v + 1);
    }
    out
}

pub fn cmd_export(a: &ExportArgs) -> Result<(), CliError> {
    let drawing = model::load_drawing(&a.drawing)?;
    match a.format {
        ExportFormat::Obj => write_text(&a.out, &to_obj(&drawing)),
    }
}
