//! Command-line front end: `gen`, `smooth`, `quality` and `bench`.
//!
//! The binary only parses arguments and calls [`run`]; every subcommand is a
//! plain function here so it can be driven from tests and examples.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::bench::{parse_sizes, run_bench, BenchConfig};
use crate::error::{Error, Result};
use crate::exec::{capped_workers, default_workers, Backend, Executor};
use crate::mesh::{read_triangle_format, write_triangle_files, LayoutKind, MeshStorage};
use crate::meshgen::GenSpec;
use crate::quality::{compute_all_qualities, QualityStats};
use crate::smoothing::{smooth, Form, RunStats, SmoothConfig, Strategy};
use crate::topology::{determine_constraints, find_neighbors, non_manifold_edge_count};

#[derive(Debug, Parser)]
#[command(name = "smartlap", version, about = "Smart Laplacian smoothing of planar triangle meshes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a fixture and write it as a .node/.ele pair.
    Gen(GenArgs),
    /// Smooth a .node/.ele mesh.
    Smooth(SmoothArgs),
    /// Report triangle quality statistics of a .node/.ele mesh.
    Quality(QualityArgs),
    /// Run the layout x form x strategy x backend comparison matrix.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Delaunay,
    Grid,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormArg {
    A,
    B,
}

impl From<FormArg> for Form {
    fn from(f: FormArg) -> Self {
        match f {
            FormArg::A => Form::A,
            FormArg::B => Form::B,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LayoutArg {
    Aos,
    Soa,
}

impl From<LayoutArg> for LayoutKind {
    fn from(l: LayoutArg) -> Self {
        match l {
            LayoutArg::Aos => LayoutKind::Aos,
            LayoutArg::Soa => LayoutKind::Soa,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BackendArg {
    Serial,
    Parallel,
}

impl From<BackendArg> for Backend {
    fn from(b: BackendArg) -> Self {
        match b {
            BackendArg::Serial => Backend::Serial,
            BackendArg::Parallel => Backend::Parallel,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    Fused,
    TwoPhase,
}

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Self {
        match s {
            StrategyArg::Fused => Strategy::Fused,
            StrategyArg::TwoPhase => Strategy::TwoPhase,
        }
    }
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    pub kind: KindArg,
    /// Number of random points (delaunay).
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub rows: Option<usize>,
    #[arg(long)]
    pub cols: Option<usize>,
    /// Interior displacement as a fraction of the cell size (grid).
    #[arg(long, default_value_t = 0.3)]
    pub perturb: f64,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Output stem; writes <stem>.node and <stem>.ele.
    #[arg(short, long)]
    pub output: PathBuf,
}

impl GenArgs {
    pub fn spec(&self) -> Result<GenSpec> {
        match self.kind {
            KindArg::Delaunay => {
                let n = self.n.ok_or_else(|| Error::Config("--n is required for delaunay".into()))?;
                Ok(GenSpec::delaunay(n, self.seed))
            }
            KindArg::Grid => {
                let (Some(rows), Some(cols)) = (self.rows, self.cols) else {
                    return Err(Error::Config("--rows and --cols are required for grid".into()));
                };
                Ok(GenSpec::grid(rows, cols, self.perturb, self.seed))
            }
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct SmoothFlags {
    #[arg(long, value_enum, default_value_t = FormArg::B)]
    pub form: FormArg,
    #[arg(long, value_enum, default_value_t = LayoutArg::Soa)]
    pub layout: LayoutArg,
    #[arg(long, value_enum, default_value_t = BackendArg::Serial)]
    pub backend: BackendArg,
    #[arg(long, value_enum, default_value_t = StrategyArg::Fused)]
    pub strategy: StrategyArg,
    /// Parallel worker count; defaults to the available cores.
    #[arg(long)]
    pub workers: Option<usize>,
    #[arg(long, default_value_t = 100)]
    pub max_iters: usize,
    /// Convergence threshold as a fraction of the bounding-box diagonal.
    #[arg(long, default_value_t = 1e-6)]
    pub move_tol: f64,
}

impl SmoothFlags {
    pub fn config(&self) -> Result<SmoothConfig> {
        let workers = match self.workers {
            Some(0) => return Err(Error::Config("--workers must be at least 1".into())),
            Some(w) => capped_workers(w),
            None => default_workers(),
        };
        let cfg = SmoothConfig {
            form: self.form.into(),
            strategy: self.strategy.into(),
            backend: self.backend.into(),
            workers,
            max_iters: self.max_iters,
            move_tol: self.move_tol,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Args)]
pub struct SmoothArgs {
    pub node: PathBuf,
    pub ele: PathBuf,
    #[command(flatten)]
    pub flags: SmoothFlags,
    /// Output stem; writes <stem>.node and <stem>.ele.
    #[arg(short, long)]
    pub output: PathBuf,
    /// Print run statistics as JSON.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct QualityArgs {
    pub node: PathBuf,
    pub ele: PathBuf,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Comma-separated mesh sizes, `k` suffix allowed.
    #[arg(long, default_value = "1k,5k,10k,50k,100k")]
    pub sizes: String,
    #[arg(long, default_value_t = 5)]
    pub repeats: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Parallel worker count; defaults to the available cores.
    #[arg(long)]
    pub workers: Option<usize>,
    #[arg(long, default_value_t = 100)]
    pub max_iters: usize,
    #[arg(long, default_value_t = 1e-6)]
    pub move_tol: f64,
    /// Fixture directory; missing fixtures are generated into it.
    #[arg(long)]
    pub fixtures: Option<PathBuf>,
    /// Write the CSV report here instead of stdout.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Also write the JSON report here.
    #[arg(long)]
    pub json: Option<PathBuf>,
}

impl BenchArgs {
    pub fn config(&self) -> Result<BenchConfig> {
        let workers = match self.workers {
            Some(0) => return Err(Error::Config("--workers must be at least 1".into())),
            Some(w) => capped_workers(w),
            None => default_workers(),
        };
        let cfg = BenchConfig {
            sizes: parse_sizes(&self.sizes)?,
            workers,
            repeats: self.repeats,
            seed: self.seed,
            max_iters: self.max_iters,
            move_tol: self.move_tol,
            fixtures: self.fixtures.clone(),
            ..BenchConfig::default()
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

fn read_pair(node: &Path, ele: &Path, layout: LayoutKind) -> Result<MeshStorage> {
    let n = std::fs::read_to_string(node).map_err(|e| Error::io(node, e))?;
    let e = std::fs::read_to_string(ele).map_err(|err| Error::io(ele, err))?;
    read_triangle_format(&n, &e, layout)
}

fn io_err(e: std::io::Error) -> Error {
    Error::Io {
        path: "<output>".into(),
        message: e.to_string(),
    }
}

/// Generates a fixture, writes it and returns the mesh.
pub fn cmd_gen(args: &GenArgs, out: &mut dyn Write) -> Result<MeshStorage> {
    let mesh = args.spec()?.build(LayoutKind::Soa)?;
    let (node, ele) = write_triangle_files(&mesh, &args.output)?;
    writeln!(
        out,
        "wrote {} and {}: {} vertices, {} triangles",
        node.display(),
        ele.display(),
        mesh.n_vert(),
        mesh.n_trgl()
    )
    .map_err(io_err)?;
    Ok(mesh)
}

/// Smooths a mesh file pair, writes the result and reports run statistics.
pub fn cmd_smooth(args: &SmoothArgs, out: &mut dyn Write) -> Result<RunStats> {
    let cfg = args.flags.config()?;
    let mut mesh = read_pair(&args.node, &args.ele, args.flags.layout.into())?;
    let stats = smooth(&mut mesh, &cfg)?;
    write_triangle_files(&mesh, &args.output)?;
    if args.json {
        writeln!(out, "{}", serde_json::to_string_pretty(&stats).expect("stats serialize")).map_err(io_err)?;
    } else {
        writeln!(
            out,
            "form={} layout={} strategy={} backend={} workers={}",
            cfg.form,
            args.flags.layout.to_possible_value().unwrap().get_name(),
            cfg.strategy,
            cfg.backend,
            stats.workers
        )
        .map_err(io_err)?;
        writeln!(out, "iterations: {} ({:?})", stats.iterations, stats.stop_reason).map_err(io_err)?;
        writeln!(
            out,
            "time ms: init {:.3} topology {:.3} constraints {:.3} iterate {:.3} total {:.3}",
            stats.init_ms, stats.topo_ms, stats.constr_ms, stats.iter_ms, stats.total_ms
        )
        .map_err(io_err)?;
        writeln!(
            out,
            "alpha before: min {:.6} mean {:.6}\nalpha after:  min {:.6} mean {:.6}",
            stats.before.min, stats.before.mean, stats.after.min, stats.after.mean
        )
        .map_err(io_err)?;
    }
    Ok(stats)
}

/// Quality audit of one mesh.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QualityReport {
    pub vertices: usize,
    pub triangles: usize,
    pub boundary_vertices: usize,
    pub interior_vertices: usize,
    pub non_manifold_edges: usize,
    pub alpha: QualityStats,
}

pub fn quality_report(mesh: &MeshStorage) -> Result<QualityReport> {
    let mut m = mesh.clone();
    let exec = Executor::serial();
    m.init_flags();
    compute_all_qualities(&mut m, &exec);
    let adj = find_neighbors(&mut m);
    determine_constraints(&mut m, &adj, &exec)?;
    let boundary = m.boundary_flags().iter().filter(|&&b| b).count();
    Ok(QualityReport {
        vertices: m.n_vert(),
        triangles: m.n_trgl(),
        boundary_vertices: boundary,
        interior_vertices: m.n_vert() - boundary,
        non_manifold_edges: non_manifold_edge_count(&m),
        alpha: m.quality_stats(),
    })
}

pub fn cmd_quality(args: &QualityArgs, out: &mut dyn Write) -> Result<QualityReport> {
    let mesh = read_pair(&args.node, &args.ele, LayoutKind::Soa)?;
    let r = quality_report(&mesh)?;
    if args.json {
        writeln!(out, "{}", serde_json::to_string_pretty(&r).expect("report serializes")).map_err(io_err)?;
        return Ok(r);
    }
    let a = &r.alpha;
    writeln!(out, "vertices {} (boundary {}, interior {})", r.vertices, r.boundary_vertices, r.interior_vertices)
        .map_err(io_err)?;
    writeln!(out, "triangles {} (non-positive alpha {})", r.triangles, a.non_positive).map_err(io_err)?;
    if r.non_manifold_edges > 0 {
        writeln!(out, "non-manifold edges {}", r.non_manifold_edges).map_err(io_err)?;
    }
    writeln!(out, "alpha min {:.6} mean {:.6} max {:.6}", a.min, a.mean, a.max).map_err(io_err)?;
    for (i, count) in a.histogram.iter().enumerate() {
        let lo = QualityStats::bin_lower(i);
        let hi = QualityStats::bin_lower(i + 1);
        writeln!(out, "  [{lo:+.1}, {hi:+.1}{} {count}", if i + 1 == QualityStats::BINS { "]" } else { ")" })
            .map_err(io_err)?;
    }
    Ok(r)
}

pub fn cmd_bench(args: &BenchArgs, out: &mut dyn Write, log: &mut dyn Write) -> Result<crate::bench::BenchReport> {
    let cfg = args.config()?;
    let report = run_bench(&cfg, log)?;
    match &args.csv {
        Some(path) => {
            let f = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
            report.write_csv(f)?;
        }
        None => report.write_csv(&mut *out)?,
    }
    if let Some(path) = &args.json {
        std::fs::write(path, report.to_json()).map_err(|e| Error::io(path, e))?;
    }
    for f in &report.failures {
        writeln!(log, "FAILED {f}").map_err(io_err)?;
    }
    Ok(report)
}

/// Dispatches a parsed command line.
pub fn run(cli: Cli, out: &mut dyn Write, log: &mut dyn Write) -> Result<()> {
    match cli.command {
        Command::Gen(a) => cmd_gen(&a, out).map(drop),
        Command::Smooth(a) => cmd_smooth(&a, out).map(drop),
        Command::Quality(a) => cmd_quality(&a, out).map(drop),
        Command::Bench(a) => {
            let r = cmd_bench(&a, out, log)?;
            if r.failures.is_empty() {
                Ok(())
            } else {
                Err(Error::Invariant(format!("{} bench cells failed verification", r.failures.len())))
            }
        }
    }
}
