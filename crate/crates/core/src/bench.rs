//! Comparison harness over layout x form x strategy x backend.
//!
//! Every cell smooths the same fixture. Timings are the median of `repeats`
//! runs after one discarded warm-up. A cell is reported only if its output
//! keeps boundary coordinates and connectivity bit-identical to the input and
//! agrees with every cell it is required to match:
//!
//! * AoS and SoA cells with the same form, strategy and backend;
//! * fused and two-phase cells with the same form, layout and backend;
//! * serial and parallel form A cells with the same layout and strategy.
//!
//! Speedup is the total time of the serial AoS form B cell with the same mesh
//! and strategy divided by the cell's total time.

use std::collections::HashMap;
use std::io::Write;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::{default_workers, Backend, Executor};
use crate::mesh::{read_triangle_files, write_triangle_files, LayoutKind, MeshStorage, Point, Triangle};
use crate::meshgen::GenSpec;
use crate::smoothing::{smooth_with, Form, RunStats, SmoothConfig, Strategy};

/// Column order of the CSV report.
pub const CSV_HEADER: [&str; 17] = [
    "size",
    "layout",
    "form",
    "strategy",
    "backend",
    "workers",
    "iterations",
    "init_ms",
    "topo_ms",
    "constr_ms",
    "iter_ms",
    "total_ms",
    "min_alpha_before",
    "min_alpha_after",
    "mean_alpha_before",
    "mean_alpha_after",
    "speedup",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchConfig {
    pub sizes: Vec<usize>,
    pub layouts: Vec<LayoutKind>,
    pub forms: Vec<Form>,
    pub strategies: Vec<Strategy>,
    pub backends: Vec<Backend>,
    /// Worker count of the parallel backend.
    pub workers: usize,
    pub repeats: usize,
    pub seed: u64,
    pub max_iters: usize,
    pub move_tol: f64,
    /// Directory holding `d<size>_s<seed>.node/.ele` fixtures; missing ones are
    /// generated and written there.
    pub fixtures: Option<PathBuf>,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            sizes: crate::meshgen::DEFAULT_SIZES.to_vec(),
            layouts: LayoutKind::ALL.to_vec(),
            forms: Form::ALL.to_vec(),
            strategies: Strategy::ALL.to_vec(),
            backends: Backend::ALL.to_vec(),
            workers: default_workers(),
            repeats: 5,
            seed: 42,
            max_iters: 100,
            move_tol: 1e-6,
            fixtures: None,
        }
    }
}

impl BenchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.sizes.is_empty() || self.sizes.iter().any(|&s| s < 3) {
            return Err(Error::Config("sizes must be non-empty and at least 3".into()));
        }
        if self.repeats == 0 {
            return Err(Error::Config("repeats must be at least 1".into()));
        }
        for (name, empty) in [
            ("layouts", self.layouts.is_empty()),
            ("forms", self.forms.is_empty()),
            ("strategies", self.strategies.is_empty()),
            ("backends", self.backends.is_empty()),
        ] {
            if empty {
                return Err(Error::Config(format!("{name} must not be empty")));
            }
        }
        self.smooth_config(Form::B, Strategy::Fused, Backend::Serial).validate()
    }

    fn smooth_config(&self, form: Form, strategy: Strategy, backend: Backend) -> SmoothConfig {
        SmoothConfig {
            form,
            strategy,
            backend,
            workers: match backend {
                Backend::Serial => 1,
                Backend::Parallel => self.workers,
            },
            max_iters: self.max_iters,
            move_tol: self.move_tol,
        }
    }
}

/// Parses `1k,10k,2500` style size lists.
pub fn parse_sizes(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            let lower = t.to_ascii_lowercase();
            let (num, mul) = match lower.strip_suffix('k') {
                Some(n) => (n, 1_000),
                None => (lower.as_str(), 1),
            };
            num.parse::<usize>()
                .map(|n| n * mul)
                .map_err(|_| Error::Config(format!("invalid mesh size `{t}`")))
        })
        .collect()
}

/// One matrix cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub size: usize,
    pub layout: LayoutKind,
    pub form: Form,
    pub strategy: Strategy,
    pub backend: Backend,
    pub workers: usize,
    pub iterations: usize,
    pub init_ms: f64,
    pub topo_ms: f64,
    pub constr_ms: f64,
    pub iter_ms: f64,
    pub total_ms: f64,
    pub min_alpha_before: f64,
    pub min_alpha_after: f64,
    pub mean_alpha_before: f64,
    pub mean_alpha_after: f64,
    /// `None` when the baseline cell is not part of the matrix.
    pub speedup: Option<f64>,
    pub accepted_per_pass: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub records: Vec<BenchRecord>,
    /// Cells dropped because a correctness check failed.
    pub failures: Vec<String>,
    pub repeats: usize,
    pub precision: String,
    pub available_threads: usize,
}

impl BenchReport {
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let err = |e: csv::Error| Error::Io {
            path: "csv".into(),
            message: e.to_string(),
        };
        w.write_record(CSV_HEADER).map_err(err)?;
        for r in &self.records {
            w.write_record([
                r.size.to_string(),
                r.layout.to_string(),
                r.form.to_string(),
                r.strategy.to_string(),
                r.backend.to_string(),
                r.workers.to_string(),
                r.iterations.to_string(),
                format!("{:.3}", r.init_ms),
                format!("{:.3}", r.topo_ms),
                format!("{:.3}", r.constr_ms),
                format!("{:.3}", r.iter_ms),
                format!("{:.3}", r.total_ms),
                r.min_alpha_before.to_string(),
                r.min_alpha_after.to_string(),
                r.mean_alpha_before.to_string(),
                r.mean_alpha_after.to_string(),
                r.speedup.map_or_else(String::new, |s| format!("{s:.4}")),
            ])
            .map_err(err)?;
        }
        w.flush().map_err(|e| Error::Io {
            path: "csv".into(),
            message: e.to_string(),
        })
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        Ok(String::from_utf8(buf).expect("csv output is utf-8"))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len();
    if n % 2 == 1 {
        xs[n / 2]
    } else {
        0.5 * (xs[n / 2 - 1] + xs[n / 2])
    }
}

/// Checks that smoothing left connectivity and every boundary coordinate
/// bit-identical.
pub fn check_preservation(input: &MeshStorage, output: &MeshStorage) -> Result<()> {
    if input.n_vert() != output.n_vert() || input.n_trgl() != output.n_trgl() {
        return Err(Error::Invariant("vertex or triangle count changed".into()));
    }
    if input.triangles() != output.triangles() {
        return Err(Error::Invariant("triangle connectivity changed".into()));
    }
    for v in 0..output.n_vert() {
        if output.is_boundary(v) {
            let (a, b) = (input.point(v), output.point(v));
            if a.x.to_bits() != b.x.to_bits() || a.y.to_bits() != b.y.to_bits() {
                return Err(Error::Invariant(format!("boundary vertex {v} moved")));
            }
        }
    }
    Ok(())
}

/// Loads or generates the Delaunay fixture of `size` points.
pub fn fixture(size: usize, seed: u64, dir: Option<&std::path::Path>) -> Result<(Vec<Point>, Vec<Triangle>)> {
    let spec = GenSpec::delaunay(size, seed);
    let Some(dir) = dir else {
        return spec.generate();
    };
    let stem = dir.join(format!("d{size}_s{seed}"));
    if stem.with_extension("node").exists() && stem.with_extension("ele").exists() {
        let m = read_triangle_files(&stem, LayoutKind::Soa)?;
        return Ok((m.points(), m.triangles()));
    }
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let (pts, tris) = spec.generate()?;
    write_triangle_files(&MeshStorage::build(&pts, &tris, LayoutKind::Soa)?, &stem)?;
    Ok((pts, tris))
}

struct CellRun {
    stats: RunStats,
    output: MeshStorage,
    timings: [f64; 5],
}

fn run_cell(
    input: &MeshStorage,
    cfg: &SmoothConfig,
    exec: &Executor,
    repeats: usize,
) -> Result<CellRun> {
    let mut samples: Vec<[f64; 5]> = Vec::with_capacity(repeats);
    let mut first: Option<(RunStats, MeshStorage)> = None;
    for i in 0..=repeats {
        let mut m = input.clone();
        let stats = smooth_with(&mut m, cfg, exec)?;
        check_preservation(input, &m)?;
        if i == 0 {
            first = Some((stats, m));
            continue;
        }
        let (s0, m0) = first.as_ref().expect("warm-up ran");
        if stats.iterations != s0.iterations || !m.coords_bit_eq(m0) {
            return Err(Error::Invariant("repeated runs of the same cell diverged".into()));
        }
        samples.push([stats.init_ms, stats.topo_ms, stats.constr_ms, stats.iter_ms, stats.total_ms]);
    }
    let timings = std::array::from_fn(|k| median(samples.iter().map(|s| s[k]).collect()));
    let (stats, output) = first.expect("warm-up ran");
    Ok(CellRun {
        stats,
        output,
        timings,
    })
}

type CellKey = (LayoutKind, Form, Strategy, Backend);

/// Runs the whole matrix, writing one progress line per cell to `log`.
pub fn run_bench(config: &BenchConfig, log: &mut dyn Write) -> Result<BenchReport> {
    config.validate()?;
    let parallel = if config.backends.contains(&Backend::Parallel) {
        Some(Executor::parallel(config.workers)?)
    } else {
        None
    };
    let serial = Executor::serial();
    let mut records = Vec::new();
    let mut failures = Vec::new();

    for &size in &config.sizes {
        let (pts, tris) = fixture(size, config.seed, config.fixtures.as_deref())?;
        let mut cells: HashMap<CellKey, CellRun> = HashMap::new();
        let mut order = Vec::new();
        for &layout in &config.layouts {
            let input = MeshStorage::build(&pts, &tris, layout)?;
            for &form in &config.forms {
                for &strategy in &config.strategies {
                    for &backend in &config.backends {
                        let cfg = config.smooth_config(form, strategy, backend);
                        let exec = match backend {
                            Backend::Serial => &serial,
                            Backend::Parallel => parallel.as_ref().expect("parallel executor"),
                        };
                        let key = (layout, form, strategy, backend);
                        match run_cell(&input, &cfg, exec, config.repeats) {
                            Ok(run) => {
                                let _ = writeln!(
                                    log,
                                    "size={size} layout={layout} form={form} strategy={strategy} backend={backend} iterations={} total_ms={:.3}",
                                    run.stats.iterations, run.timings[4]
                                );
                                cells.insert(key, run);
                                order.push(key);
                            }
                            Err(e) => failures.push(format!("size={size} {key:?}: {e}")),
                        }
                    }
                }
            }
        }

        // Cross-cell agreement.
        let mut rejected: Vec<CellKey> = Vec::new();
        for &key @ (layout, form, strategy, backend) in &order {
            let mut partners = vec![
                (LayoutKind::Aos, form, strategy, backend),
                (layout, form, Strategy::Fused, backend),
            ];
            if form == Form::A {
                partners.push((layout, form, strategy, Backend::Serial));
            }
            for other in partners {
                if other == key {
                    continue;
                }
                if let (Some(a), Some(b)) = (cells.get(&key), cells.get(&other)) {
                    if !a.output.coords_bit_eq(&b.output) {
                        failures.push(format!(
                            "size={size} {key:?}: final mesh differs from {other:?}"
                        ));
                        rejected.push(key);
                    }
                }
            }
        }

        for key in order {
            if rejected.contains(&key) {
                continue;
            }
            let (layout, form, strategy, backend) = key;
            let run = &cells[&key];
            let baseline = cells
                .get(&(LayoutKind::Aos, Form::B, strategy, Backend::Serial))
                .map(|b| b.timings[4]);
            let s = &run.stats;
            records.push(BenchRecord {
                size,
                layout,
                form,
                strategy,
                backend,
                workers: s.workers,
                iterations: s.iterations,
                init_ms: run.timings[0],
                topo_ms: run.timings[1],
                constr_ms: run.timings[2],
                iter_ms: run.timings[3],
                total_ms: run.timings[4],
                min_alpha_before: s.before.min,
                min_alpha_after: s.after.min,
                mean_alpha_before: s.before.mean,
                mean_alpha_after: s.after.mean,
                speedup: baseline.map(|b| b / run.timings[4]),
                accepted_per_pass: s.accepted_per_pass.clone(),
            });
        }
    }

    Ok(BenchReport {
        records,
        failures,
        repeats: config.repeats,
        precision: "f64".into(),
        available_threads: std::thread::available_parallelism().map_or(1, |n| n.get()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes_parse() {
        assert_eq!(parse_sizes("1k,10K, 2500").unwrap(), vec![1000, 10_000, 2500]);
        assert!(parse_sizes("ten").is_err());
    }

    #[test]
    fn median_of_even_and_odd() {
        assert_eq!(median(vec![3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(vec![4.0, 1.0, 2.0, 3.0]), 2.5);
    }

    #[test]
    fn small_matrix_has_full_cardinality() {
        let cfg = BenchConfig {
            sizes: vec![200],
            workers: 2,
            repeats: 1,
            ..Default::default()
        };
        let report = run_bench(&cfg, &mut std::io::sink()).unwrap();
        assert!(report.failures.is_empty(), "{:?}", report.failures);
        assert_eq!(report.records.len(), 16);
        let csv = report.to_csv_string().unwrap();
        assert_eq!(csv.lines().next().unwrap(), CSV_HEADER.join(","));
        assert_eq!(csv.lines().count(), 17);
        let back: BenchReport = serde_json::from_str(&report.to_json()).unwrap();
        assert_eq!(back.records.len(), report.records.len());
    }

    #[test]
    fn rejects_empty_axes() {
        let cfg = BenchConfig {
            forms: vec![],
            ..Default::default()
        };
        assert!(cfg.validate().is_err());
    }
}
