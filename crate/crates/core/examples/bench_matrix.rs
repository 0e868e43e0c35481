//! Run a small layout x form x strategy x backend matrix and print it as CSV.
//!
//! cargo run --release --example bench_matrix -- [sizes] [repeats]

use smartlap::bench::{parse_sizes, run_bench, BenchConfig};

fn main() -> smartlap::Result<()> {
    let mut args = std::env::args().skip(1);
    let sizes = parse_sizes(&args.next().unwrap_or_else(|| "1k,5k".into()))?;
    let repeats = args.next().map_or(3, |s| s.parse().expect("repeats"));
    let config = BenchConfig { sizes, repeats, ..BenchConfig::default() };

    let report = run_bench(&config, &mut std::io::stderr())?;
    report.write_csv(std::io::stdout())?;
    if !report.failures.is_empty() {
        eprintln!("{} cells failed verification", report.failures.len());
    }
    Ok(())
}
