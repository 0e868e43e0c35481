//! Serial against parallel smoothing. Form A is independent of the worker
//! count; Form B's result depends on how vertices are chunked.
//!
//! Set SMARTLAP_MAX_WORKERS to cap the pool size.

use smartlap::exec::default_workers;
use smartlap::prelude::*;

fn main() -> smartlap::Result<()> {
    let base = GenSpec::delaunay(50_000, 1).build(LayoutKind::Soa)?;
    println!("available workers: {}", default_workers());

    for form in Form::ALL {
        let mut reference = None;
        for (backend, workers) in [(Backend::Serial, 1), (Backend::Parallel, 1), (Backend::Parallel, 2), (Backend::Parallel, 4)] {
            let mut mesh = base.clone();
            let cfg = SmoothConfig { form, backend, workers, ..SmoothConfig::default() };
            let stats = smooth(&mut mesh, &cfg)?;
            let same = reference.get_or_insert_with(|| mesh.clone()).coords_bit_eq(&mesh);
            println!(
                "form {form} {backend:>8} x{:<2} iterations {:>3} iterate {:>8.1} ms  same as serial: {same}",
                stats.workers, stats.iterations, stats.iter_ms
            );
        }
    }
    Ok(())
}
