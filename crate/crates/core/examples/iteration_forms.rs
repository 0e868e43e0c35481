//! Jacobi-style Form A against in-place Form B on the same fixtures.

use smartlap::prelude::*;

fn main() -> smartlap::Result<()> {
    println!("{:>6} {:>8} {:>8} {:>7}", "seed", "form A", "form B", "B/A");
    for seed in 0..5 {
        let (pts, tris) = GenSpec::delaunay(5000, seed).generate()?;
        let mut iters = [0usize; 2];
        for (slot, form) in Form::ALL.into_iter().enumerate() {
            let mut mesh = MeshStorage::build(&pts, &tris, LayoutKind::Soa)?;
            let cfg = SmoothConfig { form, ..SmoothConfig::default() };
            iters[slot] = smooth(&mut mesh, &cfg)?.iterations;
        }
        println!(
            "{seed:>6} {:>8} {:>8} {:>7.2}",
            iters[0],
            iters[1],
            iters[1] as f64 / iters[0] as f64
        );
    }
    Ok(())
}
