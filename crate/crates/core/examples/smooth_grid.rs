//! Smooth a perturbed grid with the default configuration and report how the
//! quality changed.

use smartlap::prelude::*;

fn main() -> smartlap::Result<()> {
    let mut mesh = GenSpec::grid(60, 60, 0.3, 11).build(LayoutKind::Soa)?;
    let input = mesh.clone();

    let stats = smooth(&mut mesh, &SmoothConfig::default())?;
    println!("stopped after {} iterations ({:?})", stats.iterations, stats.stop_reason);
    println!("accepted moves per pass: {:?}", &stats.accepted_per_pass[..stats.iterations.min(8)]);
    println!("min alpha  {:.4} -> {:.4}", stats.before.min, stats.after.min);
    println!("mean alpha {:.4} -> {:.4}", stats.before.mean, stats.after.mean);
    println!(
        "phases ms: init {:.2} topology {:.2} constraints {:.2} iterate {:.2}",
        stats.init_ms, stats.topo_ms, stats.constr_ms, stats.iter_ms
    );

    let pinned = (0..mesh.n_vert())
        .filter(|&v| mesh.is_boundary(v))
        .all(|v| mesh.point(v) == input.point(v));
    println!("{} boundary vertices unchanged: {pinned}", stats.boundary_vertices);
    Ok(())
}
