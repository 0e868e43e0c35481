//! Fused and two-phase quality refresh make the same decisions; they differ
//! in how much redundant alpha work they do.

use smartlap::prelude::*;

fn main() -> smartlap::Result<()> {
    let base = GenSpec::delaunay(10_000, 8).build(LayoutKind::Soa)?;
    let mut meshes = Vec::new();
    for strategy in Strategy::ALL {
        let mut mesh = base.clone();
        let cfg = SmoothConfig { strategy, ..SmoothConfig::default() };
        let stats = smooth(&mut mesh, &cfg)?;
        println!(
            "{:>9}: {} iterations, iterate {:.1} ms, final min alpha {:.6}",
            strategy.as_str(), stats.iterations, stats.iter_ms, stats.after.min
        );
        meshes.push(mesh);
    }
    println!("final meshes bit-identical: {}", meshes[0].coords_bit_eq(&meshes[1]));
    println!("quality fields bit-identical: {}", meshes[0].quality_field().bit_eq(&meshes[1].quality_field()));
    Ok(())
}
