//! The same mesh in array-of-structures and structure-of-arrays layouts gives
//! bit-identical smoothing results; only the memory access pattern differs.

use std::time::Instant;

use smartlap::prelude::*;

fn main() -> smartlap::Result<()> {
    let (pts, tris) = GenSpec::delaunay(20_000, 5).generate()?;
    let mut results = Vec::new();
    for layout in LayoutKind::ALL {
        let mut mesh = MeshStorage::build(&pts, &tris, layout)?;
        let t = Instant::now();
        let stats = smooth(&mut mesh, &SmoothConfig::default())?;
        println!(
            "{layout}: {} iterations, iterate {:.1} ms, wall {:.1} ms",
            stats.iterations,
            stats.iter_ms,
            t.elapsed().as_secs_f64() * 1e3
        );
        results.push(mesh);
    }
    println!("AoS and SoA coordinates bit-identical: {}", results[0].coords_bit_eq(&results[1]));

    // Layouts convert losslessly, including flags and cached qualities.
    let back = results[0].convert_layout(LayoutKind::Soa).convert_layout(LayoutKind::Aos);
    println!("AoS -> SoA -> AoS preserves the mesh: {}", back == results[0]);
    Ok(())
}
