//! Generate a random Delaunay mesh and a perturbed grid, then write both as
//! Triangle `.node/.ele` pairs.
//!
//! cargo run --example generate_mesh -- [n_points] [seed] [out_dir]

use smartlap::prelude::*;

fn main() -> smartlap::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map_or(2000, |s| s.parse().expect("n_points"));
    let seed: u64 = args.next().map_or(42, |s| s.parse().expect("seed"));
    let dir = args.next().map_or_else(std::env::temp_dir, Into::into);

    let delaunay = GenSpec::delaunay(n, seed).build(LayoutKind::Soa)?;
    let grid = GenSpec::grid(40, 40, 0.3, seed).build(LayoutKind::Soa)?;

    for (name, mesh) in [("delaunay", &delaunay), ("grid", &grid)] {
        let (node, ele) = write_triangle_files(mesh, dir.join(name))?;
        println!(
            "{name:>8}: {} vertices, {} triangles -> {} / {}",
            mesh.n_vert(),
            mesh.n_trgl(),
            node.display(),
            ele.display()
        );
    }

    // Every generated triangle is counter-clockwise.
    let ccw = delaunay.triangles().iter().all(|t| {
        let [a, b, c] = t.map(|v| delaunay.point(v as usize));
        meshgen::orient(a, b, c) > 0.0
    });
    println!("all delaunay triangles counter-clockwise: {ccw}");
    Ok(())
}
