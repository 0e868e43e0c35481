//! Compute the alpha quality of every triangle and print a histogram.

use smartlap::cli::quality_report;
use smartlap::prelude::*;
use smartlap::quality::QualityStats;

fn main() -> smartlap::Result<()> {
    let eq = triangle_alpha(Point::new(0., 0.), Point::new(1., 0.), Point::new(0.5, 3f64.sqrt() / 2.));
    let right = triangle_alpha(Point::new(0., 0.), Point::new(1., 0.), Point::new(0., 1.));
    let flat = triangle_alpha(Point::new(0., 0.), Point::new(1., 0.), Point::new(2., 0.));
    let flipped = triangle_alpha(Point::new(0., 0.), Point::new(0., 1.), Point::new(1., 0.));
    println!("equilateral {eq:.6}  right isoceles {right:.6}  collinear {flat}  inverted {flipped:.6}");

    let mesh = GenSpec::delaunay(5000, 3).build(LayoutKind::Soa)?;
    let report = quality_report(&mesh)?;
    let a = &report.alpha;
    println!(
        "{} triangles, {} boundary / {} interior vertices",
        report.triangles, report.boundary_vertices, report.interior_vertices
    );
    println!("alpha min {:.4} mean {:.4} max {:.4}, non-positive {}", a.min, a.mean, a.max, a.non_positive);
    let peak = *a.histogram.iter().max().unwrap_or(&1) as f64;
    for (i, &count) in a.histogram.iter().enumerate() {
        if QualityStats::bin_lower(i) < 0.0 {
            continue;
        }
        let bar = "#".repeat((40.0 * count as f64 / peak).round() as usize);
        println!("{:>5.2} {count:>6} {bar}", QualityStats::bin_lower(i));
    }
    Ok(())
}
