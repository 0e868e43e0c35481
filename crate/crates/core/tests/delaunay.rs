mod common;

use proptest::prelude::*;
use smartlap::meshgen::{delaunay_triangulate, generate_points, incircle, orient};
use smartlap::prelude::*;

fn check_triangulation(pts: &[Point], tris: &[Triangle]) {
    assert!(tris.iter().all(|t| {
        let [a, b, c] = t.map(|v| pts[v as usize]);
        orient(a, b, c) > 0.0
    }));
    let hull = common::hull_area(pts);
    let area = common::mesh_area(pts, tris);
    assert!((area - hull).abs() <= 1e-9 * hull.max(1e-300), "area {area} vs hull {hull}");
    let mut used = vec![false; pts.len()];
    tris.iter().flatten().for_each(|&v| used[v as usize] = true);
    assert!(used.iter().all(|&u| u), "every input point is a vertex");
    assert_eq!(smartlap::topology::non_manifold_edge_count(&MeshStorage::build(pts, tris, LayoutKind::Soa).unwrap()), 0);
}

#[test]
fn random_200_point_meshes_have_empty_circumcircles() {
    for seed in 0..10 {
        let pts = generate_points(200, seed).unwrap();
        let tris = delaunay_triangulate(&pts).unwrap();
        assert_eq!(common::delaunay_violations(&pts, &tris, 1e-10), 0, "seed {seed}");
        check_triangulation(&pts, &tris);
    }
}

#[test]
fn convex_quad_uses_delaunay_diagonal() {
    let pts = [Point::new(0.0, 0.0), Point::new(2.0, 0.1), Point::new(2.2, 1.0), Point::new(0.1, 0.9)];
    let tris = delaunay_triangulate(&pts).unwrap();
    assert_eq!(tris.len(), 2);
    // Exactly one diagonal passes the in-circle test on both sides.
    let good_02 = incircle(pts[0], pts[1], pts[2], pts[3]) <= 0.0 && incircle(pts[0], pts[2], pts[3], pts[1]) <= 0.0;
    let expected = if good_02 { (0, 2) } else { (1, 3) };
    for t in &tris {
        assert!(t.contains(&expected.0) && t.contains(&expected.1), "{tris:?}");
    }
}

#[test]
fn euler_count_matches_hull() {
    let pts = generate_points(1000, 4).unwrap();
    let tris = delaunay_triangulate(&pts).unwrap();
    let mesh = MeshStorage::build(&pts, &tris, LayoutKind::Soa).unwrap();
    let h = boundary_oracle(&mesh).iter().filter(|&&b| b).count();
    assert_eq!(tris.len(), 2 * pts.len() - h - 2);
}

#[test]
fn degenerate_inputs_are_rejected() {
    let line: Vec<Point> = (0..10).map(|i| Point::new(i as f64, 2.0 * i as f64)).collect();
    assert!(matches!(delaunay_triangulate(&line), Err(Error::Generation(_))));
    let dup = [Point::new(0., 0.), Point::new(1., 0.), Point::new(0., 1.), Point::new(1., 0.)];
    assert!(matches!(delaunay_triangulate(&dup), Err(Error::Generation(_))));
    assert!(delaunay_triangulate(&dup[..2]).is_err());
}

#[test]
fn lattice_points_triangulate() {
    // Cocircular lattice points exercise the tie-breaking path.
    let pts: Vec<Point> = (0..8).flat_map(|i| (0..8).map(move |j| Point::new(j as f64, i as f64))).collect();
    let tris = delaunay_triangulate(&pts).unwrap();
    assert_eq!(tris.len(), 2 * 7 * 7);
    check_triangulation(&pts, &tris);
    assert_eq!(common::delaunay_violations(&pts, &tris, 1e-10), 0);
}

#[test]
fn generation_is_deterministic() {
    let a = GenSpec::delaunay(3000, 17).build(LayoutKind::Soa).unwrap();
    let b = GenSpec::delaunay(3000, 17).build(LayoutKind::Soa).unwrap();
    assert_eq!(write_triangle_format(&a), write_triangle_format(&b));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn arbitrary_point_sets_are_delaunay(
        raw in prop::collection::vec((0.0f64..1.0, 0.0f64..1.0), 3..80)
    ) {
        let mut pts: Vec<Point> = Vec::new();
        for (x, y) in raw {
            let p = Point::new(x, y);
            if pts.iter().all(|q| q.dist(p) > 1e-6) {
                pts.push(p);
            }
        }
        prop_assume!(pts.len() >= 3);
        prop_assume!(pts.windows(3).any(|w| orient(w[0], w[1], w[2]).abs() > 1e-9));
        let tris = delaunay_triangulate(&pts).unwrap();
        prop_assert_eq!(common::delaunay_violations(&pts, &tris, 1e-10), 0);
        check_triangulation(&pts, &tris);
    }
}
