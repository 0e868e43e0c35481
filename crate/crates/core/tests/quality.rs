use approx::assert_relative_eq;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use smartlap::prelude::{triangle_alpha, Executor, GenSpec, LayoutKind, Point, QualityStats, VertexId};
use smartlap::quality::{min_incident_quality, update_fused, update_two_phase};
use smartlap::smoothing::prepare;

fn pt() -> impl Strategy<Value = Point> {
    (-10.0f64..10.0, -10.0f64..10.0).prop_map(|(x, y)| Point::new(x, y))
}

fn well_formed(a: Point, b: Point, c: Point) -> bool {
    let l = a.dist(b).max(b.dist(c)).max(c.dist(a));
    l > 1e-3
}

#[test]
fn reference_values() {
    let h = 3f64.sqrt() / 2.0;
    assert_relative_eq!(triangle_alpha(Point::new(0., 0.), Point::new(1., 0.), Point::new(0.5, h)), 1.0, epsilon = 1e-6);
    assert_relative_eq!(triangle_alpha(Point::new(0., 0.), Point::new(1., 0.), Point::new(0., 1.)), h, epsilon = 1e-6);
    assert_eq!(triangle_alpha(Point::new(0., 0.), Point::new(1., 1.), Point::new(3., 3.)), 0.0);
    assert_eq!(triangle_alpha(Point::new(2., 2.), Point::new(2., 2.), Point::new(2., 2.)), 0.0);
}

#[test]
fn random_triangles_never_exceed_one() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..10_000 {
        let mut p = || Point::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let a = triangle_alpha(p(), p(), p());
        assert!(a.abs() <= 1.0 + 1e-9, "{a}");
    }
}

#[test]
fn fused_and_two_phase_queries_agree_with_bulk_recompute() {
    let mut mesh = GenSpec::delaunay(800, 3).build(LayoutKind::Aos).unwrap();
    let exec = Executor::serial();
    prepare(&mut mesh, &exec).unwrap();
    let field = mesh.quality_field();
    for v in (0..mesh.n_vert()).step_by(7) {
        let id = VertexId(v as u32);
        let stored = min_incident_quality(&mesh, id, &field).unwrap();
        // Evaluating the unchanged position reproduces the stored minimum.
        assert_eq!(update_fused(&mesh, id, mesh.point(v)).unwrap().to_bits(), stored.to_bits());
    }
    let moved = mesh.point(10);
    mesh.set_point(10, Point::new(moved.x + 1e-3, moved.y));
    let two = update_two_phase(&mut mesh, &exec).unwrap();
    let bulk = smartlap::quality::evaluate_qualities(&mesh);
    assert!(two.triangle.iter().zip(&bulk).all(|(a, b)| a.to_bits() == b.to_bits()));
    for v in 0..mesh.n_vert() {
        let expect = mesh.incident(v).iter().map(|&t| bulk[t as usize]).fold(f64::INFINITY, f64::min);
        assert_eq!(two.vertex_min[v], expect);
    }
}

#[test]
fn stats_histogram_counts_every_triangle() {
    let mesh = GenSpec::delaunay(2000, 1).build(LayoutKind::Soa).unwrap();
    let alphas = smartlap::quality::evaluate_qualities(&mesh);
    let s = QualityStats::from_alphas(&alphas);
    assert_eq!(s.histogram.iter().sum::<usize>(), mesh.n_trgl());
    assert_eq!(s.count, mesh.n_trgl());
    assert!(s.min <= s.mean && s.mean <= s.max && s.max <= 1.0);
}

proptest! {
    #[test]
    fn alpha_is_similarity_invariant(
        a in pt(), b in pt(), c in pt(),
        dx in -100.0f64..100.0, dy in -100.0f64..100.0,
        theta in 0.0f64..std::f64::consts::TAU,
        s in 0.01f64..100.0,
    ) {
        prop_assume!(well_formed(a, b, c));
        let base = triangle_alpha(a, b, c);
        let (sin, cos) = theta.sin_cos();
        let map = |p: Point| Point::new(s * (cos * p.x - sin * p.y) + dx, s * (sin * p.x + cos * p.y) + dy);
        let moved = triangle_alpha(map(a), map(b), map(c));
        prop_assert!((moved - base).abs() <= 1e-9 * (1.0 + s), "{} vs {}", base, moved);
    }

    #[test]
    fn alpha_is_rotation_symmetric_and_odd(a in pt(), b in pt(), c in pt()) {
        let q = triangle_alpha(a, b, c);
        prop_assert!((triangle_alpha(b, c, a) - q).abs() <= 1e-12);
        prop_assert!((triangle_alpha(c, a, b) - q).abs() <= 1e-12);
        prop_assert!((triangle_alpha(a, c, b) + q).abs() <= 1e-12);
        prop_assert!(q.abs() <= 1.0 + 1e-9);
    }
}
