//! Triangle shape quality and its per-vertex minimum.
//!
//! The metric is `alpha = 4 * sqrt(3) * A / (l1^2 + l2^2 + l3^2)` with `A` the
//! signed area (positive for counter-clockwise vertices). It is 1 for an
//! equilateral triangle, 0 for a degenerate one and negative for an inverted
//! one, so a move that flips an element can never win a max-min comparison.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Executor;
use crate::mesh::{
    Layout, Mesh, MeshStorage, Point, TriangleChunkMut, TriangleStore, VertexChunkMut, VertexId,
    VertexStore,
};
use crate::with_mesh;

const FOUR_SQRT_3: f64 = 6.928_203_230_275_509;

/// Shape quality of the triangle `(p1, p2, p3)`.
///
/// Returns 0 when all edge lengths vanish.
#[inline]
pub fn triangle_alpha(p1: Point, p2: Point, p3: Point) -> f64 {
    let (ax, ay) = (p2.x - p1.x, p2.y - p1.y);
    let (bx, by) = (p3.x - p1.x, p3.y - p1.y);
    let (cx, cy) = (p3.x - p2.x, p3.y - p2.y);
    let twice_area = ax * by - ay * bx;
    let sum_sq = ax * ax + ay * ay + bx * bx + by * by + cx * cx + cy * cy;
    if sum_sq == 0.0 {
        return 0.0;
    }
    FOUR_SQRT_3 * 0.5 * twice_area / sum_sq
}

/// Per-triangle quality plus per-vertex worst incident quality. Entries not yet
/// computed are NaN.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QualityField {
    pub triangle: Vec<f64>,
    pub vertex_min: Vec<f64>,
}

impl QualityField {
    /// True when both fields match bit for bit.
    pub fn bit_eq(&self, other: &QualityField) -> bool {
        fn same(a: &[f64], b: &[f64]) -> bool {
            a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.to_bits() == y.to_bits())
        }
        same(&self.triangle, &other.triangle) && same(&self.vertex_min, &other.vertex_min)
    }

    pub fn stats(&self) -> QualityStats {
        QualityStats::from_alphas(&self.triangle)
    }
}

/// Summary of a set of triangle qualities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QualityStats {
    pub count: usize,
    pub min: f64,
    pub mean: f64,
    pub max: f64,
    pub non_positive: usize,
    /// 20 equal bins over `[-1, 1]`; 1.0 falls into the last bin.
    pub histogram: [usize; QualityStats::BINS],
}

impl QualityStats {
    pub const BINS: usize = 20;

    pub fn from_alphas(alphas: &[f64]) -> Self {
        let mut s = QualityStats {
            count: 0,
            min: f64::INFINITY,
            mean: 0.0,
            max: f64::NEG_INFINITY,
            non_positive: 0,
            histogram: [0; Self::BINS],
        };
        let mut sum = 0.0;
        for &a in alphas.iter().filter(|a| !a.is_nan()) {
            s.count += 1;
            s.min = s.min.min(a);
            s.max = s.max.max(a);
            sum += a;
            if a <= 0.0 {
                s.non_positive += 1;
            }
            let bin = ((a + 1.0) / 2.0 * Self::BINS as f64).floor();
            s.histogram[(bin.max(0.0) as usize).min(Self::BINS - 1)] += 1;
        }
        s.mean = if s.count > 0 { sum / s.count as f64 } else { f64::NAN };
        if s.count == 0 {
            s.min = f64::NAN;
            s.max = f64::NAN;
        }
        s
    }

    /// Lower edge of histogram bin `i`.
    pub fn bin_lower(i: usize) -> f64 {
        -1.0 + 2.0 * i as f64 / Self::BINS as f64
    }
}

// Layout-generic kernels used by the smoothing engine.

#[inline]
pub(crate) fn alpha_of<L: Layout>(mesh: &Mesh<L>, t: usize) -> f64 {
    let [a, b, c] = mesh.triangle_points(t);
    triangle_alpha(a, b, c)
}

/// Minimum quality over the incident triangles of `v`, with `v` placed at
/// `at` and every other vertex at `pos(u)`.
#[inline]
pub(crate) fn local_min_with<T: TriangleStore>(
    trgls: &T,
    incident: &[u32],
    v: u32,
    at: Point,
    pos: impl Fn(usize) -> Point,
) -> f64 {
    let mut min = f64::INFINITY;
    for &t in incident {
        let [a, b, c] = trgls.vertices(t as usize);
        let p = |u: u32| if u == v { at } else { pos(u as usize) };
        min = min.min(triangle_alpha(p(a), p(b), p(c)));
    }
    min
}

/// Phase one: every triangle's quality computed once, one triangle per task.
pub(crate) fn refresh_triangles<L: Layout>(mesh: &mut Mesh<L>, exec: &Executor) {
    let len = exec.chunk_len(mesh.n_trgl());
    let verts = &mesh.verts;
    exec.run(mesh.trgls.chunks_mut(len), |mut chunk| {
        for local in 0..chunk.len() {
            let [a, b, c] = chunk.vertices(local);
            let q = triangle_alpha(
                verts.point(a as usize),
                verts.point(b as usize),
                verts.point(c as usize),
            );
            chunk.set_quality(local, q);
        }
    });
}

/// Phase two: every vertex's worst incident quality from the triangle field,
/// one vertex per task. Vertices without triangles keep NaN.
pub(crate) fn refresh_vertex_min<L: Layout>(mesh: &mut Mesh<L>, exec: &Executor) {
    let len = exec.chunk_len(mesh.n_vert());
    let (trgls, loca) = (&mesh.trgls, &mesh.loca);
    exec.run(mesh.verts.chunks_mut(len), |mut chunk| {
        for local in 0..chunk.len() {
            let (s, n) = chunk.incident_span(local);
            let q = loca[s..s + n]
                .iter()
                .map(|&t| trgls.quality(t as usize))
                .fold(f64::NAN, f64::min);
            chunk.set_min_quality(local, q);
        }
    });
}

/// Pass-end reconciliation of the fused strategy: each vertex re-evaluates its
/// own incident triangles from coordinates (a triangle is evaluated once per
/// vertex it has), then the triangle field is refreshed.
pub(crate) fn reconcile_fused<L: Layout>(mesh: &mut Mesh<L>, exec: &Executor) {
    let n = mesh.n_vert();
    let ranges = crate::exec::chunk_ranges(n, exec.workers());
    let m: &Mesh<L> = mesh;
    let mins: Vec<Vec<f64>> = exec.run(ranges, |r| {
        r.map(|v| {
            m.incident(v)
                .iter()
                .map(|&t| alpha_of(m, t as usize))
                .fold(f64::NAN, f64::min)
        })
        .collect()
    });
    let len = exec.chunk_len(n);
    exec.run(mesh.verts.chunks_mut(len).into_iter().zip(mins).collect(), |(mut chunk, mins)| {
        for (local, q) in mins.into_iter().enumerate() {
            chunk.set_min_quality(local, q);
        }
    });
    refresh_triangles(mesh, exec);
}

fn field_of<L: Layout>(mesh: &Mesh<L>) -> QualityField {
    QualityField {
        triangle: (0..mesh.n_trgl()).map(|t| mesh.trgls.quality(t)).collect(),
        vertex_min: (0..mesh.n_vert()).map(|v| mesh.verts.min_quality(v)).collect(),
    }
}

impl MeshStorage {
    /// Stored quality field.
    pub fn quality_field(&self) -> QualityField {
        with_mesh!(self, m => field_of(m))
    }

    /// Statistics of the stored triangle qualities.
    pub fn quality_stats(&self) -> QualityStats {
        QualityStats::from_alphas(&self.quality_field().triangle)
    }
}

/// Computes and stores the quality of every triangle, one triangle per task.
pub fn compute_all_qualities(mesh: &mut MeshStorage, exec: &Executor) -> QualityField {
    with_mesh!(mesh, m => refresh_triangles(m, exec));
    mesh.quality_field()
}

/// Per-triangle qualities from the current coordinates, without touching the
/// stored field.
pub fn evaluate_qualities(mesh: &MeshStorage) -> Vec<f64> {
    with_mesh!(mesh, m => (0..m.n_trgl()).map(|t| alpha_of(m, t)).collect())
}

/// Minimum of `field` over the triangles incident to `v`.
pub fn min_incident_quality(mesh: &MeshStorage, v: VertexId, field: &QualityField) -> Result<f64> {
    if !mesh.has_topology() {
        return Err(Error::TopologyMissing);
    }
    let inc = mesh.incident(v.index());
    if inc.is_empty() {
        return Err(Error::NoIncidentTriangles(v.index()));
    }
    Ok(inc
        .iter()
        .map(|&t| field.triangle[t as usize])
        .fold(f64::INFINITY, f64::min))
}

/// Minimum quality of the triangles incident to `v` if `v` were moved to
/// `candidate`, all other vertices staying put. The mesh is not modified.
pub fn update_fused(mesh: &MeshStorage, v: VertexId, candidate: Point) -> Result<f64> {
    if !mesh.has_topology() {
        return Err(Error::TopologyMissing);
    }
    if !candidate.is_finite() {
        return Err(Error::Invariant(format!("candidate for vertex {} is not finite", v.0)));
    }
    with_mesh!(mesh, m => {
        let inc = m.incident(v.index());
        if inc.is_empty() {
            return Err(Error::NoIncidentTriangles(v.index()));
        }
        Ok(local_min_with(&m.trgls, inc, v.0, candidate, |u| m.verts.point(u)))
    })
}

/// Recomputes every triangle quality once, then every vertex minimum, and
/// returns the synchronized field.
pub fn update_two_phase(mesh: &mut MeshStorage, exec: &Executor) -> Result<QualityField> {
    if !mesh.has_topology() {
        return Err(Error::TopologyMissing);
    }
    with_mesh!(mesh, m => {
        refresh_triangles(m, exec);
        refresh_vertex_min(m, exec);
    });
    Ok(mesh.quality_field())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::LayoutKind;
    use crate::topology::find_neighbors;
    use approx::assert_abs_diff_eq;

    fn p(x: f64, y: f64) -> Point {
        Point::new(x, y)
    }

    #[test]
    fn equilateral_is_one() {
        let a = triangle_alpha(p(0.0, 0.0), p(1.0, 0.0), p(0.5, 3f64.sqrt() / 2.0));
        assert_abs_diff_eq!(a, 1.0, epsilon = 1e-6);
    }

    #[test]
    fn collinear_and_coincident_are_zero() {
        assert_eq!(triangle_alpha(p(0.0, 0.0), p(1.0, 0.0), p(2.0, 0.0)), 0.0);
        assert_eq!(triangle_alpha(p(3.0, 3.0), p(3.0, 3.0), p(3.0, 3.0)), 0.0);
    }

    #[test]
    fn right_isoceles_and_reversal() {
        let s = 3f64.sqrt() / 2.0;
        assert_abs_diff_eq!(triangle_alpha(p(0.0, 0.0), p(1.0, 0.0), p(0.0, 1.0)), s, epsilon = 1e-12);
        assert_abs_diff_eq!(triangle_alpha(p(0.0, 0.0), p(0.0, 1.0), p(1.0, 0.0)), -s, epsilon = 1e-12);
    }

    #[test]
    fn constant_matches_definition() {
        assert_eq!(FOUR_SQRT_3, 4.0 * 3f64.sqrt());
    }

    #[test]
    fn histogram_bins() {
        let s = QualityStats::from_alphas(&[-1.0, 0.0, 1.0, 0.95, f64::NAN]);
        assert_eq!(s.count, 4);
        assert_eq!(s.histogram[0], 1);
        assert_eq!(s.histogram[10], 1);
        assert_eq!(s.histogram[19], 2);
        assert_eq!(s.non_positive, 2);
        assert_eq!(QualityStats::bin_lower(10), 0.0);
    }

    fn square(layout: LayoutKind) -> MeshStorage {
        let pts = [p(0.0, 0.0), p(1.0, 0.0), p(1.0, 1.0), p(0.0, 1.0)];
        MeshStorage::build(&pts, &[[0, 1, 2], [0, 2, 3]], layout).unwrap()
    }

    #[test]
    fn unit_square_halves() {
        for layout in LayoutKind::ALL {
            let mut m = square(layout);
            let f = compute_all_qualities(&mut m, &Executor::serial());
            let s = 3f64.sqrt() / 2.0;
            assert_abs_diff_eq!(f.triangle[0], s, epsilon = 1e-12);
            assert_abs_diff_eq!(f.triangle[1], s, epsilon = 1e-12);
        }
    }

    #[test]
    fn min_incident_needs_topology() {
        let mut m = square(LayoutKind::Aos);
        let f = compute_all_qualities(&mut m, &Executor::serial());
        assert_eq!(min_incident_quality(&m, VertexId(0), &f), Err(Error::TopologyMissing));
        find_neighbors(&mut m);
        assert_eq!(min_incident_quality(&m, VertexId(0), &f).unwrap(), f.triangle[0].min(f.triangle[1]));
    }

    #[test]
    fn fused_identity_and_inversion() {
        let mut m = square(LayoutKind::Soa);
        find_neighbors(&mut m);
        let f = update_two_phase(&mut m, &Executor::serial()).unwrap();
        let here = update_fused(&m, VertexId(2), m.point(2)).unwrap();
        assert_eq!(here, min_incident_quality(&m, VertexId(2), &f).unwrap());
        // Pushing vertex 2 across the diagonal inverts triangle 0.
        assert!(update_fused(&m, VertexId(2), p(-1.0, -1.0)).unwrap() < 0.0);
        assert!(update_fused(&m, VertexId(2), p(f64::NAN, 0.0)).is_err());
    }

    #[test]
    fn two_phase_without_movement_is_stable() {
        let mut m = square(LayoutKind::Aos);
        find_neighbors(&mut m);
        let ex = Executor::serial();
        let a = update_two_phase(&mut m, &ex).unwrap();
        let b = update_two_phase(&mut m, &ex).unwrap();
        assert!(a.bit_eq(&b));
    }
}
