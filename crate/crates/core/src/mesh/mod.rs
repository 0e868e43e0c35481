//! Logical mesh model and its two physical storage layouts.
//!
//! A mesh is a set of planar vertices plus a list of counter-clockwise
//! triangles. Every vertex carries the same logical record in both layouts:
//!
//! | field         | meaning                                          |
//! |---------------|--------------------------------------------------|
//! | `x`, `y`      | coordinates                                      |
//! | `n_neig`      | number of distinct neighboring vertices          |
//! | `neig`        | neighbor indices (CSR span into a shared array)  |
//! | `n_loca`      | number of incident triangles                     |
//! | `loca`        | incident triangle indices (CSR span)             |
//! | `boundary`    | constraint flag, pinned vertices never move      |
//! | `min_quality` | quality of the worst incident triangle           |
//!
//! [`Aos`] keeps one interleaved record per vertex, [`Soa`] keeps one array per
//! field. Algorithms are written once against [`VertexStore`] and
//! [`TriangleStore`] and monomorphized per layout; [`MeshStorage`] is the
//! runtime-selected wrapper.

mod aos;
mod soa;
mod triangle_io;

use std::fmt;
use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use aos::{Aos, AosTriangle, AosTriangles, AosVertex, AosVertices};
pub use soa::{Soa, SoaTriangles, SoaVertices};
pub use triangle_io::{read_triangle_format, read_triangle_files, write_triangle_files, write_triangle_format};

/// Sentinel for a quality slot that has not been computed yet.
///
/// Valid qualities lie in `[-1, 1]`, so the sentinel is NaN.
pub const UNSET_QUALITY: f64 = f64::NAN;

/// Planar point.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    #[inline]
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    #[inline]
    pub fn dist(self, other: Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl From<[f64; 2]> for Point {
    fn from([x, y]: [f64; 2]) -> Self {
        Point { x, y }
    }
}

/// Dense vertex index, `0..n_vert`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct VertexId(pub u32);

impl VertexId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl From<usize> for VertexId {
    fn from(i: usize) -> Self {
        VertexId(i as u32)
    }
}

/// Vertex triple of one triangle, counter-clockwise in a valid mesh.
pub type Triangle = [u32; 3];

/// Physical storage layout selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LayoutKind {
    Aos,
    Soa,
}

impl LayoutKind {
    pub const ALL: [LayoutKind; 2] = [LayoutKind::Aos, LayoutKind::Soa];

    pub fn as_str(self) -> &'static str {
        match self {
            LayoutKind::Aos => "aos",
            LayoutKind::Soa => "soa",
        }
    }
}

impl fmt::Display for LayoutKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for LayoutKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "aos" => Ok(LayoutKind::Aos),
            "soa" => Ok(LayoutKind::Soa),
            other => Err(Error::Config(format!("unknown layout `{other}`"))),
        }
    }
}

/// Layout-independent snapshot of one vertex record.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VertexRecord {
    pub x: f64,
    pub y: f64,
    pub n_neig: u32,
    pub neig_start: u32,
    pub n_loca: u32,
    pub loca_start: u32,
    pub boundary: bool,
    pub min_quality: f64,
}

impl VertexRecord {
    pub(crate) fn fresh(p: Point) -> Self {
        VertexRecord {
            x: p.x,
            y: p.y,
            n_neig: 0,
            neig_start: 0,
            n_loca: 0,
            loca_start: 0,
            boundary: false,
            min_quality: UNSET_QUALITY,
        }
    }

    /// Field-by-field equality with floats compared by bit pattern.
    pub fn bit_eq(&self, other: &Self) -> bool {
        self.x.to_bits() == other.x.to_bits()
            && self.y.to_bits() == other.y.to_bits()
            && self.n_neig == other.n_neig
            && self.neig_start == other.neig_start
            && self.n_loca == other.n_loca
            && self.loca_start == other.loca_start
            && self.boundary == other.boundary
            && self.min_quality.to_bits() == other.min_quality.to_bits()
    }
}

/// Per-vertex storage of one physical layout.
pub trait VertexStore: Clone + Send + Sync + fmt::Debug {
    type ChunkMut<'a>: VertexChunkMut + Send
    where
        Self: 'a;

    fn from_points(points: &[Point]) -> Self;
    fn len(&self) -> usize;
    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn point(&self, v: usize) -> Point;
    fn set_point(&mut self, v: usize, p: Point);
    fn record(&self, v: usize) -> VertexRecord;
    fn set_record(&mut self, v: usize, r: VertexRecord);

    fn is_boundary(&self, v: usize) -> bool;
    fn set_boundary(&mut self, v: usize, b: bool);
    fn min_quality(&self, v: usize) -> f64;
    fn set_min_quality(&mut self, v: usize, q: f64);
    /// `(start, len)` into the mesh's flat neighbor array.
    fn neighbor_span(&self, v: usize) -> (usize, usize);
    /// `(start, len)` into the mesh's flat incident-triangle array.
    fn incident_span(&self, v: usize) -> (usize, usize);
    fn set_spans(&mut self, v: usize, neig: (u32, u32), loca: (u32, u32));

    /// Copies coordinates from `other`, which must have the same length.
    fn copy_coords_from(&mut self, other: &Self);

    /// Splits into contiguous mutable chunks of `chunk_len` vertices (the last
    /// may be shorter).
    fn chunks_mut(&mut self, chunk_len: usize) -> Vec<Self::ChunkMut<'_>>;
}

/// Mutable view of a contiguous vertex range. Indices are local to the chunk.
pub trait VertexChunkMut {
    fn start(&self) -> usize;
    fn len(&self) -> usize;
    fn is_empty(&self) -> bool {
        self.len() == 0
    }
    #[inline]
    fn range(&self) -> Range<usize> {
        self.start()..self.start() + self.len()
    }

    fn point(&self, local: usize) -> Point;
    fn set_point(&mut self, local: usize, p: Point);
    fn is_boundary(&self, local: usize) -> bool;
    fn set_boundary(&mut self, local: usize, b: bool);
    fn min_quality(&self, local: usize) -> f64;
    fn set_min_quality(&mut self, local: usize, q: f64);
    fn neighbor_span(&self, local: usize) -> (usize, usize);
    fn incident_span(&self, local: usize) -> (usize, usize);
}

/// Per-triangle storage of one physical layout.
pub trait TriangleStore: Clone + Send + Sync + fmt::Debug {
    type ChunkMut<'a>: TriangleChunkMut + Send
    where
        Self: 'a;

    fn from_triangles(triangles: &[Triangle]) -> Self;
    fn len(&self) -> usize;
    fn is_empty(&self) -> bool {
        self.len() == 0
    }
    fn vertices(&self, t: usize) -> Triangle;
    fn quality(&self, t: usize) -> f64;
    fn set_quality(&mut self, t: usize, q: f64);
    fn chunks_mut(&mut self, chunk_len: usize) -> Vec<Self::ChunkMut<'_>>;
}

/// Mutable view of a contiguous triangle range with writable quality slots.
pub trait TriangleChunkMut {
    fn start(&self) -> usize;
    fn len(&self) -> usize;
    fn vertices(&self, local: usize) -> Triangle;
    fn set_quality(&mut self, local: usize, q: f64);

    fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Compile-time layout marker tying a vertex store to a triangle store.
pub trait Layout: Clone + Copy + fmt::Debug + Send + Sync + 'static {
    const KIND: LayoutKind;
    type Verts: VertexStore;
    type Trgls: TriangleStore;
}

/// Mesh in a statically known layout.
#[derive(Debug, Clone)]
pub struct Mesh<L: Layout> {
    pub(crate) verts: L::Verts,
    pub(crate) trgls: L::Trgls,
    /// Flat deduplicated neighbor lists, indexed through each vertex's span.
    pub(crate) neig: Vec<u32>,
    /// Flat incident-triangle lists, indexed through each vertex's span.
    pub(crate) loca: Vec<u32>,
}

impl<L: Layout> Mesh<L> {
    pub fn build(points: &[Point], triangles: &[Triangle]) -> Result<Self> {
        validate(points.len(), triangles)?;
        Ok(Mesh {
            verts: L::Verts::from_points(points),
            trgls: L::Trgls::from_triangles(triangles),
            neig: Vec::new(),
            loca: Vec::new(),
        })
    }

    #[inline]
    pub fn n_vert(&self) -> usize {
        self.verts.len()
    }

    #[inline]
    pub fn n_trgl(&self) -> usize {
        self.trgls.len()
    }

    pub fn verts(&self) -> &L::Verts {
        &self.verts
    }

    pub fn trgls(&self) -> &L::Trgls {
        &self.trgls
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &[u32] {
        let (s, n) = self.verts.neighbor_span(v);
        &self.neig[s..s + n]
    }

    #[inline]
    pub fn incident(&self, v: usize) -> &[u32] {
        let (s, n) = self.verts.incident_span(v);
        &self.loca[s..s + n]
    }

    #[inline]
    pub fn triangle_points(&self, t: usize) -> [Point; 3] {
        let [a, b, c] = self.trgls.vertices(t);
        [
            self.verts.point(a as usize),
            self.verts.point(b as usize),
            self.verts.point(c as usize),
        ]
    }

    pub fn has_topology(&self) -> bool {
        !self.loca.is_empty()
    }

    /// Resets every vertex to the pre-topology state: no neighbors, no
    /// incident triangles, free. Idempotent.
    pub fn init_flags(&mut self) {
        for v in 0..self.verts.len() {
            self.verts.set_spans(v, (0, 0), (0, 0));
            self.verts.set_boundary(v, false);
        }
        self.neig.clear();
        self.loca.clear();
    }

    fn to_layout<M: Layout>(&self) -> Mesh<M> {
        let n = self.n_vert();
        let points: Vec<Point> = (0..n).map(|v| self.verts.point(v)).collect();
        let tris: Vec<Triangle> = (0..self.n_trgl()).map(|t| self.trgls.vertices(t)).collect();
        let mut verts = M::Verts::from_points(&points);
        for v in 0..n {
            verts.set_record(v, self.verts.record(v));
        }
        let mut trgls = M::Trgls::from_triangles(&tris);
        for t in 0..tris.len() {
            trgls.set_quality(t, self.trgls.quality(t));
        }
        Mesh {
            verts,
            trgls,
            neig: self.neig.clone(),
            loca: self.loca.clone(),
        }
    }
}

pub(crate) fn validate(n_vert: usize, triangles: &[Triangle]) -> Result<()> {
    if triangles.is_empty() {
        return Err(Error::NoTriangles);
    }
    for (t, tri) in triangles.iter().enumerate() {
        for (k, &v) in tri.iter().enumerate() {
            if v as usize >= n_vert {
                return Err(Error::IndexOutOfRange {
                    triangle: t,
                    vertex: v as usize,
                    n_vert,
                });
            }
            if tri[..k].contains(&v) {
                return Err(Error::DuplicateVertex {
                    triangle: t,
                    vertex: v as usize,
                });
            }
        }
    }
    Ok(())
}

/// Mesh whose layout is chosen at runtime.
#[derive(Debug, Clone)]
pub enum MeshStorage {
    Aos(Mesh<Aos>),
    Soa(Mesh<Soa>),
}

/// Runs `$body` with `$m` bound to the layout-specific mesh.
#[macro_export]
#[doc(hidden)]
macro_rules! with_mesh {
    ($storage:expr, $m:ident => $body:expr) => {
        match $storage {
            $crate::mesh::MeshStorage::Aos($m) => $body,
            $crate::mesh::MeshStorage::Soa($m) => $body,
        }
    };
}

impl MeshStorage {
    /// Builds a mesh in the pre-topology state with unset qualities.
    pub fn build(points: &[Point], triangles: &[Triangle], layout: LayoutKind) -> Result<Self> {
        Ok(match layout {
            LayoutKind::Aos => MeshStorage::Aos(Mesh::build(points, triangles)?),
            LayoutKind::Soa => MeshStorage::Soa(Mesh::build(points, triangles)?),
        })
    }

    pub fn layout(&self) -> LayoutKind {
        match self {
            MeshStorage::Aos(_) => LayoutKind::Aos,
            MeshStorage::Soa(_) => LayoutKind::Soa,
        }
    }

    pub fn n_vert(&self) -> usize {
        with_mesh!(self, m => m.n_vert())
    }

    pub fn n_trgl(&self) -> usize {
        with_mesh!(self, m => m.n_trgl())
    }

    pub fn point(&self, v: usize) -> Point {
        with_mesh!(self, m => m.verts.point(v))
    }

    pub fn points(&self) -> Vec<Point> {
        with_mesh!(self, m => (0..m.n_vert()).map(|v| m.verts.point(v)).collect())
    }

    pub fn set_point(&mut self, v: usize, p: Point) {
        with_mesh!(self, m => m.verts.set_point(v, p))
    }

    pub fn triangle(&self, t: usize) -> Triangle {
        with_mesh!(self, m => m.trgls.vertices(t))
    }

    pub fn triangles(&self) -> Vec<Triangle> {
        with_mesh!(self, m => (0..m.n_trgl()).map(|t| m.trgls.vertices(t)).collect())
    }

    pub fn record(&self, v: usize) -> VertexRecord {
        with_mesh!(self, m => m.verts.record(v))
    }

    pub fn is_boundary(&self, v: usize) -> bool {
        with_mesh!(self, m => m.verts.is_boundary(v))
    }

    pub fn boundary_flags(&self) -> Vec<bool> {
        with_mesh!(self, m => (0..m.n_vert()).map(|v| m.verts.is_boundary(v)).collect())
    }

    /// Stored quality of triangle `t`, `None` while unset.
    pub fn triangle_quality(&self, t: usize) -> Option<f64> {
        let q = with_mesh!(self, m => m.trgls.quality(t));
        (!q.is_nan()).then_some(q)
    }

    /// Stored worst-incident quality of vertex `v`, `None` while unset.
    pub fn min_quality(&self, v: usize) -> Option<f64> {
        let q = with_mesh!(self, m => m.verts.min_quality(v));
        (!q.is_nan()).then_some(q)
    }

    /// Deduplicated neighbors of `v`, ascending. Empty before topology.
    pub fn neighbors(&self, v: usize) -> &[u32] {
        with_mesh!(self, m => m.neighbors(v))
    }

    /// Incident triangles of `v`, ascending. Empty before topology.
    pub fn incident(&self, v: usize) -> &[u32] {
        with_mesh!(self, m => m.incident(v))
    }

    pub fn has_topology(&self) -> bool {
        with_mesh!(self, m => m.has_topology())
    }

    /// See [`Mesh::init_flags`].
    pub fn init_flags(&mut self) {
        with_mesh!(self, m => m.init_flags())
    }

    /// Copy of this mesh in `target` layout. Converting to the current layout
    /// is a plain copy.
    pub fn convert_layout(&self, target: LayoutKind) -> MeshStorage {
        match (self, target) {
            (MeshStorage::Aos(m), LayoutKind::Aos) => MeshStorage::Aos(m.clone()),
            (MeshStorage::Soa(m), LayoutKind::Soa) => MeshStorage::Soa(m.clone()),
            (MeshStorage::Aos(m), LayoutKind::Soa) => MeshStorage::Soa(m.to_layout()),
            (MeshStorage::Soa(m), LayoutKind::Aos) => MeshStorage::Aos(m.to_layout()),
        }
    }

    /// Axis-aligned bounding box `(min, max)`.
    pub fn bbox(&self) -> (Point, Point) {
        with_mesh!(self, m => bbox_of((0..m.n_vert()).map(|v| m.verts.point(v))))
    }

    /// Length of the bounding-box diagonal.
    pub fn bbox_diagonal(&self) -> f64 {
        let (lo, hi) = self.bbox();
        lo.dist(hi)
    }

    /// Field-by-field equality independent of layout; floats by bit pattern,
    /// so unset qualities compare equal to each other.
    pub fn logically_eq(&self, other: &MeshStorage) -> bool {
        if self.n_vert() != other.n_vert() || self.n_trgl() != other.n_trgl() {
            return false;
        }
        let verts_eq = (0..self.n_vert()).all(|v| self.record(v).bit_eq(&other.record(v)));
        let tris_eq = (0..self.n_trgl()).all(|t| {
            self.triangle(t) == other.triangle(t)
                && with_mesh!(self, m => m.trgls.quality(t)).to_bits()
                    == with_mesh!(other, m => m.trgls.quality(t)).to_bits()
        });
        let lists_eq = with_mesh!(self, a => with_mesh!(other, b => a.neig == b.neig && a.loca == b.loca));
        verts_eq && tris_eq && lists_eq
    }

    /// True when both meshes have bit-identical coordinates.
    pub fn coords_bit_eq(&self, other: &MeshStorage) -> bool {
        self.n_vert() == other.n_vert()
            && (0..self.n_vert()).all(|v| {
                let (a, b) = (self.point(v), other.point(v));
                a.x.to_bits() == b.x.to_bits() && a.y.to_bits() == b.y.to_bits()
            })
    }
}

impl PartialEq for MeshStorage {
    fn eq(&self, other: &Self) -> bool {
        self.logically_eq(other)
    }
}

pub(crate) fn bbox_of(points: impl IntoIterator<Item = Point>) -> (Point, Point) {
    let mut lo = Point::new(f64::INFINITY, f64::INFINITY);
    let mut hi = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
    for p in points {
        lo.x = lo.x.min(p.x);
        lo.y = lo.y.min(p.y);
        hi.x = hi.x.max(p.x);
        hi.y = hi.y.max(p.y);
    }
    (lo, hi)
}
