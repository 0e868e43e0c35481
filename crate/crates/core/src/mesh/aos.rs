use super::{
    Layout, LayoutKind, Point, Triangle, TriangleChunkMut, TriangleStore, VertexChunkMut,
    VertexRecord, VertexStore, UNSET_QUALITY,
};

/// Array-of-Structures layout marker.
#[derive(Debug, Clone, Copy, Default)]
pub struct Aos;

impl Layout for Aos {
    const KIND: LayoutKind = LayoutKind::Aos;
    type Verts = AosVertices;
    type Trgls = AosTriangles;
}

/// One interleaved vertex record.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AosVertex {
    pub x: f64,
    pub y: f64,
    pub n_neig: u32,
    pub neig_start: u32,
    pub n_loca: u32,
    pub loca_start: u32,
    pub boundary: bool,
    pub min_quality: f64,
}

impl From<VertexRecord> for AosVertex {
    fn from(r: VertexRecord) -> Self {
        AosVertex {
            x: r.x,
            y: r.y,
            n_neig: r.n_neig,
            neig_start: r.neig_start,
            n_loca: r.n_loca,
            loca_start: r.loca_start,
            boundary: r.boundary,
            min_quality: r.min_quality,
        }
    }
}

impl From<AosVertex> for VertexRecord {
    fn from(a: AosVertex) -> Self {
        VertexRecord {
            x: a.x,
            y: a.y,
            n_neig: a.n_neig,
            neig_start: a.neig_start,
            n_loca: a.n_loca,
            loca_start: a.loca_start,
            boundary: a.boundary,
            min_quality: a.min_quality,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct AosVertices(pub Vec<AosVertex>);

pub struct AosVertexChunk<'a> {
    start: usize,
    recs: &'a mut [AosVertex],
}

impl VertexStore for AosVertices {
    type ChunkMut<'a> = AosVertexChunk<'a>;

    fn from_points(points: &[Point]) -> Self {
        AosVertices(
            points
                .iter()
                .map(|&p| VertexRecord::fresh(p).into())
                .collect(),
        )
    }

    #[inline]
    fn len(&self) -> usize {
        self.0.len()
    }

    #[inline]
    fn point(&self, v: usize) -> Point {
        let r = &self.0[v];
        Point::new(r.x, r.y)
    }

    #[inline]
    fn set_point(&mut self, v: usize, p: Point) {
        let r = &mut self.0[v];
        r.x = p.x;
        r.y = p.y;
    }

    fn record(&self, v: usize) -> VertexRecord {
        self.0[v].into()
    }

    fn set_record(&mut self, v: usize, r: VertexRecord) {
        self.0[v] = r.into();
    }

    #[inline]
    fn is_boundary(&self, v: usize) -> bool {
        self.0[v].boundary
    }

    fn set_boundary(&mut self, v: usize, b: bool) {
        self.0[v].boundary = b;
    }

    #[inline]
    fn min_quality(&self, v: usize) -> f64 {
        self.0[v].min_quality
    }

    fn set_min_quality(&mut self, v: usize, q: f64) {
        self.0[v].min_quality = q;
    }

    #[inline]
    fn neighbor_span(&self, v: usize) -> (usize, usize) {
        let r = &self.0[v];
        (r.neig_start as usize, r.n_neig as usize)
    }

    #[inline]
    fn incident_span(&self, v: usize) -> (usize, usize) {
        let r = &self.0[v];
        (r.loca_start as usize, r.n_loca as usize)
    }

    fn set_spans(&mut self, v: usize, neig: (u32, u32), loca: (u32, u32)) {
        let r = &mut self.0[v];
        (r.neig_start, r.n_neig) = neig;
        (r.loca_start, r.n_loca) = loca;
    }

    fn copy_coords_from(&mut self, other: &Self) {
        // Coordinates are interleaved with the rest of the record, so the
        // whole record array moves.
        self.0.copy_from_slice(&other.0);
    }

    fn chunks_mut(&mut self, chunk_len: usize) -> Vec<AosVertexChunk<'_>> {
        let chunk_len = chunk_len.max(1);
        self.0
            .chunks_mut(chunk_len)
            .enumerate()
            .map(|(i, recs)| AosVertexChunk {
                start: i * chunk_len,
                recs,
            })
            .collect()
    }
}

impl VertexChunkMut for AosVertexChunk<'_> {
    #[inline]
    fn start(&self) -> usize {
        self.start
    }

    #[inline]
    fn len(&self) -> usize {
        self.recs.len()
    }

    #[inline]
    fn point(&self, local: usize) -> Point {
        let r = &self.recs[local];
        Point::new(r.x, r.y)
    }

    #[inline]
    fn set_point(&mut self, local: usize, p: Point) {
        let r = &mut self.recs[local];
        r.x = p.x;
        r.y = p.y;
    }

    #[inline]
    fn is_boundary(&self, local: usize) -> bool {
        self.recs[local].boundary
    }

    fn set_boundary(&mut self, local: usize, b: bool) {
        self.recs[local].boundary = b;
    }

    #[inline]
    fn min_quality(&self, local: usize) -> f64 {
        self.recs[local].min_quality
    }

    #[inline]
    fn set_min_quality(&mut self, local: usize, q: f64) {
        self.recs[local].min_quality = q;
    }

    #[inline]
    fn neighbor_span(&self, local: usize) -> (usize, usize) {
        let r = &self.recs[local];
        (r.neig_start as usize, r.n_neig as usize)
    }

    #[inline]
    fn incident_span(&self, local: usize) -> (usize, usize) {
        let r = &self.recs[local];
        (r.loca_start as usize, r.n_loca as usize)
    }
}

/// One interleaved triangle record.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AosTriangle {
    pub v: Triangle,
    pub quality: f64,
}

#[derive(Debug, Clone, Default)]
pub struct AosTriangles(pub Vec<AosTriangle>);

pub struct AosTriangleChunk<'a> {
    start: usize,
    recs: &'a mut [AosTriangle],
}

impl TriangleStore for AosTriangles {
    type ChunkMut<'a> = AosTriangleChunk<'a>;

    fn from_triangles(triangles: &[Triangle]) -> Self {
        AosTriangles(
            triangles
                .iter()
                .map(|&v| AosTriangle {
                    v,
                    quality: UNSET_QUALITY,
                })
                .collect(),
        )
    }

    #[inline]
    fn len(&self) -> usize {
        self.0.len()
    }

    #[inline]
    fn vertices(&self, t: usize) -> Triangle {
        self.0[t].v
    }

    #[inline]
    fn quality(&self, t: usize) -> f64 {
        self.0[t].quality
    }

    fn set_quality(&mut self, t: usize, q: f64) {
        self.0[t].quality = q;
    }

    fn chunks_mut(&mut self, chunk_len: usize) -> Vec<AosTriangleChunk<'_>> {
        let chunk_len = chunk_len.max(1);
        self.0
            .chunks_mut(chunk_len)
            .enumerate()
            .map(|(i, recs)| AosTriangleChunk {
                start: i * chunk_len,
                recs,
            })
            .collect()
    }
}

impl TriangleChunkMut for AosTriangleChunk<'_> {
    fn start(&self) -> usize {
        self.start
    }

    fn len(&self) -> usize {
        self.recs.len()
    }

    #[inline]
    fn vertices(&self, local: usize) -> Triangle {
        self.recs[local].v
    }

    #[inline]
    fn set_quality(&mut self, local: usize, q: f64) {
        self.recs[local].quality = q;
    }
}
