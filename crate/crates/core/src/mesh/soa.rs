use super::{
    Layout, LayoutKind, Point, Triangle, TriangleChunkMut, TriangleStore, VertexChunkMut,
    VertexRecord, VertexStore, UNSET_QUALITY,
};

/// Structure-of-Arrays layout marker.
#[derive(Debug, Clone, Copy, Default)]
pub struct Soa;

impl Layout for Soa {
    const KIND: LayoutKind = LayoutKind::Soa;
    type Verts = SoaVertices;
    type Trgls = SoaTriangles;
}

/// One array per vertex field.
#[derive(Debug, Clone, Default)]
pub struct SoaVertices {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub n_neig: Vec<u32>,
    pub neig_start: Vec<u32>,
    pub n_loca: Vec<u32>,
    pub loca_start: Vec<u32>,
    pub boundary: Vec<bool>,
    pub min_quality: Vec<f64>,
}

pub struct SoaVertexChunk<'a> {
    start: usize,
    x: &'a mut [f64],
    y: &'a mut [f64],
    boundary: &'a mut [bool],
    min_quality: &'a mut [f64],
    n_neig: &'a [u32],
    neig_start: &'a [u32],
    n_loca: &'a [u32],
    loca_start: &'a [u32],
}

impl VertexStore for SoaVertices {
    type ChunkMut<'a> = SoaVertexChunk<'a>;

    fn from_points(points: &[Point]) -> Self {
        let n = points.len();
        SoaVertices {
            x: points.iter().map(|p| p.x).collect(),
            y: points.iter().map(|p| p.y).collect(),
            n_neig: vec![0; n],
            neig_start: vec![0; n],
            n_loca: vec![0; n],
            loca_start: vec![0; n],
            boundary: vec![false; n],
            min_quality: vec![UNSET_QUALITY; n],
        }
    }

    #[inline]
    fn len(&self) -> usize {
        self.x.len()
    }

    #[inline]
    fn point(&self, v: usize) -> Point {
        Point::new(self.x[v], self.y[v])
    }

    #[inline]
    fn set_point(&mut self, v: usize, p: Point) {
        self.x[v] = p.x;
        self.y[v] = p.y;
    }

    fn record(&self, v: usize) -> VertexRecord {
        VertexRecord {
            x: self.x[v],
            y: self.y[v],
            n_neig: self.n_neig[v],
            neig_start: self.neig_start[v],
            n_loca: self.n_loca[v],
            loca_start: self.loca_start[v],
            boundary: self.boundary[v],
            min_quality: self.min_quality[v],
        }
    }

    fn set_record(&mut self, v: usize, r: VertexRecord) {
        self.x[v] = r.x;
        self.y[v] = r.y;
        self.n_neig[v] = r.n_neig;
        self.neig_start[v] = r.neig_start;
        self.n_loca[v] = r.n_loca;
        self.loca_start[v] = r.loca_start;
        self.boundary[v] = r.boundary;
        self.min_quality[v] = r.min_quality;
    }

    #[inline]
    fn is_boundary(&self, v: usize) -> bool {
        self.boundary[v]
    }

    fn set_boundary(&mut self, v: usize, b: bool) {
        self.boundary[v] = b;
    }

    #[inline]
    fn min_quality(&self, v: usize) -> f64 {
        self.min_quality[v]
    }

    fn set_min_quality(&mut self, v: usize, q: f64) {
        self.min_quality[v] = q;
    }

    #[inline]
    fn neighbor_span(&self, v: usize) -> (usize, usize) {
        (self.neig_start[v] as usize, self.n_neig[v] as usize)
    }

    #[inline]
    fn incident_span(&self, v: usize) -> (usize, usize) {
        (self.loca_start[v] as usize, self.n_loca[v] as usize)
    }

    fn set_spans(&mut self, v: usize, neig: (u32, u32), loca: (u32, u32)) {
        (self.neig_start[v], self.n_neig[v]) = neig;
        (self.loca_start[v], self.n_loca[v]) = loca;
    }

    fn copy_coords_from(&mut self, other: &Self) {
        self.x.copy_from_slice(&other.x);
        self.y.copy_from_slice(&other.y);
    }

    fn chunks_mut(&mut self, chunk_len: usize) -> Vec<SoaVertexChunk<'_>> {
        let chunk_len = chunk_len.max(1);
        let SoaVertices {
            x,
            y,
            n_neig,
            neig_start,
            n_loca,
            loca_start,
            boundary,
            min_quality,
        } = self;
        let x = x.chunks_mut(chunk_len);
        let mut y = y.chunks_mut(chunk_len);
        let mut boundary = boundary.chunks_mut(chunk_len);
        let mut min_quality = min_quality.chunks_mut(chunk_len);
        let mut n_neig = n_neig.chunks(chunk_len);
        let mut neig_start = neig_start.chunks(chunk_len);
        let mut n_loca = n_loca.chunks(chunk_len);
        let mut loca_start = loca_start.chunks(chunk_len);
        let mut out = Vec::new();
        let mut start = 0;
        for xc in x {
            let len = xc.len();
            out.push(SoaVertexChunk {
                start,
                x: xc,
                y: y.next().unwrap(),
                boundary: boundary.next().unwrap(),
                min_quality: min_quality.next().unwrap(),
                n_neig: n_neig.next().unwrap(),
                neig_start: neig_start.next().unwrap(),
                n_loca: n_loca.next().unwrap(),
                loca_start: loca_start.next().unwrap(),
            });
            start += len;
        }
        out
    }
}

impl VertexChunkMut for SoaVertexChunk<'_> {
    #[inline]
    fn start(&self) -> usize {
        self.start
    }

    #[inline]
    fn len(&self) -> usize {
        self.x.len()
    }

    #[inline]
    fn point(&self, local: usize) -> Point {
        Point::new(self.x[local], self.y[local])
    }

    #[inline]
    fn set_point(&mut self, local: usize, p: Point) {
        self.x[local] = p.x;
        self.y[local] = p.y;
    }

    #[inline]
    fn is_boundary(&self, local: usize) -> bool {
        self.boundary[local]
    }

    fn set_boundary(&mut self, local: usize, b: bool) {
        self.boundary[local] = b;
    }

    #[inline]
    fn min_quality(&self, local: usize) -> f64 {
        self.min_quality[local]
    }

    #[inline]
    fn set_min_quality(&mut self, local: usize, q: f64) {
        self.min_quality[local] = q;
    }

    #[inline]
    fn neighbor_span(&self, local: usize) -> (usize, usize) {
        (self.neig_start[local] as usize, self.n_neig[local] as usize)
    }

    #[inline]
    fn incident_span(&self, local: usize) -> (usize, usize) {
        (self.loca_start[local] as usize, self.n_loca[local] as usize)
    }
}

/// Flat `v_ids` array (three entries per triangle) plus a quality array.
#[derive(Debug, Clone, Default)]
pub struct SoaTriangles {
    pub v_ids: Vec<u32>,
    pub quality: Vec<f64>,
}

pub struct SoaTriangleChunk<'a> {
    start: usize,
    v_ids: &'a [u32],
    quality: &'a mut [f64],
}

impl TriangleStore for SoaTriangles {
    type ChunkMut<'a> = SoaTriangleChunk<'a>;

    fn from_triangles(triangles: &[Triangle]) -> Self {
        SoaTriangles {
            v_ids: triangles.iter().flatten().copied().collect(),
            quality: vec![UNSET_QUALITY; triangles.len()],
        }
    }

    #[inline]
    fn len(&self) -> usize {
        self.quality.len()
    }

    #[inline]
    fn vertices(&self, t: usize) -> Triangle {
        let i = 3 * t;
        [self.v_ids[i], self.v_ids[i + 1], self.v_ids[i + 2]]
    }

    #[inline]
    fn quality(&self, t: usize) -> f64 {
        self.quality[t]
    }

    fn set_quality(&mut self, t: usize, q: f64) {
        self.quality[t] = q;
    }

    fn chunks_mut(&mut self, chunk_len: usize) -> Vec<SoaTriangleChunk<'_>> {
        let chunk_len = chunk_len.max(1);
        self.quality
            .chunks_mut(chunk_len)
            .zip(self.v_ids.chunks(3 * chunk_len))
            .enumerate()
            .map(|(i, (quality, v_ids))| SoaTriangleChunk {
                start: i * chunk_len,
                v_ids,
                quality,
            })
            .collect()
    }
}

impl TriangleChunkMut for SoaTriangleChunk<'_> {
    fn start(&self) -> usize {
        self.start
    }

    fn len(&self) -> usize {
        self.quality.len()
    }

    #[inline]
    fn vertices(&self, local: usize) -> Triangle {
        let i = 3 * local;
        [self.v_ids[i], self.v_ids[i + 1], self.v_ids[i + 2]]
    }

    #[inline]
    fn set_quality(&mut self, local: usize, q: f64) {
        self.quality[local] = q;
    }
}
