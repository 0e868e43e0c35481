//! Vertex adjacency, incident triangles and boundary classification.
//!
//! Neighbors are read straight off the triangle list: for a triangle
//! `(a, b, c)`, `b` and `c` are recorded as neighbors of `a`, `a` and `c` of
//! `b`, and `a` and `b` of `c`. In a manifold mesh an interior vertex sees each
//! neighbor recorded exactly twice (once per triangle sharing the edge); any
//! other count marks the vertex as boundary, and boundary vertices are pinned.

use std::collections::HashMap;

use crate::error::Result;
use crate::exec::Executor;
use crate::mesh::{Layout, Mesh, MeshStorage, TriangleStore, VertexChunkMut, VertexStore};
use crate::with_mesh;

/// Per-vertex neighbor and incident-triangle lists in CSR form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Adjacency {
    raw_offsets: Vec<u32>,
    raw: Vec<u32>,
    neig_offsets: Vec<u32>,
    neig: Vec<u32>,
    /// Occurrences of each deduplicated neighbor in the raw list.
    neig_count: Vec<u32>,
    loca_offsets: Vec<u32>,
    loca: Vec<u32>,
}

impl Adjacency {
    /// Builds adjacency from a triangle list over `n_vert` vertices, visiting
    /// triangles in index order.
    pub fn from_triangles(n_vert: usize, triangles: impl Iterator<Item = [u32; 3]> + Clone) -> Self {
        let mut loca_offsets = vec![0u32; n_vert + 1];
        for tri in triangles.clone() {
            for v in tri {
                loca_offsets[v as usize + 1] += 1;
            }
        }
        for v in 0..n_vert {
            loca_offsets[v + 1] += loca_offsets[v];
        }
        let raw_offsets: Vec<u32> = loca_offsets.iter().map(|&o| 2 * o).collect();

        let total = loca_offsets[n_vert] as usize;
        let mut loca = vec![0u32; total];
        let mut raw = vec![0u32; 2 * total];
        let mut fill = vec![0u32; n_vert];
        for (t, [a, b, c]) in triangles.enumerate() {
            for (v, n1, n2) in [(a, b, c), (b, a, c), (c, a, b)] {
                let v = v as usize;
                let k = fill[v];
                loca[(loca_offsets[v] + k) as usize] = t as u32;
                let r = (raw_offsets[v] + 2 * k) as usize;
                raw[r] = n1;
                raw[r + 1] = n2;
                fill[v] += 1;
            }
        }

        let mut neig_offsets = Vec::with_capacity(n_vert + 1);
        let mut neig = Vec::with_capacity(raw.len() / 2);
        let mut neig_count = Vec::with_capacity(raw.len() / 2);
        let mut scratch = Vec::new();
        neig_offsets.push(0);
        for v in 0..n_vert {
            scratch.clear();
            scratch.extend_from_slice(&raw[raw_offsets[v] as usize..raw_offsets[v + 1] as usize]);
            scratch.sort_unstable();
            for &u in &scratch {
                if neig.len() > *neig_offsets.last().unwrap() as usize && *neig.last().unwrap() == u {
                    *neig_count.last_mut().unwrap() += 1;
                } else {
                    neig.push(u);
                    neig_count.push(1);
                }
            }
            neig_offsets.push(neig.len() as u32);
        }

        Adjacency {
            raw_offsets,
            raw,
            neig_offsets,
            neig,
            neig_count,
            loca_offsets,
            loca,
        }
    }

    pub fn n_vert(&self) -> usize {
        self.neig_offsets.len() - 1
    }

    fn span(offsets: &[u32], v: usize) -> std::ops::Range<usize> {
        offsets[v] as usize..offsets[v + 1] as usize
    }

    /// Neighbor occurrences of `v` in recording order, duplicates kept.
    pub fn raw_neighbors(&self, v: usize) -> &[u32] {
        &self.raw[Self::span(&self.raw_offsets, v)]
    }

    /// Distinct neighbors of `v`, ascending.
    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.neig[Self::span(&self.neig_offsets, v)]
    }

    /// Raw occurrence count of each entry of [`Adjacency::neighbors`].
    pub fn occurrences(&self, v: usize) -> &[u32] {
        &self.neig_count[Self::span(&self.neig_offsets, v)]
    }

    /// Triangles having `v` as a vertex, ascending.
    pub fn incident(&self, v: usize) -> &[u32] {
        &self.loca[Self::span(&self.loca_offsets, v)]
    }

    /// The occurrence rule: a vertex is a constraint unless every neighbor was
    /// recorded exactly twice. Vertices with no triangles are constraints too.
    pub fn is_boundary(&self, v: usize) -> bool {
        let occ = self.occurrences(v);
        occ.is_empty() || occ.iter().any(|&c| c != 2)
    }

    fn install<L: Layout>(&self, mesh: &mut Mesh<L>) {
        for v in 0..self.n_vert() {
            let n = Self::span(&self.neig_offsets, v);
            let l = Self::span(&self.loca_offsets, v);
            mesh.verts.set_spans(
                v,
                (n.start as u32, n.len() as u32),
                (l.start as u32, l.len() as u32),
            );
        }
        mesh.neig.clone_from(&self.neig);
        mesh.loca.clone_from(&self.loca);
    }
}

/// Builds adjacency in a single sequential pass and stores the deduplicated
/// neighbor and incident lists (with their counts) in the mesh.
pub fn find_neighbors(mesh: &mut MeshStorage) -> Adjacency {
    with_mesh!(mesh, m => {
        let trgls = &m.trgls;
        let adj = Adjacency::from_triangles(m.n_vert(), (0..trgls.len()).map(|t| trgls.vertices(t)));
        adj.install(m);
        adj
    })
}

fn classify<L: Layout>(mesh: &mut Mesh<L>, adj: &Adjacency, exec: &Executor) {
    let len = exec.chunk_len(mesh.n_vert());
    exec.run(mesh.verts.chunks_mut(len), |mut chunk| {
        for local in 0..chunk.len() {
            let b = adj.is_boundary(chunk.start() + local);
            chunk.set_boundary(local, b);
        }
    });
}

/// Sets the constraint flag of every vertex from `adj`, one vertex per task.
pub fn determine_constraints(mesh: &mut MeshStorage, adj: &Adjacency, exec: &Executor) -> Result<()> {
    if adj.n_vert() != mesh.n_vert() {
        return Err(crate::Error::Invariant(format!(
            "adjacency covers {} vertices, mesh has {}",
            adj.n_vert(),
            mesh.n_vert()
        )));
    }
    with_mesh!(mesh, m => classify(m, adj, exec));
    Ok(())
}

fn edge_use_counts(mesh: &MeshStorage) -> HashMap<(u32, u32), u32> {
    let mut edges: HashMap<(u32, u32), u32> = HashMap::with_capacity(mesh.n_trgl() * 2);
    for [a, b, c] in mesh.triangles() {
        for (u, v) in [(a, b), (b, c), (c, a)] {
            *edges.entry((u.min(v), u.max(v))).or_default() += 1;
        }
    }
    edges
}

/// Independent boundary classification from edge usage: a vertex is boundary
/// iff it lies on an edge used by exactly one triangle.
pub fn boundary_oracle(mesh: &MeshStorage) -> Vec<bool> {
    let mut flags = vec![false; mesh.n_vert()];
    for ((u, v), n) in edge_use_counts(mesh) {
        if n == 1 {
            flags[u as usize] = true;
            flags[v as usize] = true;
        }
    }
    flags
}

/// Number of edges shared by three or more triangles.
pub fn non_manifold_edge_count(mesh: &MeshStorage) -> usize {
    edge_use_counts(mesh).values().filter(|&&n| n >= 3).count()
}
