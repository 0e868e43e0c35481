//! Reproducible test meshes.
//!
//! Random point sets come from ChaCha8 seeded with a `u64` (`rand_chacha`'s
//! `seed_from_u64`), which produces the same stream on every platform, and are
//! triangulated with [`delaunay_triangulate`]. Perturbed grids give fixtures
//! with a known interior/boundary split.

mod delaunay;

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mesh::{LayoutKind, MeshStorage, Point, Triangle};

pub use delaunay::{circumcircle, delaunay_triangulate, incircle, orient};

/// Largest allowed grid perturbation, as a fraction of the cell size.
pub const MAX_PERTURBATION: f64 = 0.49;

/// Mesh sizes of the default benchmark set.
pub const DEFAULT_SIZES: [usize; 5] = [1_000, 5_000, 10_000, 50_000, 100_000];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum GenKind {
    DelaunayRandom { n_points: usize },
    PerturbedGrid { rows: usize, cols: usize, perturbation: f64 },
}

/// Full description of a generated mesh on the unit square.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GenSpec {
    #[serde(flatten)]
    pub kind: GenKind,
    pub seed: u64,
}

impl GenSpec {
    pub fn delaunay(n_points: usize, seed: u64) -> Self {
        GenSpec {
            kind: GenKind::DelaunayRandom { n_points },
            seed,
        }
    }

    pub fn grid(rows: usize, cols: usize, perturbation: f64, seed: u64) -> Self {
        GenSpec {
            kind: GenKind::PerturbedGrid {
                rows,
                cols,
                perturbation,
            },
            seed,
        }
    }

    pub fn generate(&self) -> Result<(Vec<Point>, Vec<Triangle>)> {
        match self.kind {
            GenKind::DelaunayRandom { n_points } => {
                let pts = generate_points(n_points, self.seed)?;
                let tris = delaunay_triangulate(&pts)?;
                Ok((pts, tris))
            }
            GenKind::PerturbedGrid {
                rows,
                cols,
                perturbation,
            } => perturbed_grid(rows, cols, perturbation, self.seed),
        }
    }

    pub fn build(&self, layout: LayoutKind) -> Result<MeshStorage> {
        let (pts, tris) = self.generate()?;
        MeshStorage::build(&pts, &tris, layout)
    }
}

/// `n` distinct uniform points in `[0, 1)^2`. Points within 1e-12 of an
/// earlier one (in both coordinates) are redrawn.
pub fn generate_points(n: usize, seed: u64) -> Result<Vec<Point>> {
    if n < 3 {
        return Err(Error::Generation(format!("need at least 3 points, got {n}")));
    }
    const CELL: f64 = 1e-12;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cells: HashSet<(i64, i64)> = HashSet::with_capacity(n);
    let mut pts = Vec::with_capacity(n);
    while pts.len() < n {
        let p = Point::new(rng.gen::<f64>(), rng.gen::<f64>());
        let key = ((p.x / CELL) as i64, (p.y / CELL) as i64);
        let clash = (-1..=1).any(|dx| (-1..=1).any(|dy| cells.contains(&(key.0 + dx, key.1 + dy))));
        if clash {
            continue;
        }
        cells.insert(key);
        pts.push(p);
    }
    Ok(pts)
}

/// `rows x cols` lattice on the unit square. Interior lattice points are
/// displaced uniformly within `±perturbation` of a cell in each direction;
/// boundary points stay on the lattice. Each cell is split along its
/// lower-left to upper-right diagonal into two counter-clockwise triangles.
pub fn perturbed_grid(
    rows: usize,
    cols: usize,
    perturbation: f64,
    seed: u64,
) -> Result<(Vec<Point>, Vec<Triangle>)> {
    if rows < 2 || cols < 2 {
        return Err(Error::Generation(format!(
            "grid needs at least 2x2 points, got {rows}x{cols}"
        )));
    }
    if !(0.0..=MAX_PERTURBATION).contains(&perturbation) {
        return Err(Error::Generation(format!(
            "perturbation must lie in [0, {MAX_PERTURBATION}], got {perturbation}"
        )));
    }
    let dx = 1.0 / (cols - 1) as f64;
    let dy = 1.0 / (rows - 1) as f64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pts = Vec::with_capacity(rows * cols);
    for i in 0..rows {
        for j in 0..cols {
            let mut p = Point::new(j as f64 * dx, i as f64 * dy);
            if i > 0 && i + 1 < rows && j > 0 && j + 1 < cols {
                let ux: f64 = rng.gen_range(-1.0..=1.0);
                let uy: f64 = rng.gen_range(-1.0..=1.0);
                p.x += ux * perturbation * dx;
                p.y += uy * perturbation * dy;
            }
            pts.push(p);
        }
    }
    let mut tris = Vec::with_capacity(2 * (rows - 1) * (cols - 1));
    for i in 0..rows - 1 {
        for j in 0..cols - 1 {
            let a = (i * cols + j) as u32;
            let b = a + 1;
            let c = a + cols as u32 + 1;
            let d = a + cols as u32;
            tris.push([a, b, c]);
            tris.push([a, c, d]);
        }
    }
    Ok((pts, tris))
}

/// Whether lattice vertex `v` of a `rows x cols` grid lies on its outer ring.
pub fn grid_is_boundary(rows: usize, cols: usize, v: usize) -> bool {
    let (i, j) = (v / cols, v % cols);
    i == 0 || j == 0 || i + 1 == rows || j + 1 == cols
}
