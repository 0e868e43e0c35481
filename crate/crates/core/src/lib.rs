//! Smart Laplacian smoothing of planar triangular meshes.
//!
//! The crate is organized along the smoothing pipeline:
//!
//! * [`mesh`]: the logical mesh, its Array-of-Structures and
//!   Structure-of-Arrays storage, and Triangle `.node`/`.ele` I/O.
//! * [`topology`]: neighbor and incident-triangle lists, boundary detection.
//! * [`quality`]: the normalized `alpha` shape metric and per-vertex minima.
//! * [`smoothing`]: the iteration engine (Jacobi form A, Gauss-Seidel form B,
//!   fused or two-phase quality updates, serial or parallel backend).
//! * [`meshgen`]: seeded random Delaunay meshes and perturbed grids.
//! * [`bench`]: the layout x form x strategy x backend comparison harness.
//!
//! ```
//! use smartlap::prelude::*;
//!
//! let (points, triangles) = meshgen::perturbed_grid(10, 10, 0.3, 7).unwrap();
//! let mut mesh = MeshStorage::build(&points, &triangles, LayoutKind::Soa).unwrap();
//! let stats = smooth(&mut mesh, &SmoothConfig::default()).unwrap();
//! assert!(stats.after.mean > stats.before.mean);
//! ```

pub mod bench;
pub mod cli;
pub mod error;
pub mod exec;
pub mod mesh;
pub mod meshgen;
pub mod quality;
pub mod smoothing;
pub mod topology;

pub use error::{Error, Result};

pub mod prelude {
    pub use crate::error::{Error, Result};
    pub use crate::exec::{Backend, Executor};
    pub use crate::mesh::{
        read_triangle_files, read_triangle_format, write_triangle_files, write_triangle_format, LayoutKind, MeshStorage, Point, Triangle, VertexId,
    };
    pub use crate::meshgen::{self, GenKind, GenSpec};
    pub use crate::quality::{compute_all_qualities, triangle_alpha, QualityField, QualityStats};
    pub use crate::smoothing::{smooth, Form, RunStats, SmoothConfig, StopReason, Strategy};
    pub use crate::topology::{boundary_oracle, determine_constraints, find_neighbors, Adjacency};
}
