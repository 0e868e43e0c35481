//! Smart Laplacian smoothing.
//!
//! Each free vertex is offered the centroid of its distinct neighbors and moves
//! there only if that strictly raises the minimum quality of its incident
//! triangles. Boundary vertices never move and connectivity never changes.
//!
//! Two iteration forms are supported:
//!
//! * [`Form::A`] (Jacobi): every candidate reads the previous pass's
//!   coordinates. Results are written to a second buffer and the buffers are
//!   swapped at the end of the pass.
//! * [`Form::B`] (Gauss-Seidel / hybrid): coordinates are updated in place.
//!   A worker reads neighbors inside its own chunk from the live buffer (which
//!   may already hold this pass's positions) and neighbors in other chunks from
//!   a snapshot taken at the start of the pass. One chunk gives pure
//!   Gauss-Seidel; one chunk per vertex degenerates to Jacobi.
//!
//! After every pass a barrier is followed by a quality refresh, either
//! [`Strategy::TwoPhase`] (all triangles once, then all vertex minima) or
//! [`Strategy::Fused`] (vertex minima written during acceptance and reconciled
//! per vertex at pass end). Both strategies make identical decisions.

use std::any::Any;
use std::fmt;
use std::ops::Range;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::{Backend, Executor};
use crate::mesh::{
    Layout, Mesh, MeshStorage, Point, TriangleStore, VertexChunkMut, VertexId, VertexStore,
};
use crate::quality::{self, local_min_with, update_fused, QualityStats};
use crate::topology::{determine_constraints, find_neighbors};
use crate::with_mesh;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Form {
    A,
    B,
}

impl Form {
    pub const ALL: [Form; 2] = [Form::A, Form::B];

    pub fn as_str(self) -> &'static str {
        match self {
            Form::A => "a",
            Form::B => "b",
        }
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Form {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "a" => Ok(Form::A),
            "b" => Ok(Form::B),
            other => Err(Error::Config(format!("unknown iteration form `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    Fused,
    TwoPhase,
}

impl Strategy {
    pub const ALL: [Strategy; 2] = [Strategy::Fused, Strategy::TwoPhase];

    pub fn as_str(self) -> &'static str {
        match self {
            Strategy::Fused => "fused",
            Strategy::TwoPhase => "two-phase",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "fused" => Ok(Strategy::Fused),
            "two-phase" | "twophase" | "two_phase" => Ok(Strategy::TwoPhase),
            other => Err(Error::Config(format!("unknown update strategy `{other}`"))),
        }
    }
}

/// Smoothing parameters. Runs are fully deterministic for a given config.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SmoothConfig {
    pub form: Form,
    pub strategy: Strategy,
    pub backend: Backend,
    /// Chunk count of the parallel backend; ignored by the serial one.
    pub workers: usize,
    pub max_iters: usize,
    /// Stop once the largest move of a pass is below this fraction of the
    /// bounding-box diagonal.
    pub move_tol: f64,
}

impl Default for SmoothConfig {
    fn default() -> Self {
        SmoothConfig {
            form: Form::B,
            strategy: Strategy::Fused,
            backend: Backend::Serial,
            workers: 1,
            max_iters: 100,
            move_tol: 1e-6,
        }
    }
}

impl SmoothConfig {
    pub fn validate(&self) -> Result<()> {
        if self.workers == 0 {
            return Err(Error::Config("workers must be at least 1".into()));
        }
        if self.max_iters == 0 {
            return Err(Error::Config("max_iters must be at least 1".into()));
        }
        if !(self.move_tol >= 0.0 && self.move_tol.is_finite()) {
            return Err(Error::Config(format!(
                "move_tol must be a finite non-negative number, got {}",
                self.move_tol
            )));
        }
        Ok(())
    }

    pub fn executor(&self) -> Result<Executor> {
        self.validate()?;
        Executor::new(self.backend, self.workers)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StopReason {
    MaxIters,
    Converged,
    NoAcceptedMoves,
}

/// Outcome of one pass.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PassStats {
    pub accepted: usize,
    pub max_displacement: f64,
    /// Global minimum quality after the pass's quality refresh.
    pub min_alpha: f64,
}

/// Mutable state carried between passes.
#[derive(Default)]
pub struct IterationState {
    pub iteration: usize,
    pub passes: Vec<PassStats>,
    /// Form A: the second coordinate buffer. Form B with several chunks: the
    /// pass-start snapshot. Holds the layout's vertex store.
    scratch: Option<Box<dyn Any + Send + Sync>>,
}

impl fmt::Debug for IterationState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("IterationState")
            .field("iteration", &self.iteration)
            .field("passes", &self.passes)
            .field("has_scratch", &self.scratch.is_some())
            .finish()
    }
}

impl IterationState {
    pub fn new() -> Self {
        Self::default()
    }

    fn scratch<V: VertexStore + 'static>(&mut self, init: &V) -> &mut V {
        let stale = !matches!(&self.scratch, Some(b) if b.downcast_ref::<V>().is_some_and(|s| s.len() == init.len()));
        if stale {
            self.scratch = Some(Box::new(init.clone()));
        }
        self.scratch
            .as_mut()
            .and_then(|b| b.downcast_mut::<V>())
            .expect("scratch buffer matches the mesh layout")
    }
}

/// Timing, convergence and quality summary of one [`smooth`] run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunStats {
    pub iterations: usize,
    pub stop_reason: StopReason,
    pub init_ms: f64,
    pub topo_ms: f64,
    pub constr_ms: f64,
    pub iter_ms: f64,
    pub total_ms: f64,
    pub accepted_per_pass: Vec<usize>,
    pub max_displacement_per_pass: Vec<f64>,
    pub min_alpha_per_pass: Vec<f64>,
    pub before: QualityStats,
    pub after: QualityStats,
    pub boundary_vertices: usize,
    pub workers: usize,
    /// Floating-point type coordinates and qualities are stored in.
    pub precision: String,
}

/// Mean of the neighbor positions, summed in list order.
#[inline]
pub(crate) fn neighbor_mean(neighbors: &[u32], pos: impl Fn(usize) -> Point) -> Point {
    let (mut sx, mut sy) = (0.0, 0.0);
    for &u in neighbors {
        let p = pos(u as usize);
        sx += p.x;
        sy += p.y;
    }
    let n = neighbors.len() as f64;
    Point::new(sx / n, sy / n)
}

/// Jacobi candidate for `v`: centroid of its distinct neighbors read from
/// `old_coords`.
pub fn candidate_position_form_a(mesh: &MeshStorage, v: VertexId, old_coords: &[Point]) -> Point {
    neighbor_mean(mesh.neighbors(v.index()), |u| old_coords[u])
}

/// Hybrid candidate for `v` owned by the chunk `chunk`: neighbors inside the
/// chunk come from `live`, all others from `snapshot`.
pub fn candidate_position_form_b(
    mesh: &MeshStorage,
    v: VertexId,
    live: &[Point],
    snapshot: &[Point],
    chunk: Range<usize>,
) -> Point {
    neighbor_mean(mesh.neighbors(v.index()), |u| {
        if chunk.contains(&u) {
            live[u]
        } else {
            snapshot[u]
        }
    })
}

/// Result of a single smart acceptance test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Decision {
    pub accepted: bool,
    /// Stored worst incident quality before the test.
    pub current: f64,
    /// Worst incident quality with the vertex at the candidate.
    pub proposed: f64,
}

/// Moves `v` to `candidate` iff that strictly increases the minimum quality of
/// its incident triangles over the stored value. Constrained vertices are
/// always rejected. Only coordinates are written.
pub fn smart_accept(mesh: &mut MeshStorage, v: VertexId, candidate: Point) -> Result<Decision> {
    let current = mesh.min_quality(v.index()).ok_or_else(|| {
        Error::Invariant(format!("vertex {} has no synchronized quality", v.0))
    })?;
    let proposed = update_fused(mesh, v, candidate)?;
    let accepted = !mesh.is_boundary(v.index()) && proposed > current;
    if accepted {
        mesh.set_point(v.index(), candidate);
    }
    Ok(Decision {
        accepted,
        current,
        proposed,
    })
}

#[derive(Debug, Clone, Copy, Default)]
struct Tally {
    accepted: usize,
    max_displacement: f64,
}

impl Tally {
    fn merge(self, o: Tally) -> Tally {
        Tally {
            accepted: self.accepted + o.accepted,
            max_displacement: self.max_displacement.max(o.max_displacement),
        }
    }
}

struct PassInputs<'a, V, T> {
    form: Form,
    strategy: Strategy,
    /// Form A: previous-pass buffer. Form B: pass-start snapshot, `None` when
    /// a single chunk covers every vertex.
    old: Option<&'a V>,
    trgls: &'a T,
    neig: &'a [u32],
    loca: &'a [u32],
}

fn smooth_chunk<C, V, T>(mut chunk: C, io: &PassInputs<'_, V, T>) -> Tally
where
    C: VertexChunkMut,
    V: VertexStore,
    T: TriangleStore,
{
    let mut tally = Tally::default();
    let range = chunk.range();
    for local in 0..chunk.len() {
        if chunk.is_boundary(local) {
            continue;
        }
        let v = range.start + local;
        let (ns, nn) = chunk.neighbor_span(local);
        let (ls, ln) = chunk.incident_span(local);
        if nn == 0 || ln == 0 {
            continue;
        }
        let (here, current, candidate, proposed) = {
            let c = &chunk;
            let pos = |u: usize| -> Point {
                match (io.form, io.old) {
                    (Form::B, _) if range.contains(&u) => c.point(u - range.start),
                    (_, Some(old)) => old.point(u),
                    (Form::A, None) => unreachable!("form A always has a previous buffer"),
                    (Form::B, None) => unreachable!("single-chunk pass reads only live data"),
                }
            };
            let (here, current) = match io.form {
                Form::A => {
                    let old = io.old.expect("form A has a previous buffer");
                    (old.point(v), old.min_quality(v))
                }
                Form::B => (c.point(local), c.min_quality(local)),
            };
            let candidate = neighbor_mean(&io.neig[ns..ns + nn], pos);
            let proposed = local_min_with(io.trgls, &io.loca[ls..ls + ln], v as u32, candidate, pos);
            (here, current, candidate, proposed)
        };
        if proposed > current {
            chunk.set_point(local, candidate);
            if io.strategy == Strategy::Fused {
                chunk.set_min_quality(local, proposed);
            }
            tally.accepted += 1;
            tally.max_displacement = tally.max_displacement.max(here.dist(candidate));
        } else if io.form == Form::A {
            chunk.set_point(local, here);
        }
    }
    tally
}

fn pass<L: Layout>(
    mesh: &mut Mesh<L>,
    config: &SmoothConfig,
    exec: &Executor,
    state: &mut IterationState,
) -> Tally
where
    L::Verts: 'static,
{
    let n = mesh.n_vert();
    let len = exec.chunk_len(n);
    let Mesh {
        verts,
        trgls,
        neig,
        loca,
    } = mesh;
    let tallies = match config.form {
        Form::A => {
            let next = state.scratch(&*verts);
            let io = PassInputs {
                form: Form::A,
                strategy: config.strategy,
                old: Some(&*verts),
                trgls: &*trgls,
                neig,
                loca,
            };
            let t = exec.run(next.chunks_mut(len), |c| smooth_chunk(c, &io));
            std::mem::swap(verts, next);
            t
        }
        Form::B => {
            let old = if len < n {
                let snap = state.scratch(&*verts);
                snap.copy_coords_from(verts);
                Some(&*snap)
            } else {
                None
            };
            let io = PassInputs {
                form: Form::B,
                strategy: config.strategy,
                old,
                trgls: &*trgls,
                neig,
                loca,
            };
            exec.run(verts.chunks_mut(len), |c| smooth_chunk(c, &io))
        }
    };
    tallies.into_iter().fold(Tally::default(), Tally::merge)
}

fn refresh<L: Layout>(mesh: &mut Mesh<L>, strategy: Strategy, exec: &Executor) -> f64 {
    match strategy {
        Strategy::TwoPhase => {
            quality::refresh_triangles(mesh, exec);
            quality::refresh_vertex_min(mesh, exec);
        }
        Strategy::Fused => quality::reconcile_fused(mesh, exec),
    }
    (0..mesh.n_trgl())
        .map(|t| mesh.trgls.quality(t))
        .fold(f64::INFINITY, f64::min)
}

/// One full pass over all free vertices followed by the quality refresh.
///
/// Requires topology, constraints and a synchronized quality field (as left by
/// [`prepare`]).
pub fn run_iteration(
    mesh: &mut MeshStorage,
    config: &SmoothConfig,
    exec: &Executor,
    state: &mut IterationState,
) -> Result<PassStats> {
    if !mesh.has_topology() {
        return Err(Error::TopologyMissing);
    }
    let (tally, min_alpha) = with_mesh!(mesh, m => {
        let t = pass(m, config, exec, state);
        (t, refresh(m, config.strategy, exec))
    });
    let stats = PassStats {
        accepted: tally.accepted,
        max_displacement: tally.max_displacement,
        min_alpha,
    };
    state.iteration += 1;
    state.passes.push(stats);
    Ok(stats)
}

/// Phase timings of [`prepare`] in milliseconds.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct PrepareTimings {
    pub init_ms: f64,
    pub topo_ms: f64,
    pub constr_ms: f64,
}

fn ms_since(t: Instant) -> f64 {
    t.elapsed().as_secs_f64() * 1e3
}

/// Initialization, neighbor finding and constraint determination: resets
/// flags, computes all triangle qualities, builds adjacency, fills vertex
/// minima and classifies boundary vertices.
pub fn prepare(mesh: &mut MeshStorage, exec: &Executor) -> Result<PrepareTimings> {
    let t0 = Instant::now();
    mesh.init_flags();
    quality::compute_all_qualities(mesh, exec);
    let init_ms = ms_since(t0);

    let t1 = Instant::now();
    let adj = find_neighbors(mesh);
    with_mesh!(mesh, m => quality::refresh_vertex_min(m, exec));
    let topo_ms = ms_since(t1);

    let t2 = Instant::now();
    determine_constraints(mesh, &adj, exec)?;
    let constr_ms = ms_since(t2);

    Ok(PrepareTimings {
        init_ms,
        topo_ms,
        constr_ms,
    })
}

/// Runs the full pipeline with a fresh executor built from `config`.
pub fn smooth(mesh: &mut MeshStorage, config: &SmoothConfig) -> Result<RunStats> {
    let exec = config.executor()?;
    smooth_with(mesh, config, &exec)
}

/// Runs the full pipeline on a caller-provided executor, whose worker count
/// takes precedence over `config.workers`.
pub fn smooth_with(mesh: &mut MeshStorage, config: &SmoothConfig, exec: &Executor) -> Result<RunStats> {
    config.validate()?;
    let start = Instant::now();
    let prep = prepare(mesh, exec)?;
    let before = mesh.quality_stats();
    let tol = config.move_tol * mesh.bbox_diagonal();

    let t = Instant::now();
    let mut state = IterationState::new();
    let stop_reason = loop {
        let p = run_iteration(mesh, config, exec, &mut state)?;
        if p.accepted == 0 {
            break StopReason::NoAcceptedMoves;
        }
        if p.max_displacement < tol {
            break StopReason::Converged;
        }
        if state.iteration >= config.max_iters {
            break StopReason::MaxIters;
        }
    };
    let iter_ms = ms_since(t);

    Ok(RunStats {
        iterations: state.iteration,
        stop_reason,
        init_ms: prep.init_ms,
        topo_ms: prep.topo_ms,
        constr_ms: prep.constr_ms,
        iter_ms,
        total_ms: ms_since(start),
        accepted_per_pass: state.passes.iter().map(|p| p.accepted).collect(),
        max_displacement_per_pass: state.passes.iter().map(|p| p.max_displacement).collect(),
        min_alpha_per_pass: state.passes.iter().map(|p| p.min_alpha).collect(),
        before,
        after: mesh.quality_stats(),
        boundary_vertices: mesh.boundary_flags().iter().filter(|&&b| b).count(),
        workers: exec.workers(),
        precision: "f64".into(),
    })
}
