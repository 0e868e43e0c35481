//! Bowyer-Watson Delaunay triangulation.
//!
//! Points are inserted in Hilbert-curve order into a triangulation seeded with
//! a large enclosing triangle. Each insertion walks to the containing triangle,
//! grows the cavity of triangles whose circumcircle contains the point, and
//! re-triangulates the cavity as a fan around the point. Removing the seed
//! triangle can leave the outer boundary slightly concave where hull points
//! are nearly collinear; those notches are filled and then legalized with
//! Lawson flips.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::mesh::{bbox_of, Point, Triangle};

const NONE: u32 = u32::MAX;
const SEED_SCALE: f64 = 1.0e4;

/// Twice the signed area of `(a, b, c)`; positive when counter-clockwise.
#[inline]
pub fn orient(a: Point, b: Point, c: Point) -> f64 {
    (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)
}

/// In-circle determinant: positive iff `d` lies strictly inside the
/// circumcircle of the counter-clockwise triangle `(a, b, c)`.
#[inline]
pub fn incircle(a: Point, b: Point, c: Point, d: Point) -> f64 {
    let (adx, ady) = (a.x - d.x, a.y - d.y);
    let (bdx, bdy) = (b.x - d.x, b.y - d.y);
    let (cdx, cdy) = (c.x - d.x, c.y - d.y);
    let ad = adx * adx + ady * ady;
    let bd = bdx * bdx + bdy * bdy;
    let cd = cdx * cdx + cdy * cdy;
    adx * (bdy * cd - bd * cdy) - ady * (bdx * cd - bd * cdx) + ad * (bdx * cdy - bdy * cdx)
}

/// Circumcenter and squared circumradius, `None` for a degenerate triangle.
pub fn circumcircle(a: Point, b: Point, c: Point) -> Option<(Point, f64)> {
    let (bx, by) = (b.x - a.x, b.y - a.y);
    let (cx, cy) = (c.x - a.x, c.y - a.y);
    let d = 2.0 * (bx * cy - by * cx);
    if d == 0.0 {
        return None;
    }
    let b2 = bx * bx + by * by;
    let c2 = cx * cx + cy * cy;
    let ux = (cy * b2 - by * c2) / d;
    let uy = (bx * c2 - cx * b2) / d;
    Some((Point::new(a.x + ux, a.y + uy), ux * ux + uy * uy))
}

/// Position of `(x, y)` along a Hilbert curve over a `2^order` grid.
fn hilbert_index(order: u32, mut x: u32, mut y: u32) -> u64 {
    let n = 1u32 << order;
    let mut d = 0u64;
    let mut s = n >> 1;
    while s > 0 {
        let rx = u32::from(x & s > 0);
        let ry = u32::from(y & s > 0);
        d += u64::from(s) * u64::from(s) * u64::from((3 * rx) ^ ry);
        if ry == 0 {
            if rx == 1 {
                x = n - 1 - x;
                y = n - 1 - y;
            }
            std::mem::swap(&mut x, &mut y);
        }
        s >>= 1;
    }
    d
}

fn hilbert_order(points: &[Point]) -> Vec<u32> {
    const ORDER: u32 = 16;
    let (lo, hi) = bbox_of(points.iter().copied());
    let span = (hi.x - lo.x).max(hi.y - lo.y).max(f64::MIN_POSITIVE);
    let max = f64::from((1u32 << ORDER) - 1);
    let mut keyed: Vec<(u64, u32)> = points
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let qx = ((p.x - lo.x) / span * max) as u32;
            let qy = ((p.y - lo.y) / span * max) as u32;
            (hilbert_index(ORDER, qx, qy), i as u32)
        })
        .collect();
    keyed.sort_unstable();
    keyed.into_iter().map(|(_, i)| i).collect()
}

struct Triangulation {
    pts: Vec<Point>,
    v: Vec<[u32; 3]>,
    adj: Vec<[u32; 3]>,
    alive: Vec<bool>,
    mark: Vec<u32>,
    free: Vec<u32>,
}

impl Triangulation {
    #[inline]
    fn p(&self, i: u32) -> Point {
        self.pts[i as usize]
    }

    fn alloc(&mut self, tri: [u32; 3]) -> u32 {
        if let Some(t) = self.free.pop() {
            self.v[t as usize] = tri;
            self.adj[t as usize] = [NONE; 3];
            self.alive[t as usize] = true;
            t
        } else {
            self.v.push(tri);
            self.adj.push([NONE; 3]);
            self.alive.push(true);
            self.mark.push(0);
            (self.v.len() - 1) as u32
        }
    }

    /// Local index `i` in `t` whose opposite edge is `a -> b` or `b -> a`.
    fn edge_index(&self, t: u32, a: u32, b: u32) -> usize {
        let v = self.v[t as usize];
        (0..3)
            .find(|&i| {
                let (x, y) = (v[(i + 1) % 3], v[(i + 2) % 3]);
                (x == a && y == b) || (x == b && y == a)
            })
            .expect("neighbor shares the edge")
    }

    fn relink(&mut self, nb: u32, a: u32, b: u32, to: u32) {
        if nb != NONE {
            let j = self.edge_index(nb, a, b);
            self.adj[nb as usize][j] = to;
        }
    }

    fn contains(&self, t: u32, p: Point) -> bool {
        let [a, b, c] = self.v[t as usize];
        orient(self.p(a), self.p(b), p) >= 0.0
            && orient(self.p(b), self.p(c), p) >= 0.0
            && orient(self.p(c), self.p(a), p) >= 0.0
    }

    fn locate(&self, start: u32, p: Point) -> u32 {
        let mut t = start;
        let limit = 4 * self.v.len() + 64;
        'walk: for step in 0..limit {
            let tri = self.v[t as usize];
            for k in 0..3 {
                let i = (k + step) % 3;
                let (a, b) = (tri[(i + 1) % 3], tri[(i + 2) % 3]);
                if orient(self.p(a), self.p(b), p) < 0.0 {
                    let next = self.adj[t as usize][i];
                    if next != NONE {
                        t = next;
                        continue 'walk;
                    }
                }
            }
            return t;
        }
        // Walk did not settle (only possible under severe round-off).
        (0..self.v.len() as u32)
            .find(|&t| self.alive[t as usize] && self.contains(t, p))
            .unwrap_or(start)
    }

    fn insert(&mut self, pi: u32, stamp: u32, start: u32) -> Result<u32> {
        let p = self.p(pi);
        let t0 = self.locate(start, p);
        for &u in &self.v[t0 as usize] {
            let q = self.p(u);
            if (q.x - p.x).abs() <= 1e-12 && (q.y - p.y).abs() <= 1e-12 {
                return Err(Error::Generation(format!("duplicate point {pi} ({}, {})", p.x, p.y)));
            }
        }

        let mut cavity = vec![t0];
        self.mark[t0 as usize] = stamp;
        let mut i = 0;
        while i < cavity.len() {
            let t = cavity[i];
            i += 1;
            for k in 0..3 {
                let nb = self.adj[t as usize][k];
                if nb == NONE || self.mark[nb as usize] == stamp {
                    continue;
                }
                let [a, b, c] = self.v[nb as usize];
                if incircle(self.p(a), self.p(b), self.p(c), p) > 0.0 {
                    self.mark[nb as usize] = stamp;
                    cavity.push(nb);
                }
            }
        }

        // Boundary edges must all see `p` on their left, otherwise the fan
        // would contain inverted triangles; absorb offending neighbors.
        let boundary = loop {
            let mut edges = Vec::with_capacity(cavity.len() + 2);
            let mut grow = None;
            'scan: for &t in &cavity {
                for k in 0..3 {
                    let nb = self.adj[t as usize][k];
                    if nb != NONE && self.mark[nb as usize] == stamp {
                        continue;
                    }
                    let tri = self.v[t as usize];
                    let (a, b) = (tri[(k + 1) % 3], tri[(k + 2) % 3]);
                    if orient(self.p(a), self.p(b), p) <= 0.0 {
                        if nb == NONE {
                            return Err(Error::Generation(format!(
                                "point {pi} fell outside the enclosing triangle"
                            )));
                        }
                        grow = Some(nb);
                        break 'scan;
                    }
                    edges.push((a, b, nb));
                }
            }
            match grow {
                Some(nb) => {
                    self.mark[nb as usize] = stamp;
                    cavity.push(nb);
                }
                None => break edges,
            }
        };

        for &t in &cavity {
            self.alive[t as usize] = false;
            self.free.push(t);
        }
        let mut fan = Vec::with_capacity(boundary.len());
        for &(a, b, nb) in &boundary {
            let t = self.alloc([a, b, pi]);
            self.adj[t as usize][2] = nb;
            self.relink(nb, a, b, t);
            fan.push(t);
        }
        // Link consecutive fan triangles: [a, b, p] borders [b, c, p] along (b, p).
        let by_start: HashMap<u32, u32> = fan.iter().map(|&t| (self.v[t as usize][0], t)).collect();
        for &t in &fan {
            let b = self.v[t as usize][1];
            let u = by_start[&b];
            self.adj[t as usize][0] = u;
            self.adj[u as usize][1] = t;
        }
        Ok(fan[0])
    }

    fn legalize(&mut self, mut stack: Vec<(u32, usize)>) {
        let mut guard = 0usize;
        let limit = 64 * self.v.len() + 1024;
        while let Some((t, i)) = stack.pop() {
            guard += 1;
            if guard > limit {
                break;
            }
            if !self.alive[t as usize] {
                continue;
            }
            let u = self.adj[t as usize][i];
            if u == NONE {
                continue;
            }
            let tv = self.v[t as usize];
            let (a, b, c) = (tv[i], tv[(i + 1) % 3], tv[(i + 2) % 3]);
            let j = self.edge_index(u, b, c);
            let d = self.v[u as usize][j];
            let (pa, pb, pc, pd) = (self.p(a), self.p(b), self.p(c), self.p(d));
            if incircle(pa, pb, pc, pd) <= 0.0 || orient(pa, pb, pd) <= 0.0 || orient(pa, pd, pc) <= 0.0 {
                continue;
            }
            let n_ca = self.adj[t as usize][(i + 1) % 3];
            let n_ab = self.adj[t as usize][(i + 2) % 3];
            let uj = |k: u32| (0..3).find(|&x| self.v[u as usize][x] == k).unwrap();
            let n_bd = self.adj[u as usize][uj(c)];
            let n_dc = self.adj[u as usize][uj(b)];

            self.v[t as usize] = [a, b, d];
            self.adj[t as usize] = [n_bd, u, n_ab];
            self.v[u as usize] = [a, d, c];
            self.adj[u as usize] = [n_dc, n_ca, t];
            self.relink(n_bd, b, d, t);
            self.relink(n_ca, c, a, u);

            stack.extend([(t, 0), (t, 2), (u, 0), (u, 1)]);
        }
    }

    /// Fills concave notches of the outer boundary, then legalizes.
    fn complete_hull(&mut self) {
        // Directed boundary edge a -> b (interior on the left) -> (triangle, local index).
        let mut edge_of: HashMap<(u32, u32), (u32, usize)> = HashMap::new();
        let mut next: HashMap<u32, u32> = HashMap::new();
        let mut prev: HashMap<u32, u32> = HashMap::new();
        for t in 0..self.v.len() as u32 {
            if !self.alive[t as usize] {
                continue;
            }
            for k in 0..3 {
                if self.adj[t as usize][k] == NONE {
                    let tri = self.v[t as usize];
                    let (a, b) = (tri[(k + 1) % 3], tri[(k + 2) % 3]);
                    edge_of.insert((a, b), (t, k));
                    next.insert(a, b);
                    prev.insert(b, a);
                }
            }
        }
        let mut work: Vec<u32> = {
            let mut w: Vec<u32> = next.keys().copied().collect();
            w.sort_unstable();
            w
        };
        let mut flips = Vec::new();
        while let Some(b) = work.pop() {
            let (Some(&a), Some(&c)) = (prev.get(&b), next.get(&b)) else {
                continue;
            };
            if a == c || orient(self.p(a), self.p(b), self.p(c)) >= 0.0 {
                continue;
            }
            let (t_ab, i_ab) = edge_of.remove(&(a, b)).unwrap();
            let (t_bc, i_bc) = edge_of.remove(&(b, c)).unwrap();
            let t = self.alloc([a, c, b]);
            // Opposite a: edge (c, b) borders t_bc; opposite c: edge (b, a) borders t_ab.
            self.adj[t as usize] = [t_bc, t_ab, NONE];
            self.adj[t_bc as usize][i_bc] = t;
            self.adj[t_ab as usize][i_ab] = t;
            edge_of.insert((a, c), (t, 2));
            next.remove(&b);
            prev.remove(&b);
            next.insert(a, c);
            prev.insert(c, a);
            work.push(a);
            work.push(c);
            flips.push((t, 0));
            flips.push((t, 1));
        }
        self.legalize(flips);
    }
}

/// Delaunay triangulation of `points`' convex hull, counter-clockwise
/// triangles over the original point indices.
pub fn delaunay_triangulate(points: &[Point]) -> Result<Vec<Triangle>> {
    let n = points.len();
    if n < 3 {
        return Err(Error::Generation(format!("need at least 3 points, got {n}")));
    }
    if points.iter().any(|p| !p.is_finite()) {
        return Err(Error::Generation("non-finite coordinate".into()));
    }
    let (lo, hi) = bbox_of(points.iter().copied());
    let span = (hi.x - lo.x).max(hi.y - lo.y);
    let p0 = points[0];
    let far = points
        .iter()
        .copied()
        .max_by(|a, b| p0.dist(*a).total_cmp(&p0.dist(*b)))
        .unwrap();
    let widest = points
        .iter()
        .map(|&p| orient(p0, far, p).abs())
        .fold(0.0, f64::max);
    if span == 0.0 || widest <= 1e-12 * span * span {
        return Err(Error::Generation("all points are collinear".into()));
    }

    let center = Point::new(0.5 * (lo.x + hi.x), 0.5 * (lo.y + hi.y));
    let r = SEED_SCALE * span;
    let mut pts = points.to_vec();
    pts.push(Point::new(center.x - r, center.y - r));
    pts.push(Point::new(center.x + r, center.y - r));
    pts.push(Point::new(center.x, center.y + r));

    let mut tr = Triangulation {
        pts,
        v: vec![[n as u32, n as u32 + 1, n as u32 + 2]],
        adj: vec![[NONE; 3]],
        alive: vec![true],
        mark: vec![0],
        free: Vec::new(),
    };
    tr.v.reserve(2 * n + 8);
    let mut last = 0u32;
    for (k, pi) in hilbert_order(points).into_iter().enumerate() {
        last = tr.insert(pi, k as u32 + 1, last)?;
    }

    // Drop every triangle touching the enclosing triangle.
    for t in 0..tr.v.len() {
        if tr.alive[t] && tr.v[t].iter().any(|&u| u as usize >= n) {
            tr.alive[t] = false;
        }
    }
    for t in 0..tr.v.len() {
        if !tr.alive[t] {
            continue;
        }
        for k in 0..3 {
            let nb = tr.adj[t][k];
            if nb != NONE && !tr.alive[nb as usize] {
                tr.adj[t][k] = NONE;
            }
        }
    }
    tr.free.clear();
    tr.complete_hull();

    Ok(tr
        .v
        .iter()
        .zip(&tr.alive)
        .filter(|(_, &a)| a)
        .map(|(&t, _)| t)
        .collect())
}
