//! Brute-force references shared by the integration tests. Everything here is
//! written against plain vectors, independently of the crate's storage types.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use smartlap::prelude::*;

/// Distinct neighbors of every vertex, ascending.
pub fn neighbor_sets(n: usize, tris: &[Triangle]) -> Vec<Vec<u32>> {
    let mut sets = vec![BTreeSet::new(); n];
    for t in tris {
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    sets[t[i] as usize].insert(t[j]);
                }
            }
        }
    }
    sets.into_iter().map(|s| s.into_iter().collect()).collect()
}

pub fn incident_sets(n: usize, tris: &[Triangle]) -> Vec<Vec<u32>> {
    let mut inc = vec![Vec::new(); n];
    for (t, tri) in tris.iter().enumerate() {
        for &v in tri {
            inc[v as usize].push(t as u32);
        }
    }
    inc
}

/// Endpoints of edges used by exactly one triangle, plus isolated vertices.
pub fn boundary_by_edges(n: usize, tris: &[Triangle]) -> Vec<bool> {
    let mut uses: HashMap<(u32, u32), usize> = HashMap::new();
    for t in tris {
        for (a, b) in [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])] {
            *uses.entry((a.min(b), a.max(b))).or_default() += 1;
        }
    }
    let mut b = vec![false; n];
    for (&(x, y), &c) in &uses {
        if c == 1 {
            b[x as usize] = true;
            b[y as usize] = true;
        }
    }
    let inc = incident_sets(n, tris);
    for v in 0..n {
        if inc[v].is_empty() {
            b[v] = true;
        }
    }
    b
}

fn local_min(tris: &[Triangle], inc: &[u32], v: u32, at: Point, pos: &[Point]) -> f64 {
    inc.iter()
        .map(|&t| {
            let p = |u: u32| if u == v { at } else { pos[u as usize] };
            let [a, b, c] = tris[t as usize];
            triangle_alpha(p(a), p(b), p(c))
        })
        .fold(f64::INFINITY, f64::min)
}

pub struct Reference {
    pub points: Vec<Point>,
    pub iterations: usize,
    pub min_alpha_per_pass: Vec<f64>,
    pub accepted_per_pass: Vec<usize>,
}

/// Straightforward serial smart Laplacian smoother. Form B visits vertices in
/// index order and reads live coordinates; Form A reads only the previous
/// pass. Acceptance compares against the worst incident quality at the start
/// of the pass.
pub fn reference_smooth(points: &[Point], tris: &[Triangle], form: Form, max_iters: usize, move_tol: f64) -> Reference {
    let n = points.len();
    let neig = neighbor_sets(n, tris);
    let inc = incident_sets(n, tris);
    let boundary = boundary_by_edges(n, tris);
    let (lo, hi) = points.iter().fold(
        (Point::new(f64::INFINITY, f64::INFINITY), Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY)),
        |(lo, hi), p| (Point::new(lo.x.min(p.x), lo.y.min(p.y)), Point::new(hi.x.max(p.x), hi.y.max(p.y))),
    );
    let tol = move_tol * lo.dist(hi);

    let mut pos = points.to_vec();
    let mut out = Reference {
        points: Vec::new(),
        iterations: 0,
        min_alpha_per_pass: Vec::new(),
        accepted_per_pass: Vec::new(),
    };
    loop {
        let start = pos.clone();
        let stored: Vec<f64> = (0..n).map(|v| local_min(tris, &inc[v], v as u32, start[v], &start)).collect();
        let (mut accepted, mut max_d) = (0, 0.0f64);
        for v in 0..n {
            if boundary[v] || neig[v].is_empty() {
                continue;
            }
            let read = if form == Form::A { &start } else { &pos };
            let (mut sx, mut sy) = (0.0, 0.0);
            for &u in &neig[v] {
                sx += read[u as usize].x;
                sy += read[u as usize].y;
            }
            let k = neig[v].len() as f64;
            let cand = Point::new(sx / k, sy / k);
            let proposed = local_min(tris, &inc[v], v as u32, cand, read);
            if proposed > stored[v] {
                max_d = max_d.max(read[v].dist(cand));
                pos[v] = cand;
                accepted += 1;
            }
        }
        out.iterations += 1;
        out.accepted_per_pass.push(accepted);
        out.min_alpha_per_pass.push(
            tris.iter()
                .map(|t| triangle_alpha(pos[t[0] as usize], pos[t[1] as usize], pos[t[2] as usize]))
                .fold(f64::INFINITY, f64::min),
        );
        if accepted == 0 || max_d < tol || out.iterations >= max_iters {
            break;
        }
    }
    out.points = pos;
    out
}

pub fn bits(points: &[Point]) -> Vec<(u64, u64)> {
    points.iter().map(|p| (p.x.to_bits(), p.y.to_bits())).collect()
}

/// Brute-force empty-circumcircle check. Returns the number of (triangle,
/// point) pairs where the point lies strictly inside the circumcircle by
/// more than `tol` relative to the radius.
pub fn delaunay_violations(points: &[Point], tris: &[Triangle], tol: f64) -> usize {
    let mut bad = 0;
    for t in tris {
        let [a, b, c] = t.map(|v| points[v as usize]);
        let d = 2.0 * (a.x * (b.y - c.y) + b.x * (c.y - a.y) + c.x * (a.y - b.y));
        if d == 0.0 {
            bad += 1;
            continue;
        }
        let (a2, b2, c2) = (a.x * a.x + a.y * a.y, b.x * b.x + b.y * b.y, c.x * c.x + c.y * c.y);
        let center = Point::new(
            (a2 * (b.y - c.y) + b2 * (c.y - a.y) + c2 * (a.y - b.y)) / d,
            (a2 * (c.x - b.x) + b2 * (a.x - c.x) + c2 * (b.x - a.x)) / d,
        );
        let r = center.dist(a);
        for (i, p) in points.iter().enumerate() {
            if t.contains(&(i as u32)) {
                continue;
            }
            if p.dist(center) < r * (1.0 - tol) {
                bad += 1;
            }
        }
    }
    bad
}

/// Signed area of the convex hull (monotone chain).
pub fn hull_area(points: &[Point]) -> f64 {
    let mut p: Vec<Point> = points.to_vec();
    p.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    let cross = |o: Point, a: Point, b: Point| (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
    let mut hull: Vec<Point> = Vec::new();
    for pass in 0..2 {
        let base = hull.len();
        let iter: Box<dyn Iterator<Item = &Point>> = if pass == 0 { Box::new(p.iter()) } else { Box::new(p.iter().rev()) };
        for &q in iter {
            while hull.len() >= base + 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], q) <= 0.0 {
                hull.pop();
            }
            hull.push(q);
        }
        hull.pop();
    }
    let n = hull.len();
    (0..n).map(|i| hull[i].x * hull[(i + 1) % n].y - hull[(i + 1) % n].x * hull[i].y).sum::<f64>() * 0.5
}

pub fn mesh_area(points: &[Point], tris: &[Triangle]) -> f64 {
    tris.iter()
        .map(|t| {
            let [a, b, c] = t.map(|v| points[v as usize]);
            0.5 * meshgen::orient(a, b, c)
        })
        .sum()
}
