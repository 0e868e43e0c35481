//! Reader and writer for the `.node` / `.ele` text format used by Triangle.
//!
//! `.node`: header `<#points> <dim> <#attributes> <#boundary markers>`, then
//! one `index x y [attributes...] [marker]` line per point.
//! `.ele`: header `<#triangles> <nodes per triangle> <#attributes>`, then one
//! `index v1 v2 v3 [attributes...]` line per triangle.
//!
//! Anything after `#` is a comment. Inputs may be 0- or 1-based (detected from
//! the first point index); output is always 0-based. Attributes and boundary
//! markers are parsed and dropped.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use super::{LayoutKind, MeshStorage, Point, Triangle};
use crate::error::{Error, Result};

const NODE: &str = ".node";
const ELE: &str = ".ele";

/// Non-empty, comment-stripped lines with 1-based line numbers.
fn data_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let body = line.split('#').next().unwrap_or("");
        let toks: Vec<&str> = body.split_whitespace().collect();
        (!toks.is_empty()).then_some((i + 1, toks))
    })
}

fn parse_num<T: std::str::FromStr>(file: &'static str, line: usize, tok: &str, what: &str) -> Result<T> {
    tok.parse()
        .map_err(|_| Error::parse(file, line, format!("invalid {what} `{tok}`")))
}

fn parse_node(text: &str) -> Result<(Vec<Point>, u32)> {
    let mut lines = data_lines(text);
    let (hline, header) = lines
        .next()
        .ok_or_else(|| Error::parse(NODE, 1, "missing header"))?;
    if header.len() < 2 || header.len() > 4 {
        return Err(Error::parse(
            NODE,
            hline,
            "header must be `<#points> <dim> [<#attributes> [<#boundary markers>]]`",
        ));
    }
    let n: usize = parse_num(NODE, hline, header[0], "point count")?;
    let dim: usize = parse_num(NODE, hline, header[1], "dimension")?;
    if dim != 2 {
        return Err(Error::parse(NODE, hline, format!("dimension must be 2, got {dim}")));
    }
    let n_attr: usize = match header.get(2) {
        Some(t) => parse_num(NODE, hline, t, "attribute count")?,
        None => 0,
    };
    let n_marker: usize = match header.get(3) {
        Some(t) => parse_num(NODE, hline, t, "boundary marker count")?,
        None => 0,
    };
    if n_marker > 1 {
        return Err(Error::parse(NODE, hline, "at most one boundary marker per point"));
    }
    let expected = 3 + n_attr + n_marker;

    let mut points = Vec::with_capacity(n);
    let mut base = 0u32;
    let mut last_line = hline;
    for (line, toks) in lines {
        last_line = line;
        if points.len() == n {
            return Err(Error::parse(
                NODE,
                line,
                format!("count mismatch: header declares {n} points, found more"),
            ));
        }
        if toks.len() != expected {
            return Err(Error::parse(
                NODE,
                line,
                format!("expected {expected} fields, found {}", toks.len()),
            ));
        }
        let idx: u64 = parse_num(NODE, line, toks[0], "point index")?;
        if points.is_empty() {
            if idx > 1 {
                return Err(Error::parse(NODE, line, "first point index must be 0 or 1"));
            }
            base = idx as u32;
        }
        if idx != base as u64 + points.len() as u64 {
            return Err(Error::parse(
                NODE,
                line,
                format!("expected point index {}, found {idx}", base as usize + points.len()),
            ));
        }
        let x: f64 = parse_num(NODE, line, toks[1], "x coordinate")?;
        let y: f64 = parse_num(NODE, line, toks[2], "y coordinate")?;
        for t in &toks[3..] {
            parse_num::<f64>(NODE, line, t, "attribute")?;
        }
        points.push(Point::new(x, y));
    }
    if points.len() != n {
        return Err(Error::parse(
            NODE,
            last_line + 1,
            format!("count mismatch: header declares {n} points, found {}", points.len()),
        ));
    }
    Ok((points, base))
}

fn parse_ele(text: &str, base: u32) -> Result<Vec<Triangle>> {
    let mut lines = data_lines(text);
    let (hline, header) = lines
        .next()
        .ok_or_else(|| Error::parse(ELE, 1, "missing header"))?;
    if header.len() < 2 || header.len() > 3 {
        return Err(Error::parse(
            ELE,
            hline,
            "header must be `<#triangles> <nodes per triangle> [<#attributes>]`",
        ));
    }
    let n: usize = parse_num(ELE, hline, header[0], "triangle count")?;
    let per: usize = parse_num(ELE, hline, header[1], "nodes per triangle")?;
    if per != 3 {
        return Err(Error::parse(
            ELE,
            hline,
            format!("only 3 nodes per triangle are supported, got {per}"),
        ));
    }
    let n_attr: usize = match header.get(2) {
        Some(t) => parse_num(ELE, hline, t, "attribute count")?,
        None => 0,
    };
    let expected = 4 + n_attr;

    let mut tris = Vec::with_capacity(n);
    let mut tri_base = 0u64;
    let mut last_line = hline;
    for (line, toks) in lines {
        last_line = line;
        if tris.len() == n {
            return Err(Error::parse(
                ELE,
                line,
                format!("count mismatch: header declares {n} triangles, found more"),
            ));
        }
        if toks.len() != expected {
            return Err(Error::parse(
                ELE,
                line,
                format!("expected {expected} fields, found {}", toks.len()),
            ));
        }
        let idx: u64 = parse_num(ELE, line, toks[0], "triangle index")?;
        if tris.is_empty() {
            if idx > 1 {
                return Err(Error::parse(ELE, line, "first triangle index must be 0 or 1"));
            }
            tri_base = idx;
        }
        if idx != tri_base + tris.len() as u64 {
            return Err(Error::parse(
                ELE,
                line,
                format!("expected triangle index {}, found {idx}", tri_base + tris.len() as u64),
            ));
        }
        let mut tri = [0u32; 3];
        for k in 0..3 {
            let raw: u32 = parse_num(ELE, line, toks[1 + k], "vertex index")?;
            tri[k] = raw
                .checked_sub(base)
                .ok_or_else(|| Error::parse(ELE, line, format!("vertex index {raw} below base {base}")))?;
        }
        for t in &toks[4..] {
            parse_num::<f64>(ELE, line, t, "attribute")?;
        }
        tris.push(tri);
    }
    if tris.len() != n {
        return Err(Error::parse(
            ELE,
            last_line + 1,
            format!("count mismatch: header declares {n} triangles, found {}", tris.len()),
        ));
    }
    Ok(tris)
}

/// Parses a `.node` / `.ele` pair into a pre-topology mesh.
pub fn read_triangle_format(node_text: &str, ele_text: &str, layout: LayoutKind) -> Result<MeshStorage> {
    let (points, base) = parse_node(node_text)?;
    let tris = parse_ele(ele_text, base)?;
    MeshStorage::build(&points, &tris, layout)
}

/// Serializes a mesh as 0-based `.node` / `.ele` text. Coordinates use the
/// shortest representation that parses back to the same `f64`.
pub fn write_triangle_format(mesh: &MeshStorage) -> (String, String) {
    let mut node = String::with_capacity(mesh.n_vert() * 48);
    let _ = writeln!(node, "{} 2 0 0", mesh.n_vert());
    for (i, p) in mesh.points().into_iter().enumerate() {
        let _ = writeln!(node, "{i} {} {}", p.x, p.y);
    }
    let mut ele = String::with_capacity(mesh.n_trgl() * 24);
    let _ = writeln!(ele, "{} 3 0", mesh.n_trgl());
    for (i, [a, b, c]) in mesh.triangles().into_iter().enumerate() {
        let _ = writeln!(ele, "{i} {a} {b} {c}");
    }
    (node, ele)
}

fn with_ext(stem: &Path, ext: &str) -> PathBuf {
    let mut s = stem.as_os_str().to_owned();
    s.push(ext);
    PathBuf::from(s)
}

/// Reads `<stem>.node` and `<stem>.ele`.
pub fn read_triangle_files(stem: impl AsRef<Path>, layout: LayoutKind) -> Result<MeshStorage> {
    let stem = stem.as_ref();
    let (node_path, ele_path) = (with_ext(stem, NODE), with_ext(stem, ELE));
    let node = fs::read_to_string(&node_path).map_err(|e| Error::io(&node_path, e))?;
    let ele = fs::read_to_string(&ele_path).map_err(|e| Error::io(&ele_path, e))?;
    read_triangle_format(&node, &ele, layout)
}

/// Writes `<stem>.node` and `<stem>.ele`, returning both paths.
pub fn write_triangle_files(mesh: &MeshStorage, stem: impl AsRef<Path>) -> Result<(PathBuf, PathBuf)> {
    let stem = stem.as_ref();
    let (node, ele) = write_triangle_format(mesh);
    let (node_path, ele_path) = (with_ext(stem, NODE), with_ext(stem, ELE));
    fs::write(&node_path, node).map_err(|e| Error::io(&node_path, e))?;
    fs::write(&ele_path, ele).map_err(|e| Error::io(&ele_path, e))?;
    Ok((node_path, ele_path))
}
