//! Plain-text mesh files: a `V F` header, `V` lines `x y` and `F` lines
//! `i j k` with 0-based vertex ids. Blank lines and `#` comments are skipped.

use std::fmt::Write as _;

use super::{MeshError, Triangulation2D};

fn parse_err(line: usize, message: impl Into<String>) -> MeshError {
    MeshError::Parse {
        line,
        message: message.into(),
    }
}

fn fields<T: std::str::FromStr>(line: usize, text: &str, n: usize) -> Result<Vec<T>, MeshError> {
    let parts: Vec<&str> = text.split_whitespace().collect();
    if parts.len() != n {
        return Err(parse_err(line, format!("expected {n} fields, found {}", parts.len())));
    }
    parts
        .iter()
        .map(|p| p.parse::<T>().map_err(|_| parse_err(line, format!("cannot parse `{p}`"))))
        .collect()
}

/// Reads a mesh; the domain is inferred from its boundary.
pub fn read_mesh(text: &str) -> Result<Triangulation2D, MeshError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let (hl, header) = lines.next().ok_or_else(|| parse_err(1, "missing `V F` header"))?;
    let counts: Vec<usize> = fields(hl, header, 2)?;
    let (nv, nf) = (counts[0], counts[1]);
    let mut vertices = Vec::with_capacity(nv);
    let mut faces = Vec::with_capacity(nf);
    for _ in 0..nv {
        let (ln, l) = lines.next().ok_or_else(|| parse_err(hl, "fewer vertex lines than declared"))?;
        let xy: Vec<f64> = fields(ln, l, 2)?;
        vertices.push([xy[0], xy[1]]);
    }
    for _ in 0..nf {
        let (ln, l) = lines.next().ok_or_else(|| parse_err(hl, "fewer face lines than declared"))?;
        let ijk: Vec<usize> = fields(ln, l, 3)?;
        faces.push([ijk[0], ijk[1], ijk[2]]);
    }
    if let Some((ln, _)) = lines.next() {
        return Err(parse_err(ln, "unexpected trailing content"));
    }
    Triangulation2D::from_faces(vertices, faces)
}

/// Writes a mesh with shortest round-trip float formatting.
pub fn write_mesh(t: &Triangulation2D) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{} {}", t.vertices().len(), t.len());
    for v in t.vertices() {
        let _ = writeln!(s, "{:?} {:?}", v[0], v[1]);
    }
    for f in t.simplices() {
        let [a, b, c] = f.vertex_ids;
        let _ = writeln!(s, "{a} {b} {c}");
    }
    s
}
