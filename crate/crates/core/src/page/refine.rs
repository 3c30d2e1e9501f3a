//! Refinements of a page complex that carry curves along.

use super::curve::EmbeddedCurve;
use super::surface::CombinatorialSurface;
use crate::error::{ObfError, Result};

/// Insert a new vertex in the middle of edge `a-b`. Returns the refined surface
/// and the new vertex id (`vertex_count` of the input).
pub fn subdivide_edge(
    s: &CombinatorialSurface,
    a: u32,
    b: u32,
) -> Result<(CombinatorialSurface, u32)> {
    if s.complex().dart(a, b).is_none() {
        return Err(ObfError::Surface(format!("{a}-{b} is not an edge")));
    }
    let x = s.vertex_count();
    let mut faces = s.faces().to_vec();
    for f in faces.iter_mut() {
        let m = f.len();
        if let Some(i) = (0..m).find(|&i| {
            let (p, q) = (f[i], f[(i + 1) % m]);
            (p, q) == (a, b) || (p, q) == (b, a)
        }) {
            f.insert(i + 1, x);
        }
    }
    let out = CombinatorialSurface::with_hints(
        x + 1,
        faces,
        &s.label_hints(),
        s.punctures().to_vec(),
        s.fdtc().clone(),
    )?;
    Ok((out, x))
}

pub fn transport_subdivision(c: &EmbeddedCurve, a: u32, b: u32, x: u32) -> EmbeddedCurve {
    let mut walk = Vec::with_capacity(c.walk.len() + 1);
    let n = c.walk.len();
    for i in 0..n {
        walk.push(c.walk[i]);
        let next = if i + 1 < n {
            Some(c.walk[i + 1])
        } else if c.kind == super::curve::CurveKind::Circle {
            Some(c.walk[0])
        } else {
            None
        };
        if let Some(nx) = next {
            if (c.walk[i], nx) == (a, b) || (c.walk[i], nx) == (b, a) {
                walk.push(x);
            }
        }
    }
    EmbeddedCurve {
        kind: c.kind,
        walk,
        puncture_end: c.puncture_end,
    }
}

/// Split face `face` by a diagonal between its corners `i` and `j`. A puncture in
/// the face moves to the first half.
pub fn split_face(
    s: &CombinatorialSurface,
    face: usize,
    i: usize,
    j: usize,
) -> Result<CombinatorialSurface> {
    let f = s
        .faces()
        .get(face)
        .ok_or_else(|| ObfError::Surface(format!("no face {face}")))?
        .clone();
    let m = f.len();
    let (i, j) = (i.min(j), i.max(j));
    if j >= m || j - i < 2 || (i == 0 && j == m - 1) {
        return Err(ObfError::Surface(
            "diagonal must join non-adjacent corners".into(),
        ));
    }
    if s.complex().dart(f[i], f[j]).is_some() {
        return Err(ObfError::Surface(format!(
            "edge {}-{} already exists",
            f[i], f[j]
        )));
    }
    let first: Vec<u32> = f[i..=j].to_vec();
    let mut second: Vec<u32> = f[j..].to_vec();
    second.extend_from_slice(&f[..=i]);
    let mut faces = s.faces().to_vec();
    faces[face] = first;
    faces.push(second);
    CombinatorialSurface::with_hints(
        s.vertex_count(),
        faces,
        &s.label_hints(),
        s.punctures().to_vec(),
        s.fdtc().clone(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::page::build::{grid_column_arc, grid_disc};
    use crate::page::cut::classify_arc;

    #[test]
    fn subdivision_keeps_topology() {
        let s = grid_disc(3, &[4]).unwrap();
        let c = grid_column_arc(3, 1);
        let (a, b) = (c.walk[1], c.walk[2]);
        let (t, x) = subdivide_edge(&s, a, b).unwrap();
        assert_eq!(t.euler_characteristic(), 1);
        let c2 = transport_subdivision(&c, a, b, x);
        assert_eq!(c2.walk.len(), c.walk.len() + 1);
        c2.validate(&t).unwrap();
        assert_eq!(
            classify_arc(&s, &c).unwrap(),
            classify_arc(&t, &c2).unwrap()
        );
    }

    #[test]
    fn split_face_adds_an_edge() {
        let s = grid_disc(2, &[0]).unwrap();
        let t = split_face(&s, 0, 0, 2).unwrap();
        assert_eq!(t.faces().len(), 5);
        assert_eq!(t.euler_characteristic(), 1);
        assert!(split_face(&s, 0, 0, 1).is_err());
    }
}
