//! Canonical page complexes.
//!
//! `build_surface(g, r, k)` starts from an `n x n` grid of squares (vertex
//! `(i, j)` has id `j * (n + 1) + i`, face `(i, j)` has index `j * n + i`) and
//! glues 3-square bands onto perimeter edges: one band per extra binding
//! component, two interleaved bands per handle. Band vertices are numbered after
//! the grid in attachment order.

use super::curve::EmbeddedCurve;
use super::surface::{CombinatorialSurface, Puncture};
use crate::error::{ObfError, Result};

const BAND_LENGTH: u32 = 3;

pub fn grid_vertex(n: u32, i: u32, j: u32) -> u32 {
    j * (n + 1) + i
}

pub fn grid_faces(n: u32) -> Vec<Vec<u32>> {
    let mut faces = Vec::with_capacity((n * n) as usize);
    for j in 0..n {
        for i in 0..n {
            faces.push(vec![
                grid_vertex(n, i, j),
                grid_vertex(n, i + 1, j),
                grid_vertex(n, i + 1, j + 1),
                grid_vertex(n, i, j + 1),
            ]);
        }
    }
    faces
}

/// Perimeter edges of the grid, counterclockwise, each as its face traverses it.
fn perimeter(n: u32) -> Vec<(u32, u32)> {
    let v = |i, j| grid_vertex(n, i, j);
    let mut out = Vec::new();
    for i in 0..n {
        out.push((v(i, 0), v(i + 1, 0)));
    }
    for j in 0..n {
        out.push((v(n, j), v(n, j + 1)));
    }
    for i in (0..n).rev() {
        out.push((v(i + 1, n), v(i, n)));
    }
    for j in (0..n).rev() {
        out.push((v(0, j + 1), v(0, j)));
    }
    out
}

/// Grid disc with punctures placed in the listed faces (ids `1..`).
pub fn grid_disc(n: u32, puncture_faces: &[usize]) -> Result<CombinatorialSurface> {
    let faces = grid_faces(n);
    let punctures = puncture_faces
        .iter()
        .enumerate()
        .map(|(k, &face)| Puncture {
            id: k as u32 + 1,
            face,
        })
        .collect();
    CombinatorialSurface::new((n + 1) * (n + 1), faces, None, punctures)
}

/// `m x m` torus grid (vertex `(i, j)` has id `j * m + i`, indices mod `m`) with
/// the square at the origin removed as the single binding.
pub fn holed_torus_grid(m: u32) -> Result<CombinatorialSurface> {
    if m < 3 {
        return Err(ObfError::Surface(
            "torus grid needs at least 3 columns".into(),
        ));
    }
    let v = |i: u32, j: u32| (j % m) * m + (i % m);
    let mut faces = Vec::new();
    for j in 0..m {
        for i in 0..m {
            if (i, j) != (0, 0) {
                faces.push(vec![v(i, j), v(i + 1, j), v(i + 1, j + 1), v(i, j + 1)]);
            }
        }
    }
    CombinatorialSurface::new(m * m, faces, None, Vec::new())
}

/// Vertical grid arc along column `i`, bottom to top.
pub fn grid_column_arc(n: u32, i: u32) -> EmbeddedCurve {
    EmbeddedCurve::arc((0..=n).map(|j| grid_vertex(n, i, j)).collect())
}

/// Horizontal grid arc along row `j`, left to right.
pub fn grid_row_arc(n: u32, j: u32) -> EmbeddedCurve {
    EmbeddedCurve::arc((0..=n).map(|i| grid_vertex(n, i, j)).collect())
}

/// Glue a band onto boundary edges `e1` and `e2`, each given in boundary direction
/// (the face on the other side traverses it reversed).
fn attach_band(faces: &mut Vec<Vec<u32>>, next: &mut u32, e1: (u32, u32), e2: (u32, u32)) {
    let (a, b) = e1;
    let (c, d) = e2;
    let mut p = vec![a];
    let mut q = vec![b];
    for _ in 1..BAND_LENGTH {
        p.push(*next);
        q.push(*next + 1);
        *next += 2;
    }
    p.push(d);
    q.push(c);
    for i in 0..BAND_LENGTH as usize {
        faces.push(vec![p[i], q[i], q[i + 1], p[i + 1]]);
    }
}

pub fn build_surface(genus: u32, bindings: u32, punctures: u32) -> Result<CombinatorialSurface> {
    if bindings == 0 {
        return Err(ObfError::Surface(
            "a page needs at least one binding component".into(),
        ));
    }
    let slots = 4 * genus + 2 * (bindings - 1);
    let mut n = 3u32;
    while 4 * n < 2 * slots + 2 || n * n < punctures {
        n += 1;
    }
    let per = perimeter(n);
    let slot_edge = |s: u32| {
        let (a, b) = per[(2 * s + 1) as usize];
        (b, a)
    };
    let mut faces = grid_faces(n);
    let mut next = (n + 1) * (n + 1);
    for h in 0..genus {
        let s = 4 * h;
        attach_band(&mut faces, &mut next, slot_edge(s), slot_edge(s + 2));
        attach_band(&mut faces, &mut next, slot_edge(s + 1), slot_edge(s + 3));
    }
    for b in 0..bindings - 1 {
        let s = 4 * genus + 2 * b;
        attach_band(&mut faces, &mut next, slot_edge(s), slot_edge(s + 1));
    }
    let cells = n * n;
    let puncs = (0..punctures)
        .map(|t| Puncture {
            id: t + 1,
            face: ((t * cells) / punctures.max(1)) as usize,
        })
        .collect();
    let s = CombinatorialSurface::new(next, faces, None, puncs)?;
    debug_assert_eq!(s.genus(), genus);
    debug_assert_eq!(s.binding_count(), bindings as usize);
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn disc_has_euler_characteristic_one() {
        let s = build_surface(0, 1, 0).unwrap();
        assert_eq!(s.euler_characteristic(), 1);
        assert_eq!(s.genus(), 0);
    }

    #[test]
    fn once_holed_torus() {
        let s = build_surface(1, 1, 0).unwrap();
        assert_eq!(s.euler_characteristic(), -1);
        assert_eq!((s.genus(), s.binding_count()), (1, 1));
    }

    #[test]
    fn annulus_with_three_punctures() {
        let s = build_surface(0, 2, 3).unwrap();
        // independent count over the face list
        let mut edges = std::collections::BTreeSet::new();
        let mut verts = std::collections::BTreeSet::new();
        for f in s.faces() {
            for i in 0..f.len() {
                let (a, b) = (f[i], f[(i + 1) % f.len()]);
                edges.insert((a.min(b), a.max(b)));
                verts.insert(a);
            }
        }
        let chi = verts.len() as i64 - edges.len() as i64 + s.faces().len() as i64;
        assert_eq!(chi, 0);
        assert_eq!(s.binding_count(), 2);
        assert_eq!(s.punctures().len(), 3);
    }

    #[test]
    fn zero_bindings_is_an_error() {
        assert!(build_surface(1, 0, 0).is_err());
    }

    #[test]
    fn higher_topology() {
        for (g, r) in [(2, 1), (1, 3), (0, 4), (3, 2)] {
            let s = build_surface(g, r, 2).unwrap();
            assert_eq!((s.genus(), s.binding_count() as u32), (g, r));
            assert_eq!(s.euler_characteristic(), 2 - 2 * g as i64 - r as i64);
        }
    }

    #[test]
    fn holed_torus() {
        let s = holed_torus_grid(6).unwrap();
        assert_eq!((s.genus(), s.binding_count()), (1, 1));
        assert_eq!(s.boundary_vertices("C1").len(), 4);
    }

    #[test]
    fn deterministic() {
        assert_eq!(
            build_surface(1, 2, 1).unwrap(),
            build_surface(1, 2, 1).unwrap()
        );
    }
}
