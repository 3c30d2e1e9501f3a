//! Dart structure derived from a list of oriented polygonal faces.
//!
//! Edge `e` (edges sorted by `(min, max)`) owns darts `2e` (min → max) and
//! `2e + 1` (max → min). A dart belongs to the interior face that traverses it,
//! or to a hole when no face does. Rotation at a vertex is
//! `sigma(d) = twin(prev(d))`, which lists outgoing darts counterclockwise.

use std::collections::HashMap;

use crate::error::{ObfError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cell {
    Face(usize),
    Hole(usize),
}

#[derive(Debug, Clone)]
pub struct Complex {
    pub vertex_count: u32,
    pub faces: Vec<Vec<u32>>,
    pub edges: Vec<(u32, u32)>,
    edge_index: HashMap<(u32, u32), u32>,
    pub dart_cell: Vec<Cell>,
    pub dart_next: Vec<u32>,
    pub dart_prev: Vec<u32>,
    pub holes: Vec<Vec<u32>>,
    /// Outgoing hole dart of each boundary vertex.
    pub hole_out: Vec<Option<u32>>,
    /// Some outgoing dart per used vertex.
    pub any_out: Vec<Option<u32>>,
}

pub fn twin(d: u32) -> u32 {
    d ^ 1
}

impl Complex {
    pub fn build(vertex_count: u32, faces: Vec<Vec<u32>>) -> Result<Complex> {
        let mut directed: HashMap<(u32, u32), usize> = HashMap::new();
        for (fi, f) in faces.iter().enumerate() {
            if f.len() < 3 {
                return Err(ObfError::Surface(format!(
                    "face {fi} has fewer than 3 corners"
                )));
            }
            for (i, &v) in f.iter().enumerate() {
                if v >= vertex_count {
                    return Err(ObfError::Surface(format!(
                        "face {fi} uses unknown vertex {v}"
                    )));
                }
                if f[..i].contains(&v) {
                    return Err(ObfError::Surface(format!("face {fi} repeats vertex {v}")));
                }
                let w = f[(i + 1) % f.len()];
                if directed.insert((v, w), fi).is_some() {
                    return Err(ObfError::Surface(format!(
                        "directed edge {v}->{w} used twice (faces overlap or orientations disagree)"
                    )));
                }
            }
        }
        let mut edges: Vec<(u32, u32)> = directed
            .keys()
            .map(|&(a, b)| (a.min(b), a.max(b)))
            .collect();
        edges.sort_unstable();
        edges.dedup();
        let edge_index: HashMap<(u32, u32), u32> = edges
            .iter()
            .enumerate()
            .map(|(i, &e)| (e, i as u32))
            .collect();
        let nd = edges.len() * 2;
        let tail = |d: usize| {
            if d.is_multiple_of(2) {
                edges[d / 2].0
            } else {
                edges[d / 2].1
            }
        };
        let head = |d: usize| {
            if d.is_multiple_of(2) {
                edges[d / 2].1
            } else {
                edges[d / 2].0
            }
        };

        let mut dart_cell = vec![Cell::Hole(usize::MAX); nd];
        let mut dart_next = vec![u32::MAX; nd];
        let mut hole_out: Vec<Option<u32>> = vec![None; vertex_count as usize];
        let mut any_out: Vec<Option<u32>> = vec![None; vertex_count as usize];
        let dart_of = |a: u32, b: u32| -> u32 {
            let e = edge_index[&(a.min(b), a.max(b))];
            if a < b {
                2 * e
            } else {
                2 * e + 1
            }
        };
        for d in 0..nd {
            let (a, b) = (tail(d), head(d));
            any_out[a as usize].get_or_insert(d as u32);
            match directed.get(&(a, b)) {
                Some(&fi) => {
                    dart_cell[d] = Cell::Face(fi);
                    let f = &faces[fi];
                    let pos = f.iter().position(|&x| x == b).unwrap();
                    let c = f[(pos + 1) % f.len()];
                    dart_next[d] = dart_of(b, c);
                }
                None => {
                    if hole_out[a as usize].replace(d as u32).is_some() {
                        return Err(ObfError::Surface(format!(
                            "vertex {a} touches the boundary more than once"
                        )));
                    }
                }
            }
        }
        for d in 0..nd {
            if dart_next[d] == u32::MAX {
                let b = head(d);
                dart_next[d] = hole_out[b as usize].expect("hole dart has a successor");
            }
        }
        let mut dart_prev = vec![u32::MAX; nd];
        for d in 0..nd {
            dart_prev[dart_next[d] as usize] = d as u32;
        }

        let mut holes = Vec::new();
        let mut seen = vec![false; nd];
        for d in 0..nd {
            if seen[d] || matches!(dart_cell[d], Cell::Face(_)) {
                continue;
            }
            let mut cyc = Vec::new();
            let mut x = d;
            while !seen[x] {
                seen[x] = true;
                cyc.push(x as u32);
                x = dart_next[x] as usize;
            }
            for &y in &cyc {
                dart_cell[y as usize] = Cell::Hole(holes.len());
            }
            holes.push(cyc);
        }

        let cx = Complex {
            vertex_count,
            faces,
            edges,
            edge_index,
            dart_cell,
            dart_next,
            dart_prev,
            holes,
            hole_out,
            any_out,
        };
        for v in 0..vertex_count {
            if let Some(d0) = cx.any_out[v as usize] {
                let degree = cx.degree_by_scan(v);
                let fan = cx.rotation_orbit(d0);
                if fan.len() != degree {
                    return Err(ObfError::Surface(format!(
                        "vertex {v} is not a manifold point"
                    )));
                }
            }
        }
        Ok(cx)
    }

    fn degree_by_scan(&self, v: u32) -> usize {
        self.edges
            .iter()
            .filter(|&&(a, b)| a == v || b == v)
            .count()
    }

    pub fn tail(&self, d: u32) -> u32 {
        let (a, b) = self.edges[(d / 2) as usize];
        if d.is_multiple_of(2) {
            a
        } else {
            b
        }
    }

    pub fn head(&self, d: u32) -> u32 {
        self.tail(twin(d))
    }

    pub fn dart(&self, a: u32, b: u32) -> Option<u32> {
        let e = *self.edge_index.get(&(a.min(b), a.max(b)))?;
        Some(if a < b { 2 * e } else { 2 * e + 1 })
    }

    pub fn edge_id(&self, a: u32, b: u32) -> Option<u32> {
        self.edge_index.get(&(a.min(b), a.max(b))).copied()
    }

    pub fn sigma(&self, d: u32) -> u32 {
        twin(self.dart_prev[d as usize])
    }

    pub fn rotation_orbit(&self, d0: u32) -> Vec<u32> {
        let mut out = vec![d0];
        let mut d = self.sigma(d0);
        while d != d0 {
            out.push(d);
            d = self.sigma(d);
            if out.len() > self.dart_cell.len() {
                break;
            }
        }
        out
    }

    /// Outgoing darts at `v` counterclockwise; for a boundary vertex the list starts
    /// right after the hole corner and ends with the hole dart.
    pub fn fan(&self, v: u32) -> Vec<u32> {
        match self.hole_out[v as usize] {
            Some(h) => {
                let mut f = self.rotation_orbit(self.sigma(h));
                debug_assert_eq!(*f.last().unwrap(), h);
                f.shrink_to_fit();
                f
            }
            None => self.any_out[v as usize]
                .map(|d| self.rotation_orbit(d))
                .unwrap_or_default(),
        }
    }

    pub fn is_boundary_vertex(&self, v: u32) -> bool {
        self.hole_out.get(v as usize).is_some_and(|h| h.is_some())
    }

    pub fn is_used(&self, v: u32) -> bool {
        self.any_out.get(v as usize).is_some_and(|d| d.is_some())
    }

    pub fn is_interior_edge(&self, a: u32, b: u32) -> bool {
        match self.dart(a, b) {
            Some(d) => {
                matches!(self.dart_cell[d as usize], Cell::Face(_))
                    && matches!(self.dart_cell[twin(d) as usize], Cell::Face(_))
            }
            None => false,
        }
    }

    pub fn used_vertex_count(&self) -> usize {
        self.any_out.iter().filter(|d| d.is_some()).count()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.used_vertex_count() as i64 - self.edges.len() as i64 + self.faces.len() as i64
    }

    /// Union-find labels of faces connected through shared edges.
    pub fn face_components(&self) -> (usize, Vec<usize>) {
        let n = self.faces.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let nx = p[y];
                p[y] = r;
                y = nx;
            }
            r
        }
        for e in 0..self.edges.len() {
            if let (Cell::Face(a), Cell::Face(b)) =
                (self.dart_cell[2 * e], self.dart_cell[2 * e + 1])
            {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                if ra != rb {
                    parent[ra] = rb;
                }
            }
        }
        let mut label = vec![usize::MAX; n];
        let mut roots: HashMap<usize, usize> = HashMap::new();
        for f in 0..n {
            let r = find(&mut parent, f);
            let k = roots.len();
            label[f] = *roots.entry(r).or_insert(k);
        }
        (roots.len(), label)
    }

    /// Interior face holding dart `d`, or the face across the edge for a hole dart.
    pub fn face_of_edge(&self, d: u32) -> usize {
        match self.dart_cell[d as usize] {
            Cell::Face(f) => f,
            Cell::Hole(_) => match self.dart_cell[twin(d) as usize] {
                Cell::Face(f) => f,
                Cell::Hole(_) => unreachable!("edge without a face"),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> Complex {
        Complex::build(4, vec![vec![0, 1, 2, 3]]).unwrap()
    }

    #[test]
    fn single_square_has_one_hole() {
        let c = square();
        assert_eq!(c.edges.len(), 4);
        assert_eq!(c.holes.len(), 1);
        assert_eq!(c.holes[0].len(), 4);
        assert_eq!(c.euler_characteristic(), 1);
    }

    #[test]
    fn rotation_is_a_permutation() {
        let c = Complex::build(
            5,
            vec![vec![0, 1, 4], vec![1, 2, 4], vec![2, 3, 4], vec![3, 0, 4]],
        )
        .unwrap();
        let mut hit = vec![0; c.dart_cell.len()];
        for d in 0..c.dart_cell.len() as u32 {
            hit[c.sigma(d) as usize] += 1;
        }
        assert!(hit.iter().all(|&h| h == 1));
        assert_eq!(c.fan(4).len(), 4);
        assert!(!c.is_boundary_vertex(4));
        assert!(c.is_boundary_vertex(0));
    }

    #[test]
    fn inconsistent_orientation_rejected() {
        assert!(Complex::build(4, vec![vec![0, 1, 2], vec![0, 1, 3]]).is_err());
    }

    #[test]
    fn pinched_vertex_rejected() {
        // two triangles sharing only vertex 0
        assert!(Complex::build(5, vec![vec![0, 1, 2], vec![0, 3, 4]]).is_err());
    }

    #[test]
    fn fan_ends_with_hole_dart() {
        let c = square();
        let fan = c.fan(0);
        assert_eq!(fan.len(), 2);
        assert_eq!(Some(*fan.last().unwrap()), c.hole_out[0]);
        assert_eq!(c.head(fan[0]), 1);
    }
}
