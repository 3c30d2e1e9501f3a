//! Homotopy normal forms of walks.
//!
//! Unpunctured interior faces are filled 2-cells; holes and punctured faces are
//! not. Faces are collapsed through free edges until none remain, each eliminated
//! edge being rewritten as the rest of its face. A spanning tree of what is left
//! fixes the free generators, so every walk gets a freely reduced word and two
//! arcs with the same endpoints are homotopic rel endpoints exactly when their
//! words agree. Circles compare by the cyclically reduced word up to rotation and
//! inversion.

use std::collections::{BTreeSet, HashMap, VecDeque};

use super::complex::{twin, Cell};
use super::curve::{CurveKind, EmbeddedCurve};
use super::surface::CombinatorialSurface;
use crate::error::{ObfError, Result};

#[derive(Debug, Clone)]
enum EdgeWord {
    Tree,
    Generator(i32),
    /// Directed dart path (as darts) replacing dart `2e`.
    Eliminated(Vec<u32>),
}

#[derive(Debug, Clone)]
pub struct HomotopyBasis {
    words: Vec<EdgeWord>,
    memo: std::cell::RefCell<HashMap<u32, Vec<i32>>>,
    rank: usize,
}

fn reduce_into(out: &mut Vec<i32>, w: &[i32]) {
    for &g in w {
        if out.last() == Some(&-g) {
            out.pop();
        } else {
            out.push(g);
        }
    }
}

impl HomotopyBasis {
    pub fn new(s: &CombinatorialSurface) -> Self {
        let cx = s.complex();
        let ne = cx.edges.len();
        let punctured: BTreeSet<usize> = s.punctures().iter().map(|p| p.face).collect();
        let mut filled: Vec<bool> = (0..cx.faces.len())
            .map(|f| !punctured.contains(&f))
            .collect();
        let mut alive_edge = vec![true; ne];
        let mut words: Vec<Option<EdgeWord>> = vec![None; ne];

        let filled_sides = |e: usize, filled: &[bool]| -> Vec<(usize, u32)> {
            let mut out = Vec::new();
            for d in [2 * e as u32, 2 * e as u32 + 1] {
                if let Cell::Face(f) = cx.dart_cell[d as usize] {
                    if filled[f] {
                        out.push((f, d));
                    }
                }
            }
            out
        };
        let mut queue: VecDeque<usize> = (0..ne).collect();
        while let Some(e) = queue.pop_front() {
            if !alive_edge[e] {
                continue;
            }
            let sides = filled_sides(e, &filled);
            if sides.len() != 1 {
                continue;
            }
            let (f, d) = sides[0];
            // the rest of face f, from head(d) back around to tail(d)
            let mut rest = Vec::new();
            let mut x = cx.dart_next[d as usize];
            while x != d {
                rest.push(x);
                x = cx.dart_next[x as usize];
            }
            // express dart 2e
            let path: Vec<u32> = if d % 2 == 0 {
                rest.iter().rev().map(|&x| twin(x)).collect()
            } else {
                rest.clone()
            };
            words[e] = Some(EdgeWord::Eliminated(path));
            alive_edge[e] = false;
            filled[f] = false;
            for &x in &rest {
                queue.push_back((x / 2) as usize);
            }
        }
        debug_assert!(
            filled.iter().all(|&f| !f),
            "faces of a bounded surface collapse"
        );

        // spanning tree of the surviving graph
        let nv = cx.vertex_count as usize;
        let mut adj: Vec<Vec<(u32, usize)>> = vec![Vec::new(); nv];
        for e in 0..ne {
            if alive_edge[e] {
                let (a, b) = cx.edges[e];
                adj[a as usize].push((b, e));
                adj[b as usize].push((a, e));
            }
        }
        let mut in_tree = vec![false; ne];
        let mut reached = vec![false; nv];
        for root in 0..nv {
            if reached[root] || !cx.is_used(root as u32) {
                continue;
            }
            reached[root] = true;
            let mut q = VecDeque::from([root]);
            while let Some(v) = q.pop_front() {
                for &(w, e) in &adj[v] {
                    if !reached[w as usize] {
                        reached[w as usize] = true;
                        in_tree[e] = true;
                        q.push_back(w as usize);
                    }
                }
            }
        }
        let mut rank = 0;
        let words = words
            .into_iter()
            .enumerate()
            .map(|(e, w)| match w {
                Some(w) => w,
                None if in_tree[e] => EdgeWord::Tree,
                None => {
                    rank += 1;
                    EdgeWord::Generator(rank as i32)
                }
            })
            .collect();
        HomotopyBasis {
            words,
            memo: Default::default(),
            rank,
        }
    }

    /// Rank of the free fundamental group.
    pub fn rank(&self) -> usize {
        self.rank
    }

    fn dart_word(&self, d: u32) -> Vec<i32> {
        if d % 2 == 1 {
            let mut w = self.dart_word(d - 1);
            w.reverse();
            w.iter_mut().for_each(|g| *g = -*g);
            return w;
        }
        if let Some(w) = self.memo.borrow().get(&d) {
            return w.clone();
        }
        let w = match &self.words[(d / 2) as usize] {
            EdgeWord::Tree => Vec::new(),
            EdgeWord::Generator(g) => vec![*g],
            EdgeWord::Eliminated(path) => {
                let mut out = Vec::new();
                for &x in path {
                    reduce_into(&mut out, &self.dart_word(x));
                }
                out
            }
        };
        self.memo.borrow_mut().insert(d, w.clone());
        w
    }

    pub fn walk_word(
        &self,
        s: &CombinatorialSurface,
        walk: &[u32],
        closed: bool,
    ) -> Result<Vec<i32>> {
        let cx = s.complex();
        let mut out = Vec::new();
        let mut steps: Vec<(u32, u32)> = walk.windows(2).map(|p| (p[0], p[1])).collect();
        if closed && walk.len() > 1 {
            steps.push((walk[walk.len() - 1], walk[0]));
        }
        for (a, b) in steps {
            let d = cx
                .dart(a, b)
                .ok_or_else(|| ObfError::Curve(format!("{a}-{b} is not an edge")))?;
            reduce_into(&mut out, &self.dart_word(d));
        }
        Ok(out)
    }

    /// Normal form of a curve: endpoints plus reduced word for arcs, canonical
    /// cyclic word for circles.
    pub fn normal_form(&self, s: &CombinatorialSurface, c: &EmbeddedCurve) -> Result<CurveClass> {
        match c.kind {
            CurveKind::Arc => {
                let w = self.walk_word(s, &c.walk, false)?;
                Ok(CurveClass::Arc {
                    start: c.walk[0],
                    end: *c.walk.last().unwrap(),
                    puncture_end: c.puncture_end,
                    word: w,
                })
            }
            CurveKind::Circle => {
                let w = cyclic_reduce(self.walk_word(s, &c.walk, true)?);
                let inv: Vec<i32> = w.iter().rev().map(|g| -g).collect();
                Ok(CurveClass::Circle {
                    word: min_rotation(&w).min(min_rotation(&inv)),
                })
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum CurveClass {
    Arc {
        start: u32,
        end: u32,
        puncture_end: Option<u32>,
        word: Vec<i32>,
    },
    Circle {
        word: Vec<i32>,
    },
}

fn cyclic_reduce(mut w: Vec<i32>) -> Vec<i32> {
    while w.len() >= 2 && w[0] == -w[w.len() - 1] {
        w.pop();
        w.remove(0);
    }
    w
}

fn min_rotation(w: &[i32]) -> Vec<i32> {
    (0..w.len().max(1))
        .map(|k| {
            w.iter()
                .cycle()
                .skip(k)
                .take(w.len())
                .copied()
                .collect::<Vec<_>>()
        })
        .min()
        .unwrap_or_default()
}

/// Homotopy (rel endpoints for arcs, free and unoriented for circles).
pub fn same_class(s: &CombinatorialSurface, a: &EmbeddedCurve, b: &EmbeddedCurve) -> Result<bool> {
    let basis = HomotopyBasis::new(s);
    Ok(basis.normal_form(s, a)? == basis.normal_form(s, b)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::page::build::{build_surface, grid_disc, grid_vertex};

    #[test]
    fn rank_matches_topology() {
        // disc with k punctures has free rank k; S_{g,r} with k punctures has 2g + r - 1 + k
        assert_eq!(HomotopyBasis::new(&grid_disc(3, &[]).unwrap()).rank(), 0);
        assert_eq!(
            HomotopyBasis::new(&grid_disc(3, &[1, 4, 7]).unwrap()).rank(),
            3
        );
        assert_eq!(
            HomotopyBasis::new(&build_surface(1, 1, 0).unwrap()).rank(),
            2
        );
        assert_eq!(
            HomotopyBasis::new(&build_surface(1, 2, 2).unwrap()).rank(),
            5
        );
    }

    #[test]
    fn arcs_around_a_puncture_differ() {
        let s = grid_disc(3, &[4]).unwrap(); // center face (1, 1)
        let v = |i, j| grid_vertex(3, i, j);
        let below = EmbeddedCurve::arc(vec![v(0, 1), v(1, 1), v(2, 1), v(3, 1)]);
        let above = EmbeddedCurve::arc(vec![v(0, 1), v(1, 1), v(1, 2), v(2, 2), v(2, 1), v(3, 1)]);
        assert!(!same_class(&s, &below, &above).unwrap());
        let t = grid_disc(3, &[]).unwrap();
        assert!(same_class(&t, &below, &above).unwrap());
    }
}
