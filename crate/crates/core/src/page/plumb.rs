//! Plumbing an annulus onto a page along a properly embedded arc.
//!
//! The page is cut along `alpha` and a 5-ring grid annulus is glued in: ring 0
//! along the left copy of `alpha`, ring 4 along the right copy, columns
//! `0..=k` following the vertices of `alpha` and `BAND_COLUMNS` extra columns
//! forming the band. Ring 2 is the core circle.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use super::complex::Cell;
use super::curve::{CurveKind, EmbeddedCurve};
use super::cut::cut_complex;
use super::surface::CombinatorialSurface;
use crate::error::{ObfError, Result};

pub const RINGS: usize = 5;
const BAND_COLUMNS: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnnulusGrid {
    /// `rings[j][c]`: vertex at ring `j`, column `c`.
    pub rings: Vec<Vec<u32>>,
    /// Columns `0..alpha_columns` follow the plumbing arc.
    pub alpha_columns: usize,
}

impl AnnulusGrid {
    pub fn columns(&self) -> usize {
        self.rings[0].len()
    }

    pub fn locate(&self) -> HashMap<u32, (usize, usize)> {
        let mut m = HashMap::new();
        for (j, ring) in self.rings.iter().enumerate() {
            for (c, &v) in ring.iter().enumerate() {
                m.insert(v, (j, c));
            }
        }
        m
    }

    pub fn core(&self) -> EmbeddedCurve {
        EmbeddedCurve::circle(self.rings[2].clone())
    }

    /// Rung from ring 0 to ring 4 at a band column, an arc across the annulus.
    pub fn band_rung(&self, offset: usize) -> EmbeddedCurve {
        let c = self.alpha_columns + offset.min(BAND_COLUMNS - 1);
        EmbeddedCurve::arc((0..RINGS).map(|j| self.rings[j][c]).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BindingRelabel {
    pub label: String,
    pub from: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct Plumbing {
    pub surface: CombinatorialSurface,
    pub grid: AnnulusGrid,
    pub relabel: Vec<BindingRelabel>,
    alpha: Vec<u32>,
    /// `(alpha index, neighbor) -> true` when the neighbor lies left of alpha.
    side: HashMap<(usize, u32), bool>,
}

impl Plumbing {
    pub fn core(&self) -> EmbeddedCurve {
        self.grid.core()
    }

    /// Carry a curve of the original page onto the plumbed page. A curve crossing
    /// `alpha` at a vertex climbs the rung of that column.
    pub fn transport(&self, c: &EmbeddedCurve) -> Result<EmbeddedCurve> {
        let idx: HashMap<u32, usize> = self
            .alpha
            .iter()
            .enumerate()
            .map(|(i, &v)| (v, i))
            .collect();
        let w = &c.walk;
        let n = w.len();
        let closed = c.kind == CurveKind::Circle;
        let mut out = Vec::with_capacity(n + 4);
        for t in 0..n {
            let v = w[t];
            let Some(&i) = idx.get(&v) else {
                out.push(v);
                continue;
            };
            let prev = if t > 0 {
                Some(w[t - 1])
            } else if closed {
                Some(w[n - 1])
            } else {
                None
            };
            let next = if t + 1 < n {
                Some(w[t + 1])
            } else if closed {
                Some(w[0])
            } else {
                None
            };
            let side_of = |u: u32| -> Result<bool> {
                if idx.contains_key(&u) {
                    return Err(ObfError::Curve(format!(
                        "curve runs along the plumbing arc at {v}-{u}"
                    )));
                }
                self.side
                    .get(&(i, u))
                    .copied()
                    .ok_or_else(|| ObfError::Curve(format!("{v}-{u} is not an edge")))
            };
            let sp = prev.map(&side_of).transpose()?;
            let sn = next.map(&side_of).transpose()?;
            let column: Vec<u32> = (0..RINGS).map(|j| self.grid.rings[j][i]).collect();
            match (sp, sn) {
                (Some(true), Some(false)) => out.extend(column.iter().copied()),
                (Some(false), Some(true)) => out.extend(column.iter().rev().copied()),
                (Some(s), _) | (None, Some(s)) => {
                    out.push(if s { column[0] } else { column[RINGS - 1] })
                }
                (None, None) => out.push(column[0]),
            }
        }
        let moved = EmbeddedCurve {
            kind: c.kind,
            walk: out,
            puncture_end: c.puncture_end,
        };
        moved.validate(&self.surface)?;
        Ok(moved)
    }
}

pub fn plumb_annulus(s: &CombinatorialSurface, alpha: &EmbeddedCurve) -> Result<Plumbing> {
    if alpha.kind != CurveKind::Arc || alpha.puncture_end.is_some() {
        return Err(ObfError::Curve(
            "plumbing needs a properly embedded arc".into(),
        ));
    }
    let cut = cut_complex(s, &[alpha])?;
    let k1 = alpha.walk.len();
    let n = k1 + BAND_COLUMNS;
    let mut next = cut.vertex_count;
    let mut fresh = || {
        next += 1;
        next - 1
    };
    let mut rings = vec![vec![0u32; n]; RINGS];
    for c in 0..n {
        for j in 0..RINGS {
            rings[j][c] = if c < k1 && j == 0 {
                cut.left(alpha.walk[c])
            } else if c < k1 && j == RINGS - 1 {
                cut.right(alpha.walk[c])
            } else {
                fresh()
            };
        }
    }
    let mut faces = cut.faces.clone();
    for j in 0..RINGS - 1 {
        for c in 0..n {
            let d = (c + 1) % n;
            faces.push(vec![
                rings[j][d],
                rings[j][c],
                rings[j + 1][c],
                rings[j + 1][d],
            ]);
        }
    }

    // which side of alpha each neighbor sits on, read off the cut faces
    let mut side = HashMap::new();
    let orig = |x: u32| -> u32 {
        cut.copies
            .iter()
            .find(|(_, &(l, r))| l == x || r == x)
            .map_or(x, |(&v, _)| v)
    };
    let alpha_idx: HashMap<u32, usize> = alpha
        .walk
        .iter()
        .enumerate()
        .map(|(i, &v)| (v, i))
        .collect();
    for f in &cut.faces {
        let m = f.len();
        for t in 0..m {
            for (x, y) in [(f[t], f[(t + 1) % m]), (f[(t + 1) % m], f[t])] {
                let ox = orig(x);
                if let Some(&i) = alpha_idx.get(&ox) {
                    side.insert((i, orig(y)), x == cut.left(ox));
                }
            }
        }
    }

    let mut plumbed = CombinatorialSurface::new(next, faces, None, s.punctures().to_vec())?;

    // old binding labels met by each new hole
    let cx = s.complex();
    let new_cx = plumbed.complex();
    let mut met: Vec<BTreeSet<String>> = vec![BTreeSet::new(); new_cx.holes.len()];
    for (hi, h) in cx.holes.iter().enumerate() {
        for &d in h {
            let f = cx.face_of_edge(d);
            let (a, b) = (cx.tail(d), cx.head(d));
            let poly = &cut.faces[f];
            let m = poly.len();
            let pos = (0..m)
                .find(|&t| orig(poly[t]) == b && orig(poly[(t + 1) % m]) == a)
                .expect("boundary edge survives the cut");
            let (b2, a2) = (poly[pos], poly[(pos + 1) % m]);
            let nd = new_cx.dart(a2, b2).expect("edge present");
            if let Cell::Hole(nh) = new_cx.dart_cell[nd as usize] {
                met[nh].insert(s.bindings()[hi].clone());
            }
        }
    }
    let mut uses: BTreeMap<String, usize> = BTreeMap::new();
    let mut labels = Vec::with_capacity(met.len());
    let mut relabel = Vec::with_capacity(met.len());
    for m in &met {
        let base = if m.is_empty() {
            "A".to_string()
        } else {
            m.iter().cloned().collect::<Vec<_>>().join("+")
        };
        let count = uses.entry(base.clone()).or_insert(0);
        let label = if *count == 0 {
            base.clone()
        } else {
            format!("{base}{}", "'".repeat(*count))
        };
        *count += 1;
        labels.push(label.clone());
        relabel.push(BindingRelabel {
            label,
            from: m.iter().cloned().collect(),
        });
    }
    // a binding keeps its coefficient only when the plumbing leaves it alone
    let kept: BTreeMap<String, _> = s
        .fdtc()
        .iter()
        .filter(|(l, _)| {
            let touching: Vec<&BindingRelabel> =
                relabel.iter().filter(|r| r.from.contains(l)).collect();
            touching.len() == 1 && touching[0].from.len() == 1
        })
        .map(|(l, c)| (l.clone(), *c))
        .collect();
    plumbed.relabel(labels);
    plumbed.set_fdtc_map(kept);
    debug_assert_eq!(plumbed.euler_characteristic(), s.euler_characteristic() - 1);
    Ok(Plumbing {
        surface: plumbed,
        grid: AnnulusGrid {
            rings,
            alpha_columns: k1,
        },
        relabel,
        alpha: alpha.walk.clone(),
        side,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::page::build::{
        build_surface, grid_column_arc, grid_disc, grid_row_arc, grid_vertex,
    };
    use crate::page::cut::{classify_arc, cut_along};

    #[test]
    fn disc_becomes_annulus() {
        let s = grid_disc(3, &[]).unwrap();
        let p = plumb_annulus(&s, &grid_column_arc(3, 1)).unwrap();
        assert_eq!(p.surface.euler_characteristic(), 0);
        assert_eq!((p.surface.genus(), p.surface.binding_count()), (0, 2));
        p.core().validate(&p.surface).unwrap();
        // the core is essential: cutting along it leaves two annuli
        let r = cut_along(&p.surface, &p.core()).unwrap();
        assert_eq!(r.components.len(), 2);
        assert!(r.components.iter().all(|c| c.euler_characteristic == 0));
    }

    #[test]
    fn labels_split_with_suffix() {
        let s = grid_disc(3, &[]).unwrap();
        let p = plumb_annulus(&s, &grid_column_arc(3, 1)).unwrap();
        let mut l = p.surface.bindings().to_vec();
        l.sort();
        assert_eq!(l, vec!["C1".to_string(), "C1'".to_string()]);
    }

    #[test]
    fn annulus_traversing_arc_gives_torus() {
        let s = build_surface(0, 2, 0).unwrap();
        // find an arc joining the two holes through the grid
        let a = traversing_arc(&s);
        assert!(!classify_arc(&s, &a).unwrap().separating);
        let p = plumb_annulus(&s, &a).unwrap();
        assert_eq!((p.surface.genus(), p.surface.binding_count()), (1, 1));
    }

    #[test]
    fn annulus_separating_arc_gives_pants() {
        let s = build_surface(0, 2, 0).unwrap();
        let a = grid_column_arc(3, 1);
        assert!(classify_arc(&s, &a).unwrap().separating);
        let p = plumb_annulus(&s, &a).unwrap();
        assert_eq!((p.surface.genus(), p.surface.binding_count()), (0, 3));
    }

    #[test]
    fn transport_climbs_the_rung() {
        let s = grid_disc(3, &[]).unwrap();
        let alpha = grid_column_arc(3, 1);
        let p = plumb_annulus(&s, &alpha).unwrap();
        let beta = grid_row_arc(3, 1);
        let moved = p.transport(&beta).unwrap();
        assert_eq!(moved.walk.len(), beta.walk.len() + 4);
        let untouched = EmbeddedCurve::arc(vec![
            grid_vertex(3, 2, 0),
            grid_vertex(3, 2, 1),
            grid_vertex(3, 3, 1),
        ]);
        assert_eq!(p.transport(&untouched).unwrap(), untouched);
    }

    pub(crate) fn traversing_arc(s: &CombinatorialSurface) -> EmbeddedCurve {
        // breadth-first search through interior vertices between the two holes
        let cx = s.complex();
        let starts = s.boundary_vertices("C1");
        let targets: BTreeSet<u32> = s.boundary_vertices("C2").into_iter().collect();
        let mut prev: HashMap<u32, u32> = HashMap::new();
        let mut q: std::collections::VecDeque<u32> = starts.iter().copied().collect();
        let mut seen: BTreeSet<u32> = starts.iter().copied().collect();
        while let Some(v) = q.pop_front() {
            for u in s.neighbors(v) {
                if !cx.is_interior_edge(v, u) || seen.contains(&u) {
                    continue;
                }
                if targets.contains(&u) {
                    let mut walk = vec![u, v];
                    let mut x = v;
                    while let Some(&p) = prev.get(&x) {
                        walk.push(p);
                        x = p;
                    }
                    walk.reverse();
                    return EmbeddedCurve::arc(walk);
                }
                if cx.is_boundary_vertex(u) {
                    continue;
                }
                seen.insert(u);
                prev.insert(u, v);
                q.push_back(u);
            }
        }
        panic!("no traversing arc");
    }
}
