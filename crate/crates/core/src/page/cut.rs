//! Cutting a page along embedded curves.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use super::complex::{Cell, Complex};
use super::curve::{CurveKind, EmbeddedCurve};
use super::surface::CombinatorialSurface;
use crate::error::{ObfError, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentReport {
    pub genus: u32,
    pub boundary_count: usize,
    pub puncture_count: usize,
    pub euler_characteristic: i64,
    pub contains_binding: BTreeSet<String>,
    pub is_disc: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CutReport {
    pub components: Vec<ComponentReport>,
}

impl CutReport {
    pub fn total_euler_characteristic(&self) -> i64 {
        self.components.iter().map(|c| c.euler_characteristic).sum()
    }
}

/// Face list of a page cut open, with the copy map of each cut vertex.
#[derive(Debug, Clone)]
pub struct CutComplex {
    pub vertex_count: u32,
    pub faces: Vec<Vec<u32>>,
    /// For every vertex on a cut curve: (left copy, right copy). The left copy keeps the old id.
    pub copies: HashMap<u32, (u32, u32)>,
}

impl CutComplex {
    pub fn left(&self, v: u32) -> u32 {
        self.copies.get(&v).map_or(v, |c| c.0)
    }

    pub fn right(&self, v: u32) -> u32 {
        self.copies.get(&v).map_or(v, |c| c.1)
    }
}

/// Outgoing darts at `v` whose corner lies left of the curve passing through it.
fn left_darts(cx: &Complex, v: u32, fwd: u32, back: u32) -> HashSet<u32> {
    let fan = cx.fan(v);
    let start = fan
        .iter()
        .position(|&d| d == fwd)
        .expect("forward dart at vertex");
    let mut out = HashSet::new();
    for k in 0..fan.len() {
        let d = fan[(start + k) % fan.len()];
        if d == back {
            break;
        }
        if matches!(cx.dart_cell[d as usize], Cell::Face(_)) {
            out.insert(d);
        }
    }
    out
}

pub fn cut_complex(s: &CombinatorialSurface, curves: &[&EmbeddedCurve]) -> Result<CutComplex> {
    let cx = s.complex();
    let mut seen = HashSet::new();
    for c in curves {
        c.validate(s)?;
        if c.puncture_end.is_some() {
            return Err(ObfError::Curve(
                "cannot cut along an arc ending at a puncture".into(),
            ));
        }
        for &v in &c.walk {
            if !seen.insert(v) {
                return Err(ObfError::Curve(format!("cut curves meet at vertex {v}")));
            }
        }
    }
    let mut copies = HashMap::new();
    let mut left_of: HashMap<u32, HashSet<u32>> = HashMap::new();
    let mut next = s.vertex_count();
    for c in curves {
        let w = &c.walk;
        let k = w.len();
        for i in 0..k {
            let v = w[i];
            let (fwd, back) = match c.kind {
                CurveKind::Circle => (
                    cx.dart(v, w[(i + 1) % k]).unwrap(),
                    cx.dart(v, w[(i + k - 1) % k]).unwrap(),
                ),
                CurveKind::Arc => {
                    let hole = cx.hole_out[v as usize];
                    let fwd = if i + 1 < k {
                        cx.dart(v, w[i + 1]).unwrap()
                    } else {
                        hole.unwrap()
                    };
                    let back = if i > 0 {
                        cx.dart(v, w[i - 1]).unwrap()
                    } else {
                        hole.unwrap()
                    };
                    (fwd, back)
                }
            };
            left_of.insert(v, left_darts(cx, v, fwd, back));
            copies.insert(v, (v, next));
            next += 1;
        }
    }
    let mut faces = cx.faces.clone();
    for f in faces.iter_mut() {
        let m = f.len();
        let orig = f.clone();
        for i in 0..m {
            let v = orig[i];
            if let Some(left) = left_of.get(&v) {
                let d = cx.dart(v, orig[(i + 1) % m]).unwrap();
                if !left.contains(&d) {
                    f[i] = copies[&v].1;
                }
            }
        }
    }
    Ok(CutComplex {
        vertex_count: next,
        faces,
        copies,
    })
}

fn report(s: &CombinatorialSurface, cut: &CutComplex) -> Result<CutReport> {
    let cx = Complex::build(cut.vertex_count, cut.faces.clone())?;
    let (ncomp, label) = cx.face_components();
    let mut verts = vec![BTreeSet::new(); ncomp];
    let mut edges = vec![0i64; ncomp];
    let mut faces = vec![0i64; ncomp];
    let mut holes = vec![0usize; ncomp];
    let mut punctures = vec![0usize; ncomp];
    let mut bindings = vec![BTreeSet::new(); ncomp];
    for (f, poly) in cx.faces.iter().enumerate() {
        faces[label[f]] += 1;
        verts[label[f]].extend(poly.iter().copied());
    }
    for e in 0..cx.edges.len() {
        edges[label[cx.face_of_edge(2 * e as u32)]] += 1;
    }
    for h in &cx.holes {
        holes[label[cx.face_of_edge(h[0])]] += 1;
    }
    for p in s.punctures() {
        punctures[label[p.face]] += 1;
    }
    let orig = s.complex();
    for (hi, h) in orig.holes.iter().enumerate() {
        for &d in h {
            bindings[label[orig.face_of_edge(d)]].insert(s.bindings()[hi].clone());
        }
    }
    let mut components = Vec::with_capacity(ncomp);
    for c in 0..ncomp {
        let chi = verts[c].len() as i64 - edges[c] + faces[c];
        let twice_g = 2 - holes[c] as i64 - chi;
        debug_assert!(twice_g >= 0 && twice_g % 2 == 0);
        components.push(ComponentReport {
            genus: (twice_g / 2) as u32,
            boundary_count: holes[c],
            puncture_count: punctures[c],
            euler_characteristic: chi,
            contains_binding: std::mem::take(&mut bindings[c]),
            is_disc: twice_g == 0 && holes[c] == 1,
        });
    }
    Ok(CutReport { components })
}

pub fn cut_along(s: &CombinatorialSurface, c: &EmbeddedCurve) -> Result<CutReport> {
    cut_along_all(s, &[c])
}

/// Cut along pairwise vertex-disjoint curves at once.
pub fn cut_along_all(s: &CombinatorialSurface, curves: &[&EmbeddedCurve]) -> Result<CutReport> {
    let cut = cut_complex(s, curves)?;
    report(s, &cut)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Essentiality {
    BoundaryParallel,
    EssentialNotStrongly,
    StronglyEssential,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ArcClass {
    pub essentiality: Essentiality,
    pub separating: bool,
}

impl ArcClass {
    pub fn is_strongly_essential(&self) -> bool {
        self.essentiality == Essentiality::StronglyEssential
    }

    pub fn is_essential(&self) -> bool {
        self.essentiality != Essentiality::BoundaryParallel
    }
}

/// A non-separating arc is never boundary-parallel.
pub fn classify_arc(s: &CombinatorialSurface, b: &EmbeddedCurve) -> Result<ArcClass> {
    if b.kind != CurveKind::Arc {
        return Err(ObfError::Curve("classification applies to arcs".into()));
    }
    if b.puncture_end.is_some() {
        return Err(ObfError::Curve("arc ends at a puncture".into()));
    }
    let rep = cut_along(s, b)?;
    if rep.components.len() == 1 {
        return Ok(ArcClass {
            essentiality: Essentiality::StronglyEssential,
            separating: false,
        });
    }
    let discs: Vec<&ComponentReport> = rep.components.iter().filter(|c| c.is_disc).collect();
    let essentiality = if discs.iter().any(|c| c.puncture_count == 0) {
        Essentiality::BoundaryParallel
    } else if !discs.is_empty() {
        Essentiality::EssentialNotStrongly
    } else {
        Essentiality::StronglyEssential
    };
    Ok(ArcClass {
        essentiality,
        separating: true,
    })
}

/// Whether the union of the walks is a connected acyclic 1-subcomplex.
pub fn is_tree(s: &CombinatorialSurface, curves: &[&EmbeddedCurve]) -> Result<bool> {
    let mut verts = BTreeSet::new();
    let mut edges = BTreeSet::new();
    for c in curves {
        for &v in &c.walk {
            if v >= s.vertex_count() {
                return Err(ObfError::Curve(format!("unknown vertex {v}")));
            }
            verts.insert(v);
        }
        for (a, b) in c.edges() {
            if s.complex().dart(a, b).is_none() {
                return Err(ObfError::Curve(format!("{a}-{b} is not an edge")));
            }
            edges.insert((a.min(b), a.max(b)));
        }
    }
    if verts.is_empty() || verts.len() != edges.len() + 1 {
        return Ok(false);
    }
    let mut adj: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
    for &(a, b) in &edges {
        adj.entry(a).or_default().push(b);
        adj.entry(b).or_default().push(a);
    }
    let start = *verts.iter().next().unwrap();
    let mut stack = vec![start];
    let mut reached = BTreeSet::from([start]);
    while let Some(v) = stack.pop() {
        for &w in adj.get(&v).into_iter().flatten() {
            if reached.insert(w) {
                stack.push(w);
            }
        }
    }
    Ok(reached.len() == verts.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::page::build::{
        build_surface, grid_column_arc, grid_disc, grid_row_arc, grid_vertex,
    };

    #[test]
    fn disc_arc_splits_into_two_discs() {
        let s = build_surface(0, 1, 0).unwrap();
        let r = cut_along(&s, &grid_column_arc(3, 1)).unwrap();
        assert_eq!(r.components.len(), 2);
        assert!(r.components.iter().all(|c| c.is_disc));
        assert_eq!(r.total_euler_characteristic(), s.euler_characteristic() + 1);
        let cls = classify_arc(&s, &grid_column_arc(3, 1)).unwrap();
        assert_eq!(cls.essentiality, Essentiality::BoundaryParallel);
        assert!(cls.separating);
    }

    #[test]
    fn puncture_makes_arc_essential_not_strongly() {
        // puncture in face (0, 1): left of column 1
        let s = grid_disc(3, &[3]).unwrap();
        let cls = classify_arc(&s, &grid_column_arc(3, 1)).unwrap();
        assert_eq!(cls.essentiality, Essentiality::BoundaryParallel);
        let s = grid_disc(3, &[3, 5]).unwrap();
        let cls = classify_arc(&s, &grid_column_arc(3, 1)).unwrap();
        assert_eq!(cls.essentiality, Essentiality::EssentialNotStrongly);
    }

    #[test]
    fn crossing_arcs_cannot_be_cut_together() {
        let s = grid_disc(4, &[]).unwrap();
        assert!(cut_along_all(&s, &[&grid_column_arc(4, 2), &grid_row_arc(4, 2)]).is_err());
    }

    #[test]
    fn disjoint_arcs_cut_into_three() {
        let s = grid_disc(4, &[]).unwrap();
        let r = cut_along_all(&s, &[&grid_column_arc(4, 1), &grid_column_arc(4, 3)]).unwrap();
        assert_eq!(r.components.len(), 3);
        assert_eq!(r.total_euler_characteristic(), 3);
    }

    #[test]
    fn tree_checks() {
        let s = grid_disc(4, &[]).unwrap();
        let v = |i, j| grid_vertex(4, i, j);
        let a = grid_column_arc(4, 1);
        assert!(is_tree(&s, &[&a]).unwrap());
        let b = EmbeddedCurve::arc(vec![
            v(1, 0),
            v(2, 0),
            v(2, 1),
            v(2, 2),
            v(2, 3),
            v(2, 4),
            v(1, 4),
        ]);
        assert!(!is_tree(&s, &[&a, &b]).unwrap());
        let g = EmbeddedCurve::arc(vec![v(1, 2), v(2, 2), v(3, 2)]);
        let l = grid_column_arc(4, 3);
        assert!(is_tree(&s, &[&a, &g, &l]).unwrap());
        assert!(!is_tree(&s, &[&a, &l]).unwrap());
    }
}
