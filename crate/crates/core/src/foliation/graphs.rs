//! Singular graphs `G++`, `G--` and the dividing set as the boundary of a collar of `G--`.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::FoliatedSurface;
use crate::error::{ObfError, Result};
use crate::sign::Sign;

/// A vertex of a singular graph: an elliptic point (or braid node) or a hyperbolic point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "type", content = "id")]
pub enum GraphNode {
    Elliptic(u32),
    Hyperbolic(u32),
}

impl std::fmt::Display for GraphNode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GraphNode::Elliptic(i) => write!(f, "e{i}"),
            GraphNode::Hyperbolic(i) => write!(f, "h{i}"),
        }
    }
}

/// Singular leaf pair through one hyperbolic point: `(corner, hyperbolic, corner)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SingularEdge {
    pub ends: (u32, u32),
    pub hyperbolic: u32,
    pub region: u32,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SingularGraph {
    pub sign: Option<Sign>,
    pub elliptics: BTreeSet<u32>,
    pub edges: Vec<SingularEdge>,
}

impl SingularGraph {
    pub fn hyperbolics(&self) -> BTreeSet<u32> {
        self.edges.iter().map(|e| e.hyperbolic).collect()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }
}

fn require_no_circles(f: &FoliatedSurface) -> Result<()> {
    if f.has_c_circles() {
        return Err(ObfError::Unsupported(
            "singular graphs need a foliation without c-circles".into(),
        ));
    }
    Ok(())
}

fn singular_graph(f: &FoliatedSurface, sign: Sign) -> Result<SingularGraph> {
    require_no_circles(f)?;
    let mut g = SingularGraph {
        sign: Some(sign),
        ..Default::default()
    };
    for r in &f.regions {
        if f.region_sign(r) != Some(sign) {
            continue;
        }
        let c = f
            .tile_corners(r)
            .ok_or_else(|| ObfError::Foliation(format!("region {} has no tile corners", r.id)))?;
        let (a, b) = if sign.is_pos() {
            (c[0], c[2])
        } else {
            (c[1], c[3])
        };
        g.edges.push(SingularEdge {
            ends: (a, b),
            hyperbolic: r.hyperbolic,
            region: r.id,
        });
    }
    for e in &f.elliptics {
        if e.sign == sign {
            g.elliptics.insert(e.id);
        }
    }
    if !sign.is_pos() {
        g.elliptics.extend(f.braid_boundary.iter().map(|b| b.id));
    }
    Ok(g)
}

/// `(G++, G--)`. Only tiles carry singular leaves joining like-signed corners.
pub fn singular_graphs(f: &FoliatedSurface) -> Result<(SingularGraph, SingularGraph)> {
    Ok((singular_graph(f, Sign::Pos)?, singular_graph(f, Sign::Neg)?))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DividingSet {
    /// Each component as the cyclic sequence of `G--` nodes it runs around, in normal form.
    pub circles: Vec<Vec<GraphNode>>,
    pub plus_regions: BTreeSet<u32>,
    pub minus_regions: BTreeSet<u32>,
}

impl DividingSet {
    pub fn component_count(&self) -> usize {
        self.circles.len()
    }
}

fn canonical_cycle(seq: &[GraphNode]) -> Vec<GraphNode> {
    let n = seq.len();
    let mut best: Option<Vec<GraphNode>> = None;
    let mut rev = seq.to_vec();
    rev.reverse();
    for s in [seq.to_vec(), rev] {
        for k in 0..n.max(1) {
            let mut r = s.clone();
            r.rotate_left(k % n.max(1));
            if best.as_ref().is_none_or(|b| r < *b) {
                best = Some(r);
            }
        }
    }
    best.unwrap_or_default()
}

/// Boundary components of a regular neighborhood of `g`, each as the cyclic node
/// sequence it follows. Rotation at elliptic nodes is the corner order around them.
fn collar_boundary(f: &FoliatedSurface, g: &SingularGraph) -> Result<Vec<Vec<GraphNode>>> {
    // dart k: edge k/2, from its hyperbolic towards end (k % 2)
    let mut rot: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
    let region_edge: BTreeMap<u32, usize> = g
        .edges
        .iter()
        .enumerate()
        .map(|(i, e)| (e.region, i))
        .collect();
    for &x in &g.elliptics {
        let mut ds = Vec::new();
        for (before, region) in f.corners_at(x) {
            let Some(&k) = region_edge.get(&region) else {
                continue;
            };
            let r = f
                .region(region)
                .ok_or_else(|| ObfError::Foliation(format!("unknown region {region}")))?;
            // s0 is the before-side at the first like-signed corner, s2 at the second
            let end = if r.cycles[0][0].leaf == before { 0 } else { 1 };
            ds.push(2 * k + end);
        }
        rot.insert(x, ds);
    }
    let n = 2 * g.edges.len();
    // next dart after arriving at the elliptic end of dart d: rotate there, then go back out through the hyperbolic
    let mut elliptic_next = vec![usize::MAX; n];
    for ds in rot.values() {
        for i in 0..ds.len() {
            elliptic_next[ds[i]] = ds[(i + 1) % ds.len()];
        }
    }
    if elliptic_next.contains(&usize::MAX) {
        return Err(ObfError::Foliation(
            "singular graph end missing from its node's corner order".into(),
        ));
    }
    let end_node = |d: usize| {
        let e = &g.edges[d / 2];
        if d.is_multiple_of(2) {
            e.ends.0
        } else {
            e.ends.1
        }
    };
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut seq = Vec::new();
        let mut d = start;
        while !seen[d] {
            seen[d] = true;
            seq.push(GraphNode::Hyperbolic(g.edges[d / 2].hyperbolic));
            seq.push(GraphNode::Elliptic(end_node(d)));
            // around the elliptic node, then out along the partner dart of that edge
            d = elliptic_next[d] ^ 1;
        }
        out.push(canonical_cycle(&seq));
    }
    for &x in &g.elliptics {
        if rot.get(&x).is_none_or(|d| d.is_empty()) {
            out.push(vec![GraphNode::Elliptic(x)]);
        }
    }
    out.sort();
    Ok(out)
}

pub fn dividing_set(f: &FoliatedSurface) -> Result<DividingSet> {
    let (gp, gm) = singular_graphs(f)?;
    let circles = collar_boundary(f, &gm)?;
    let plus_regions = f
        .regions
        .iter()
        .filter(|r| f.region_sign(r) == Some(Sign::Pos))
        .map(|r| r.id)
        .collect();
    let minus_regions = f
        .regions
        .iter()
        .filter(|r| f.region_sign(r) == Some(Sign::Neg))
        .map(|r| r.id)
        .collect();
    let ds = DividingSet {
        circles,
        plus_regions,
        minus_regions,
    };
    check_dividing_set(f, &gp, &gm, &ds)?;
    Ok(ds)
}

/// Mechanical checks: signs split across the two sides, Euler characteristics add
/// up, each b-arc crosses once, and on closed surfaces both collars share their boundary.
fn check_dividing_set(
    f: &FoliatedSurface,
    gp: &SingularGraph,
    gm: &SingularGraph,
    ds: &DividingSet,
) -> Result<()> {
    let bad = |m: String| {
        Err(ObfError::Foliation(format!(
            "dividing set check failed: {m}"
        )))
    };
    for h in gp.hyperbolics() {
        if f.hyperbolic(h).map(|h| h.sign) != Some(Sign::Pos) {
            return bad(format!("hyperbolic {h} in G++ is not positive"));
        }
    }
    for h in gm.hyperbolics() {
        if f.hyperbolic(h).map(|h| h.sign) != Some(Sign::Neg) {
            return bad(format!("hyperbolic {h} in G-- is not negative"));
        }
    }
    for l in &f.leaves {
        let (Some(a), Some(b)) = (l.from, l.to) else {
            continue;
        };
        if gp.elliptics.contains(&a) == gp.elliptics.contains(&b)
            || gm.elliptics.contains(&a) == gm.elliptics.contains(&b)
        {
            return bad(format!(
                "leaf {} does not cross from the positive to the negative side",
                l.id
            ));
        }
    }
    if f.braid_boundary.is_empty() {
        let chi_p = gp.elliptics.len() as i64 - gp.edges.len() as i64;
        let chi_m = gm.elliptics.len() as i64 - gm.edges.len() as i64;
        if chi_p + chi_m != f.euler_characteristic() {
            return bad(format!(
                "collars have Euler characteristics {chi_p} + {chi_m}"
            ));
        }
        let other = collar_boundary(f, gp)?;
        if other.len() != ds.circles.len() {
            return bad(format!(
                "positive collar has {} boundary circles, negative has {}",
                other.len(),
                ds.circles.len()
            ));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::foliation::standard::{split_sphere, two_tile_sphere};

    #[test]
    fn split_sphere_graphs_are_empty() {
        let (gp, gm) = singular_graphs(&split_sphere()).unwrap();
        assert!(gp.is_empty() && gm.is_empty());
        let ds = dividing_set(&split_sphere()).unwrap();
        assert_eq!(ds.circles, vec![vec![GraphNode::Elliptic(2)]]);
    }

    #[test]
    fn two_tile_sphere_has_one_edge_per_graph() {
        let f = two_tile_sphere();
        let (gp, gm) = singular_graphs(&f).unwrap();
        assert_eq!(gp.edges.len(), 1);
        assert_eq!(gm.edges.len(), 1);
        assert_eq!(gp.edges[0].ends, (1, 3));
        assert_eq!(gm.edges[0].ends, (4, 2));
        let ds = dividing_set(&f).unwrap();
        assert_eq!(ds.component_count(), 1);
        assert_eq!(ds.circles[0].len(), 4);
    }

    #[test]
    fn c_circles_rejected() {
        let f = crate::foliation::standard::degenerate_bc_pair("C1", "C1");
        assert!(singular_graphs(&f).is_err());
    }
}
