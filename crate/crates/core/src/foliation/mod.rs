//! Region decompositions of open book foliations.
//!
//! A foliated surface is a cell complex: 0-cells are elliptic points (plus one
//! node per braid boundary component, which behaves like a negative corner),
//! 1-cells are a- and b-arc leaves, 2-cells are regions each carrying one
//! hyperbolic point. Time is ordinal: hyperbolic points hold distinct positions
//! in a circular order, and a leaf lives from the event of the region where it is
//! an after-leaf to the event of the region where it is a before-leaf.
//!
//! Region boundaries are cycles of sides. A forward side is a before-leaf
//! traversed from its positive end, a reverse side is an after-leaf traversed
//! from its negative end. A tile has the single cycle
//! `[before, after, before, after]` starting at a positive corner.

pub mod census;
pub mod circles;
pub mod fdtc;
pub mod graphs;
pub mod iso;
pub mod standard;
pub mod validate;

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{ObfError, Result};
use crate::page::Page;
use crate::sign::Sign;

pub use census::{census, Census};
pub use validate::{validate, ValidationReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SurfaceKind {
    Sphere,
    DiscWithBraidBoundary,
    General,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Elliptic {
    pub id: u32,
    pub sign: Sign,
    pub binding: String,
}

/// A component of the boundary of `F`, a closed braid with `strands` strands.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BraidBoundary {
    pub id: u32,
    pub strands: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hyperbolic {
    pub id: u32,
    pub sign: Sign,
    pub position: u32,
    /// Page walk from a vertex of one before-leaf to a vertex of the other.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub describing_arc: Option<Vec<u32>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LeafKind {
    A,
    B,
    C,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Leaf {
    pub id: u32,
    pub kind: LeafKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub from: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub to: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub curve: Option<String>,
    /// Odd slot `2r + 1` sits between the events of rank `r` and `r + 1`.
    pub time: u32,
    /// Known to cut off a disc of its page with a binding arc.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub boundary_parallel: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegionKind {
    Aa,
    Ab,
    Bb,
    Ac,
    Bc,
    Cc,
    DegenerateAa,
    DegenerateBc,
}

impl RegionKind {
    pub fn is_tile(self) -> bool {
        matches!(self, RegionKind::Aa | RegionKind::Ab | RegionKind::Bb)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Side {
    pub leaf: u32,
    pub forward: bool,
}

impl Side {
    pub fn fwd(leaf: u32) -> Side {
        Side {
            leaf,
            forward: true,
        }
    }

    pub fn rev(leaf: u32) -> Side {
        Side {
            leaf,
            forward: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Region {
    pub id: u32,
    pub kind: RegionKind,
    pub hyperbolic: u32,
    pub cycles: Vec<Vec<Side>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PunctureOnF {
    pub id: u32,
    pub region: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoliatedSurface {
    pub surface_kind: SurfaceKind,
    pub elliptics: Vec<Elliptic>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub braid_boundary: Vec<BraidBoundary>,
    pub hyperbolics: Vec<Hyperbolic>,
    pub leaves: Vec<Leaf>,
    pub regions: Vec<Region>,
    #[serde(default)]
    pub punctures: Vec<PunctureOnF>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub page: Option<Page>,
}

/// Corners of a tile: `[p1, n1, p2, n2]` counterclockwise.
pub type TileCorners = [u32; 4];

/// Lifetime of a leaf as event ranks. `None` for a leaf family without events.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Lifetime {
    pub birth: usize,
    pub death: usize,
}

impl Lifetime {
    /// Number of gaps the leaf survives; a leaf born and dying at one event lives a full turn.
    pub fn gaps(&self, n: usize) -> usize {
        let g = (self.death + n - self.birth) % n;
        if g == 0 {
            n
        } else {
            g
        }
    }

    /// Whether odd slot `slot` lies inside the lifetime.
    pub fn contains_slot(&self, slot: u32, n: usize) -> bool {
        if slot.is_multiple_of(2) {
            return false;
        }
        let rel = (slot as usize + 2 * n - 2 * self.birth) % (2 * n);
        rel > 0 && rel < 2 * self.gaps(n)
    }
}

impl FoliatedSurface {
    pub fn elliptic(&self, id: u32) -> Option<&Elliptic> {
        self.elliptics.iter().find(|e| e.id == id)
    }

    pub fn is_braid_node(&self, id: u32) -> bool {
        self.braid_boundary.iter().any(|b| b.id == id)
    }

    /// Sign of a node; braid boundary nodes count as negative corners.
    pub fn node_sign(&self, id: u32) -> Option<Sign> {
        if self.is_braid_node(id) {
            return Some(Sign::Neg);
        }
        self.elliptic(id).map(|e| e.sign)
    }

    pub fn leaf(&self, id: u32) -> Option<&Leaf> {
        self.leaves.iter().find(|l| l.id == id)
    }

    pub fn leaf_mut(&mut self, id: u32) -> Option<&mut Leaf> {
        self.leaves.iter_mut().find(|l| l.id == id)
    }

    pub fn region(&self, id: u32) -> Option<&Region> {
        self.regions.iter().find(|r| r.id == id)
    }

    pub fn hyperbolic(&self, id: u32) -> Option<&Hyperbolic> {
        self.hyperbolics.iter().find(|h| h.id == id)
    }

    pub fn hyperbolic_mut(&mut self, id: u32) -> Option<&mut Hyperbolic> {
        self.hyperbolics.iter_mut().find(|h| h.id == id)
    }

    pub fn region_sign(&self, r: &Region) -> Option<Sign> {
        self.hyperbolic(r.hyperbolic).map(|h| h.sign)
    }

    pub fn region_of_hyperbolic(&self, h: u32) -> Option<&Region> {
        self.regions.iter().find(|r| r.hyperbolic == h)
    }

    pub fn event_count(&self) -> usize {
        self.hyperbolics.len()
    }

    /// Hyperbolic ids in circular time order.
    pub fn event_order(&self) -> Vec<u32> {
        let mut hs: Vec<(u32, u32)> = self
            .hyperbolics
            .iter()
            .map(|h| (h.position, h.id))
            .collect();
        hs.sort_unstable();
        hs.into_iter().map(|(_, id)| id).collect()
    }

    pub fn event_rank(&self) -> HashMap<u32, usize> {
        self.event_order()
            .into_iter()
            .enumerate()
            .map(|(i, h)| (h, i))
            .collect()
    }

    /// Renumber positions to `0..n` keeping the circular order.
    pub fn normalize_positions(&mut self) {
        let rank = self.event_rank();
        for h in self.hyperbolics.iter_mut() {
            h.position = rank[&h.id] as u32;
        }
    }

    /// Traversal endpoints of a side: (start, end).
    pub fn side_ends(&self, s: Side) -> Option<(u32, u32)> {
        let l = self.leaf(s.leaf)?;
        let (a, b) = (l.from?, l.to?);
        Some(if s.forward { (a, b) } else { (b, a) })
    }

    pub fn tile_corners(&self, r: &Region) -> Option<TileCorners> {
        if !(r.kind.is_tile() || r.kind == RegionKind::DegenerateAa)
            || r.cycles.len() != 1
            || r.cycles[0].len() != 4
        {
            return None;
        }
        let c = &r.cycles[0];
        let (p1, n1) = self.side_ends(c[0])?;
        let (p2, n2) = self.side_ends(c[2])?;
        Some([p1, n1, p2, n2])
    }

    /// `(region where the leaf is born, region where it dies)`.
    pub fn leaf_regions(&self) -> HashMap<u32, (Option<u32>, Option<u32>)> {
        let mut m: HashMap<u32, (Option<u32>, Option<u32>)> = HashMap::new();
        for r in &self.regions {
            for s in r.cycles.iter().flatten() {
                let e = m.entry(s.leaf).or_default();
                if s.forward {
                    e.1 = Some(r.id);
                } else {
                    e.0 = Some(r.id);
                }
            }
        }
        m
    }

    pub fn lifetimes(&self) -> HashMap<u32, Lifetime> {
        let rank = self.event_rank();
        let hyp: HashMap<u32, u32> = self.regions.iter().map(|r| (r.id, r.hyperbolic)).collect();
        let mut out = HashMap::new();
        for (leaf, (b, d)) in self.leaf_regions() {
            if let (Some(b), Some(d)) = (b, d) {
                if let (Some(hb), Some(hd)) = (hyp.get(&b), hyp.get(&d)) {
                    if let (Some(&rb), Some(&rd)) = (rank.get(hb), rank.get(hd)) {
                        out.insert(
                            leaf,
                            Lifetime {
                                birth: rb,
                                death: rd,
                            },
                        );
                    }
                }
            }
        }
        out
    }

    /// Put every leaf's representative time just after its birth.
    pub fn assign_times(&mut self) {
        let life = self.lifetimes();
        for l in self.leaves.iter_mut() {
            l.time = life.get(&l.id).map_or(1, |lt| 2 * lt.birth as u32 + 1);
        }
    }

    /// Corner successors: at node `x`, before-leaf `l` is followed in time by after-leaf `l'`.
    /// Returned as `(node, before leaf) -> (after leaf, region)`.
    pub fn corner_successors(&self) -> Result<BTreeMap<(u32, u32), (u32, u32)>> {
        let mut out = BTreeMap::new();
        for r in &self.regions {
            for cyc in &r.cycles {
                if cyc.len() < 2 {
                    continue;
                }
                for i in 0..cyc.len() {
                    let (s, t) = (cyc[i], cyc[(i + 1) % cyc.len()]);
                    if s.forward == t.forward {
                        return Err(ObfError::Foliation(format!(
                            "region {} has consecutive sides of the same direction",
                            r.id
                        )));
                    }
                    let (_, x) = self.side_ends(s).ok_or_else(|| {
                        ObfError::Foliation(format!("leaf {} has no endpoints", s.leaf))
                    })?;
                    let (before, after) = if s.forward {
                        (s.leaf, t.leaf)
                    } else {
                        (t.leaf, s.leaf)
                    };
                    if out.insert((x, before), (after, r.id)).is_some() {
                        return Err(ObfError::Foliation(format!(
                            "leaf {before} has two successors at node {x}"
                        )));
                    }
                }
            }
        }
        Ok(out)
    }

    /// Number of region corners at each node.
    pub fn valences(&self) -> BTreeMap<u32, u32> {
        let mut v: BTreeMap<u32, u32> = self.elliptics.iter().map(|e| (e.id, 0)).collect();
        for b in &self.braid_boundary {
            v.insert(b.id, 0);
        }
        if let Ok(succ) = self.corner_successors() {
            for (x, _) in succ.keys() {
                *v.entry(*x).or_default() += 1;
            }
        }
        v
    }

    /// Regions meeting node `x`, one entry per corner, in time order around `x`.
    pub fn corners_at(&self, x: u32) -> Vec<(u32, u32)> {
        let Ok(succ) = self.corner_successors() else {
            return Vec::new();
        };
        let mut start = None;
        for (node, before) in succ.keys() {
            if *node == x {
                start = Some(*before);
                break;
            }
        }
        let Some(first) = start else {
            return Vec::new();
        };
        let mut out = Vec::new();
        let mut l = first;
        while let Some(&(next, region)) = succ.get(&(x, l)) {
            out.push((l, region));
            l = next;
            if l == first || out.len() > succ.len() {
                break;
            }
        }
        out
    }

    /// 1-cells: a- and b-leaves bounding some region.
    pub fn edge_count(&self) -> usize {
        let used: BTreeSet<u32> = self
            .regions
            .iter()
            .flat_map(|r| r.cycles.iter().flatten().map(|s| s.leaf))
            .collect();
        self.leaves
            .iter()
            .filter(|l| l.kind != LeafKind::C && used.contains(&l.id))
            .count()
    }

    pub fn euler_characteristic(&self) -> i64 {
        let regions: i64 = self.regions.iter().map(|r| 2 - r.cycles.len() as i64).sum();
        self.elliptics.len() as i64 - self.edge_count() as i64 + regions
    }

    pub fn next_leaf_id(&self) -> u32 {
        self.leaves.iter().map(|l| l.id + 1).max().unwrap_or(1)
    }

    pub fn next_node_id(&self) -> u32 {
        let e = self.elliptics.iter().map(|e| e.id + 1).max().unwrap_or(1);
        let b = self
            .braid_boundary
            .iter()
            .map(|b| b.id + 1)
            .max()
            .unwrap_or(1);
        e.max(b)
    }

    pub fn next_region_id(&self) -> u32 {
        self.regions.iter().map(|r| r.id + 1).max().unwrap_or(1)
    }

    pub fn next_hyperbolic_id(&self) -> u32 {
        self.hyperbolics.iter().map(|h| h.id + 1).max().unwrap_or(1)
    }

    /// Fractional Dehn twist coefficients recorded on the page.
    pub fn fdtc(&self) -> BTreeMap<String, crate::rational::Rational> {
        self.page
            .as_ref()
            .map(|p| p.surface.fdtc().clone())
            .unwrap_or_default()
    }

    /// Recompute tile kinds from their corners.
    pub fn retype_tiles(&mut self) {
        let kinds: Vec<Option<RegionKind>> = self
            .regions
            .iter()
            .map(|r| {
                if !r.kind.is_tile() {
                    return None;
                }
                let c = self.tile_corners(r)?;
                let braid = [c[1], c[3]]
                    .iter()
                    .filter(|&&x| self.is_braid_node(x))
                    .count();
                Some(match braid {
                    0 => RegionKind::Bb,
                    1 => RegionKind::Ab,
                    _ => RegionKind::Aa,
                })
            })
            .collect();
        for (r, k) in self.regions.iter_mut().zip(kinds) {
            if let Some(k) = k {
                r.kind = k;
            }
        }
    }

    /// Sort every list by id and rotate cycles to their canonical start.
    pub fn canonicalize(&mut self) {
        self.elliptics.sort_by_key(|e| e.id);
        self.braid_boundary.sort_by_key(|b| b.id);
        self.hyperbolics.sort_by_key(|h| h.id);
        self.leaves.sort_by_key(|l| l.id);
        self.punctures.sort_by_key(|p| p.id);
        for r in self.regions.iter_mut() {
            for cyc in r.cycles.iter_mut() {
                let n = cyc.len();
                if n == 0 {
                    continue;
                }
                let best = (0..n)
                    .filter(|&k| cyc[k].forward || n == 1)
                    .min_by_key(|&k| cyc[k].leaf)
                    .unwrap_or(0);
                cyc.rotate_left(best);
            }
            r.cycles
                .sort_by(|a, b| b.len().cmp(&a.len()).then(a.cmp(b)));
        }
        self.regions.sort_by_key(|r| r.id);
    }

    pub fn bb_only(&self) -> bool {
        self.regions.iter().all(|r| r.kind == RegionKind::Bb)
    }

    pub fn has_c_circles(&self) -> bool {
        self.leaves.iter().any(|l| l.kind == LeafKind::C)
    }

    /// Leaves at node `x` with the end they touch it at.
    pub fn leaves_at(&self, x: u32) -> Vec<u32> {
        self.leaves
            .iter()
            .filter(|l| l.from == Some(x) || l.to == Some(x))
            .map(|l| l.id)
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lifetime_slots() {
        let lt = Lifetime { birth: 1, death: 3 };
        assert_eq!(lt.gaps(4), 2);
        assert!(lt.contains_slot(3, 4));
        assert!(lt.contains_slot(5, 4));
        assert!(!lt.contains_slot(7, 4));
        assert!(!lt.contains_slot(1, 4));
        let wrap = Lifetime { birth: 3, death: 1 };
        assert_eq!(wrap.gaps(4), 2);
        assert!(wrap.contains_slot(7, 4));
        assert!(wrap.contains_slot(1, 4));
        assert!(!wrap.contains_slot(3, 4));
        let full = Lifetime { birth: 2, death: 2 };
        assert_eq!(full.gaps(4), 4);
        assert!((0..4).all(|r| full.contains_slot(2 * r + 1, 4)));
    }
}
