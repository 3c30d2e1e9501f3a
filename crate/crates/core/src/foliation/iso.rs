//! Isomorphism of region decompositions respecting types, signs and the circular
//! event order, by canonical relabeling from every possible starting corner.

use std::collections::{BTreeMap, VecDeque};

use serde::Serialize;

use super::{FoliatedSurface, LeafKind, RegionKind, Side};
use crate::sign::Sign;

#[derive(Debug, Serialize, PartialEq, Eq, PartialOrd, Ord)]
struct Encoded {
    regions: Vec<(RegionKind, Sign, usize, Vec<Vec<(u32, bool)>>, usize)>,
    leaves: Vec<(LeafKind, Option<u32>, Option<u32>)>,
    nodes: Vec<(bool, i32)>,
    loose: Vec<(LeafKind, Option<u32>, Option<u32>)>,
}

struct Labeler<'a> {
    f: &'a FoliatedSurface,
    leaves: BTreeMap<u32, u32>,
    nodes: BTreeMap<u32, u32>,
    node_list: Vec<u32>,
    leaf_list: Vec<u32>,
}

impl<'a> Labeler<'a> {
    fn node(&mut self, x: u32) -> u32 {
        let n = self.nodes.len() as u32;
        *self.nodes.entry(x).or_insert_with(|| {
            self.node_list.push(x);
            n
        })
    }

    fn leaf(&mut self, l: u32) -> u32 {
        let n = self.leaves.len() as u32;
        if let Some(&k) = self.leaves.get(&l) {
            return k;
        }
        self.leaves.insert(l, n);
        self.leaf_list.push(l);
        if let Some(leaf) = self.f.leaf(l) {
            for x in [leaf.from, leaf.to].into_iter().flatten() {
                self.node(x);
            }
        }
        n
    }
}

/// Rotate a region's cycles so that they start at `side` (moved back onto a forward side).
fn oriented_cycles(cycles: &[Vec<Side>], leaf: u32) -> Vec<Vec<Side>> {
    let mut out: Vec<Vec<Side>> = Vec::with_capacity(cycles.len());
    let mut rest = Vec::new();
    for cyc in cycles {
        if let Some(i) = cyc.iter().position(|s| s.leaf == leaf) {
            let n = cyc.len();
            let i = if cyc[i].forward || n == 1 {
                i
            } else {
                (i + n - 1) % n
            };
            let mut c = cyc.clone();
            c.rotate_left(i);
            out.push(c);
        } else {
            rest.push(cyc.clone());
        }
    }
    out.extend(rest);
    out
}

fn encode_from(f: &FoliatedSurface, start: u32, start_leaf: u32) -> Encoded {
    let rank = f.event_rank();
    let n = f.event_count().max(1);
    let base = f
        .region(start)
        .and_then(|r| rank.get(&r.hyperbolic))
        .copied()
        .unwrap_or(0);
    let mut lab = Labeler {
        f,
        leaves: BTreeMap::new(),
        nodes: BTreeMap::new(),
        node_list: vec![],
        leaf_list: vec![],
    };
    let mut region_ids: BTreeMap<u32, usize> = BTreeMap::new();
    let mut by_leaf: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
    for r in &f.regions {
        for s in r.cycles.iter().flatten() {
            by_leaf.entry(s.leaf).or_default().push(r.id);
        }
    }
    let mut regions = Vec::new();
    let mut queue = VecDeque::from([(start, start_leaf)]);
    region_ids.insert(start, 0);
    while let Some((rid, via)) = queue.pop_front() {
        let r = f.region(rid).unwrap();
        let cycles = oriented_cycles(&r.cycles, via);
        let mut enc = Vec::new();
        for cyc in &cycles {
            let mut ec = Vec::new();
            for s in cyc {
                ec.push((lab.leaf(s.leaf), s.forward));
                for &q in by_leaf.get(&s.leaf).into_iter().flatten() {
                    if !region_ids.contains_key(&q) {
                        region_ids.insert(q, region_ids.len());
                        queue.push_back((q, s.leaf));
                    }
                }
            }
            enc.push(ec);
        }
        let sign = f.region_sign(r).unwrap_or(Sign::Pos);
        let pos = rank.get(&r.hyperbolic).map_or(0, |&k| (k + n - base) % n);
        let punctures = f.punctures.iter().filter(|p| p.region == Some(rid)).count();
        regions.push((r.kind, sign, pos, enc, punctures));
    }
    let mut leaves = Vec::new();
    for &l in &lab.leaf_list.clone() {
        let leaf = f.leaf(l).unwrap();
        leaves.push((
            leaf.kind,
            leaf.from.map(|x| lab.nodes[&x]),
            leaf.to.map(|x| lab.nodes[&x]),
        ));
    }
    let unseen: Vec<_> = f
        .leaves
        .iter()
        .filter(|l| !lab.leaves.contains_key(&l.id))
        .collect();
    let mut loose: Vec<_> = unseen
        .into_iter()
        .map(|l| {
            (
                l.kind,
                l.from.map(|x| lab.node(x)),
                l.to.map(|x| lab.node(x)),
            )
        })
        .collect();
    loose.sort();
    for e in &f.elliptics {
        lab.node(e.id);
    }
    for b in &f.braid_boundary {
        lab.node(b.id);
    }
    let nodes = lab
        .node_list
        .iter()
        .map(|&x| match f.elliptic(x) {
            Some(e) => (false, e.sign.as_i32()),
            None => (
                true,
                f.braid_boundary
                    .iter()
                    .find(|b| b.id == x)
                    .map_or(0, |b| b.strands as i32),
            ),
        })
        .collect();
    Encoded {
        regions,
        leaves,
        nodes,
        loose,
    }
}

/// A relabeling-invariant key: equal keys iff the decompositions are isomorphic.
pub fn canonical_form(f: &FoliatedSurface) -> String {
    let mut best: Option<Encoded> = None;
    for r in &f.regions {
        for cyc in &r.cycles {
            for s in cyc.iter().filter(|s| s.forward || cyc.len() == 1) {
                let e = encode_from(f, r.id, s.leaf);
                if best.as_ref().is_none_or(|b| e < *b) {
                    best = Some(e);
                }
            }
        }
    }
    let enc = best.unwrap_or_else(|| {
        let mut lab = Labeler {
            f,
            leaves: BTreeMap::new(),
            nodes: BTreeMap::new(),
            node_list: vec![],
            leaf_list: vec![],
        };
        let mut loose: Vec<_> = f
            .leaves
            .iter()
            .map(|l| {
                (
                    l.kind,
                    l.from.map(|x| lab.node(x)),
                    l.to.map(|x| lab.node(x)),
                )
            })
            .collect();
        loose.sort();
        for e in &f.elliptics {
            lab.node(e.id);
        }
        let nodes = lab
            .node_list
            .iter()
            .map(|&x| (false, f.elliptic(x).map_or(0, |e| e.sign.as_i32())))
            .collect();
        Encoded {
            regions: vec![],
            leaves: vec![],
            nodes,
            loose,
        }
    });
    serde_json::to_string(&enc).expect("encoding is plain data")
}

pub fn isomorphic(a: &FoliatedSurface, b: &FoliatedSurface) -> bool {
    a.regions.len() == b.regions.len()
        && a.leaves.len() == b.leaves.len()
        && a.elliptics.len() == b.elliptics.len()
        && canonical_form(a) == canonical_form(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::foliation::standard::{split_sphere, two_tile_sphere};

    fn shuffled(f: &FoliatedSurface) -> FoliatedSurface {
        let mut g = f.clone();
        let node = |x: u32| 100 - x;
        let leaf = |x: u32| 50 + 3 * x;
        for e in g.elliptics.iter_mut() {
            e.id = node(e.id);
        }
        for l in g.leaves.iter_mut() {
            l.id = leaf(l.id);
            l.from = l.from.map(node);
            l.to = l.to.map(node);
        }
        for r in g.regions.iter_mut() {
            r.id += 7;
            for s in r.cycles.iter_mut().flatten() {
                s.leaf = leaf(s.leaf);
            }
            r.cycles[0].rotate_left(2);
        }
        for h in g.hyperbolics.iter_mut() {
            h.position += 5;
        }
        g.regions.reverse();
        g
    }

    #[test]
    fn relabeling_is_isomorphic() {
        for f in [two_tile_sphere(), split_sphere()] {
            assert!(isomorphic(&f, &shuffled(&f)));
        }
    }

    #[test]
    fn sign_flip_is_detected() {
        let f = two_tile_sphere();
        let mut g = f.clone();
        for h in g.hyperbolics.iter_mut() {
            h.sign = -h.sign;
        }
        // the two tiles swap roles, so the mirror is still isomorphic
        assert!(isomorphic(&f, &g));
        g.hyperbolics[0].sign = -g.hyperbolics[0].sign;
        assert!(!isomorphic(&f, &g));
    }
}
