//! Moves that only touch the braid's intersection points with F, and the terminal
//! rewrite of two pierced degenerate bc-annuli.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::error::{Failure, ObfError, Result};
use crate::foliation::{FoliatedSurface, Leaf, LeafKind, RegionKind};
use crate::moves::{BraidEffect, Move, MoveKind, MoveRecord};
use crate::page::classify_arc;

fn guard(condition: &str, reason: impl Into<String>) -> ObfError {
    ObfError::Guard(vec![Failure::new(condition, reason)])
}

/// Regions sharing a leaf with each region.
pub(crate) fn region_adjacency(f: &FoliatedSurface) -> BTreeMap<u32, BTreeSet<u32>> {
    let mut by_leaf: BTreeMap<u32, BTreeSet<u32>> = BTreeMap::new();
    for r in &f.regions {
        for s in r.cycles.iter().flatten() {
            by_leaf.entry(s.leaf).or_default().insert(r.id);
        }
    }
    let mut adj: BTreeMap<u32, BTreeSet<u32>> =
        f.regions.iter().map(|r| (r.id, BTreeSet::new())).collect();
    for rs in by_leaf.values() {
        for &a in rs {
            for &b in rs {
                if a != b {
                    adj.get_mut(&a).unwrap().insert(b);
                }
            }
        }
    }
    adj
}

/// Shortest region path from `from` to `to` whose interior avoids `blocked`.
pub(crate) fn region_path(
    f: &FoliatedSurface,
    from: u32,
    to: u32,
    blocked: &BTreeSet<u32>,
) -> Option<Vec<u32>> {
    let adj = region_adjacency(f);
    let mut prev: BTreeMap<u32, u32> = BTreeMap::new();
    let mut queue = VecDeque::from([from]);
    let mut seen = BTreeSet::from([from]);
    while let Some(r) = queue.pop_front() {
        if r == to {
            let mut path = vec![to];
            let mut x = to;
            while let Some(&p) = prev.get(&x) {
                path.push(p);
                x = p;
            }
            path.reverse();
            return Some(path);
        }
        for &q in adj.get(&r).into_iter().flatten() {
            if (q == to || !blocked.contains(&q)) && seen.insert(q) {
                prev.insert(q, r);
                queue.push_back(q);
            }
        }
    }
    None
}

/// Lowest-id region outside `protected` adjacent to `from`.
pub(crate) fn escape_target(
    f: &FoliatedSurface,
    from: u32,
    protected: &BTreeSet<u32>,
) -> Option<u32> {
    region_adjacency(f)
        .get(&from)?
        .iter()
        .copied()
        .find(|q| !protected.contains(q))
}

/// Slide puncture `p` into region `target` along a path of adjacent regions.
/// The foliation is unchanged; the braid moves by an isotopy.
pub fn relocate_puncture(
    f: &FoliatedSurface,
    p: u32,
    target: u32,
) -> Result<(FoliatedSurface, MoveRecord)> {
    let pos = f
        .punctures
        .iter()
        .position(|x| x.id == p)
        .ok_or_else(|| guard("puncture", format!("no puncture {p}")))?;
    if f.region(target).is_none() {
        return Err(guard("region", format!("no region {target}")));
    }
    let from = f.punctures[pos]
        .region
        .ok_or_else(|| guard("puncture", format!("puncture {p} lies on no region")))?;
    let path = region_path(f, from, target, &BTreeSet::new()).ok_or_else(|| {
        guard(
            "path",
            format!("puncture {p} is trapped: no region path from {from} to {target}"),
        )
    })?;
    let mut g = f.clone();
    g.punctures[pos].region = Some(target);
    let mut rec = MoveRecord::new(
        MoveKind::RelocatePuncture,
        Move::RelocatePuncture {
            puncture: p,
            region: target,
        },
        f,
        &g,
    );
    let steps: Vec<String> = path.iter().map(|r| r.to_string()).collect();
    rec.notes
        .push(format!("region path {}", steps.join(" -> ")));
    rec.notes.push("braid isotopy; foliation unchanged".into());
    Ok((g, rec))
}

/// Cap the first degenerate bc-annulus with the disc its c-circle bounds and
/// flatten the extremum against its hyperbolic point, leaving a single family of
/// b-arcs between two elliptic points. The braid is fixed throughout.
pub fn cap_and_flatten(
    f: &FoliatedSurface,
    regions: [u32; 2],
) -> Result<(FoliatedSurface, MoveRecord)> {
    if f.regions.len() != 2 || regions[0] == regions[1] {
        return Err(guard("shape", "F must consist of exactly two regions"));
    }
    for id in regions {
        let r = f
            .region(id)
            .ok_or_else(|| guard("shape", format!("no region {id}")))?;
        if r.kind != RegionKind::DegenerateBc {
            return Err(guard(
                "shape",
                format!("region {id} is {:?}, not a degenerate bc-annulus", r.kind),
            ));
        }
        let pierced = f.punctures.iter().filter(|p| p.region == Some(id)).count();
        if pierced != 1 {
            return Err(guard(
                "punctures",
                format!("region {id} is pierced {pierced} times, not once"),
            ));
        }
    }
    let r1 = f.region(regions[0]).unwrap();
    let b = r1
        .cycles
        .iter()
        .flatten()
        .filter_map(|s| f.leaf(s.leaf))
        .find(|l| l.kind == LeafKind::B)
        .ok_or_else(|| guard("shape", format!("region {} has no b-arc", r1.id)))?
        .clone();
    if let Some(page) = &f.page {
        for l in f.leaves.iter().filter(|l| l.kind == LeafKind::B) {
            let Some(name) = &l.curve else { continue };
            if classify_arc(&page.surface, page.curve(name)?)?.is_essential() {
                return Err(guard(
                    "boundary_parallel",
                    format!("b-arc {} is essential", l.id),
                ));
            }
        }
    }
    let (Some(x), Some(y)) = (b.from, b.to) else {
        return Err(guard("shape", format!("b-arc {} has a free end", b.id)));
    };
    let mut g = f.clone();
    g.elliptics.retain(|e| e.id == x || e.id == y);
    g.hyperbolics.clear();
    g.regions.clear();
    g.leaves = vec![Leaf {
        curve: b.curve.clone(),
        ..b
    }];
    for p in g.punctures.iter_mut() {
        p.region = None;
    }
    let g = crate::moves::finish(g)?;
    let mut rec = MoveRecord::new(
        MoveKind::CapAndFlatten,
        Move::CapAndFlatten { regions },
        f,
        &g,
    );
    rec.braid_effect = BraidEffect::None;
    rec.notes.push(format!(
        "capped region {} by its c-circle disc and flattened the extremum",
        regions[0]
    ));
    Ok((g, rec))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::foliation::standard::{degenerate_bc_pair, two_tile_sphere};
    use crate::foliation::{census, PunctureOnF};

    fn pierced(mut f: FoliatedSurface, at: &[u32]) -> FoliatedSurface {
        f.punctures = at
            .iter()
            .enumerate()
            .map(|(i, &r)| PunctureOnF {
                id: i as u32 + 1,
                region: Some(r),
            })
            .collect();
        f
    }

    #[test]
    fn relocation_in_place_is_identity() {
        let f = pierced(two_tile_sphere(), &[1]);
        let (g, _) = relocate_puncture(&f, 1, 1).unwrap();
        assert_eq!(g, f);
    }

    #[test]
    fn relocation_across_one_leaf() {
        let f = pierced(two_tile_sphere(), &[1]);
        let (g, rec) = relocate_puncture(&f, 1, 2).unwrap();
        assert_eq!(g.punctures[0].region, Some(2));
        assert_eq!(rec.notes[0], "region path 1 -> 2");
        assert_eq!(g.regions, f.regions);
    }

    #[test]
    fn cap_and_flatten_leaves_two_elliptics() {
        let f = pierced(degenerate_bc_pair("C1", "C2"), &[1, 2]);
        let (g, rec) = cap_and_flatten(&f, [1, 2]).unwrap();
        let c = census(&g);
        assert_eq!((c.elliptics.total(), c.hyperbolics.total()), (2, 0));
        assert!(g.punctures.iter().all(|p| p.region.is_none()));
        assert_eq!(rec.kind, MoveKind::CapAndFlatten);
    }

    #[test]
    fn cap_needs_one_puncture_per_annulus() {
        let f = pierced(degenerate_bc_pair("C1", "C2"), &[1, 1]);
        assert!(cap_and_flatten(&f, [1, 2]).is_err());
    }
}
