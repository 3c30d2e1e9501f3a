//! bc-annuli: innermost search and the degenerate annulus obstruction.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use super::{FoliatedSurface, LeafKind, RegionKind};
use crate::error::{Failure, ObfError, Result};
use crate::page::classify_arc;
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BcAnnulus {
    pub region: u32,
    pub circle: u32,
    /// Regions of the disc bounded by the c-circle on the annulus side.
    pub disc: BTreeSet<u32>,
}

/// Regions reachable from `start` through shared leaves other than `cut`.
pub fn side_of(f: &FoliatedSurface, start: u32, cut: u32) -> BTreeSet<u32> {
    let mut by_leaf: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
    for r in &f.regions {
        for s in r.cycles.iter().flatten() {
            by_leaf.entry(s.leaf).or_default().push(r.id);
        }
    }
    let mut seen = BTreeSet::from([start]);
    let mut queue = VecDeque::from([start]);
    while let Some(r) = queue.pop_front() {
        let Some(region) = f.region(r) else { continue };
        for s in region.cycles.iter().flatten() {
            if s.leaf == cut {
                continue;
            }
            for &q in &by_leaf[&s.leaf] {
                if seen.insert(q) {
                    queue.push_back(q);
                }
            }
        }
    }
    seen
}

fn circle_of(f: &FoliatedSurface, region: u32) -> Option<u32> {
    let r = f.region(region)?;
    r.cycles
        .iter()
        .flatten()
        .find(|s| f.leaf(s.leaf).map(|l| l.kind) == Some(LeafKind::C))
        .map(|s| s.leaf)
}

/// A bc-annulus whose c-circle bounds a disc containing it and no other c-circle.
/// Smallest disc first, then lowest region id.
pub fn find_innermost_bc_annulus(f: &FoliatedSurface) -> Option<BcAnnulus> {
    let mut best: Option<BcAnnulus> = None;
    for r in &f.regions {
        if !matches!(r.kind, RegionKind::Bc | RegionKind::DegenerateBc) {
            continue;
        }
        let Some(c) = circle_of(f, r.id) else {
            continue;
        };
        let disc = side_of(f, r.id, c);
        let clean = disc
            .iter()
            .filter(|&&q| q != r.id)
            .all(|&q| circle_of(f, q).is_none());
        if !clean {
            continue;
        }
        debug_assert!(disc
            .iter()
            .all(|&q| f.region(q).map(|x| x.kind) != Some(RegionKind::Cc)));
        let better = best
            .as_ref()
            .is_none_or(|b| (disc.len(), r.id) < (b.disc.len(), b.region));
        if better {
            best = Some(BcAnnulus {
                region: r.id,
                circle: c,
                disc,
            });
        }
    }
    best
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BindingBound {
    pub binding: String,
    pub fdtc: Option<Rational>,
    /// `|c| <= 1`, or unknown coefficient.
    pub within: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObstructionReport {
    pub region: u32,
    pub circle: u32,
    /// The c-circle has to be essential in its page.
    pub circle_must_be_essential: bool,
    pub bounds: Vec<BindingBound>,
    pub contradiction: bool,
}

/// Every binding met by a degenerate bc-annulus with separating b-arcs has `|c| <= 1`;
/// a larger coefficient on the input is a contradiction.
pub fn degenerate_bc_obstruction(
    f: &FoliatedSurface,
    region: u32,
    fdtc: &BTreeMap<String, Rational>,
) -> Result<ObstructionReport> {
    let r = f
        .region(region)
        .ok_or_else(|| ObfError::Foliation(format!("no region {region}")))?;
    if r.kind != RegionKind::DegenerateBc {
        return Err(ObfError::Guard(vec![Failure::new(
            "degenerate_bc",
            format!("region {region} is a {:?} region", r.kind),
        )]));
    }
    let circle = circle_of(f, region)
        .ok_or_else(|| ObfError::Foliation("annulus without c-circle".into()))?;
    let mut arcs = BTreeSet::new();
    let mut nodes = BTreeSet::new();
    for s in r.cycles.iter().flatten() {
        let l = f.leaf(s.leaf).unwrap();
        if l.kind == LeafKind::B {
            arcs.insert(l.id);
            nodes.extend([l.from, l.to].into_iter().flatten());
        }
    }
    if let Some(page) = &f.page {
        for &a in &arcs {
            let Some(name) = f.leaf(a).and_then(|l| l.curve.as_ref()) else {
                continue;
            };
            let class = classify_arc(&page.surface, page.curve(name)?)?;
            if !class.separating {
                return Err(ObfError::Guard(vec![Failure::new(
                    "separating",
                    format!("b-arc {a} of region {region} is non-separating"),
                )]));
            }
        }
    }
    let bindings: BTreeSet<String> = nodes
        .iter()
        .filter_map(|&x| f.elliptic(x))
        .map(|e| e.binding.clone())
        .collect();
    let one = Rational::integer(1);
    let bounds: Vec<BindingBound> = bindings
        .into_iter()
        .map(|b| {
            let c = fdtc.get(&b).copied();
            BindingBound {
                within: c.is_none_or(|c| c.abs() <= one),
                fdtc: c,
                binding: b,
            }
        })
        .collect();
    let contradiction = bounds.iter().any(|b| !b.within);
    Ok(ObstructionReport {
        region,
        circle,
        circle_must_be_essential: true,
        bounds,
        contradiction,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::foliation::standard::degenerate_bc_pair;

    #[test]
    fn no_circles_no_annulus() {
        assert!(
            find_innermost_bc_annulus(&crate::foliation::standard::two_tile_sphere()).is_none()
        );
    }

    #[test]
    fn degenerate_pair_each_side_is_innermost() {
        let f = degenerate_bc_pair("C1", "C2");
        let a = find_innermost_bc_annulus(&f).unwrap();
        assert_eq!(a.region, 1);
        assert_eq!(a.disc, BTreeSet::from([1]));
        assert_eq!(side_of(&f, 2, a.circle), BTreeSet::from([2]));
    }

    fn report(c: Rational) -> ObstructionReport {
        let f = degenerate_bc_pair("C1", "C2");
        let m = BTreeMap::from([("C1".to_string(), c)]);
        degenerate_bc_obstruction(&f, 1, &m).unwrap()
    }

    #[test]
    fn coefficient_bound() {
        assert!(report(Rational::new(3, 2)).contradiction);
        assert!(!report(Rational::integer(0)).contradiction);
        assert!(!report(Rational::integer(-1)).contradiction);
        assert!(report(Rational::integer(-2)).contradiction);
    }

    #[test]
    fn tile_is_not_a_degenerate_annulus() {
        let f = crate::foliation::standard::two_tile_sphere();
        assert!(degenerate_bc_obstruction(&f, 1, &BTreeMap::new()).is_err());
    }
}
