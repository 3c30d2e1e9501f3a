//! Guarded rewrites of region decompositions: b-arc foliation change, exchange
//! moves and their inverses, and bypass moves. Every `apply_*` validates its
//! output and returns a fresh value together with a [`MoveRecord`].

mod bypass;
mod change;
pub mod exchange;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

pub use bypass::{apply_bypass, check_bypass, BypassWitness};
pub use change::{apply_foliation_change, check_foliation_change, tree_condition, ChangeOutcome};
pub use exchange::{apply_exchange, apply_exchange_inverse, check_exchange, ExchangeSite};

use crate::error::{Failure, ObfError, Result};
use crate::foliation::{census, validate, Census, FoliatedSurface, Region, RegionKind, Side};

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Applicability {
    pub ok: bool,
    pub failed_conditions: Vec<Failure>,
    /// Conditions that were satisfied in a noteworthy way or could not be checked.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Applicability {
    fn new() -> Self {
        Applicability {
            ok: true,
            ..Default::default()
        }
    }

    fn fail(&mut self, condition: &str, reason: impl Into<String>) {
        self.ok = false;
        self.failed_conditions.push(Failure::new(condition, reason));
    }

    fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    pub fn into_result(self) -> Result<Vec<String>> {
        if self.ok {
            Ok(self.notes)
        } else {
            Err(ObfError::Guard(self.failed_conditions))
        }
    }

    pub fn reasons(&self) -> String {
        self.failed_conditions
            .iter()
            .map(|f| f.to_string())
            .collect::<Vec<_>>()
            .join("; ")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MoveKind {
    FoliationChange,
    Exchange,
    ExchangeInverse,
    BypassRetro,
    BypassPro,
    RelocatePuncture,
    CapAndFlatten,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BraidEffect {
    None,
    ExchangeMoveOnL,
    StabDestabPair,
}

/// A move request: enough to replay the move on the state it was applied to.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "move")]
pub enum Move {
    FoliationChange {
        r1: u32,
        r2: u32,
        outcome: ChangeOutcome,
    },
    Exchange {
        v: u32,
    },
    ExchangeInverse {
        site: ExchangeSite,
    },
    Bypass {
        leaf: u32,
        witness: BypassWitness,
    },
    RelocatePuncture {
        puncture: u32,
        region: u32,
    },
    CapAndFlatten {
        regions: [u32; 2],
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveRecord {
    pub kind: MoveKind,
    pub parameters: Move,
    pub pre_census: Census,
    pub post_census: Census,
    pub braid_effect: BraidEffect,
    pub dividing_set_changed: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl MoveRecord {
    pub(crate) fn new(
        kind: MoveKind,
        parameters: Move,
        before: &FoliatedSurface,
        after: &FoliatedSurface,
    ) -> Self {
        MoveRecord {
            kind,
            parameters,
            pre_census: census(before),
            post_census: census(after),
            braid_effect: BraidEffect::None,
            dividing_set_changed: false,
            notes: Vec::new(),
        }
    }

    pub fn elliptic_delta(&self) -> i64 {
        self.post_census.elliptics.total() as i64 - self.pre_census.elliptics.total() as i64
    }

    pub fn hyperbolic_delta(&self) -> i64 {
        self.post_census.hyperbolics.total() as i64 - self.pre_census.hyperbolics.total() as i64
    }
}

/// Region pairs sharing a b-arc that pass [`check_foliation_change`].
pub fn foliation_change_sites(f: &FoliatedSurface) -> Vec<(u32, u32)> {
    let mut out: Vec<(u32, u32)> = f
        .leaf_regions()
        .into_values()
        .filter_map(|(b, d)| Some((b?, d?)))
        .filter(|&(b, d)| b != d && check_foliation_change(f, b, d).ok)
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Hexagons of opposite-signed tiles with the witness their type calls for.
pub fn bypass_sites(f: &FoliatedSurface) -> Vec<(u32, BypassWitness)> {
    let mut out = Vec::new();
    let mut leaves: Vec<u32> = f.leaves.iter().map(|l| l.id).collect();
    leaves.sort_unstable();
    for b in leaves {
        let Ok(h) = hexagon(f, b) else { continue };
        let (Some(s1), Some(s2)) = (
            f.hyperbolic(h.h1).map(|h| h.sign),
            f.hyperbolic(h.h2).map(|h| h.sign),
        ) else {
            continue;
        };
        if s1 == s2 {
            continue;
        }
        let (p, q) = if s1.is_pos() {
            (h.h1, h.h2)
        } else {
            (h.h2, h.h1)
        };
        let w = BypassWitness {
            sign: s1,
            p,
            q,
            sides: Vec::new(),
        };
        if check_bypass(f, b, &w).ok {
            out.push((b, w));
        }
    }
    out
}

/// Re-run the guard of `mv` on `f` and apply it.
pub fn apply_move(f: &FoliatedSurface, mv: &Move) -> Result<(FoliatedSurface, MoveRecord)> {
    match mv {
        Move::FoliationChange { r1, r2, outcome } => apply_foliation_change(f, *r1, *r2, *outcome),
        Move::Exchange { v } => apply_exchange(f, *v),
        Move::ExchangeInverse { site } => apply_exchange_inverse(f, site),
        Move::Bypass { leaf, witness } => apply_bypass(f, *leaf, witness),
        Move::RelocatePuncture { puncture, region } => {
            crate::reduce::relocate_puncture(f, *puncture, *region)
        }
        Move::CapAndFlatten { regions } => crate::reduce::cap_and_flatten(f, *regions),
    }
}

/// Normalize bookkeeping and refuse to hand out an invalid state.
pub(crate) fn finish(mut g: FoliatedSurface) -> Result<FoliatedSurface> {
    g.retype_tiles();
    g.normalize_positions();
    g.assign_times();
    g.canonicalize();
    let rep = validate(&g);
    if !rep.is_valid() {
        return Err(ObfError::Foliation(format!(
            "move would produce an invalid state: {}",
            rep.violations
                .iter()
                .map(|f| f.to_string())
                .collect::<Vec<_>>()
                .join("; ")
        )));
    }
    Ok(g)
}

pub(crate) fn tile(id: u32, hyperbolic: u32, sides: [u32; 4]) -> Region {
    Region {
        id,
        kind: RegionKind::Bb,
        hyperbolic,
        cycles: vec![vec![
            Side::fwd(sides[0]),
            Side::rev(sides[1]),
            Side::fwd(sides[2]),
            Side::rev(sides[3]),
        ]],
    }
}

/// Two tiles glued along a b-arc `b`, with `b` born in the first and dying in the second.
///
/// Corners `A..F` run counterclockwise; `b` joins `A` and `D`. The first tile is
/// `ABCD` (before-leaves `AB`, `CD`), the second `DEFA` (before-leaves `AD`, `EF`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hexagon {
    pub b: u32,
    pub r1: u32,
    pub r2: u32,
    pub h1: u32,
    pub h2: u32,
    /// `[A, B, C, D, E, F]`.
    pub nodes: [u32; 6],
    /// Sides `[AB, CB, CD, ED, EF, AF]` in boundary order.
    pub sides: [u32; 6],
}

impl Hexagon {
    /// Before-leaves on the page just ahead of the first event: `AB`, `CD`, `EF`.
    pub fn before_leaves(&self) -> [u32; 3] {
        [self.sides[0], self.sides[2], self.sides[4]]
    }
}

fn rotated(cycle: &[Side], leaf: u32, forward: bool, to: usize) -> Option<Vec<Side>> {
    let i = cycle
        .iter()
        .position(|s| s.leaf == leaf && s.forward == forward)?;
    let mut c = cycle.to_vec();
    c.rotate_left((i + 4 - to) % 4);
    Some(c)
}

/// The hexagon around `b`, or the failed shape conditions.
pub fn hexagon(f: &FoliatedSurface, b: u32) -> std::result::Result<Hexagon, Failure> {
    let bad = |r: String| Failure::new("hexagon", r);
    let (birth, death) = f.leaf_regions().get(&b).copied().unwrap_or_default();
    let (Some(r1), Some(r2)) = (
        birth.and_then(|r| f.region(r)),
        death.and_then(|r| f.region(r)),
    ) else {
        return Err(bad(format!(
            "leaf {b} is not born in one region and killed in another"
        )));
    };
    if r1.id == r2.id {
        return Err(bad(format!(
            "leaf {b} is born and dies in region {}",
            r1.id
        )));
    }
    for r in [r1, r2] {
        if f.tile_corners(r).is_none() || r.kind == RegionKind::DegenerateAa {
            return Err(bad(format!("region {} is not a tile", r.id)));
        }
    }
    let c1 = rotated(&r1.cycles[0], b, false, 3).unwrap();
    let c2 = rotated(&r2.cycles[0], b, true, 0).unwrap();
    let ends = |s: Side| f.side_ends(Side::fwd(s.leaf)).unwrap();
    let (a, bb) = ends(c1[0]);
    let (c, d) = ends(c1[2]);
    let (e, ff) = ends(c2[2]);
    let nodes = [a, bb, c, d, e, ff];
    let sides = [
        c1[0].leaf, c1[1].leaf, c1[2].leaf, c2[1].leaf, c2[2].leaf, c2[3].leaf,
    ];
    let distinct: BTreeSet<u32> = sides.iter().copied().chain([b]).collect();
    if distinct.len() != 7 {
        return Err(bad(format!(
            "regions {} and {} share more than the leaf {b}",
            r1.id, r2.id
        )));
    }
    Ok(Hexagon {
        b,
        r1: r1.id,
        r2: r2.id,
        h1: r1.hyperbolic,
        h2: r2.hyperbolic,
        nodes,
        sides,
    })
}

/// Make the events of `first` and `second` consecutive by sliding one of them
/// across events whose regions share no leaf with it. `None` when blocked.
pub(crate) fn make_adjacent(
    f: &FoliatedSurface,
    first: u32,
    second: u32,
) -> Option<FoliatedSurface> {
    let order = f.event_order();
    let n = order.len();
    let rank = f.event_rank();
    let (h1, h2) = (f.region(first)?.hyperbolic, f.region(second)?.hyperbolic);
    let (i1, i2) = (rank[&h1], rank[&h2]);
    if (i1 + 1) % n == i2 {
        return Some(f.clone());
    }
    let between: Vec<u32> = (1..(i2 + n - i1) % n)
        .map(|k| order[(i1 + k) % n])
        .collect();
    let leaves = |h: u32| -> BTreeSet<u32> {
        f.region_of_hyperbolic(h)
            .map(|r| r.cycles.iter().flatten().map(|s| s.leaf).collect())
            .unwrap_or_default()
    };
    let blocked = |h: u32| {
        let own = leaves(h);
        between.iter().any(|&x| !leaves(x).is_disjoint(&own))
    };
    let mut g = f.clone();
    let pos = |k: usize| 2 * k as u32 + 2;
    for (k, h) in order.iter().enumerate() {
        g.hyperbolic_mut(*h).unwrap().position = pos(k);
    }
    if !blocked(h2) {
        g.hyperbolic_mut(h2).unwrap().position = pos(i1) + 1;
    } else if !blocked(h1) {
        g.hyperbolic_mut(h1).unwrap().position = pos(i2) - 1;
    } else {
        return None;
    }
    g.normalize_positions();
    g.assign_times();
    Some(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::foliation::standard::two_tile_sphere;

    #[test]
    fn two_tiles_share_too_much_for_a_hexagon() {
        let f = two_tile_sphere();
        assert!(hexagon(&f, 1).is_err());
    }
}
