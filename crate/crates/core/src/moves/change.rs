//! b-arc foliation change: two like-signed tiles sharing one b-arc trade that
//! arc for another diagonal of their hexagon.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{
    finish, hexagon, make_adjacent, tile, Applicability, Hexagon, Move, MoveKind, MoveRecord,
};
use crate::error::Result;
use crate::foliation::{FoliatedSurface, Leaf, LeafKind, RegionKind};
use crate::page::{classify_arc, is_tree, EmbeddedCurve, Page};

/// Which diagonal the new common leaf takes: `EB` or `CF`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChangeOutcome {
    #[default]
    B,
    C,
}

/// Separating sufficiency, else the union of the three before-leaves and the two
/// describing arcs must be a tree in the page.
pub fn tree_condition(
    page: &Page,
    b: &EmbeddedCurve,
    leaves: [&EmbeddedCurve; 3],
    arcs: [&[u32]; 2],
) -> Result<(bool, &'static str)> {
    if classify_arc(&page.surface, b)?.separating {
        return Ok((true, "b separating"));
    }
    let gammas: Vec<EmbeddedCurve> = arcs
        .iter()
        .map(|w| EmbeddedCurve::arc(w.to_vec()))
        .collect();
    let mut all: Vec<&EmbeddedCurve> = leaves.to_vec();
    all.extend(gammas.iter());
    Ok((is_tree(&page.surface, &all)?, "direct tree test"))
}

fn analyze(
    f: &FoliatedSurface,
    r1: u32,
    r2: u32,
) -> (Applicability, Option<(Hexagon, FoliatedSurface)>) {
    let mut app = Applicability::new();
    let (Some(a), Some(b)) = (f.region(r1), f.region(r2)) else {
        app.fail("regions", format!("no regions {r1} and {r2}"));
        return (app, None);
    };
    if r1 == r2 {
        app.fail("regions", "the two regions coincide");
        return (app, None);
    }
    for r in [a, b] {
        if !matches!(r.kind, RegionKind::Ab | RegionKind::Bb) {
            app.fail(
                "cond(i)",
                format!("region {} is {:?}, not an ab- or bb-tile", r.id, r.kind),
            );
        }
    }
    if f.region_sign(a) != f.region_sign(b) {
        app.fail("cond(ii)", "signs differ");
    }
    let la: BTreeSet<u32> = a.cycles.iter().flatten().map(|s| s.leaf).collect();
    let lb: BTreeSet<u32> = b.cycles.iter().flatten().map(|s| s.leaf).collect();
    let common: Vec<u32> = la.intersection(&lb).copied().collect();
    let shared = match common.as_slice() {
        [x] if f.leaf(*x).map(|l| l.kind) == Some(LeafKind::B) => Some(*x),
        [x] => {
            app.fail("cond(iii)", format!("common leaf {x} is not a b-arc"));
            None
        }
        _ => {
            app.fail(
                "cond(iii)",
                format!(
                    "regions share {} leaves, not exactly one b-arc",
                    common.len()
                ),
            );
            None
        }
    };
    if !app.ok {
        return (app, None);
    }
    let hex = match hexagon(f, shared.unwrap()) {
        Ok(h) => h,
        Err(e) => {
            app.fail(&e.condition, e.reason);
            return (app, None);
        }
    };
    let Some(g) = make_adjacent(f, hex.r1, hex.r2) else {
        app.fail(
            "cond(iv)",
            "the two events cannot be brought onto adjacent pages",
        );
        return (app, None);
    };
    match tree_check(&g, &hex) {
        Ok(Some(how)) => app.note(format!("tree condition: {how}")),
        Ok(None) => app.note("tree test skipped: no page curves"),
        Err(reason) => app.fail("tree", reason),
    }
    (app, Some((hex, g)))
}

fn tree_check(
    f: &FoliatedSurface,
    hex: &Hexagon,
) -> std::result::Result<Option<&'static str>, String> {
    let Some(page) = &f.page else { return Ok(None) };
    let curve = |l: u32| {
        f.leaf(l)
            .and_then(|l| l.curve.as_ref())
            .and_then(|c| page.curves.get(c))
    };
    let (Some(b), Some(l1), Some(l3), Some(l5)) = (
        curve(hex.b),
        curve(hex.sides[0]),
        curve(hex.sides[2]),
        curve(hex.sides[4]),
    ) else {
        return Ok(None);
    };
    let arc = |h: u32| f.hyperbolic(h).and_then(|h| h.describing_arc.clone());
    let (g1, g2) = (arc(hex.h1), arc(hex.h2));
    if classify_arc(&page.surface, b)
        .map_err(|e| e.to_string())?
        .separating
    {
        return Ok(Some("b separating"));
    }
    let (Some(g1), Some(g2)) = (g1, g2) else {
        return Err("b is non-separating and a describing arc is missing".into());
    };
    match tree_condition(page, b, [l1, l3, l5], [&g1, &g2]) {
        Ok((true, how)) => Ok(Some(how)),
        Ok((false, _)) => Err("tree test failed".into()),
        Err(e) => Err(e.to_string()),
    }
}

pub fn check_foliation_change(f: &FoliatedSurface, r1: u32, r2: u32) -> Applicability {
    analyze(f, r1, r2).0
}

pub fn apply_foliation_change(
    f: &FoliatedSurface,
    r1: u32,
    r2: u32,
    outcome: ChangeOutcome,
) -> Result<(FoliatedSurface, MoveRecord)> {
    let (app, site) = analyze(f, r1, r2);
    let notes = app.into_result()?;
    let (hex, mut g) = site.unwrap();
    let [_, b_, c, _, e, ff] = hex.nodes;
    let [ab, cb, cd, ed, ef, af] = hex.sides;
    let l = g.next_leaf_id();
    let (from, to, first, second) = match outcome {
        ChangeOutcome::B => (e, b_, [ef, af, ab, l], [cd, ed, l, cb]),
        ChangeOutcome::C => (c, ff, [cd, ed, ef, l], [ab, cb, l, af]),
    };
    let kind = if g.is_braid_node(to) {
        LeafKind::A
    } else {
        LeafKind::B
    };
    g.leaves.retain(|x| x.id != hex.b);
    g.leaves.push(Leaf {
        id: l,
        kind,
        from: Some(from),
        to: Some(to),
        curve: None,
        time: 1,
        boundary_parallel: false,
    });
    for r in g.regions.iter_mut() {
        if r.id == hex.r1 {
            *r = tile(hex.r1, hex.h1, first);
        } else if r.id == hex.r2 {
            *r = tile(hex.r2, hex.h2, second);
        }
    }
    for h in [hex.h1, hex.h2] {
        g.hyperbolic_mut(h).unwrap().describing_arc = None;
    }
    let g = finish(g)?;
    let mut rec = MoveRecord::new(
        MoveKind::FoliationChange,
        Move::FoliationChange { r1, r2, outcome },
        f,
        &g,
    );
    rec.notes = notes;
    rec.notes
        .push(format!("b-arc {} replaced by leaf {l}", hex.b));
    Ok((g, rec))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::foliation::standard::{elliptic, from_tiles, TileSpec};
    use crate::sign::Sign;

    /// An open hexagon: two tiles glued along leaf 7 (`1 -> 4`).
    fn hexagon_sphere(second: Sign) -> FoliatedSurface {
        let elliptics = (1..=6)
            .map(|i| elliptic(i, if i % 2 == 1 { Sign::Pos } else { Sign::Neg }, "C1"))
            .collect();
        let leaves = [
            (1, 1, 2),
            (2, 3, 2),
            (3, 3, 4),
            (4, 5, 4),
            (5, 5, 6),
            (6, 1, 6),
            (7, 1, 4),
        ];
        let tiles = [
            TileSpec {
                sides: [1, 2, 3, 7],
                sign: Sign::Pos,
            },
            TileSpec {
                sides: [7, 4, 5, 6],
                sign: second,
            },
        ];
        from_tiles(elliptics, &leaves, &tiles)
    }

    #[test]
    fn like_signed_hexagon_is_recognized() {
        let f = hexagon_sphere(Sign::Pos);
        let h = hexagon(&f, 7).unwrap();
        assert_eq!(h.nodes, [1, 2, 3, 4, 5, 6]);
        assert_eq!(h.sides, [1, 2, 3, 4, 5, 6]);
    }

    #[test]
    fn opposite_signs_fail_condition_two() {
        let f = hexagon_sphere(Sign::Neg);
        let app = check_foliation_change(&f, 1, 2);
        assert!(!app.ok);
        assert!(app
            .failed_conditions
            .iter()
            .any(|c| c.condition == "cond(ii)"));
    }
}
