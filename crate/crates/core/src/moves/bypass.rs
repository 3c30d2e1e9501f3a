//! Bypass moves: two opposite-signed tiles sharing a b-arc swap the heights of
//! their hyperbolic points along a supplied bypass rectangle.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{
    finish, hexagon, make_adjacent, tile, Applicability, Hexagon, Move, MoveKind, MoveRecord,
};
use crate::error::Result;
use crate::foliation::graphs::dividing_set;
use crate::foliation::FoliatedSurface;
use crate::movie::HexagonType;
use crate::sign::Sign;

/// Evidence that a bypass rectangle exists. Existence is never searched for.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BypassWitness {
    pub sign: Sign,
    /// The positive hyperbolic point of the hexagon.
    pub p: u32,
    /// The negative hyperbolic point of the hexagon.
    pub q: u32,
    /// Page walks of the rectangle sides, which must stay off every leaf curve.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sides: Vec<Vec<u32>>,
}

fn analyze(
    f: &FoliatedSurface,
    b: u32,
    w: &BypassWitness,
) -> (
    Applicability,
    Option<(Hexagon, HexagonType, FoliatedSurface)>,
) {
    let mut app = Applicability::new();
    let hex = match hexagon(f, b) {
        Ok(h) => h,
        Err(e) => {
            app.fail(&e.condition, e.reason);
            return (app, None);
        }
    };
    let sign = |h: u32| f.hyperbolic(h).map(|h| h.sign);
    let (s1, s2) = (sign(hex.h1), sign(hex.h2));
    if s1 == s2 {
        app.fail(
            "signs",
            format!("regions {} and {} have the same sign", hex.r1, hex.r2),
        );
        return (app, None);
    }
    let ty = if s1 == Some(Sign::Pos) {
        HexagonType::Type1
    } else {
        HexagonType::Type2
    };
    let want = if ty == HexagonType::Type1 {
        Sign::Pos
    } else {
        Sign::Neg
    };
    if w.sign != want {
        app.fail(
            "cond(6)",
            format!(
                "{ty:?} hexagon needs a rectangle of sign {want}, got {}",
                w.sign
            ),
        );
    }
    let (p, q) = if s1 == Some(Sign::Pos) {
        (hex.h1, hex.h2)
    } else {
        (hex.h2, hex.h1)
    };
    if (w.p, w.q) != (p, q) {
        app.fail(
            "witness",
            format!("rectangle corners must be hyperbolic points {p} (+) and {q} (-)"),
        );
    }
    if !w.sides.is_empty() {
        match &f.page {
            None => app.fail("witness", "rectangle sides given but F carries no page"),
            Some(page) => {
                let occupied: BTreeSet<u32> = f
                    .leaves
                    .iter()
                    .filter_map(|l| l.curve.as_ref().and_then(|c| page.curves.get(c)))
                    .flat_map(|c| c.walk.iter().copied())
                    .collect();
                for s in &w.sides {
                    if s.len() > 2 && s[1..s.len() - 1].iter().any(|v| occupied.contains(v)) {
                        app.fail("witness", "a rectangle side meets F in its interior");
                    }
                }
            }
        }
    }
    let Some(g) = make_adjacent(f, hex.r1, hex.r2) else {
        app.fail(
            "co_paging",
            "the two hyperbolic points cannot share adjacent pages",
        );
        return (app, None);
    };
    if !app.ok {
        return (app, None);
    }
    (app, Some((hex, ty, g)))
}

pub fn check_bypass(f: &FoliatedSurface, b: u32, w: &BypassWitness) -> Applicability {
    analyze(f, b, w).0
}

/// Rewrite the hexagon around `b` onto its `EB` diagonal with the two hyperbolic
/// points trading heights.
pub fn apply_bypass(
    f: &FoliatedSurface,
    b: u32,
    w: &BypassWitness,
) -> Result<(FoliatedSurface, MoveRecord)> {
    let (app, site) = analyze(f, b, w);
    let notes = app.into_result()?;
    let (hex, ty, mut g) = site.unwrap();
    let [_, nb, _, _, ne, _] = hex.nodes;
    let [ab, cb, cd, ed, ef, af] = hex.sides;
    let l = g.next_leaf_id();
    let (t1, t2) = (
        g.hyperbolic(hex.h1).unwrap().position,
        g.hyperbolic(hex.h2).unwrap().position,
    );
    let old = g.leaf(hex.b).unwrap().clone();
    g.leaves.retain(|x| x.id != hex.b);
    g.leaves.push(crate::foliation::Leaf {
        id: l,
        from: Some(ne),
        to: Some(nb),
        curve: None,
        boundary_parallel: false,
        ..old
    });
    for r in g.regions.iter_mut() {
        if r.id == hex.r1 {
            *r = tile(hex.r1, hex.h2, [ef, af, ab, l]);
        } else if r.id == hex.r2 {
            *r = tile(hex.r2, hex.h1, [cd, ed, l, cb]);
        }
    }
    for (h, t) in [(hex.h1, t2), (hex.h2, t1)] {
        let h = g.hyperbolic_mut(h).unwrap();
        h.position = t;
        h.describing_arc = None;
    }
    let g = finish(g)?;
    let changed = dividing_set(f)?.circles != dividing_set(&g)?.circles;
    let kind = if ty == HexagonType::Type1 {
        MoveKind::BypassRetro
    } else {
        MoveKind::BypassPro
    };
    let mut rec = MoveRecord::new(
        kind,
        Move::Bypass {
            leaf: b,
            witness: w.clone(),
        },
        f,
        &g,
    );
    rec.dividing_set_changed = changed;
    rec.notes = notes;
    rec.notes.push(match ty {
        HexagonType::Type1 => "mid-state: retrograde saddle-saddle connection".into(),
        HexagonType::Type2 => "mid-state: prograde saddle-saddle connection".into(),
    });
    Ok((g, rec))
}
