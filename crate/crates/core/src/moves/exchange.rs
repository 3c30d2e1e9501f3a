//! Exchange moves at a valence-2 elliptic point and their inverses.
//!
//! At a valence-2 point `v` with leaves to `X` and `Y`, the two tiles form a disc.
//! The move deletes `v`, folds `X` into `Y` and fuses the two pairs of side
//! leaves that meet `X` and `Y` at the far corners of the tiles.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{finish, tile, Applicability, BraidEffect, Move, MoveKind, MoveRecord};
use crate::error::{Failure, ObfError, Result};
use crate::foliation::fdtc::{corner_signs, estimate_bounds};
use crate::foliation::{Elliptic, FoliatedSurface, Hyperbolic, Leaf, LeafKind, RegionKind, Side};
use crate::page::classify_arc;
use crate::rational::Rational;
use crate::sign::Sign;

/// Where to insert a pair of tiles: at elliptic point `node`, splitting the leaves
/// `leaves[0]` and `leaves[1]` (possibly equal). `sign` is the sign of the earlier tile.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExchangeSite {
    pub node: u32,
    pub leaves: [u32; 2],
    pub sign: Sign,
}

struct Plan {
    v: u32,
    x: u32,
    y: u32,
    regions: [u32; 2],
    fuse: [(u32, u32); 2],
    notes: Vec<String>,
}

fn other_end(l: &Leaf, node: u32) -> Option<u32> {
    if l.from == Some(node) {
        l.to
    } else if l.to == Some(node) {
        l.from
    } else {
        None
    }
}

/// Some b-arc at `v` is not strongly essential, decided on the page or forced by
/// the FDTC estimate failing.
fn certify(f: &FoliatedSurface, v: u32, app: &mut Applicability) {
    let e = f.elliptic(v).unwrap();
    let leaves: Vec<&Leaf> = f
        .leaves_at(v)
        .into_iter()
        .filter_map(|l| f.leaf(l))
        .filter(|l| l.kind == LeafKind::B)
        .collect();
    if let Some(page) = &f.page {
        let curves: Option<Vec<_>> = leaves
            .iter()
            .map(|l| l.curve.as_ref().and_then(|c| page.curves.get(c)))
            .collect();
        if let Some(curves) = curves.filter(|c| !c.is_empty()) {
            for (l, c) in leaves.iter().zip(curves) {
                match classify_arc(&page.surface, c) {
                    Ok(class) if !class.is_strongly_essential() => {
                        app.note(format!("b-arc {} at {v} is {:?}", l.id, class.essentiality));
                        return;
                    }
                    Ok(_) => {}
                    Err(err) => {
                        app.fail(
                            "strongly_essential",
                            format!("cannot classify b-arc {}: {err}", l.id),
                        );
                        return;
                    }
                }
            }
            app.fail(
                "strongly_essential",
                format!("v strongly essential: every b-arc at {v} is strongly essential, so no exchange move applies there"),
            );
            return;
        }
    }
    let fdtc = f.fdtc();
    let (p, n) = corner_signs(f, v);
    let (lo, hi) = estimate_bounds(e.sign, p, n);
    let within = fdtc
        .get(&e.binding)
        .map(|&c| (c, Rational::integer(lo) <= c && c <= Rational::integer(hi)));
    if let Some((c, false)) = within {
        app.note(format!(
            "{v} is not strongly essential: coefficient {c} violates [{lo}, {hi}]"
        ));
        return;
    }
    if let Some(l) = leaves.iter().find(|l| l.boundary_parallel) {
        app.note(format!(
            "b-arc {} at {v} is boundary-parallel by construction",
            l.id
        ));
        return;
    }
    match within {
        Some((c, _)) => app.fail(
            "strongly_essential",
            format!("cannot certify {v} non-strongly-essential: coefficient {c} lies within [{lo}, {hi}]"),
        ),
        None => app.fail("strongly_essential", format!("cannot certify {v} non-strongly-essential: no page curves and no coefficient")),
    }
}

fn analyze(f: &FoliatedSurface, v: u32) -> (Applicability, Option<Plan>) {
    let mut app = Applicability::new();
    let Some(e) = f.elliptic(v) else {
        app.fail("elliptic", format!("{v} is not an elliptic point"));
        return (app, None);
    };
    let corners = f.corners_at(v);
    let mut regions: Vec<u32> = corners.iter().map(|c| c.1).collect();
    regions.sort_unstable();
    regions.dedup();
    if corners.len() != 2 || regions.len() != 2 {
        app.fail(
            "valence",
            format!(
                "{v} does not meet exactly two regions ({} corners)",
                corners.len()
            ),
        );
        return (app, None);
    }
    let (ra, rb) = (
        f.region(corners[0].1).unwrap(),
        f.region(corners[1].1).unwrap(),
    );
    if f.region_sign(ra) == f.region_sign(rb) {
        app.fail(
            "signs",
            format!("regions {} and {} have the same sign", ra.id, rb.id),
        );
    }
    for r in [ra, rb] {
        let allowed = if e.sign.is_pos() {
            r.kind == RegionKind::Bb
        } else {
            matches!(r.kind, RegionKind::Ab | RegionKind::Bb)
        };
        if !allowed {
            app.fail(
                "types",
                format!(
                    "region {} is {:?}, not allowed at a {} elliptic point",
                    r.id, r.kind, e.sign
                ),
            );
        }
    }
    if f.punctures
        .iter()
        .any(|p| p.region == Some(ra.id) || p.region == Some(rb.id))
    {
        if f.regions.len() == 2 {
            app.note("punctures stay off the exchange disc and end on the remaining b-arc family");
        } else {
            app.fail("punctures", "a puncture lies in the exchange disc");
        }
    }
    let at_v = f.leaves_at(v);
    let ends: Vec<u32> = at_v
        .iter()
        .filter_map(|&l| f.leaf(l).and_then(|l| other_end(l, v)))
        .collect();
    if at_v.len() != 2
        || ends.len() != 2
        || ends[0] == ends[1]
        || f.is_braid_node(ends[0])
        || f.is_braid_node(ends[1])
    {
        app.fail(
            "shape",
            format!("{v} must have two leaves to two distinct elliptic points"),
        );
    }
    if !app.ok {
        return (app, None);
    }
    let (x, y) = (ends[0], ends[1]);
    let mut fuse = Vec::new();
    for r in [ra, rb] {
        let sides: Vec<u32> = r.cycles[0]
            .iter()
            .map(|s| s.leaf)
            .filter(|l| !at_v.contains(l))
            .collect();
        let touches = |l: u32, n: u32| {
            f.leaf(l)
                .is_some_and(|l| l.from == Some(n) || l.to == Some(n))
        };
        match sides.as_slice() {
            [s, t] if touches(*s, x) && touches(*t, y) => fuse.push((*s, *t)),
            [s, t] if touches(*t, x) && touches(*s, y) => fuse.push((*t, *s)),
            _ => {
                app.fail("shape", format!("region {} is not a tile around {v}", r.id));
                return (app, None);
            }
        }
    }
    certify(f, v, &mut app);
    if !app.ok {
        return (app, None);
    }
    let notes = app.notes.clone();
    (
        app,
        Some(Plan {
            v,
            x,
            y,
            regions: [ra.id, rb.id],
            fuse: [fuse[0], fuse[1]],
            notes,
        }),
    )
}

pub fn check_exchange(f: &FoliatedSurface, v: u32) -> Applicability {
    analyze(f, v).0
}

pub fn apply_exchange(f: &FoliatedSurface, v: u32) -> Result<(FoliatedSurface, MoveRecord)> {
    let (app, plan) = analyze(f, v);
    app.into_result()?;
    let plan = plan.unwrap();
    let mut rep: BTreeMap<u32, u32> = BTreeMap::new();
    fn find(rep: &BTreeMap<u32, u32>, mut l: u32) -> u32 {
        while let Some(&p) = rep.get(&l) {
            if p == l {
                break;
            }
            l = p;
        }
        l
    }
    for (a, b) in plan.fuse {
        let (ra, rb) = (find(&rep, a), find(&rep, b));
        if ra != rb {
            rep.insert(ra.max(rb), ra.min(rb));
        }
    }
    let at_v = f.leaves_at(v);
    let mut g = f.clone();
    let hyps: Vec<u32> = plan
        .regions
        .iter()
        .map(|&r| f.region(r).unwrap().hyperbolic)
        .collect();
    g.regions.retain(|r| !plan.regions.contains(&r.id));
    g.hyperbolics.retain(|h| !hyps.contains(&h.id));
    g.elliptics.retain(|e| e.id != plan.v && e.id != plan.x);
    g.leaves
        .retain(|l| !at_v.contains(&l.id) && find(&rep, l.id) == l.id);
    for l in g.leaves.iter_mut() {
        for end in [&mut l.from, &mut l.to] {
            if *end == Some(plan.x) {
                *end = Some(plan.y);
            }
        }
    }
    for s in g
        .regions
        .iter_mut()
        .flat_map(|r| r.cycles.iter_mut().flatten())
    {
        s.leaf = find(&rep, s.leaf);
    }
    for p in g.punctures.iter_mut() {
        if p.region.is_some_and(|r| plan.regions.contains(&r)) {
            p.region = None;
        }
    }
    let g = finish(g)?;
    let mut rec = MoveRecord::new(MoveKind::Exchange, Move::Exchange { v }, f, &g);
    rec.braid_effect = BraidEffect::ExchangeMoveOnL;
    rec.notes = plan.notes;
    rec.notes.push(format!(
        "removed elliptic points {} and {}, merged into {}",
        plan.v, plan.x, plan.y
    ));
    rec.notes
        .push("same braid index; transversely isotopic".into());
    Ok((g, rec))
}

/// Candidate sites for [`apply_exchange_inverse`]; not all of them are valid.
pub fn exchange_inverse_sites(f: &FoliatedSurface) -> Vec<ExchangeSite> {
    let mut out = Vec::new();
    for e in &f.elliptics {
        let at = f.leaves_at(e.id);
        for &a in &at {
            for &b in &at {
                for sign in [Sign::Pos, Sign::Neg] {
                    out.push(ExchangeSite {
                        node: e.id,
                        leaves: [a, b],
                        sign,
                    });
                }
            }
        }
    }
    out
}

pub fn apply_exchange_inverse(
    f: &FoliatedSurface,
    site: &ExchangeSite,
) -> Result<(FoliatedSurface, MoveRecord)> {
    let (g, ins) = insert_tiles(f, site, None, None)?;
    let mut rec = MoveRecord::new(
        MoveKind::ExchangeInverse,
        Move::ExchangeInverse { site: *site },
        f,
        &g,
    );
    rec.braid_effect = BraidEffect::ExchangeMoveOnL;
    let ye = f.elliptic(site.node).unwrap().sign;
    rec.notes.push(format!(
        "inserted elliptic points {} ({}) and {} ({})",
        ins.v, -ye, ins.x, ye
    ));
    Ok((g, rec))
}

/// Ids created by [`insert_tiles`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Inserted {
    /// The new elliptic point of sign opposite to the site node.
    pub v: u32,
    pub x: u32,
    /// The leaf joining `v` and `x`.
    pub tau: u32,
    /// The leaf joining `v` and the site node.
    pub spoke: u32,
    /// The leaf taking over the split leaf after the later tile.
    pub rest: u32,
    /// Hyperbolic points of the earlier and the later tile.
    pub hyperbolics: [u32; 2],
}

/// Split the leaves at a site by two new tiles. `slots` overrides the event
/// positions of the two tiles (existing events sit at `3 * rank`); `bindings`
/// labels the positive and negative new elliptic points.
pub(crate) fn insert_tiles(
    f: &FoliatedSurface,
    site: &ExchangeSite,
    slots: Option<(u32, u32)>,
    bindings: Option<[String; 2]>,
) -> Result<(FoliatedSurface, Inserted)> {
    let invalid = |r: String| ObfError::Guard(vec![Failure::new("site", r)]);
    let y = site.node;
    let ye = f
        .elliptic(y)
        .ok_or_else(|| invalid(format!("{y} is not an elliptic point")))?
        .clone();
    let [m, mp] = site.leaves;
    let leaf = |l: u32| {
        f.leaf(l)
            .filter(|x| x.kind == LeafKind::B && other_end(x, y).is_some())
    };
    let (Some(lm), Some(lmp)) = (leaf(m), leaf(mp)) else {
        return Err(invalid(format!(
            "leaves {m} and {mp} must be b-arcs at {y}"
        )));
    };
    let (p, q) = (other_end(lm, y).unwrap(), other_end(lmp, y).unwrap());
    let y_is_head = ye.sign == Sign::Neg;
    let join = |id: u32, far: u32, near: u32| {
        let (from, to) = if y_is_head { (far, near) } else { (near, far) };
        Leaf {
            id,
            kind: LeafKind::B,
            from: Some(from),
            to: Some(to),
            curve: None,
            time: 1,
            boundary_parallel: false,
        }
    };
    let x_part: Vec<u32> = if m == mp {
        Vec::new()
    } else {
        let mut chain: Vec<u32> = f.corners_at(y).into_iter().map(|c| c.0).collect();
        let i = chain
            .iter()
            .position(|&l| l == m)
            .ok_or_else(|| invalid(format!("leaf {m} has no corner at {y}")))?;
        chain.rotate_left(i);
        let j = chain
            .iter()
            .position(|&l| l == mp)
            .ok_or_else(|| invalid(format!("leaf {mp} has no corner at {y}")))?;
        chain[1..j].to_vec()
    };
    let regions_of = f.leaf_regions();
    let rank = f.event_rank();
    let birth_rank = |l: u32| {
        regions_of
            .get(&l)
            .and_then(|r| r.0)
            .and_then(|r| f.region(r))
            .and_then(|r| rank.get(&r.hyperbolic))
            .copied()
    };
    let (t1, t2) = if let Some(t) = slots {
        t
    } else if f.regions.is_empty() {
        if m != mp {
            return Err(invalid("without regions both leaves must coincide".into()));
        }
        (0, 1)
    } else {
        let (Some(bm), Some(bmp)) = (birth_rank(m), birth_rank(mp)) else {
            return Err(invalid("leaves without a birth event".into()));
        };
        if m == mp {
            (3 * bm as u32 + 1, 3 * bm as u32 + 2)
        } else if bm == bmp {
            return Err(invalid(format!(
                "leaves {m} and {mp} are born at the same event"
            )));
        } else {
            (3 * bm as u32 + 1, 3 * bmp as u32 + 1)
        }
    };

    let mut g = f.clone();
    for h in g.hyperbolics.iter_mut() {
        h.position = 3 * rank[&h.id] as u32;
    }
    let v = f.next_node_id();
    let x = v + 1;
    let [bpos, bneg] = bindings.unwrap_or_else(|| [ye.binding.clone(), ye.binding.clone()]);
    let label = |s: Sign| {
        if s.is_pos() {
            bpos.clone()
        } else {
            bneg.clone()
        }
    };
    g.elliptics.push(Elliptic {
        id: v,
        sign: -ye.sign,
        binding: label(-ye.sign),
    });
    g.elliptics.push(Elliptic {
        id: x,
        sign: ye.sign,
        binding: label(ye.sign),
    });
    let base = f.next_leaf_id();
    let (l, lp, m1, fresh) = (base, base + 1, base + 2, base + 3);
    let vleaf = |id: u32, far: u32| {
        let (from, to) = if y_is_head { (v, far) } else { (far, v) };
        Leaf {
            id,
            kind: LeafKind::B,
            from: Some(from),
            to: Some(to),
            curve: None,
            time: 1,
            boundary_parallel: true,
        }
    };
    g.leaves.push(vleaf(l, x));
    g.leaves.push(vleaf(lp, y));
    g.leaves.push(join(m1, p, x));
    let set_y_end = |g: &mut FoliatedSurface, id: u32, to: u32| {
        let lf = g.leaf_mut(id).unwrap();
        if y_is_head {
            lf.to = Some(to);
        } else {
            lf.from = Some(to);
        }
    };
    for &a in &x_part {
        set_y_end(&mut g, a, x);
    }
    // replace the dying side of `old` in its death region by `new`
    let retarget = |g: &mut FoliatedSurface, old: u32, new: u32| {
        if let Some(d) = regions_of.get(&old).and_then(|r| r.1) {
            for s in g
                .regions
                .iter_mut()
                .filter(|r| r.id == d)
                .flat_map(|r| r.cycles.iter_mut().flatten())
            {
                if *s == Side::fwd(old) {
                    s.leaf = new;
                }
            }
        }
    };
    let (m2, m3, m4);
    if m == mp {
        m2 = m;
        m4 = m1;
        if f.regions.is_empty() {
            m3 = m;
        } else {
            m3 = fresh;
            g.leaves.push(join(m3, p, y));
            retarget(&mut g, m, m3);
        }
    } else {
        m2 = m;
        m4 = mp;
        m3 = fresh;
        retarget(&mut g, m, m1);
        set_y_end(&mut g, mp, x);
        g.leaves.push(join(m3, q, y));
        retarget(&mut g, mp, m3);
    }
    let (ra, rb) = (g.next_region_id(), g.next_region_id() + 1);
    let (ha, hb) = (g.next_hyperbolic_id(), g.next_hyperbolic_id() + 1);
    let (first, second) = if y_is_head {
        ([l, m1, m2, lp], [lp, m3, m4, l])
    } else {
        ([l, lp, m2, m1], [lp, l, m4, m3])
    };
    g.regions.push(tile(ra, ha, first));
    g.regions.push(tile(rb, hb, second));
    g.hyperbolics.push(Hyperbolic {
        id: ha,
        sign: site.sign,
        position: t1,
        describing_arc: None,
    });
    g.hyperbolics.push(Hyperbolic {
        id: hb,
        sign: -site.sign,
        position: t2,
        describing_arc: None,
    });
    let g = finish(g).map_err(|e| invalid(e.to_string()))?;
    Ok((
        g,
        Inserted {
            v,
            x,
            tau: l,
            spoke: lp,
            rest: m3,
            hyperbolics: [ha, hb],
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::foliation::census;
    use crate::foliation::iso::isomorphic;
    use crate::foliation::standard::{split_sphere, two_tile_sphere};
    use crate::page::build::grid_disc;
    use crate::page::Page;

    fn with_coefficient(mut f: FoliatedSurface, c: Rational) -> FoliatedSurface {
        let s = grid_disc(2, &[]).unwrap().with_fdtc("C1", c).unwrap();
        f.page = Some(Page::new(s));
        f
    }

    #[test]
    fn inverse_on_split_sphere_gives_two_tiles() {
        let f = split_sphere();
        let site = ExchangeSite {
            node: 2,
            leaves: [1, 1],
            sign: Sign::Neg,
        };
        let (g, rec) = apply_exchange_inverse(&f, &site).unwrap();
        assert!(isomorphic(&g, &two_tile_sphere()));
        assert_eq!((rec.elliptic_delta(), rec.hyperbolic_delta()), (2, 2));
    }

    #[test]
    fn exchange_undoes_its_inverse() {
        let f = with_coefficient(two_tile_sphere(), Rational::integer(2));
        for site in exchange_inverse_sites(&f) {
            let Ok((g, _)) = apply_exchange_inverse(&f, &site) else {
                continue;
            };
            let v = f.next_node_id();
            let (h, rec) = apply_exchange(&g, v).unwrap();
            assert!(isomorphic(&h, &f), "site {site:?}");
            assert_eq!((rec.elliptic_delta(), rec.hyperbolic_delta()), (-2, -2));
            assert!(census(&h).all_hold());
        }
    }

    #[test]
    fn exchange_needs_a_certificate() {
        let f = two_tile_sphere();
        let app = check_exchange(&f, 1);
        assert!(!app.ok);
        let f = with_coefficient(two_tile_sphere(), Rational::integer(1));
        assert!(!check_exchange(&f, 1).ok);
        let f = with_coefficient(two_tile_sphere(), Rational::new(3, 2));
        assert!(check_exchange(&f, 1).ok);
        let (g, _) = apply_exchange(&f, 1).unwrap();
        assert_eq!(
            (g.elliptics.len(), g.regions.len(), g.leaves.len()),
            (2, 0, 1)
        );
    }
}
