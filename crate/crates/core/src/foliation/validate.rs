//! Validity checks for region decompositions. Reports, never fails.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use super::{FoliatedSurface, LeafKind, RegionKind, Side, SurfaceKind};
use crate::error::Failure;
use crate::page::{classify_arc, CurveKind};
use crate::sign::Sign;

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Failure>,
    pub warnings: Vec<Failure>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    fn fail(&mut self, condition: &str, reason: impl Into<String>) {
        self.violations.push(Failure::new(condition, reason));
    }
}

pub fn validate(f: &FoliatedSurface) -> ValidationReport {
    let mut rep = ValidationReport::default();
    check_ids(f, &mut rep);
    if !rep.is_valid() {
        return rep;
    }
    check_leaves(f, &mut rep);
    check_regions(f, &mut rep);
    check_events(f, &mut rep);
    if rep.is_valid() {
        check_node_cycles(f, &mut rep);
        check_topology(f, &mut rep);
    }
    check_punctures(f, &mut rep);
    check_page(f, &mut rep);
    if rep.is_valid() {
        sign_warnings(f, &mut rep);
    }
    rep
}

fn check_ids(f: &FoliatedSurface, rep: &mut ValidationReport) {
    let mut nodes = BTreeSet::new();
    for id in f
        .elliptics
        .iter()
        .map(|e| e.id)
        .chain(f.braid_boundary.iter().map(|b| b.id))
    {
        if !nodes.insert(id) {
            rep.fail("ids", format!("node id {id} used twice"));
        }
    }
    let dup = |ids: Vec<u32>, what: &str, rep: &mut ValidationReport| {
        let mut seen = BTreeSet::new();
        for id in ids {
            if !seen.insert(id) {
                rep.fail("ids", format!("{what} id {id} used twice"));
            }
        }
    };
    dup(f.leaves.iter().map(|l| l.id).collect(), "leaf", rep);
    dup(f.regions.iter().map(|r| r.id).collect(), "region", rep);
    dup(
        f.hyperbolics.iter().map(|h| h.id).collect(),
        "hyperbolic",
        rep,
    );
    dup(f.punctures.iter().map(|p| p.id).collect(), "puncture", rep);
    for b in &f.braid_boundary {
        if b.strands == 0 {
            rep.fail("ids", format!("braid boundary {} has no strands", b.id));
        }
    }
}

fn check_leaves(f: &FoliatedSurface, rep: &mut ValidationReport) {
    for l in &f.leaves {
        match (l.kind, l.from, l.to) {
            (LeafKind::C, None, None) => {}
            (LeafKind::C, _, _) => {
                rep.fail("leaf_endpoints", format!("c-circle {} has endpoints", l.id))
            }
            (kind, Some(a), Some(b)) => {
                match f.elliptic(a) {
                    Some(e) if e.sign == Sign::Pos => {}
                    Some(_) => rep.fail(
                        "sign_coherence",
                        format!("leaf {} starts at negative elliptic {a}", l.id),
                    ),
                    None => rep.fail(
                        "leaf_endpoints",
                        format!("leaf {} starts at unknown elliptic {a}", l.id),
                    ),
                }
                match kind {
                    LeafKind::B => match f.elliptic(b) {
                        Some(e) if e.sign == Sign::Neg => {}
                        Some(_) => rep.fail(
                            "sign_coherence",
                            format!("b-arc {} joins two positive elliptics", l.id),
                        ),
                        None => rep.fail(
                            "leaf_endpoints",
                            format!("b-arc {} ends at non-elliptic {b}", l.id),
                        ),
                    },
                    _ => {
                        if !f.is_braid_node(b) {
                            rep.fail(
                                "leaf_endpoints",
                                format!("a-arc {} does not end on the braid", l.id),
                            );
                        }
                    }
                }
            }
            _ => rep.fail(
                "leaf_endpoints",
                format!("leaf {} is missing an endpoint", l.id),
            ),
        }
    }
}

fn leaf_kinds(f: &FoliatedSurface, cyc: &[Side]) -> Option<Vec<LeafKind>> {
    cyc.iter().map(|s| f.leaf(s.leaf).map(|l| l.kind)).collect()
}

fn check_template(f: &FoliatedSurface, r: &super::Region) -> Result<(), String> {
    use LeafKind::*;
    let mut kinds = Vec::new();
    for cyc in &r.cycles {
        kinds.push(leaf_kinds(f, cyc).ok_or("unknown leaf on boundary")?);
    }
    let arc_pair =
        |cyc: &[Side], k: &[LeafKind], want: LeafKind, same: bool| -> Result<(), String> {
            if cyc.len() != 2 || k.iter().any(|&x| x != want) {
                return Err(format!("expected a pair of {want:?}-arcs"));
            }
            if (cyc[0].leaf == cyc[1].leaf) != same {
                return Err(if same {
                    "degenerate annulus needs one arc on both sides"
                } else {
                    "arcs must differ"
                }
                .into());
            }
            Ok(())
        };
    let single_c = |cyc: &[Side], k: &[LeafKind]| cyc.len() == 1 && k[0] == C;
    match r.kind {
        RegionKind::Aa | RegionKind::Ab | RegionKind::Bb => {
            if r.cycles.len() != 1 || r.cycles[0].len() != 4 {
                return Err("a tile has one boundary cycle of four sides".into());
            }
            if kinds[0].contains(&C) {
                return Err("tile side is a c-circle".into());
            }
            let ids: BTreeSet<u32> = r.cycles[0].iter().map(|s| s.leaf).collect();
            if ids.len() != 4 {
                return Err("tile sides must be four distinct leaves".into());
            }
            let c = f.tile_corners(r).ok_or("tile corners undefined")?;
            let braid = [c[1], c[3]].iter().filter(|&&x| f.is_braid_node(x)).count();
            let want = [RegionKind::Bb, RegionKind::Ab, RegionKind::Aa][braid];
            if want != r.kind {
                return Err(format!("corners make a {want:?} tile"));
            }
        }
        RegionKind::DegenerateAa => {
            let cyc = &r.cycles[0];
            if r.cycles.len() != 1 || cyc.len() != 4 || kinds[0].iter().any(|&k| k != A) {
                return Err("degenerate aa-tile has four a-arc sides".into());
            }
            let (a1, a2) = (cyc[0].leaf, cyc[1].leaf);
            if a1 == a2 || cyc[2].leaf != a2 || cyc[3].leaf != a1 {
                return Err("degenerate aa-tile must read a1, a2, a2, a1".into());
            }
        }
        RegionKind::Bc | RegionKind::DegenerateBc | RegionKind::Ac => {
            if r.cycles.len() != 2 {
                return Err("an annulus has two boundary cycles".into());
            }
            let (arcs, circ) = if r.cycles[0].len() == 2 {
                (0, 1)
            } else {
                (1, 0)
            };
            if !single_c(&r.cycles[circ], &kinds[circ]) {
                return Err("annulus needs one c-circle boundary".into());
            }
            let want = if r.kind == RegionKind::Ac { A } else { B };
            arc_pair(
                &r.cycles[arcs],
                &kinds[arcs],
                want,
                r.kind == RegionKind::DegenerateBc,
            )?;
            if r.kind == RegionKind::Bc {
                let (l0, l1) = (
                    f.leaf(r.cycles[arcs][0].leaf).unwrap(),
                    f.leaf(r.cycles[arcs][1].leaf).unwrap(),
                );
                if (l0.from, l0.to) != (l1.from, l1.to) {
                    return Err("bc-annulus arcs must share their endpoints".into());
                }
            }
        }
        RegionKind::Cc => {
            if r.cycles.len() != 3 || r.cycles.iter().zip(&kinds).any(|(c, k)| !single_c(c, k)) {
                return Err("cc-pants has three c-circle boundaries".into());
            }
            let fwd = r.cycles.iter().filter(|c| c[0].forward).count();
            if fwd == 0 || fwd == 3 {
                return Err("cc-pants needs circles on both sides of the saddle".into());
            }
        }
    }
    for cyc in &r.cycles {
        if cyc.len() < 2 {
            continue;
        }
        for i in 0..cyc.len() {
            let (s, t) = (cyc[i], cyc[(i + 1) % cyc.len()]);
            if s.forward == t.forward {
                return Err("before and after sides must alternate".into());
            }
            let (Some((_, x)), Some((y, _))) = (f.side_ends(s), f.side_ends(t)) else {
                return Err("arc side without endpoints".into());
            };
            if x != y {
                return Err(format!(
                    "sides {} and {} do not meet at a corner",
                    s.leaf, t.leaf
                ));
            }
        }
    }
    Ok(())
}

fn check_regions(f: &FoliatedSurface, rep: &mut ValidationReport) {
    let mut hyp_use: BTreeMap<u32, u32> = BTreeMap::new();
    for r in &f.regions {
        if f.hyperbolic(r.hyperbolic).is_none() {
            rep.fail(
                "template",
                format!(
                    "region {} refers to unknown hyperbolic {}",
                    r.id, r.hyperbolic
                ),
            );
        }
        *hyp_use.entry(r.hyperbolic).or_default() += 1;
        if let Err(e) = check_template(f, r) {
            rep.fail("template", format!("region {} ({:?}): {e}", r.id, r.kind));
        }
    }
    for h in &f.hyperbolics {
        match hyp_use.get(&h.id).copied().unwrap_or(0) {
            1 => {}
            n => rep.fail(
                "template",
                format!("hyperbolic {} lies in {n} regions", h.id),
            ),
        }
    }
    let mut sides: HashMap<u32, (u32, u32)> = HashMap::new();
    for s in f.regions.iter().flat_map(|r| r.cycles.iter().flatten()) {
        let e = sides.entry(s.leaf).or_default();
        if s.forward {
            e.0 += 1;
        } else {
            e.1 += 1;
        }
    }
    for l in &f.leaves {
        match sides.get(&l.id) {
            Some((1, 1)) => {}
            None if f.regions.is_empty() => {}
            None => rep.fail("two_sided", format!("leaf {} bounds no region", l.id)),
            Some((a, b)) => rep.fail(
                "two_sided",
                format!(
                    "leaf {} is a before-side {a} times and an after-side {b} times",
                    l.id
                ),
            ),
        }
    }
    for id in sides.keys() {
        if f.leaf(*id).is_none() {
            rep.fail(
                "two_sided",
                format!("region side refers to unknown leaf {id}"),
            );
        }
    }
}

fn check_events(f: &FoliatedSurface, rep: &mut ValidationReport) {
    let mut pos = BTreeMap::new();
    for h in &f.hyperbolics {
        if let Some(other) = pos.insert(h.position, h.id) {
            rep.fail(
                "distinct_events",
                format!(
                    "hyperbolics {other} and {} share event position {}",
                    h.id, h.position
                ),
            );
        }
    }
    if !rep.is_valid() {
        return;
    }
    let n = f.event_count();
    if n == 0 {
        return;
    }
    let life = f.lifetimes();
    for l in &f.leaves {
        match life.get(&l.id) {
            Some(lt) if lt.contains_slot(l.time, n) => {}
            Some(lt) => rep.fail(
                "event_order",
                format!(
                    "leaf {} at slot {} lies outside its lifetime from event {} to event {}",
                    l.id, l.time, lt.birth, lt.death
                ),
            ),
            None => {}
        }
    }
}

fn check_node_cycles(f: &FoliatedSurface, rep: &mut ValidationReport) {
    let succ = match f.corner_successors() {
        Ok(s) => s,
        Err(e) => {
            rep.fail("node_cycle", e.to_string());
            return;
        }
    };
    let n = f.event_count();
    let life = f.lifetimes();
    let strands: BTreeMap<u32, u32> = f
        .elliptics
        .iter()
        .map(|e| (e.id, 1))
        .chain(f.braid_boundary.iter().map(|b| (b.id, b.strands)))
        .collect();
    for (&x, &k) in &strands {
        let ends: BTreeSet<u32> = f.leaves_at(x).into_iter().collect();
        if ends.is_empty() {
            if !f.regions.is_empty() || f.leaves.is_empty() {
                rep.fail("node_cycle", format!("node {x} meets no leaf"));
            }
            continue;
        }
        if n == 0 {
            continue;
        }
        let first = *ends.iter().next().unwrap();
        let mut seen = BTreeSet::new();
        let mut l = first;
        let mut total = 0usize;
        loop {
            if !seen.insert(l) {
                break;
            }
            total += life.get(&l).map_or(0, |lt| lt.gaps(n));
            match succ.get(&(x, l)) {
                Some(&(next, _)) => l = next,
                None => {
                    rep.fail(
                        "node_cycle",
                        format!("leaf {l} has no successor at node {x}"),
                    );
                    return;
                }
            }
        }
        if l != first || seen != ends {
            rep.fail(
                "node_cycle",
                format!("leaves at node {x} do not form one cycle"),
            );
        } else if total != n * k as usize {
            rep.fail(
                "node_cycle",
                format!(
                    "leaves at node {x} sweep {total} gaps, expected {}",
                    n * k as usize
                ),
            );
        }
    }
}

fn check_topology(f: &FoliatedSurface, rep: &mut ValidationReport) {
    let mut parent: BTreeMap<u32, u32> = BTreeMap::new();
    fn find(p: &mut BTreeMap<u32, u32>, x: u32) -> u32 {
        let q = *p.get(&x).unwrap_or(&x);
        if q == x {
            return x;
        }
        let r = find(p, q);
        p.insert(x, r);
        r
    }
    let union = |p: &mut BTreeMap<u32, u32>, a: u32, b: u32| {
        let (ra, rb) = (find(p, a), find(p, b));
        if ra != rb {
            p.insert(ra, rb);
        }
    };
    // nodes keep their ids, leaves are shifted past them
    let off = f.next_node_id();
    let mut all = BTreeSet::new();
    for e in &f.elliptics {
        all.insert(e.id);
    }
    for b in &f.braid_boundary {
        all.insert(b.id);
    }
    for l in &f.leaves {
        all.insert(off + l.id);
        for x in [l.from, l.to].into_iter().flatten() {
            union(&mut parent, off + l.id, x);
        }
    }
    for r in &f.regions {
        let ls: Vec<u32> = r.cycles.iter().flatten().map(|s| s.leaf).collect();
        for w in ls.windows(2) {
            union(&mut parent, off + w[0], off + w[1]);
        }
    }
    let roots: BTreeSet<u32> = all.iter().map(|&x| find(&mut parent, x)).collect();
    if roots.len() > 1 {
        rep.fail(
            "connected",
            format!("surface has {} components", roots.len()),
        );
    }
    let chi = f.euler_characteristic();
    match f.surface_kind {
        SurfaceKind::Sphere => {
            if !f.braid_boundary.is_empty() {
                rep.fail("euler", "a sphere has no braid boundary");
            }
            if chi != 2 {
                rep.fail("euler", format!("sphere has Euler characteristic {chi}"));
            }
        }
        SurfaceKind::DiscWithBraidBoundary => {
            if f.braid_boundary.len() != 1 {
                rep.fail("euler", "a disc has exactly one braid boundary component");
            }
            if chi != 1 {
                rep.fail("euler", format!("disc has Euler characteristic {chi}"));
            }
        }
        SurfaceKind::General => {}
    }
    if f.regions.is_empty() && !f.hyperbolics.is_empty() {
        rep.fail("template", "hyperbolic points without regions");
    }
}

fn check_punctures(f: &FoliatedSurface, rep: &mut ValidationReport) {
    for p in &f.punctures {
        match p.region {
            Some(r) if f.region(r).is_none() => rep.fail(
                "punctures",
                format!("puncture {} in unknown region {r}", p.id),
            ),
            None if !f.regions.is_empty() => {
                rep.fail("punctures", format!("puncture {} has no region", p.id))
            }
            _ => {}
        }
    }
}

fn check_page(f: &FoliatedSurface, rep: &mut ValidationReport) {
    let Some(page) = &f.page else { return };
    let s = &page.surface;
    for e in &f.elliptics {
        if !s.bindings().contains(&e.binding) {
            rep.fail(
                "page_curves",
                format!("elliptic {} on unknown binding {}", e.id, e.binding),
            );
        }
    }
    for l in &f.leaves {
        let Some(name) = &l.curve else { continue };
        let Ok(c) = page.curve(name) else {
            rep.fail(
                "page_curves",
                format!("leaf {} refers to unknown curve {name}", l.id),
            );
            continue;
        };
        let ok = match l.kind {
            LeafKind::C => c.kind == CurveKind::Circle,
            LeafKind::A => c.kind == CurveKind::Arc && c.puncture_end.is_some(),
            LeafKind::B => c.kind == CurveKind::Arc && c.puncture_end.is_none(),
        };
        if !ok {
            rep.fail(
                "page_curves",
                format!("curve {name} does not fit a {:?}-leaf", l.kind),
            );
            continue;
        }
        if l.kind == LeafKind::B {
            let (Some(a), Some(b)) = (
                l.from.and_then(|x| f.elliptic(x)),
                l.to.and_then(|x| f.elliptic(x)),
            ) else {
                continue;
            };
            let start = s.binding_at(c.walk[0]);
            let end = s.binding_at(*c.walk.last().unwrap());
            if start != Some(a.binding.as_str()) || end != Some(b.binding.as_str()) {
                rep.fail(
                    "page_curves",
                    format!(
                        "curve {name} does not run from binding {} to {}",
                        a.binding, b.binding
                    ),
                );
            }
        }
    }
}

/// At a vertex met only by bb-tiles whose b-arcs are all separating, both signs of
/// hyperbolic point must appear.
fn sign_warnings(f: &FoliatedSurface, rep: &mut ValidationReport) {
    let Some(page) = &f.page else { return };
    for e in &f.elliptics {
        let corners = f.corners_at(e.id);
        if corners.is_empty() {
            continue;
        }
        let regions: Vec<_> = corners.iter().filter_map(|&(_, r)| f.region(r)).collect();
        if regions.iter().any(|r| r.kind != RegionKind::Bb) {
            continue;
        }
        let separating = f.leaves_at(e.id).iter().all(|&l| {
            let Some(name) = f.leaf(l).and_then(|l| l.curve.as_ref()) else {
                return false;
            };
            page.curve(name)
                .ok()
                .and_then(|c| classify_arc(&page.surface, c).ok())
                .is_some_and(|k| k.separating)
        });
        if !separating {
            continue;
        }
        let signs: BTreeSet<Sign> = regions.iter().filter_map(|r| f.region_sign(r)).collect();
        if signs.len() < 2 {
            rep.warnings.push(Failure::new(
                "mixed_signs_at_vertex",
                format!("all hyperbolic points at elliptic {} have one sign", e.id),
            ));
        }
    }
}
