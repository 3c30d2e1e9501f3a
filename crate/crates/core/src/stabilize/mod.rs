//! Open book stabilization seen from a foliated surface: the plumbed page, the
//! two bi-gon surfaces `F'` and `F''`, and the move sequence relating them.

mod relate;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

pub use relate::{relate_prime_doubleprime, relation_witnesses, RelationPlan};

use crate::error::{Failure, ObfError, Result};
use crate::foliation::iso::isomorphic;
use crate::foliation::{FoliatedSurface, LeafKind};
use crate::moves::exchange::insert_tiles;
use crate::moves::{finish, ExchangeSite};
use crate::page::plumb::{plumb_annulus, Plumbing};
use crate::page::{EmbeddedCurve, Page};
use crate::reduce::MoveTrace;
use crate::sign::Sign;

/// One arc of `F` across the collar of the stabilization arc.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Crossing {
    /// The b-arc containing the crossing.
    pub leaf: u32,
    /// Whether the b-arc crosses from the left of `alpha` to its right.
    pub upward: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilizationSpec {
    /// Required when the surface carries a page.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<EmbeddedCurve>,
    pub sign: Sign,
    /// Left to right along `alpha`.
    #[serde(default)]
    pub crossings: Vec<Crossing>,
}

/// A bi-gon of two opposite-signed tiles inserted along `leaf`. Ids agree in
/// `F'` and `F''`; `p` sits in the earlier tile.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bigon {
    pub leaf: u32,
    pub tau: u32,
    pub ends: [u32; 2],
    pub p: u32,
    pub q: u32,
    pub regions: [u32; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Stabilized {
    pub prime: FoliatedSurface,
    pub doubleprime: FoliatedSurface,
    pub bigons: Vec<Bigon>,
}

fn guard(condition: &str, reason: impl Into<String>) -> ObfError {
    ObfError::Guard(vec![Failure::new(condition, reason)])
}

/// Interior vertices of `alpha` met by the curve of each leaf.
fn alpha_meetings(f: &FoliatedSurface, alpha: &EmbeddedCurve) -> BTreeMap<u32, usize> {
    let Some(page) = &f.page else {
        return BTreeMap::new();
    };
    let on_alpha: BTreeSet<u32> = alpha.walk.iter().copied().collect();
    f.leaves
        .iter()
        .filter_map(|l| {
            let c = page.curves.get(l.curve.as_ref()?)?;
            let n = c.walk.iter().filter(|v| on_alpha.contains(v)).count();
            (n > 0).then_some((l.id, n))
        })
        .collect()
}

/// Move the page onto the plumbed surface, carrying every curve across and
/// relabelling the bindings of existing elliptic points.
fn plumb_page(
    f: &FoliatedSurface,
    alpha: &EmbeddedCurve,
) -> Result<(FoliatedSurface, Option<Plumbing>)> {
    let Some(page) = &f.page else {
        return Ok((f.clone(), None));
    };
    let plumbing = plumb_annulus(&page.surface, alpha)?;
    let mut moved = Page::new(plumbing.surface.clone());
    for (name, c) in &page.curves {
        moved.register(name.clone(), plumbing.transport(c)?)?;
    }
    let mut g = f.clone();
    let mut label: BTreeMap<u32, String> = BTreeMap::new();
    for l in &g.leaves {
        let Some(c) = l.curve.as_ref().and_then(|n| moved.curves.get(n)) else {
            continue;
        };
        for (end, v) in [(l.from, c.walk[0]), (l.to, *c.walk.last().unwrap())] {
            if let (Some(e), Some(b)) = (end, moved.surface.binding_at(v)) {
                label.insert(e, b.to_string());
            }
        }
    }
    for e in g.elliptics.iter_mut() {
        if let Some(b) = label.get(&e.id) {
            e.binding = b.clone();
            continue;
        }
        let homes: Vec<&str> = plumbing
            .relabel
            .iter()
            .filter(|r| r.from.contains(&e.binding))
            .map(|r| r.label.as_str())
            .collect();
        match homes.as_slice() {
            [one] => e.binding = one.to_string(),
            _ => {
                return Err(guard(
                    "binding",
                    format!("cannot tell which new binding holds elliptic {}", e.id),
                ))
            }
        }
    }
    g.page = Some(moved);
    Ok((g, Some(plumbing)))
}

/// Stabilize along an arc that no leaf meets: the foliation is unchanged and the
/// page grows by an annulus.
pub fn stabilize_trivial(f: &FoliatedSurface, spec: &StabilizationSpec) -> Result<FoliatedSurface> {
    if !spec.crossings.is_empty() {
        return Err(guard(
            "crossings",
            "the arc meets F; use the intersecting construction",
        ));
    }
    let Some(alpha) = &spec.alpha else {
        return if f.page.is_some() {
            Err(guard("alpha", "a paged surface needs the arc"))
        } else {
            Ok(f.clone())
        };
    };
    if let Some((l, _)) = alpha_meetings(f, alpha).into_iter().next() {
        return Err(guard("crossings", format!("leaf {l} meets the arc")));
    }
    let (g, _) = plumb_page(f, alpha)?;
    finish(g)
}

/// Sign of `p'` for a crossing: up crossings give positive saddles under a
/// positive stabilization, and a negative stabilization mirrors everything.
fn prime_sign(spec: &StabilizationSpec, c: &Crossing) -> Sign {
    let s = if c.upward { Sign::Pos } else { Sign::Neg };
    if spec.sign.is_pos() {
        s
    } else {
        -s
    }
}

/// b-arcs alive just before the first event, where the collar of new saddles goes.
pub fn collar_leaves(f: &FoliatedSurface) -> Vec<u32> {
    let n = f.event_count();
    let life = f.lifetimes();
    let mut out: Vec<u32> = f
        .leaves
        .iter()
        .filter(|l| l.kind == LeafKind::B)
        .filter(|l| {
            n == 0
                || life
                    .get(&l.id)
                    .is_none_or(|t| t.contains_slot(2 * n as u32 - 1, n))
        })
        .map(|l| l.id)
        .collect();
    out.sort_unstable();
    out
}

/// Build `F'` and `F''`: each crossing becomes a bi-gon of two opposite-signed
/// tiles whose saddles sit in a collar after every existing event. `F'` forms
/// `p'_1..p'_m` then `q'_m..q'_1`; `F''` forms `p''_m..p''_1` then `q''_1..q''_m`
/// with every bi-gon sign reversed.
pub fn stabilize_intersecting(f: &FoliatedSurface, spec: &StabilizationSpec) -> Result<Stabilized> {
    let m = spec.crossings.len();
    if m == 0 {
        return Err(guard(
            "crossings",
            "no crossings; use the trivial construction",
        ));
    }
    let leaves: BTreeSet<u32> = spec.crossings.iter().map(|c| c.leaf).collect();
    if leaves.len() != m {
        return Err(ObfError::Unsupported(
            "a b-arc crossing the arc more than once".into(),
        ));
    }
    let collar = collar_leaves(f);
    for c in &spec.crossings {
        if !collar.contains(&c.leaf) {
            return Err(guard(
                "collar",
                format!(
                    "leaf {} is not a b-arc alive before the first event",
                    c.leaf
                ),
            ));
        }
    }
    let (mut g, plumbing) = match (&spec.alpha, &f.page) {
        (Some(alpha), Some(_)) => {
            let meets = alpha_meetings(f, alpha);
            for (l, n) in &meets {
                if !leaves.contains(l) || *n != 1 {
                    return Err(guard(
                        "crossings",
                        format!("leaf {l} meets the arc {n} times"),
                    ));
                }
            }
            plumb_page(f, alpha)?
        }
        (None, Some(_)) => return Err(guard("alpha", "a paged surface needs the arc")),
        _ => (f.clone(), None),
    };
    let base = g.event_count() as u32;
    let mut bigons = Vec::with_capacity(m);
    for (i, c) in spec.crossings.iter().enumerate() {
        let leaf = g.leaf(c.leaf).unwrap().clone();
        let y = leaf
            .from
            .ok_or_else(|| guard("crossings", format!("leaf {} has a free end", c.leaf)))?;
        let site = ExchangeSite {
            node: y,
            leaves: [c.leaf, c.leaf],
            sign: prime_sign(spec, c),
        };
        let mut labels = None;
        let mut tau_curve = None;
        if let Some(pl) = &plumbing {
            let rung = pl.grid.band_rung(i);
            if i >= 3 || rung.walk.is_empty() {
                return Err(ObfError::Unsupported(
                    "more than three crossings on a paged surface".into(),
                ));
            }
            let tau = if c.upward {
                EmbeddedCurve::arc(rung.walk.iter().rev().copied().collect())
            } else {
                rung
            };
            let at = |v: u32| {
                pl.surface
                    .binding_at(v)
                    .map(str::to_string)
                    .unwrap_or_default()
            };
            labels = Some([at(tau.walk[0]), at(*tau.walk.last().unwrap())]);
            tau_curve = Some(tau);
        }
        let n = g.event_count() as u32;
        let (mut h, ins) = insert_tiles(&g, &site, Some((3 * n + 1, 3 * n + 2)), labels)?;
        if let Some(tau) = tau_curve {
            for id in [ins.tau, ins.spoke] {
                h.leaf_mut(id).unwrap().boundary_parallel = false;
            }
            let name = format!("tau{}", i + 1);
            h.page.as_mut().unwrap().register(name.clone(), tau)?;
            h.leaf_mut(ins.tau).unwrap().curve = Some(name);
            if ins.rest != c.leaf {
                h.leaf_mut(ins.rest).unwrap().curve = leaf.curve.clone();
            }
        }
        let regions = [
            h.region_of_hyperbolic(ins.hyperbolics[0]).unwrap().id,
            h.region_of_hyperbolic(ins.hyperbolics[1]).unwrap().id,
        ];
        bigons.push(Bigon {
            leaf: c.leaf,
            tau: ins.tau,
            ends: [ins.v, ins.x],
            p: ins.hyperbolics[0],
            q: ins.hyperbolics[1],
            regions,
        });
        g = h;
    }
    let order = |prime: bool| -> Vec<u32> {
        let mut ps: Vec<u32> = bigons.iter().map(|b| b.p).collect();
        let mut qs: Vec<u32> = bigons.iter().map(|b| b.q).rev().collect();
        if !prime {
            ps.reverse();
            qs.reverse();
        }
        ps.into_iter().chain(qs).collect()
    };
    let arrange = |g: &FoliatedSurface, prime: bool| -> Result<FoliatedSurface> {
        let mut h = g.clone();
        for (k, id) in order(prime).into_iter().enumerate() {
            h.hyperbolic_mut(id).unwrap().position = base + k as u32;
        }
        if !prime {
            for b in &bigons {
                for id in [b.p, b.q] {
                    let x = h.hyperbolic_mut(id).unwrap();
                    x.sign = -x.sign;
                }
            }
        }
        finish(h)
    };
    Ok(Stabilized {
        prime: arrange(&g, true)?,
        doubleprime: arrange(&g, false)?,
        bigons,
    })
}

/// `sgn(p') = -sgn(p'') = -sgn(q') = sgn(q'')` at every bi-gon.
pub fn sign_relation_holds(s: &Stabilized) -> bool {
    let sign = |f: &FoliatedSurface, h: u32| f.hyperbolic(h).map(|h| h.sign);
    s.bigons.iter().all(|b| {
        let (p1, q1) = (sign(&s.prime, b.p), sign(&s.prime, b.q));
        let (p2, q2) = (sign(&s.doubleprime, b.p), sign(&s.doubleprime, b.q));
        match (p1, q1, p2, q2) {
            (Some(p1), Some(q1), Some(p2), Some(q2)) => p1 == -p2 && p1 == -q1 && p1 == q2,
            _ => false,
        }
    })
}

/// `F'` with the signs of one bi-gon reversed: the `F''` bi-gon in place.
pub fn flip_bigon(prime: &FoliatedSurface, b: &Bigon) -> Result<FoliatedSurface> {
    let mut g = prime.clone();
    for id in [b.p, b.q] {
        let h = g
            .hyperbolic_mut(id)
            .ok_or_else(|| guard("bigon", format!("no hyperbolic point {id}")))?;
        h.sign = -h.sign;
    }
    finish(g)
}

/// Put the events of `f` in `order` by swapping neighbours whose tiles share no
/// leaf, so the foliation only changes by an isotopy.
pub fn reorder_events(f: &FoliatedSurface, order: &[u32]) -> Result<FoliatedSurface> {
    let mut cur = f.event_order();
    let mut want = order.to_vec();
    want.sort_unstable();
    let mut have = cur.clone();
    have.sort_unstable();
    if want != have {
        return Err(guard("order", "not a permutation of the events"));
    }
    let leaves = |h: u32| -> BTreeSet<u32> {
        f.region_of_hyperbolic(h)
            .map(|r| r.cycles.iter().flatten().map(|s| s.leaf).collect())
            .unwrap_or_default()
    };
    for (i, &h) in order.iter().enumerate() {
        let mut j = cur.iter().position(|&x| x == h).unwrap();
        while j > i {
            let k = cur[j - 1];
            if !leaves(h).is_disjoint(&leaves(k)) {
                return Err(guard("commute", format!("events {k} and {h} share a leaf")));
            }
            cur.swap(j - 1, j);
            j -= 1;
        }
    }
    let mut g = f.clone();
    for (k, h) in cur.iter().enumerate() {
        g.hyperbolic_mut(*h).unwrap().position = k as u32;
    }
    finish(g)
}

/// Relate `F'` to `F''` one bi-gon at a time, then check the result against
/// `F''` with its saddles slid back into the `F'` order.
pub fn relate_stabilized(s: &Stabilized) -> Result<Vec<MoveTrace>> {
    let mut g = s.prime.clone();
    let mut traces = Vec::with_capacity(s.bigons.len());
    for b in &s.bigons {
        let target = flip_bigon(&g, b)?;
        let plan = relation_witnesses(&g, b, &target)?;
        let t = relate_prime_doubleprime(&g, &plan)?;
        g = t.result.clone();
        traces.push(t);
    }
    let nested = reorder_events(&s.doubleprime, &s.prime.event_order())?;
    if !isomorphic(&g, &nested) {
        return Err(guard(
            "relation",
            "the related surface is not F'' up to sliding saddles",
        ));
    }
    Ok(traces)
}
