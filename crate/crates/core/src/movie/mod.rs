//! Movie presentations: page slices of b-arcs with one saddle event per gap.
//!
//! A leaf keeps its id while it persists from slice to slice. A saddle event
//! replaces two b-arcs by their band sum along a describing arc; the gluing map
//! identifies the last slice with the first one through the monodromy.

pub mod standard;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Failure, ObfError, Result};
use crate::foliation::validate::ValidationReport;
use crate::foliation::{
    Elliptic, FoliatedSurface, Hyperbolic, Leaf, LeafKind, Region, RegionKind, Side, SurfaceKind,
};
use crate::page::homotopy::HomotopyBasis;
use crate::page::{left_of, Page};
use crate::sign::Sign;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MovieElliptic {
    pub id: u32,
    pub sign: Sign,
    /// Boundary vertex of the page where the binding meets the surface.
    pub vertex: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SliceLeaf {
    pub id: u32,
    pub from: u32,
    pub to: u32,
    pub curve: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Slice {
    pub leaves: Vec<SliceLeaf>,
}

impl Slice {
    pub fn ids(&self) -> BTreeSet<u32> {
        self.leaves.iter().map(|l| l.id).collect()
    }

    pub fn leaf(&self, id: u32) -> Option<&SliceLeaf> {
        self.leaves.iter().find(|l| l.id == id)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Event {
    Saddle { describing_arc: Vec<u32> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MoviePresentation {
    pub page: Page,
    pub elliptics: Vec<MovieElliptic>,
    pub slices: Vec<Slice>,
    /// `events[k]` happens between slice `k` and slice `k + 1`.
    pub events: Vec<Option<Event>>,
    /// Leaves of the last slice mapped to leaves of the first slice.
    pub gluing: Vec<(u32, u32)>,
    /// With an identity monodromy glued leaves must also be isotopic.
    #[serde(default)]
    pub identity_monodromy: bool,
}

/// Data of one saddle as read off the page.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SaddleModel {
    pub before: [u32; 2],
    /// `[p2 -> n1, p1 -> n2]` for `before = [p1 -> n1, p2 -> n2]`.
    pub after: [u32; 2],
    pub sign: Sign,
}

impl MoviePresentation {
    pub fn elliptic(&self, id: u32) -> Option<&MovieElliptic> {
        self.elliptics.iter().find(|e| e.id == id)
    }

    fn curve_walk(&self, name: &str) -> Result<&[u32]> {
        Ok(&self.page.curve(name)?.walk)
    }

    /// Read the saddle between slice `k` and `k + 1`.
    pub fn saddle(&self, k: usize, arc: &[u32], basis: &HomotopyBasis) -> Result<SaddleModel> {
        let s = &self.page.surface;
        let (a, b) = (&self.slices[k], &self.slices[k + 1]);
        let before: Vec<&SliceLeaf> = a.leaves.iter().filter(|l| b.leaf(l.id).is_none()).collect();
        let after: Vec<&SliceLeaf> = b.leaves.iter().filter(|l| a.leaf(l.id).is_none()).collect();
        if before.len() != 2 || after.len() != 2 {
            return Err(ObfError::Foliation(format!(
                "saddle {k} replaces {} leaves by {}, expected two by two",
                before.len(),
                after.len()
            )));
        }
        let (mut b1, mut b2) = (before[0], before[1]);
        if b1.id > b2.id {
            std::mem::swap(&mut b1, &mut b2);
        }
        if arc.len() < 2 {
            return Err(ObfError::Curve(format!(
                "describing arc of saddle {k} is too short"
            )));
        }
        let (w1, w2) = (self.curve_walk(&b1.curve)?, self.curve_walk(&b2.curve)?);
        let (x, y) = (arc[0], *arc.last().unwrap());
        let (x, y, arc) = if w1.contains(&x) && w2.contains(&y) {
            (x, y, arc.to_vec())
        } else if w1.contains(&y) && w2.contains(&x) {
            let mut r = arc.to_vec();
            r.reverse();
            (y, x, r)
        } else {
            return Err(ObfError::Curve(format!(
                "describing arc of saddle {k} does not join its two leaves"
            )));
        };
        let occupied: BTreeSet<u32> = a
            .leaves
            .iter()
            .filter_map(|l| self.page.curve(&l.curve).ok())
            .flat_map(|c| c.walk.iter().copied())
            .collect();
        if arc[1..arc.len() - 1].iter().any(|v| occupied.contains(v)) {
            return Err(ObfError::Curve(format!(
                "describing arc of saddle {k} meets a leaf in its interior"
            )));
        }
        for p in arc.windows(2) {
            if s.complex().dart(p[0], p[1]).is_none() {
                return Err(ObfError::Curve(format!(
                    "describing arc step {}-{} is not an edge",
                    p[0], p[1]
                )));
            }
        }
        let i = w1.iter().position(|&v| v == x).unwrap();
        let j = w2.iter().position(|&v| v == y).unwrap();
        let side1 = left_of(s, w1, i, arc[1]);
        let side2 = left_of(s, w2, j, arc[arc.len() - 2]);
        let sign = match (side1, side2) {
            (Some(true), Some(true)) => Sign::Pos,
            (Some(false), Some(false)) => Sign::Neg,
            (Some(_), Some(_)) => {
                return Err(ObfError::Foliation(format!(
                    "describing arc of saddle {k} meets its leaves from opposite sides"
                )))
            }
            _ => {
                return Err(ObfError::Curve(format!(
                    "describing arc of saddle {k} must leave both arcs at interior vertices"
                )))
            }
        };
        let find = |from: u32, to: u32| {
            after
                .iter()
                .find(|l| l.from == from && l.to == to)
                .map(|l| l.id)
        };
        let (Some(a1), Some(a2)) = (find(b2.from, b1.to), find(b1.from, b2.to)) else {
            return Err(ObfError::Foliation(format!(
                "after-leaves of saddle {k} do not pair the corners"
            )));
        };
        let mut rev = arc.clone();
        rev.reverse();
        let join = |parts: &[&[u32]]| {
            let mut w: Vec<u32> = Vec::new();
            for p in parts {
                for &v in *p {
                    if w.last() != Some(&v) {
                        w.push(v);
                    }
                }
            }
            w
        };
        let band_a1 = join(&[&w2[..=j], &rev, &w1[i..]]);
        let band_a2 = join(&[&w1[..=i], &arc, &w2[j..]]);
        for (id, band) in [(a1, band_a1), (a2, band_a2)] {
            let leaf = b.leaf(id).unwrap();
            let got = basis.walk_word(s, self.curve_walk(&leaf.curve)?, false)?;
            let want = basis.walk_word(s, &band, false)?;
            if got != want {
                return Err(ObfError::Foliation(format!(
                    "leaf {id} after saddle {k} is not the band sum of leaves {} and {}",
                    b1.id, b2.id
                )));
            }
        }
        Ok(SaddleModel {
            before: [b1.id, b2.id],
            after: [a1, a2],
            sign,
        })
    }
}

pub fn validate_movie(m: &MoviePresentation) -> ValidationReport {
    let mut rep = ValidationReport::default();
    let mut fail = |c: &str, r: String| rep.violations.push(Failure::new(c, r));
    let s = &m.page.surface;
    if m.slices.is_empty() {
        fail("slices", "a movie needs at least one slice".into());
        return rep;
    }
    if m.events.len() + 1 != m.slices.len() {
        fail(
            "events",
            format!(
                "{} slices need {} gaps, got {}",
                m.slices.len(),
                m.slices.len() - 1,
                m.events.len()
            ),
        );
        return rep;
    }
    let mut vertices = BTreeSet::new();
    for e in &m.elliptics {
        if s.binding_at(e.vertex).is_none() {
            fail(
                "elliptics",
                format!("elliptic {} is not on a binding", e.id),
            );
        }
        if !vertices.insert(e.vertex) {
            fail(
                "elliptics",
                format!("two elliptic points at vertex {}", e.vertex),
            );
        }
    }
    for (k, sl) in m.slices.iter().enumerate() {
        let mut used = BTreeSet::new();
        let mut touched: BTreeMap<u32, u32> = BTreeMap::new();
        let mut ids = BTreeSet::new();
        for l in &sl.leaves {
            if !ids.insert(l.id) {
                fail("slices", format!("slice {k} lists leaf {} twice", l.id));
            }
            let (Some(a), Some(b)) = (m.elliptic(l.from), m.elliptic(l.to)) else {
                fail(
                    "slices",
                    format!("leaf {} in slice {k} ends at an unknown elliptic", l.id),
                );
                continue;
            };
            if a.sign != Sign::Pos || b.sign != Sign::Neg {
                fail(
                    "sign_coherence",
                    format!(
                        "leaf {} must run from a positive to a negative elliptic",
                        l.id
                    ),
                );
            }
            *touched.entry(a.id).or_default() += 1;
            *touched.entry(b.id).or_default() += 1;
            let Ok(c) = m.page.curve(&l.curve) else {
                fail(
                    "slices",
                    format!("leaf {} uses unknown curve {}", l.id, l.curve),
                );
                continue;
            };
            if !c.is_arc() || c.puncture_end.is_some() {
                fail("slices", format!("curve {} is not a b-arc", l.curve));
                continue;
            }
            if c.walk[0] != a.vertex || *c.walk.last().unwrap() != b.vertex {
                fail(
                    "slices",
                    format!(
                        "curve {} does not join elliptics {} and {}",
                        l.curve, a.id, b.id
                    ),
                );
            }
            for &v in &c.walk {
                if !used.insert(v) {
                    fail("slices", format!("leaves of slice {k} meet at vertex {v}"));
                }
            }
        }
        for e in &m.elliptics {
            match touched.get(&e.id).copied().unwrap_or(0) {
                1 => {}
                n => fail(
                    "slices",
                    format!("elliptic {} meets {n} leaves in slice {k}", e.id),
                ),
            }
        }
    }
    if !rep.is_valid() {
        return rep;
    }
    let basis = HomotopyBasis::new(s);
    let class = |name: &str| basis.walk_word(s, &m.page.curves[name].walk, false).ok();
    let mut fail = |c: &str, r: String| rep.violations.push(Failure::new(c, r));
    for (k, ev) in m.events.iter().enumerate() {
        let (a, b) = (&m.slices[k], &m.slices[k + 1]);
        for l in &a.leaves {
            if let Some(l2) = b.leaf(l.id) {
                if (l.from, l.to) != (l2.from, l2.to) || class(&l.curve) != class(&l2.curve) {
                    fail(
                        "isotopy",
                        format!("leaf {} changes between slices {k} and {}", l.id, k + 1),
                    );
                }
            }
        }
        match ev {
            None => {
                if a.ids() != b.ids() {
                    fail(
                        "events",
                        format!(
                            "leaves change between slices {k} and {} without an event",
                            k + 1
                        ),
                    );
                }
            }
            Some(Event::Saddle { describing_arc }) => {
                if let Err(e) = m.saddle(k, describing_arc, &basis) {
                    fail("saddle", e.to_string());
                }
            }
        }
    }
    let (first, last) = (&m.slices[0], &m.slices[m.slices.len() - 1]);
    let src: BTreeSet<u32> = m.gluing.iter().map(|g| g.0).collect();
    let dst: BTreeSet<u32> = m.gluing.iter().map(|g| g.1).collect();
    if src != last.ids()
        || dst != first.ids()
        || m.gluing.len() != src.len()
        || m.gluing.len() != dst.len()
    {
        fail(
            "gluing",
            "gluing must be a bijection from the last slice onto the first".into(),
        );
    } else {
        for &(x, y) in &m.gluing {
            let (lx, ly) = (last.leaf(x).unwrap(), first.leaf(y).unwrap());
            if (lx.from, lx.to) != (ly.from, ly.to) {
                fail(
                    "gluing",
                    format!("gluing sends leaf {x} to leaf {y} with other endpoints"),
                );
            } else if m.identity_monodromy && class(&lx.curve) != class(&ly.curve) {
                fail(
                    "gluing",
                    format!("leaves {x} and {y} are not isotopic under the identity monodromy"),
                );
            }
        }
    }
    rep
}

/// Trace leaves through the events and assemble the region decomposition.
pub fn compile_movie(m: &MoviePresentation) -> Result<FoliatedSurface> {
    let rep = validate_movie(m);
    if !rep.is_valid() {
        return Err(ObfError::Guard(rep.violations));
    }
    let s = &m.page.surface;
    let basis = HomotopyBasis::new(s);
    let glue: BTreeMap<u32, u32> = m.gluing.iter().copied().collect();
    let canon = |id: u32| glue.get(&id).copied().unwrap_or(id);
    let mut leaves: BTreeMap<u32, Leaf> = BTreeMap::new();
    for sl in &m.slices {
        for l in &sl.leaves {
            leaves.entry(canon(l.id)).or_insert_with(|| Leaf {
                id: canon(l.id),
                kind: LeafKind::B,
                from: Some(l.from),
                to: Some(l.to),
                curve: Some(l.curve.clone()),
                time: 1,
                boundary_parallel: false,
            });
        }
    }
    let mut hyperbolics = Vec::new();
    let mut regions = Vec::new();
    for (k, ev) in m.events.iter().enumerate() {
        let Some(Event::Saddle { describing_arc }) = ev else {
            continue;
        };
        let sm = m.saddle(k, describing_arc, &basis)?;
        let id = regions.len() as u32 + 1;
        hyperbolics.push(Hyperbolic {
            id,
            sign: sm.sign,
            position: id - 1,
            describing_arc: Some(describing_arc.clone()),
        });
        let [b1, b2] = sm.before.map(canon);
        let [a1, a2] = sm.after.map(canon);
        regions.push(Region {
            id,
            kind: RegionKind::Bb,
            hyperbolic: id,
            cycles: vec![vec![
                Side::fwd(b1),
                Side::rev(a1),
                Side::fwd(b2),
                Side::rev(a2),
            ]],
        });
    }
    let elliptics = m
        .elliptics
        .iter()
        .map(|e| Elliptic {
            id: e.id,
            sign: e.sign,
            binding: s.binding_at(e.vertex).unwrap_or_default().to_string(),
        })
        .collect();
    let mut f = FoliatedSurface {
        surface_kind: SurfaceKind::General,
        elliptics,
        braid_boundary: Vec::new(),
        hyperbolics,
        leaves: leaves.into_values().collect(),
        regions,
        punctures: Vec::new(),
        page: Some(m.page.clone()),
    };
    if f.euler_characteristic() == 2 {
        f.surface_kind = SurfaceKind::Sphere;
    }
    f.assign_times();
    let rep = crate::foliation::validate(&f);
    if !rep.is_valid() {
        return Err(ObfError::Guard(rep.violations));
    }
    Ok(f)
}

/// Slice a foliation with page data at every gap of its event order.
pub fn extract_movie(f: &FoliatedSurface) -> Result<MoviePresentation> {
    let page = f
        .page
        .clone()
        .ok_or_else(|| ObfError::Unsupported("extraction needs a page".into()))?;
    let n = f.event_count();
    let life = f.lifetimes();
    let mut elliptics = Vec::new();
    for e in &f.elliptics {
        let vertex = f
            .leaves
            .iter()
            .find_map(|l| {
                let c = page.curves.get(l.curve.as_ref()?)?;
                if l.from == Some(e.id) {
                    c.walk.first().copied()
                } else if l.to == Some(e.id) {
                    c.walk.last().copied()
                } else {
                    None
                }
            })
            .ok_or_else(|| {
                ObfError::Unsupported(format!("elliptic {} has no leaf with a curve", e.id))
            })?;
        elliptics.push(MovieElliptic {
            id: e.id,
            sign: e.sign,
            vertex,
        });
    }
    let alive = |slot: u32| -> Result<Slice> {
        let mut leaves = Vec::new();
        for l in &f.leaves {
            let on = n == 0 || life.get(&l.id).is_some_and(|lt| lt.contains_slot(slot, n));
            if on {
                let curve = l
                    .curve
                    .clone()
                    .ok_or_else(|| ObfError::Unsupported(format!("leaf {} has no curve", l.id)))?;
                leaves.push(SliceLeaf {
                    id: l.id,
                    from: l.from.unwrap(),
                    to: l.to.unwrap(),
                    curve,
                });
            }
        }
        Ok(Slice { leaves })
    };
    let order = f.event_order();
    let mut slices = vec![alive(if n == 0 { 1 } else { 2 * n as u32 - 1 })?];
    let mut events = Vec::new();
    for (k, h) in order.iter().enumerate() {
        let arc = f
            .hyperbolic(*h)
            .and_then(|h| h.describing_arc.clone())
            .ok_or_else(|| {
                ObfError::Unsupported(format!("hyperbolic {h} has no describing arc"))
            })?;
        events.push(Some(Event::Saddle {
            describing_arc: arc,
        }));
        slices.push(alive(2 * k as u32 + 1)?);
    }
    let gluing = slices
        .last()
        .unwrap()
        .leaves
        .iter()
        .map(|l| (l.id, l.id))
        .collect();
    Ok(MoviePresentation {
        page,
        elliptics,
        slices,
        events,
        gluing,
        identity_monodromy: true,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum HexagonType {
    Type1,
    Type2,
}

/// The hexagon around b-arc `b`: the tile where `b` is born and the tile where it
/// dies, of opposite signs with consecutive events. Type1 when the earlier tile is positive.
pub fn classify_hexagon(f: &FoliatedSurface, b: u32) -> Result<HexagonType> {
    let guard = |c: &str, r: String| ObfError::Guard(vec![Failure::new(c, r)]);
    let (birth, death) = f.leaf_regions().get(&b).copied().unwrap_or_default();
    let (Some(r1), Some(r2)) = (
        birth.and_then(|r| f.region(r)),
        death.and_then(|r| f.region(r)),
    ) else {
        return Err(guard(
            "hexagon",
            format!("leaf {b} does not separate two regions"),
        ));
    };
    if r1.id == r2.id || r1.kind != RegionKind::Bb || r2.kind != RegionKind::Bb {
        return Err(guard(
            "hexagon",
            format!("leaf {b} is not shared by two bb-tiles"),
        ));
    }
    let (s1, s2) = (f.region_sign(r1).unwrap(), f.region_sign(r2).unwrap());
    if s1 == s2 {
        return Err(guard(
            "hexagon",
            format!("tiles {} and {} have the same sign", r1.id, r2.id),
        ));
    }
    let rank = f.event_rank();
    let n = f.event_count();
    if (rank[&r1.hyperbolic] + 1) % n != rank[&r2.hyperbolic] {
        return Err(guard(
            "co_paging",
            format!(
                "events of tiles {} and {} are not consecutive",
                r1.id, r2.id
            ),
        ));
    }
    Ok(if s1.is_pos() {
        HexagonType::Type1
    } else {
        HexagonType::Type2
    })
}

#[cfg(test)]
mod tests {
    use super::standard::{rigid_sphere_movie, split_sphere_movie};
    use super::*;
    use crate::foliation::census;
    use crate::foliation::fdtc::strongly_essential_at;
    use crate::foliation::iso::isomorphic;

    #[test]
    fn rigid_sphere_compiles_to_two_tiles() {
        let f = compile_movie(&rigid_sphere_movie()).unwrap();
        assert_eq!(f.surface_kind, SurfaceKind::Sphere);
        assert_eq!(f.regions.len(), 2);
        assert!(f.regions.iter().all(|r| r.kind == RegionKind::Bb));
        let signs: Vec<Sign> = f.hyperbolics.iter().map(|h| h.sign).collect();
        assert_eq!(signs, vec![Sign::Neg, Sign::Pos]);
        let c = census(&f);
        assert_eq!(c.valence_count(2), 4);
        assert!(c.all_hold());
        for e in &f.elliptics {
            assert!(
                strongly_essential_at(&f, e.id).unwrap(),
                "elliptic {}",
                e.id
            );
        }
    }

    #[test]
    fn round_trip_is_isomorphic() {
        let f = compile_movie(&rigid_sphere_movie()).unwrap();
        let m = extract_movie(&f).unwrap();
        assert!(validate_movie(&m).is_valid(), "{:?}", validate_movie(&m));
        assert!(isomorphic(&f, &compile_movie(&m).unwrap()));
    }

    #[test]
    fn two_saddles_in_one_gap_are_rejected() {
        let mut m = rigid_sphere_movie();
        m.slices.remove(1);
        m.events.remove(1);
        assert!(!validate_movie(&m).is_valid());
    }

    #[test]
    fn gluing_must_be_a_bijection() {
        let mut m = rigid_sphere_movie();
        m.gluing.pop();
        assert!(!validate_movie(&m).is_valid());
        let mut m = rigid_sphere_movie();
        m.gluing = vec![(5, 4), (6, 2)];
        assert!(!validate_movie(&m).is_valid());
    }

    #[test]
    fn arc_direction_does_not_change_the_sign() {
        let mut m = rigid_sphere_movie();
        if let Some(Some(Event::Saddle { describing_arc })) = m.events.get_mut(1) {
            describing_arc.reverse();
        }
        let f = compile_movie(&m).unwrap();
        assert_eq!(f.hyperbolics[1].sign, Sign::Pos);
    }

    #[test]
    fn split_sphere_has_no_regions() {
        let f = compile_movie(&split_sphere_movie()).unwrap();
        assert_eq!((f.regions.len(), f.leaves.len()), (0, 1));
        assert_eq!(f.surface_kind, SurfaceKind::Sphere);
    }

    #[test]
    fn hexagon_types_follow_the_earlier_tile() {
        let f = compile_movie(&rigid_sphere_movie()).unwrap();
        assert_eq!(classify_hexagon(&f, 1).unwrap(), HexagonType::Type2);
        assert_eq!(classify_hexagon(&f, 2).unwrap(), HexagonType::Type1);
    }
}
