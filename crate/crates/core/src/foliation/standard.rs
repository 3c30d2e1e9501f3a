//! Small foliated spheres used as starting points and fixtures.

use super::{
    Elliptic, FoliatedSurface, Hyperbolic, Leaf, LeafKind, Region, RegionKind, Side, SurfaceKind,
};
use crate::sign::Sign;

/// A tile given by its four sides `[before, after, before, after]` from a positive corner.
#[derive(Debug, Clone, Copy)]
pub struct TileSpec {
    pub sides: [u32; 4],
    pub sign: Sign,
}

/// Leaves are `(id, from, to)` b-arcs. Tiles fire in list order; ids are `1..`.
pub fn from_tiles(
    elliptics: Vec<Elliptic>,
    leaves: &[(u32, u32, u32)],
    tiles: &[TileSpec],
) -> FoliatedSurface {
    let leaves = leaves
        .iter()
        .map(|&(id, from, to)| Leaf {
            id,
            kind: LeafKind::B,
            from: Some(from),
            to: Some(to),
            curve: None,
            time: 1,
            boundary_parallel: false,
        })
        .collect();
    let mut hyperbolics = Vec::new();
    let mut regions = Vec::new();
    for (k, t) in tiles.iter().enumerate() {
        let id = k as u32 + 1;
        hyperbolics.push(Hyperbolic {
            id,
            sign: t.sign,
            position: k as u32,
            describing_arc: None,
        });
        let [a, b, c, d] = t.sides;
        regions.push(Region {
            id,
            kind: RegionKind::Bb,
            hyperbolic: id,
            cycles: vec![vec![Side::fwd(a), Side::rev(b), Side::fwd(c), Side::rev(d)]],
        });
    }
    let mut f = FoliatedSurface {
        surface_kind: SurfaceKind::Sphere,
        elliptics,
        braid_boundary: Vec::new(),
        hyperbolics,
        leaves,
        regions,
        punctures: Vec::new(),
        page: None,
    };
    f.retype_tiles();
    f.assign_times();
    f
}

pub fn elliptic(id: u32, sign: Sign, binding: &str) -> Elliptic {
    Elliptic {
        id,
        sign,
        binding: binding.into(),
    }
}

/// Two elliptic points joined by one family of b-arcs and no hyperbolic point.
pub fn split_sphere() -> FoliatedSurface {
    from_tiles(
        vec![elliptic(1, Sign::Pos, "C1"), elliptic(2, Sign::Neg, "C1")],
        &[(1, 1, 2)],
        &[],
    )
}

/// Two opposite-sign bb-tiles on four valence-2 vertices `1+ 2- 3+ 4-`.
/// The first tile is negative.
pub fn two_tile_sphere() -> FoliatedSurface {
    let es = vec![
        elliptic(1, Sign::Pos, "C1"),
        elliptic(2, Sign::Neg, "C1"),
        elliptic(3, Sign::Pos, "C1"),
        elliptic(4, Sign::Neg, "C1"),
    ];
    // 1: 1->2, 2: 3->2, 3: 3->4, 4: 1->4
    let leaves = [(1, 1, 2), (2, 3, 2), (3, 3, 4), (4, 1, 4)];
    from_tiles(
        es,
        &leaves,
        &[
            TileSpec {
                sides: [4, 3, 2, 1],
                sign: Sign::Neg,
            },
            TileSpec {
                sides: [1, 2, 3, 4],
                sign: Sign::Pos,
            },
        ],
    )
}

/// Sphere made of two degenerate bc-annuli glued along one c-circle.
pub fn degenerate_bc_pair(binding_a: &str, binding_b: &str) -> FoliatedSurface {
    let elliptics = vec![
        elliptic(1, Sign::Pos, binding_a),
        elliptic(2, Sign::Neg, binding_a),
        elliptic(3, Sign::Pos, binding_b),
        elliptic(4, Sign::Neg, binding_b),
    ];
    let leaf = |id, kind, from, to| Leaf {
        id,
        kind,
        from,
        to,
        curve: None,
        time: 1,
        boundary_parallel: false,
    };
    let leaves = vec![
        leaf(1, LeafKind::B, Some(1), Some(2)),
        leaf(2, LeafKind::B, Some(3), Some(4)),
        leaf(3, LeafKind::C, None, None),
    ];
    let hyperbolics = vec![
        Hyperbolic {
            id: 1,
            sign: Sign::Pos,
            position: 0,
            describing_arc: None,
        },
        Hyperbolic {
            id: 2,
            sign: Sign::Neg,
            position: 1,
            describing_arc: None,
        },
    ];
    let regions = vec![
        Region {
            id: 1,
            kind: RegionKind::DegenerateBc,
            hyperbolic: 1,
            cycles: vec![vec![Side::fwd(1), Side::rev(1)], vec![Side::rev(3)]],
        },
        Region {
            id: 2,
            kind: RegionKind::DegenerateBc,
            hyperbolic: 2,
            cycles: vec![vec![Side::fwd(2), Side::rev(2)], vec![Side::fwd(3)]],
        },
    ];
    let mut f = FoliatedSurface {
        surface_kind: SurfaceKind::Sphere,
        elliptics,
        braid_boundary: Vec::new(),
        hyperbolics,
        leaves,
        regions,
        punctures: Vec::new(),
        page: None,
    };
    f.assign_times();
    f
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::foliation::validate;

    #[test]
    fn fixtures_validate() {
        for f in [
            split_sphere(),
            two_tile_sphere(),
            degenerate_bc_pair("C1", "C1"),
        ] {
            let rep = validate(&f);
            assert!(rep.is_valid(), "{:?}", rep.violations);
        }
    }

    #[test]
    fn two_tile_sphere_valences() {
        let f = two_tile_sphere();
        assert!(f.valences().values().all(|&v| v == 2));
        assert_eq!(f.euler_characteristic(), 2);
        assert_eq!(f.corners_at(1).len(), 2);
    }

    #[test]
    fn same_sign_b_arc_ends_rejected() {
        let mut f = two_tile_sphere();
        f.elliptics[1].sign = Sign::Pos;
        let rep = validate(&f);
        assert!(rep
            .violations
            .iter()
            .any(|v| v.condition == "sign_coherence"));
    }

    #[test]
    fn shared_event_position_rejected() {
        let mut f = two_tile_sphere();
        f.hyperbolics[1].position = f.hyperbolics[0].position;
        let rep = validate(&f);
        assert!(rep
            .violations
            .iter()
            .any(|v| v.condition == "distinct_events"));
    }

    #[test]
    fn leaf_time_outside_lifetime_rejected() {
        let mut f = two_tile_sphere();
        let t = f.leaves[0].time;
        f.leaves[0].time = (t + 2) % 4;
        let rep = validate(&f);
        assert!(rep.violations.iter().any(|v| v.condition == "event_order"));
    }

    #[test]
    fn broken_template_rejected() {
        let mut f = two_tile_sphere();
        f.regions[0].cycles[0].swap(1, 3);
        assert!(!validate(&f).is_valid());
    }
}
