//! Ready-made movies.

use super::{Event, MovieElliptic, MoviePresentation, Slice, SliceLeaf};
use crate::page::build::{grid_disc, grid_row_arc, grid_vertex, holed_torus_grid};
use crate::page::{EmbeddedCurve, Page};
use crate::sign::Sign;

const M: u32 = 6;

fn t(i: u32, j: u32) -> u32 {
    (j % M) * M + (i % M)
}

fn walk(pts: &[(u32, u32)]) -> Vec<u32> {
    pts.iter().map(|&(i, j)| t(i, j)).collect()
}

fn leaf(id: u32, from: u32, to: u32, curve: &str) -> SliceLeaf {
    SliceLeaf {
        id,
        from,
        to,
        curve: curve.into(),
    }
}

/// Two-tile sphere of opposite signs on a holed torus page with identity monodromy.
///
/// Elliptic points sit at the corners of the binding square: `1 = (1,0)` and
/// `3 = (0,1)` positive, `2 = (1,1)` and `4 = (0,0)` negative. Every b-arc is
/// non-separating in the page.
pub fn rigid_sphere_movie() -> MoviePresentation {
    let mut page = Page::new(holed_torus_grid(M).expect("grid size is valid"));
    let arcs: [(&str, Vec<u32>); 4] = [
        (
            "l1",
            walk(&[
                (1, 0),
                (2, 0),
                (3, 0),
                (3, 5),
                (3, 4),
                (3, 3),
                (3, 2),
                (3, 1),
                (2, 1),
                (1, 1),
            ]),
        ),
        (
            "l2",
            walk(&[(0, 1), (5, 1), (4, 1), (3, 1), (2, 1), (1, 1)]),
        ),
        (
            "l3",
            walk(&[
                (0, 1),
                (5, 1),
                (4, 1),
                (4, 2),
                (4, 3),
                (4, 4),
                (4, 5),
                (4, 0),
                (5, 0),
                (0, 0),
            ]),
        ),
        (
            "l4",
            walk(&[(1, 0), (2, 0), (3, 0), (4, 0), (5, 0), (0, 0)]),
        ),
    ];
    for (name, w) in arcs {
        page.register(name, EmbeddedCurve::arc(w))
            .expect("leaf arcs are embedded");
    }
    let elliptics = vec![
        MovieElliptic {
            id: 1,
            sign: Sign::Pos,
            vertex: t(1, 0),
        },
        MovieElliptic {
            id: 2,
            sign: Sign::Neg,
            vertex: t(1, 1),
        },
        MovieElliptic {
            id: 3,
            sign: Sign::Pos,
            vertex: t(0, 1),
        },
        MovieElliptic {
            id: 4,
            sign: Sign::Neg,
            vertex: t(0, 0),
        },
    ];
    let s0 = Slice {
        leaves: vec![leaf(2, 3, 2, "l2"), leaf(4, 1, 4, "l4")],
    };
    let s1 = Slice {
        leaves: vec![leaf(1, 1, 2, "l1"), leaf(3, 3, 4, "l3")],
    };
    let s2 = Slice {
        leaves: vec![leaf(5, 3, 2, "l2"), leaf(6, 1, 4, "l4")],
    };
    let gamma1 = walk(&[(3, 1), (3, 2), (3, 3), (3, 4), (3, 5), (3, 0)]);
    let gamma2 = walk(&[(3, 3), (4, 3)]);
    MoviePresentation {
        page,
        elliptics,
        slices: vec![s0, s1, s2.clone(), s2],
        events: vec![
            Some(Event::Saddle {
                describing_arc: gamma1,
            }),
            Some(Event::Saddle {
                describing_arc: gamma2,
            }),
            None,
        ],
        gluing: vec![(5, 2), (6, 4)],
        identity_monodromy: true,
    }
}

/// One b-arc across a disc page and no events.
pub fn split_sphere_movie() -> MoviePresentation {
    let mut page = Page::new(grid_disc(2, &[]).expect("grid size is valid"));
    page.register("b", grid_row_arc(2, 1))
        .expect("middle row is embedded");
    MoviePresentation {
        page,
        elliptics: vec![
            MovieElliptic {
                id: 1,
                sign: Sign::Pos,
                vertex: grid_vertex(2, 0, 1),
            },
            MovieElliptic {
                id: 2,
                sign: Sign::Neg,
                vertex: grid_vertex(2, 2, 1),
            },
        ],
        slices: vec![Slice {
            leaves: vec![leaf(1, 1, 2, "b")],
        }],
        events: vec![],
        gluing: vec![(1, 1)],
        identity_monodromy: true,
    }
}
