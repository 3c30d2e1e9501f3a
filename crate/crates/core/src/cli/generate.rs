//! Seeded growth of decomposing spheres by inverse moves from the split sphere,
//! so every generated instance is known to reduce.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{ObfError, Result};
use crate::foliation::standard::split_sphere;
use crate::foliation::{FoliatedSurface, PunctureOnF};
use crate::moves::{
    apply_exchange_inverse, apply_foliation_change, exchange::exchange_inverse_sites,
    ChangeOutcome, Move,
};
use crate::page::build::{grid_disc, grid_row_arc, grid_vertex};
use crate::page::{EmbeddedCurve, Page};
use crate::rational::Rational;

#[derive(Debug, Clone)]
pub struct GrowConfig {
    /// Stop once the sphere has at least this many tiles.
    pub tiles: usize,
    /// Upper bound on foliation changes mixed in after each inverse exchange.
    pub changes_per_step: usize,
    /// Coefficient recorded on the binding of the disc page.
    pub coefficient: Rational,
    /// Braid intersection points, each dropped into a random region at the end.
    pub punctures: u32,
}

impl Default for GrowConfig {
    fn default() -> Self {
        GrowConfig {
            tiles: 8,
            changes_per_step: 2,
            coefficient: Rational::integer(2),
            punctures: 0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Grown {
    pub surface: FoliatedSurface,
    /// The moves that built `surface` from the split sphere.
    pub history: Vec<Move>,
}

/// Split sphere on a disc page whose binding carries `coefficient`.
pub fn seed_sphere(coefficient: Rational) -> FoliatedSurface {
    let mut f = split_sphere();
    let disc = grid_disc(2, &[])
        .and_then(|s| s.with_fdtc("C1", coefficient))
        .expect("disc page is valid");
    f.page = Some(Page::new(disc));
    f
}

pub fn grow_sphere(seed: u64, cfg: &GrowConfig) -> Result<Grown> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut f = seed_sphere(cfg.coefficient);
    let mut history = Vec::new();
    while f.regions.len() < cfg.tiles {
        let mut sites = exchange_inverse_sites(&f);
        sites.shuffle(&mut rng);
        let mut grown = false;
        for site in sites {
            if let Ok((g, rec)) = apply_exchange_inverse(&f, &site) {
                f = g;
                history.push(rec.parameters);
                grown = true;
                break;
            }
        }
        if !grown {
            return Err(ObfError::Foliation(format!(
                "no inverse exchange site at {} tiles",
                f.regions.len()
            )));
        }
        for _ in 0..rng.gen_range(0..=cfg.changes_per_step) {
            let mut pairs: Vec<(u32, u32)> = f
                .leaf_regions()
                .into_values()
                .filter_map(|(b, d)| Some((b?, d?)))
                .filter(|(b, d)| b != d)
                .collect();
            pairs.sort_unstable();
            pairs.dedup();
            pairs.shuffle(&mut rng);
            let outcome = if rng.gen_bool(0.5) {
                ChangeOutcome::B
            } else {
                ChangeOutcome::C
            };
            if let Some((g, rec)) = pairs
                .into_iter()
                .find_map(|(r1, r2)| apply_foliation_change(&f, r1, r2, outcome).ok())
            {
                f = g;
                history.push(rec.parameters);
            }
        }
    }
    let regions: Vec<u32> = f.regions.iter().map(|r| r.id).collect();
    f.punctures = (1..=cfg.punctures)
        .map(|id| PunctureOnF {
            id,
            region: regions.choose(&mut rng).copied(),
        })
        .collect();
    Ok(Grown {
        surface: f,
        history,
    })
}

/// Page-level picture of a foliation change on a grid disc: three before-leaves
/// along rows, describing arcs climbing between neighbouring rows, and the
/// common b-arc made by the first saddle.
#[derive(Debug, Clone)]
pub struct ChangeSitePage {
    pub page: Page,
    pub b: EmbeddedCurve,
    pub leaves: [EmbeddedCurve; 3],
    pub arcs: [Vec<u32>; 2],
}

/// Staircase from row `lo` to row `hi` starting at column `i`, staying off the
/// binding columns and strictly between the rows in its interior.
fn staircase(rng: &mut ChaCha8Rng, n: u32, i: u32, lo: u32, hi: u32) -> Vec<u32> {
    let mut walk = vec![grid_vertex(n, i, lo)];
    let (mut x, mut y) = (i, lo);
    while y + 1 < hi {
        y += 1;
        walk.push(grid_vertex(n, x, y));
        let target = rng.gen_range(1..n);
        while x != target {
            x = if target > x { x + 1 } else { x - 1 };
            walk.push(grid_vertex(n, x, y));
        }
    }
    walk.push(grid_vertex(n, x, hi));
    walk
}

pub fn separating_change_site(seed: u64) -> Result<ChangeSitePage> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(6..=10);
    let j1 = rng.gen_range(1..=n - 5);
    let j3 = rng.gen_range(j1 + 2..=n - 3);
    let j5 = rng.gen_range(j3 + 2..n);
    let (i1, i2) = (rng.gen_range(1..n), rng.gen_range(1..n));
    let g1 = staircase(&mut rng, n, i1, j1, j3);
    let g2 = staircase(&mut rng, n, i2, j3, j5);
    let col = |v: u32| v % (n + 1);
    let (start, end) = (col(g1[0]), col(*g1.last().unwrap()));
    let mut b: Vec<u32> = (0..start).map(|i| grid_vertex(n, i, j1)).collect();
    b.extend(&g1);
    b.extend((end + 1..=n).map(|i| grid_vertex(n, i, j3)));
    let mut page = Page::new(grid_disc(n, &[])?);
    let leaves = [
        grid_row_arc(n, j1),
        grid_row_arc(n, j3),
        grid_row_arc(n, j5),
    ];
    for (name, c) in ["l1", "l3", "l5"].into_iter().zip(&leaves) {
        page.register(name, c.clone())?;
    }
    let b = EmbeddedCurve::arc(b);
    page.register("b", b.clone())?;
    Ok(ChangeSitePage {
        page,
        b,
        leaves,
        arcs: [g1, g2],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::foliation::{census, validate};

    #[test]
    fn grown_spheres_satisfy_the_census() {
        for seed in 0..20 {
            let g = grow_sphere(
                seed,
                &GrowConfig {
                    tiles: 12,
                    ..Default::default()
                },
            )
            .unwrap();
            assert!(validate(&g.surface).is_valid());
            assert!(census(&g.surface).all_hold(), "seed {seed}");
            assert!(g.surface.regions.len() >= 12);
        }
    }

    #[test]
    fn growth_is_deterministic() {
        let cfg = GrowConfig::default();
        assert_eq!(
            grow_sphere(7, &cfg).unwrap().history,
            grow_sphere(7, &cfg).unwrap().history
        );
    }
}
