//! Dehn twists along the core of a plumbed grid annulus.
//!
//! Every passage of a curve through rings 1..=3 must enter from ring 0 and leave
//! through ring 4 or the reverse. The passage is rerouted along ring 1, across
//! the core, then along ring 3, with its column displacement shifted by one full
//! turn. In (column, ring) coordinates the grid is negatively oriented, so a
//! right-handed twist moves a curve climbing from ring 0 towards lower columns.

use super::curve::{CurveKind, EmbeddedCurve};
use super::plumb::{AnnulusGrid, RINGS};
use super::surface::CombinatorialSurface;
use crate::error::{ObfError, Result};

fn col_step(from: usize, to: usize, n: usize) -> i64 {
    let d = (to + n - from) % n;
    match d {
        0 => 0,
        1 => 1,
        x if x == n - 1 => -1,
        _ => 0,
    }
}

/// `power` is `+1` (right-handed) or `-1`.
pub fn dehn_twist(
    s: &CombinatorialSurface,
    grid: &AnnulusGrid,
    a: &EmbeddedCurve,
    power: i32,
) -> Result<EmbeddedCurve> {
    if power != 1 && power != -1 {
        return Err(ObfError::Curve(format!(
            "twist power must be +1 or -1, got {power}"
        )));
    }
    a.validate(s)?;
    let loc = grid.locate();
    let n = grid.columns();
    let inner = |v: u32| {
        loc.get(&v)
            .is_some_and(|&(j, _)| (1..RINGS - 1).contains(&j))
    };

    let mut walk = a.walk.clone();
    let closed = a.kind == CurveKind::Circle;
    if closed {
        if walk.iter().all(|&v| inner(v)) {
            return Err(ObfError::Curve("curve stays inside the annulus".into()));
        }
        let r = walk.iter().position(|&v| !inner(v)).unwrap();
        walk.rotate_left(r);
        walk.push(walk[0]);
    }

    let mut out: Vec<u32> = Vec::with_capacity(walk.len() + 2 * n);
    let mut t = 0;
    while t < walk.len() {
        let v = walk[t];
        if !inner(v) {
            out.push(v);
            t += 1;
            continue;
        }
        let start = t;
        while t < walk.len() && inner(walk[t]) {
            t += 1;
        }
        if start == 0 || t == walk.len() {
            return Err(ObfError::Curve("curve ends inside the annulus".into()));
        }
        let entry = walk[start - 1];
        let exit = walk[t];
        let (Some(&(je, ce)), Some(&(jx, cx))) = (loc.get(&entry), loc.get(&exit)) else {
            return Err(ObfError::Curve(
                "passage enters the annulus off the grid".into(),
            ));
        };
        let upward = match (je, jx) {
            (0, j) if j == RINGS - 1 => true,
            (j, 0) if j == RINGS - 1 => false,
            _ => {
                return Err(ObfError::Curve(
                    "curve is not transverse to the annulus".into(),
                ))
            }
        };
        let mut disp = 0i64;
        let mut prev = ce;
        for &x in &walk[start..=t] {
            let c = loc[&x].1;
            disp += col_step(prev, c, n);
            prev = c;
        }
        let turn = n as i64 * power as i64;
        let new_disp = if upward { disp - turn } else { disp + turn };
        let half = new_disp / 2;
        let (near, far) = if upward {
            (1, RINGS - 2)
        } else {
            (RINGS - 2, 1)
        };
        let at = |j: usize, c: i64| grid.rings[j][c.rem_euclid(n as i64) as usize];
        let mut c = ce as i64;
        out.push(at(near, c));
        for _ in 0..half.abs() {
            c += half.signum();
            out.push(at(near, c));
        }
        out.push(at(2, c));
        out.push(at(far, c));
        let rest = new_disp - half;
        for _ in 0..rest.abs() {
            c += rest.signum();
            out.push(at(far, c));
        }
        debug_assert_eq!(c.rem_euclid(n as i64) as usize, cx);
    }
    if closed {
        out.pop();
    }
    let twisted = EmbeddedCurve {
        kind: a.kind,
        walk: out,
        puncture_end: a.puncture_end,
    };
    twisted.validate(s).map_err(|e| {
        ObfError::Curve(format!(
            "twisted walk is not embedded, refine the annulus first ({e})"
        ))
    })?;
    Ok(twisted)
}

/// Number of times the walk passes through the core ring.
pub fn core_crossings(grid: &AnnulusGrid, a: &EmbeddedCurve) -> usize {
    let core: std::collections::HashSet<u32> = grid.rings[2].iter().copied().collect();
    a.walk.iter().filter(|v| core.contains(v)).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::page::build::{grid_column_arc, grid_disc, grid_row_arc, grid_vertex};
    use crate::page::homotopy::same_class;
    use crate::page::plumb::plumb_annulus;

    fn setup() -> (crate::page::plumb::Plumbing, EmbeddedCurve) {
        let s = grid_disc(4, &[]).unwrap();
        let p = plumb_annulus(&s, &grid_column_arc(4, 2)).unwrap();
        let beta = p.transport(&grid_row_arc(4, 2)).unwrap();
        (p, beta)
    }

    #[test]
    fn disjoint_curve_is_fixed() {
        let (p, _) = setup();
        let far = EmbeddedCurve::arc(vec![
            grid_vertex(4, 4, 1),
            grid_vertex(4, 3, 1),
            grid_vertex(4, 3, 0),
        ]);
        assert_eq!(dehn_twist(&p.surface, &p.grid, &far, 1).unwrap(), far);
    }

    #[test]
    fn twist_changes_class_and_inverse_restores_it() {
        let (p, beta) = setup();
        let tw = dehn_twist(&p.surface, &p.grid, &beta, 1).unwrap();
        assert_eq!(tw.walk.first(), beta.walk.first());
        assert_eq!(tw.walk.last(), beta.walk.last());
        assert_eq!(core_crossings(&p.grid, &tw), core_crossings(&p.grid, &beta));
        assert!(!same_class(&p.surface, &tw, &beta).unwrap());
        let back = dehn_twist(&p.surface, &p.grid, &tw, -1).unwrap();
        assert!(same_class(&p.surface, &back, &beta).unwrap());
        let other = dehn_twist(&p.surface, &p.grid, &beta, -1).unwrap();
        assert!(!same_class(&p.surface, &other, &tw).unwrap());
    }

    #[test]
    fn same_side_excursion_rejected() {
        let (p, _) = setup();
        let g = &p.grid;
        let c = g.alpha_columns + 1;
        let dip = EmbeddedCurve::arc(vec![
            g.rings[0][c],
            g.rings[1][c],
            g.rings[1][c + 1],
            g.rings[0][c + 1],
        ]);
        assert!(dehn_twist(&p.surface, &p.grid, &dip, 1).is_err());
    }
}
