//! Bounds on the fractional Dehn twist coefficient at a strongly essential elliptic point.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::FoliatedSurface;
use crate::error::{Failure, ObfError, Result};
use crate::page::classify_arc;
use crate::rational::Rational;
use crate::sign::Sign;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub elliptic: u32,
    pub sign: Sign,
    pub binding: String,
    /// Positive hyperbolic points joined to the elliptic point by a singular leaf.
    pub p: i64,
    pub n: i64,
    pub fdtc: Rational,
    pub lower: i64,
    pub upper: i64,
    pub holds: bool,
}

impl InequalityReport {
    pub fn describe(&self) -> String {
        let (lo, hi) = if self.sign.is_pos() {
            ("-N", "P")
        } else {
            ("-P", "N")
        };
        format!(
            "{lo} <= c <= {hi} at elliptic {} ({}): {} <= {} <= {} {}",
            self.elliptic,
            self.sign,
            self.lower,
            self.fdtc,
            self.upper,
            if self.holds { "holds" } else { "violated" }
        )
    }
}

/// `[-P, N]` at a negative elliptic point, `[-N, P]` at a positive one.
pub fn estimate_bounds(sign: Sign, p: i64, n: i64) -> (i64, i64) {
    if sign.is_pos() {
        (-n, p)
    } else {
        (-p, n)
    }
}

/// Count of positive and negative region corners at `v`.
pub fn corner_signs(f: &FoliatedSurface, v: u32) -> (i64, i64) {
    let (mut p, mut n) = (0, 0);
    for (_, r) in f.corners_at(v) {
        match f.region(r).and_then(|r| f.region_sign(r)) {
            Some(Sign::Pos) => p += 1,
            Some(Sign::Neg) => n += 1,
            None => {}
        }
    }
    (p, n)
}

/// Every b-arc at `v` is strongly essential in its page.
pub fn strongly_essential_at(f: &FoliatedSurface, v: u32) -> Result<bool> {
    let page = f
        .page
        .as_ref()
        .ok_or_else(|| ObfError::Unsupported("no page to classify b-arcs on".into()))?;
    for l in f.leaves_at(v) {
        let leaf = f.leaf(l).unwrap();
        let name = leaf
            .curve
            .as_ref()
            .ok_or_else(|| ObfError::Unsupported(format!("leaf {l} has no page curve")))?;
        if !classify_arc(&page.surface, page.curve(name)?)?.is_strongly_essential() {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn fdtc_estimate_check(
    f: &FoliatedSurface,
    v: u32,
    fdtc: &BTreeMap<String, Rational>,
) -> Result<InequalityReport> {
    let e = f
        .elliptic(v)
        .ok_or_else(|| ObfError::Foliation(format!("no elliptic point {v}")))?;
    if !strongly_essential_at(f, v)? {
        return Err(ObfError::Guard(vec![Failure::new(
            "strongly_essential",
            format!("elliptic {v} has a b-arc that is not strongly essential"),
        )]));
    }
    let c = *fdtc.get(&e.binding).ok_or_else(|| {
        ObfError::Unsupported(format!("no coefficient given for binding {}", e.binding))
    })?;
    let (p, n) = corner_signs(f, v);
    let (lower, upper) = estimate_bounds(e.sign, p, n);
    let holds = Rational::integer(lower) <= c && c <= Rational::integer(upper);
    Ok(InequalityReport {
        elliptic: v,
        sign: e.sign,
        binding: e.binding.clone(),
        p,
        n,
        fdtc: c,
        lower,
        upper,
        holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn holds(sign: Sign, p: i64, n: i64, c: Rational) -> bool {
        let (lo, hi) = estimate_bounds(sign, p, n);
        Rational::integer(lo) <= c && c <= Rational::integer(hi)
    }

    #[test]
    fn sign_branches() {
        assert!(!holds(Sign::Neg, 1, 1, Rational::integer(2)));
        assert!(holds(Sign::Pos, 2, 0, Rational::integer(1)));
        assert!(!holds(Sign::Pos, 2, 0, Rational::new(-1, 2)));
        assert!(holds(Sign::Neg, 2, 0, Rational::integer(-2)));
    }

    #[test]
    fn valence_two_mixed_signs_caps_at_one() {
        for s in [Sign::Pos, Sign::Neg] {
            for c in [Rational::new(3, 2), Rational::integer(-2)] {
                assert!(!holds(s, 1, 1, c));
            }
        }
    }

    #[test]
    fn needs_a_page() {
        let f = crate::foliation::standard::two_tile_sphere();
        assert!(fdtc_estimate_check(&f, 1, &BTreeMap::new()).is_err());
    }
}
