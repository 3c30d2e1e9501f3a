//! Valence census and the Euler identities of tiled spheres.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::FoliatedSurface;
use crate::sign::Sign;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignCounts {
    pub positive: u32,
    pub negative: u32,
}

impl SignCounts {
    pub fn total(&self) -> u32 {
        self.positive + self.negative
    }

    fn add(&mut self, s: Sign) {
        if s.is_pos() {
            self.positive += 1;
        } else {
            self.negative += 1;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Identity {
    pub name: String,
    pub lhs: i64,
    pub rhs: i64,
    pub holds: bool,
}

impl Identity {
    fn new(name: &str, lhs: i64, rhs: i64) -> Self {
        Identity {
            name: name.into(),
            lhs,
            rhs,
            holds: lhs == rhs,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Census {
    /// Valence of elliptic points to count.
    pub v: BTreeMap<u32, i64>,
    pub e: i64,
    pub r: i64,
    pub chi: i64,
    pub elliptics: SignCounts,
    pub hyperbolics: SignCounts,
    /// `None` unless the surface is a sphere tiled by bb-tiles only.
    pub identities: Option<Vec<Identity>>,
}

impl Census {
    pub fn vertex_count(&self) -> i64 {
        self.v.values().sum()
    }

    pub fn valence_count(&self, i: u32) -> i64 {
        self.v.get(&i).copied().unwrap_or(0)
    }

    pub fn all_hold(&self) -> bool {
        self.identities
            .as_ref()
            .is_none_or(|ids| ids.iter().all(|i| i.holds))
    }

    /// One line per identity: `name lhs rhs holds`.
    pub fn table(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "elliptics {} (+{} -{})\n",
            self.elliptics.total(),
            self.elliptics.positive,
            self.elliptics.negative
        ));
        out.push_str(&format!(
            "hyperbolics {} (+{} -{})\n",
            self.hyperbolics.total(),
            self.hyperbolics.positive,
            self.hyperbolics.negative
        ));
        out.push_str(&format!("E {}\nR {}\nchi {}\n", self.e, self.r, self.chi));
        for (i, n) in &self.v {
            out.push_str(&format!("V({i}) {n}\n"));
        }
        match &self.identities {
            None => out.push_str("identities not-applicable\n"),
            Some(ids) => {
                for id in ids {
                    out.push_str(&format!("{} {} {} {}\n", id.name, id.lhs, id.rhs, id.holds));
                }
            }
        }
        out
    }
}

impl fmt::Display for Census {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.table())
    }
}

pub fn census(f: &FoliatedSurface) -> Census {
    let mut v: BTreeMap<u32, i64> = BTreeMap::new();
    let valence = f.valences();
    for e in &f.elliptics {
        *v.entry(valence.get(&e.id).copied().unwrap_or(0))
            .or_default() += 1;
    }
    let mut elliptics = SignCounts::default();
    for e in &f.elliptics {
        elliptics.add(e.sign);
    }
    let mut hyperbolics = SignCounts::default();
    for h in &f.hyperbolics {
        hyperbolics.add(h.sign);
    }
    let e = f.edge_count() as i64;
    let r = f.regions.len() as i64;
    let chi = f.euler_characteristic();
    let tiled_sphere =
        !f.regions.is_empty() && f.bb_only() && f.braid_boundary.is_empty() && !f.has_c_circles();
    let identities = tiled_sphere.then(|| {
        let sum = |w: &dyn Fn(i64) -> i64| v.iter().map(|(&i, &n)| w(i as i64) * n).sum::<i64>();
        let excess: i64 = v
            .iter()
            .filter(|(&i, _)| i >= 4)
            .map(|(&i, &n)| (i as i64 - 4) * n)
            .sum();
        vec![
            Identity::new("2E=4R", 2 * e, 4 * r),
            Identity::new("sum_iV(i)=2E", sum(&|i| i), 2 * e),
            Identity::new("sum_V(i)-E+R=2", sum(&|_| 1) - e + r, 2),
            Identity::new("sum_(4-i)V(i)=8", sum(&|i| 4 - i), 8),
            Identity::new(
                "2V(2)+V(3)=8+sum_(i-4)V(i)",
                2 * v.get(&2).copied().unwrap_or(0) + v.get(&3).copied().unwrap_or(0),
                8 + excess,
            ),
        ]
    });
    Census {
        v,
        e,
        r,
        chi,
        elliptics,
        hyperbolics,
        identities,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::foliation::standard::{split_sphere, two_tile_sphere};

    #[test]
    fn split_sphere_is_not_applicable() {
        let c = census(&split_sphere());
        assert_eq!((c.e, c.r, c.chi), (0, 0, 2));
        assert_eq!(c.elliptics.total(), 2);
        assert_eq!(c.hyperbolics.total(), 0);
        assert!(c.identities.is_none());
    }

    #[test]
    fn two_tile_sphere_identities() {
        let c = census(&two_tile_sphere());
        assert_eq!(c.valence_count(2), 4);
        assert_eq!((c.e, c.r, c.chi), (4, 2, 2));
        let ids = c.identities.as_ref().unwrap();
        assert_eq!(ids.len(), 5);
        assert!(ids.iter().all(|i| i.holds), "{}", c.table());
        assert_eq!(ids[4].lhs, 8);
    }
}
