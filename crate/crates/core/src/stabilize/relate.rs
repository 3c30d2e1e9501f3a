//! `F' -> F''` through exchange inverse, a retrograde and a prograde bypass, and
//! an exchange.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::Bigon;
use crate::error::{Failure, ObfError, Result};
use crate::foliation::iso::isomorphic;
use crate::foliation::FoliatedSurface;
use crate::moves::exchange::exchange_inverse_sites;
use crate::moves::{
    apply_move, bypass_sites, check_exchange, BypassWitness, ExchangeSite, Move, MoveKind,
};
use crate::reduce::{MoveTrace, Outcome};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationPlan {
    pub site: ExchangeSite,
    pub retro: (u32, BypassWitness),
    pub pro: (u32, BypassWitness),
    pub exchange: u32,
}

impl RelationPlan {
    pub fn moves(&self) -> [Move; 4] {
        [
            Move::ExchangeInverse { site: self.site },
            Move::Bypass {
                leaf: self.retro.0,
                witness: self.retro.1.clone(),
            },
            Move::Bypass {
                leaf: self.pro.0,
                witness: self.pro.1.clone(),
            },
            Move::Exchange { v: self.exchange },
        ]
    }
}

fn corners(f: &FoliatedSurface, b: &Bigon) -> Vec<u32> {
    let mut out: Vec<u32> = b
        .regions
        .iter()
        .filter_map(|&r| f.region(r))
        .filter_map(|r| f.tile_corners(r))
        .flatten()
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Find the four moves taking `prime` to a surface isomorphic to `target` around
/// one bi-gon. Sites at the start of the crossed b-arc and on a spoke of the
/// bi-gon go first. Bypasses must use a bi-gon saddle or one made by the
/// exchange inverse, and the exchange sits at a bi-gon end or a new vertex.
pub fn relation_witnesses(
    prime: &FoliatedSurface,
    bigon: &Bigon,
    target: &FoliatedSurface,
) -> Result<RelationPlan> {
    let at = corners(prime, bigon);
    let old_h: BTreeSet<u32> = prime.hyperbolics.iter().map(|h| h.id).collect();
    let old_e: BTreeSet<u32> = prime.elliptics.iter().map(|e| e.id).collect();
    let y = prime.leaf(bigon.leaf).and_then(|l| l.from);
    let spokes: BTreeSet<u32> = prime
        .leaves_at(bigon.ends[0])
        .into_iter()
        .filter(|&l| l != bigon.tau)
        .collect();
    let mut sites: Vec<ExchangeSite> = exchange_inverse_sites(prime)
        .into_iter()
        .filter(|s| at.contains(&s.node))
        .collect();
    sites.sort_by_key(|s| {
        (
            Some(s.node) != y,
            !s.leaves.iter().any(|l| spokes.contains(l)),
        )
    });
    for site in sites {
        let Ok((g1, _)) = apply_move(prime, &Move::ExchangeInverse { site }) else {
            continue;
        };
        let mut hot: BTreeSet<u32> = g1
            .hyperbolics
            .iter()
            .map(|h| h.id)
            .filter(|h| !old_h.contains(h))
            .collect();
        hot.extend([bigon.p, bigon.q]);
        let mut ends: Vec<u32> = g1
            .elliptics
            .iter()
            .map(|e| e.id)
            .filter(|e| !old_e.contains(e))
            .collect();
        ends.extend(bigon.ends);
        let near = |w: &BypassWitness| hot.contains(&w.p) || hot.contains(&w.q);
        for (b1, w1) in bypass_sites(&g1)
            .into_iter()
            .filter(|(_, w)| w.sign.is_pos() && near(w))
        {
            let Ok((g2, _)) = apply_move(
                &g1,
                &Move::Bypass {
                    leaf: b1,
                    witness: w1.clone(),
                },
            ) else {
                continue;
            };
            for (b2, w2) in bypass_sites(&g2)
                .into_iter()
                .filter(|(_, w)| !w.sign.is_pos() && near(w))
            {
                let Ok((g3, _)) = apply_move(
                    &g2,
                    &Move::Bypass {
                        leaf: b2,
                        witness: w2.clone(),
                    },
                ) else {
                    continue;
                };
                for &e in &ends {
                    if !check_exchange(&g3, e).ok {
                        continue;
                    }
                    let Ok((g4, _)) = apply_move(&g3, &Move::Exchange { v: e }) else {
                        continue;
                    };
                    if isomorphic(&g4, target) {
                        return Ok(RelationPlan {
                            site,
                            retro: (b1, w1),
                            pro: (b2, w2.clone()),
                            exchange: e,
                        });
                    }
                }
            }
        }
    }
    Err(ObfError::Guard(vec![Failure::new(
        "relation",
        "no exchange/bypass/bypass/exchange path reaches the target",
    )]))
}

/// Run a relation plan, checking the move kinds and the dividing-set change of
/// each bypass.
pub fn relate_prime_doubleprime(prime: &FoliatedSurface, plan: &RelationPlan) -> Result<MoveTrace> {
    let want = [
        MoveKind::ExchangeInverse,
        MoveKind::BypassRetro,
        MoveKind::BypassPro,
        MoveKind::Exchange,
    ];
    let mut f = prime.clone();
    let mut steps = Vec::with_capacity(4);
    for (mv, kind) in plan.moves().iter().zip(want) {
        let (g, rec) = apply_move(&f, mv)?;
        if rec.kind != kind {
            return Err(ObfError::Guard(vec![Failure::new(
                "witness",
                format!("expected {kind:?}, got {:?}", rec.kind),
            )]));
        }
        let flips = kind == MoveKind::BypassRetro;
        if matches!(kind, MoveKind::BypassRetro | MoveKind::BypassPro)
            && rec.dividing_set_changed != flips
        {
            return Err(ObfError::Guard(vec![Failure::new(
                "dividing_set",
                format!("{kind:?} dividing-set change mismatch"),
            )]));
        }
        f = g;
        steps.push(rec);
    }
    Ok(MoveTrace {
        steps,
        outcome: Outcome::Related,
        result: f,
    })
}
