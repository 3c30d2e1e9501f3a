//! Reduction of splitting and decomposing spheres to two elliptic points by
//! foliation changes and exchange moves, with a replayable trace.

mod punctures;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub use punctures::{cap_and_flatten, relocate_puncture};

use crate::error::{Failure, ObfError, Result};
use crate::foliation::circles::{
    degenerate_bc_obstruction, find_innermost_bc_annulus, ObstructionReport,
};
use crate::foliation::fdtc::{fdtc_estimate_check, InequalityReport};
use crate::foliation::{census, validate, FoliatedSurface, LeafKind, RegionKind, ValidationReport};
use crate::moves::{
    apply_move, check_exchange, check_foliation_change, ChangeOutcome, Move, MoveRecord,
};
use crate::page::classify_arc;
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Split,
    Composite,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReductionInput {
    pub foliation: FoliatedSurface,
    /// Coefficients by binding label; installed on the page before reducing.
    #[serde(default)]
    pub fdtc: BTreeMap<String, Rational>,
    pub mode: Mode,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Obstruction {
    /// Violated hypotheses, each naming the cell it fails at.
    pub violations: Vec<Failure>,
    /// Why no exchange applies, per elliptic point.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub blocked: Vec<Failure>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub estimates: Vec<InequalityReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub annulus: Option<ObstructionReport>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "outcome")]
pub enum Outcome {
    ReducedToSplit,
    ReducedToComposite,
    /// A fixed move sequence ran to completion.
    Related,
    Obstruction(Obstruction),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MoveTrace {
    pub steps: Vec<MoveRecord>,
    pub outcome: Outcome,
    #[serde(rename = "final")]
    pub result: FoliatedSurface,
}

/// Lexicographic termination measure: c-circles, elliptic points, valence excess.
pub fn measure(f: &FoliatedSurface) -> (usize, usize, u64) {
    let circles = f.leaves.iter().filter(|l| l.kind == LeafKind::C).count();
    let excess = f
        .valences()
        .values()
        .map(|&v| v.saturating_sub(2) as u64)
        .sum();
    (circles, f.elliptics.len(), excess)
}

/// Hex SHA-256 of the canonical JSON form.
pub fn surface_hash(f: &FoliatedSurface) -> String {
    let mut g = f.clone();
    g.canonicalize();
    let bytes = serde_json::to_vec(&g).expect("surfaces serialize");
    hex::encode(Sha256::digest(bytes))
}

/// The input surface with its coefficients written onto the page.
pub fn prepare(input: &ReductionInput) -> Result<FoliatedSurface> {
    let mut f = input.foliation.clone();
    if let Some(page) = f.page.take() {
        let mut page = page;
        for (label, c) in &input.fdtc {
            page.surface = page.surface.with_fdtc(label, *c)?;
        }
        f.page = Some(page);
    }
    let want = match input.mode {
        Mode::Split => 0,
        Mode::Composite => 2,
    };
    if f.punctures.len() != want {
        return Err(ObfError::Guard(vec![Failure::new(
            "mode",
            format!(
                "{:?} mode needs {want} punctures, F has {}",
                input.mode,
                f.punctures.len()
            ),
        )]));
    }
    let rep = validate(&f);
    if !rep.is_valid() {
        return Err(ObfError::Foliation(reasons(&rep)));
    }
    Ok(f)
}

fn reasons(rep: &ValidationReport) -> String {
    rep.violations
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

/// Both hypotheses of the reduction theorem, checked cell by cell.
pub fn hypotheses(f: &FoliatedSurface, fdtc: &BTreeMap<String, Rational>) -> Result<Vec<Failure>> {
    let mut out = Vec::new();
    if let Some(page) = &f.page {
        let disc = page.surface.genus() == 0 && page.surface.binding_count() == 1;
        for l in f.leaves.iter().filter(|l| l.kind == LeafKind::B && !disc) {
            let Some(name) = &l.curve else { continue };
            let class = classify_arc(&page.surface, page.curve(name)?)?;
            if !class.is_essential() {
                out.push(Failure::new(
                    "hypothesis(1)",
                    format!("b-arc {} is boundary-parallel", l.id),
                ));
            } else if !class.separating {
                out.push(Failure::new(
                    "hypothesis(1)",
                    format!("b-arc {} is non-separating", l.id),
                ));
            }
        }
    }
    let bindings: BTreeSet<&str> = f.elliptics.iter().map(|e| e.binding.as_str()).collect();
    let one = Rational::integer(1);
    for b in bindings {
        match fdtc.get(b) {
            None => out.push(Failure::new(
                "hypothesis(2)",
                format!("binding {b}: no coefficient given"),
            )),
            Some(c) if c.abs() <= one => out.push(Failure::new(
                "hypothesis(2)",
                format!("binding {b}: |c| = {} <= 1", c.abs()),
            )),
            Some(_) => {}
        }
    }
    Ok(out)
}

/// Exchange failures and estimate instances at every elliptic point.
fn blockage(f: &FoliatedSurface) -> (Vec<Failure>, Vec<InequalityReport>) {
    let fdtc = f.fdtc();
    let mut blocked = Vec::new();
    let mut estimates = Vec::new();
    for e in &f.elliptics {
        let app = check_exchange(f, e.id);
        if !app.ok {
            blocked.push(Failure::new(format!("exchange at {}", e.id), app.reasons()));
        }
        if let Ok(rep) = fdtc_estimate_check(f, e.id, &fdtc) {
            estimates.push(rep);
        }
    }
    (blocked, estimates)
}

/// Moves bringing an exchange at `v` within reach, the exchange last.
fn plan_exchange(f: &FoliatedSurface, v: u32) -> Option<Vec<Move>> {
    let regions: BTreeSet<u32> = f.corners_at(v).into_iter().map(|(_, r)| r).collect();
    let mut g = f.clone();
    let mut moves = Vec::new();
    if f.regions.len() > 2 {
        for p in f
            .punctures
            .iter()
            .filter(|p| p.region.is_some_and(|r| regions.contains(&r)))
        {
            let target = punctures::escape_target(&g, p.region.unwrap(), &regions)?;
            let mv = Move::RelocatePuncture {
                puncture: p.id,
                region: target,
            };
            g = apply_move(&g, &mv).ok()?.0;
            moves.push(mv);
        }
    }
    if !check_exchange(&g, v).ok {
        return None;
    }
    moves.push(Move::Exchange { v });
    Some(moves)
}

/// One round of the elliptic-point induction: an exchange at a valence-2 vertex,
/// or a foliation change lowering a valence-3 vertex followed by an exchange there.
/// Vertices go lowest valence first, then by id.
fn plan_round(f: &FoliatedSurface, allowed: &dyn Fn(u32) -> bool) -> Option<Vec<Move>> {
    let mut order: Vec<(u32, u32)> = f
        .valences()
        .into_iter()
        .filter(|&(v, n)| f.elliptic(v).is_some() && (n == 2 || n == 3) && allowed(v))
        .map(|(v, n)| (n, v))
        .collect();
    order.sort_unstable();
    for (n, v) in order {
        if n == 2 {
            if let Some(moves) = plan_exchange(f, v) {
                return Some(moves);
            }
            continue;
        }
        let rs: Vec<u32> = f.corners_at(v).into_iter().map(|(_, r)| r).collect();
        let sign = |r: u32| f.region(r).and_then(|r| f.region_sign(r));
        let pairs: Vec<(u32, u32)> = (0..rs.len())
            .flat_map(|i| (i + 1..rs.len()).map(move |j| (i, j)))
            .map(|(i, j)| (rs[i], rs[j]))
            .filter(|&(a, b)| sign(a) == sign(b))
            .collect();
        assert!(
            rs.len() != 3 || !pairs.is_empty(),
            "three signs at vertex {v} without a repeated one"
        );
        for (a, b) in pairs {
            if !check_foliation_change(f, a, b).ok {
                continue;
            }
            for outcome in [ChangeOutcome::B, ChangeOutcome::C] {
                let mv = Move::FoliationChange {
                    r1: a,
                    r2: b,
                    outcome,
                };
                let Ok((g, _)) = apply_move(f, &mv) else {
                    continue;
                };
                if let Some(mut rest) = plan_exchange(&g, v) {
                    rest.insert(0, mv);
                    return Some(rest);
                }
            }
        }
    }
    None
}

struct Run {
    f: FoliatedSurface,
    steps: Vec<MoveRecord>,
}

impl Run {
    fn apply(&mut self, moves: &[Move]) -> Result<()> {
        let before = measure(&self.f);
        for mv in moves {
            let (g, rec) = apply_move(&self.f, mv)?;
            self.f = g;
            self.steps.push(rec);
        }
        let after = measure(&self.f);
        assert!(
            after < before,
            "termination measure did not drop: {before:?} -> {after:?}"
        );
        Ok(())
    }

    fn finish(self, outcome: Outcome) -> MoveTrace {
        MoveTrace {
            steps: self.steps,
            outcome,
            result: self.f,
        }
    }

    fn stuck(self, violations: Vec<Failure>) -> MoveTrace {
        let (blocked, estimates) = blockage(&self.f);
        let ob = Obstruction {
            violations,
            blocked,
            estimates,
            annulus: None,
        };
        self.finish(Outcome::Obstruction(ob))
    }
}

/// Vertices whose corners all lie inside `disc` and away from the annulus itself.
fn interior_of(f: &FoliatedSurface, disc: &BTreeSet<u32>, annulus: u32) -> impl Fn(u32) -> bool {
    let ok: BTreeSet<u32> = f
        .elliptics
        .iter()
        .map(|e| e.id)
        .filter(|&v| {
            let cs = f.corners_at(v);
            !cs.is_empty() && cs.iter().all(|&(_, r)| r != annulus && disc.contains(&r))
        })
        .collect();
    move |v| ok.contains(&v)
}

fn reduce(input: &ReductionInput) -> Result<MoveTrace> {
    let f = prepare(input)?;
    let mut fdtc = f.fdtc();
    fdtc.extend(input.fdtc.clone());
    let violations = hypotheses(&f, &fdtc)?;
    let mut run = Run {
        f,
        steps: Vec::new(),
    };
    if !violations.is_empty() {
        return Ok(run.stuck(violations));
    }
    loop {
        let f = &run.f;
        if f.elliptics.len() == 2 && f.hyperbolics.is_empty() && !f.has_c_circles() {
            let done = match input.mode {
                Mode::Split => Outcome::ReducedToSplit,
                Mode::Composite => Outcome::ReducedToComposite,
            };
            return Ok(run.finish(done));
        }
        if !f.has_c_circles() {
            match plan_round(f, &|_| true) {
                Some(moves) => run.apply(&moves)?,
                None => return Ok(run.stuck(Vec::new())),
            }
            continue;
        }
        let terminal = f.regions.iter().all(|r| !r.kind.is_tile());
        if input.mode == Mode::Composite
            && terminal
            && f.regions.iter().any(|r| r.kind == RegionKind::Cc)
        {
            return Err(ObfError::Guard(vec![Failure::new(
                "cc_pants",
                "a cc-pants cannot cap a decomposing sphere",
            )]));
        }
        let pair: Vec<u32> = f
            .regions
            .iter()
            .filter(|r| r.kind == RegionKind::DegenerateBc)
            .map(|r| r.id)
            .collect();
        if input.mode == Mode::Composite && f.regions.len() == 2 && pair.len() == 2 {
            run.apply(&[Move::CapAndFlatten {
                regions: [pair[0], pair[1]],
            }])?;
            continue;
        }
        let Some(ann) = find_innermost_bc_annulus(f) else {
            return Ok(run.stuck(vec![Failure::new(
                "c_circles",
                "c-circles without an innermost bc-annulus",
            )]));
        };
        let region = f.region(ann.region).unwrap();
        if region.kind == RegionKind::DegenerateBc {
            let pierced = f.punctures.iter().any(|p| p.region == Some(ann.region));
            let mut ob = Obstruction::default();
            let mut fdtc = f.fdtc();
            fdtc.extend(input.fdtc.clone());
            match degenerate_bc_obstruction(f, ann.region, &fdtc) {
                Ok(rep) => {
                    let why = if rep.contradiction {
                        "contradicts hypothesis (2)"
                    } else {
                        "is not pierced by the braid"
                    };
                    ob.violations.push(Failure::new(
                        "degenerate_bc",
                        format!("region {} {why}", ann.region),
                    ));
                    ob.annulus = Some(rep);
                }
                Err(ObfError::Guard(fs)) => ob.violations.extend(fs),
                Err(e) => return Err(e),
            }
            if pierced && input.mode == Mode::Composite {
                return Ok(run.stuck(vec![Failure::new(
                    "degenerate_bc",
                    "pierced annulus is not in terminal position",
                )]));
            }
            return Ok(run.finish(Outcome::Obstruction(ob)));
        }
        let allowed = interior_of(f, &ann.disc, ann.region);
        match plan_round(f, &allowed) {
            Some(moves) => run.apply(&moves)?,
            None => {
                let why = format!("no move clears the disc inside region {}", ann.region);
                return Ok(run.stuck(vec![Failure::new("case_ii", why)]));
            }
        }
    }
}

/// Reduce a splitting sphere to two elliptic points.
pub fn reduce_split(input: &ReductionInput) -> Result<MoveTrace> {
    if input.mode != Mode::Split {
        return Err(ObfError::Guard(vec![Failure::new(
            "mode",
            "reduce_split needs split mode",
        )]));
    }
    reduce(input)
}

/// Reduce a decomposing sphere, sliding punctures off each exchange disc.
pub fn reduce_composite(input: &ReductionInput) -> Result<MoveTrace> {
    if input.mode != Mode::Composite {
        return Err(ObfError::Guard(vec![Failure::new(
            "mode",
            "reduce_composite needs composite mode",
        )]));
    }
    reduce(input)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditReport {
    pub steps: usize,
    pub final_hash: String,
    pub recorded_hash: String,
    pub matches: bool,
}

/// Replay a trace from its input, re-running every guard and validating every
/// intermediate state.
pub fn audit(input: &ReductionInput, trace: &MoveTrace) -> Result<AuditReport> {
    let mut f = prepare(input)?;
    for (i, step) in trace.steps.iter().enumerate() {
        let (g, rec) = apply_move(&f, &step.parameters)?;
        if rec.kind != step.kind || rec.post_census != step.post_census {
            return Err(ObfError::Document(format!(
                "step {i} does not replay to its recorded census"
            )));
        }
        let rep = validate(&g);
        if !rep.is_valid() {
            return Err(ObfError::Foliation(format!("step {i}: {}", reasons(&rep))));
        }
        f = g;
    }
    let final_hash = surface_hash(&f);
    let recorded_hash = surface_hash(&trace.result);
    let matches = final_hash == recorded_hash && census(&f) == census(&trace.result);
    Ok(AuditReport {
        steps: trace.steps.len(),
        final_hash,
        recorded_hash,
        matches,
    })
}
