//! The commands behind `obf`, on document text in and document text out.

use std::collections::BTreeMap;

use serde::Serialize;

use super::doc::{foliation_document, DocKind, Document, TraceDoc};
use super::generate::{grow_sphere, GrowConfig};
use crate::error::{Failure, ObfError, Result};
use crate::foliation::{census, validate, FoliatedSurface};
use crate::moves::{apply_move, Move};
use crate::movie::{compile_movie, MoviePresentation};
use crate::rational::Rational;
use crate::reduce::{
    audit, reduce_composite, reduce_split, surface_hash, Mode, MoveTrace, Outcome, ReductionInput,
};
use crate::stabilize::{
    relate_stabilized, stabilize_intersecting, stabilize_trivial, StabilizationSpec,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_GUARD: i32 = 2;
pub const EXIT_MALFORMED: i32 = 3;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
    /// Trace document to write when `--trace` was given.
    pub trace: Option<String>,
}

impl Output {
    fn ok(stdout: String) -> Self {
        Output {
            code: EXIT_OK,
            stdout,
            ..Default::default()
        }
    }
}

impl From<ObfError> for Output {
    fn from(e: ObfError) -> Self {
        let code = match e {
            ObfError::Document(_)
            | ObfError::Json(_)
            | ObfError::Surface(_)
            | ObfError::Curve(_) => EXIT_MALFORMED,
            _ => EXIT_GUARD,
        };
        let stderr = match &e {
            ObfError::Guard(fs) => dump(fs),
            _ => format!("error: {e}\n"),
        };
        Output {
            code,
            stderr,
            ..Default::default()
        }
    }
}

fn dump(fs: &[Failure]) -> String {
    let mut out = String::from("guard failed\n");
    for f in fs {
        out.push_str(&format!("  {f}\n"));
    }
    out
}

fn json<T: Serialize>(v: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

fn run(body: impl FnOnce() -> Result<Output>) -> Output {
    body().unwrap_or_else(Output::from)
}

pub fn validate_cmd(text: &str) -> Output {
    run(|| {
        let f: FoliatedSurface = Document::parse(text, DocKind::Foliation)?;
        let rep = validate(&f);
        let code = if rep.is_valid() { EXIT_OK } else { EXIT_GUARD };
        Ok(Output {
            code,
            stdout: json(&rep)?,
            ..Default::default()
        })
    })
}

pub fn census_cmd(text: &str) -> Output {
    run(|| {
        let f: FoliatedSurface = Document::parse(text, DocKind::Foliation)?;
        Ok(Output::ok(census(&f).table()))
    })
}

pub fn compile_cmd(text: &str) -> Output {
    run(|| {
        let m: MoviePresentation = Document::parse(text, DocKind::Movie)?;
        Ok(Output::ok(foliation_document(&compile_movie(&m)?)?))
    })
}

/// Apply one move. With `trace`, the record is appended to that trace document,
/// or a fresh trace is started from `text`.
pub fn apply_cmd(text: &str, mv: &str, trace: Option<&str>) -> Output {
    run(|| {
        let f: FoliatedSurface = Document::parse(text, DocKind::Foliation)?;
        let mv: Move =
            serde_json::from_str(mv).map_err(|e| ObfError::Document(format!("move: {e}")))?;
        let (g, rec) = apply_move(&f, &mv)?;
        let mut doc = match trace {
            Some(t) if !t.trim().is_empty() => Document::parse::<TraceDoc>(t, DocKind::Trace)?,
            _ => {
                let mode = if f.punctures.is_empty() {
                    Mode::Split
                } else {
                    Mode::Composite
                };
                let input = ReductionInput {
                    foliation: f.clone(),
                    fdtc: BTreeMap::new(),
                    mode,
                };
                TraceDoc {
                    input,
                    trace: MoveTrace {
                        steps: Vec::new(),
                        outcome: Outcome::Related,
                        result: f.clone(),
                    },
                }
            }
        };
        if surface_hash(&doc.trace.result) != surface_hash(&f) {
            return Err(ObfError::Document(
                "the trace does not end at this foliation".into(),
            ));
        }
        doc.trace.steps.push(rec);
        doc.trace.result = g.clone();
        let trace = Some(Document::wrap(DocKind::Trace, &doc)?.to_json()?);
        Ok(Output {
            trace,
            ..Output::ok(foliation_document(&g)?)
        })
    })
}

/// `F does not admit exchange moves` once every elliptic point is blocked.
fn obstruction_summary(trace: &MoveTrace) -> String {
    let Outcome::Obstruction(ob) = &trace.outcome else {
        return String::new();
    };
    let mut out = String::from("obstruction\n");
    for v in &ob.violations {
        out.push_str(&format!("  {v}\n"));
    }
    let state = &trace.result;
    if !state.elliptics.is_empty() && ob.blocked.len() == state.elliptics.len() {
        let name = if trace.steps.is_empty() {
            "F"
        } else {
            "the reduced state"
        };
        out.push_str(&format!("  {name} does not admit exchange moves\n"));
    }
    for b in &ob.blocked {
        out.push_str(&format!("  {b}\n"));
    }
    out
}

pub fn reduce_cmd(text: &str, mode: Mode, fdtc: &[(String, Rational)]) -> Output {
    run(|| {
        let foliation: FoliatedSurface = Document::parse(text, DocKind::Foliation)?;
        let input = ReductionInput {
            foliation,
            fdtc: fdtc.iter().cloned().collect(),
            mode,
        };
        let trace = match mode {
            Mode::Split => reduce_split(&input)?,
            Mode::Composite => reduce_composite(&input)?,
        };
        let stderr = obstruction_summary(&trace);
        let code = if matches!(trace.outcome, Outcome::Obstruction(_)) {
            EXIT_GUARD
        } else {
            EXIT_OK
        };
        let doc = Document::wrap(DocKind::Trace, &TraceDoc { input, trace })?.to_json()?;
        Ok(Output {
            code,
            stdout: doc.clone(),
            stderr,
            trace: Some(doc),
        })
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    Prime,
    Doubleprime,
    Both,
    Relate,
}

pub fn stabilize_cmd(text: &str, spec: &str, variant: Variant) -> Output {
    run(|| {
        let f: FoliatedSurface = Document::parse(text, DocKind::Foliation)?;
        let spec: StabilizationSpec = Document::parse(spec, DocKind::Spec)?;
        if spec.crossings.is_empty() {
            return Ok(Output::ok(foliation_document(&stabilize_trivial(
                &f, &spec,
            )?)?));
        }
        let s = stabilize_intersecting(&f, &spec)?;
        let stdout = match variant {
            Variant::Prime => foliation_document(&s.prime)?,
            Variant::Doubleprime => foliation_document(&s.doubleprime)?,
            Variant::Both => json(&s)?,
            Variant::Relate => {
                let traces = relate_stabilized(&s)?;
                let input = ReductionInput {
                    foliation: s.prime.clone(),
                    fdtc: BTreeMap::new(),
                    mode: Mode::Split,
                };
                let steps = traces
                    .iter()
                    .flat_map(|t| t.steps.iter().cloned())
                    .collect();
                let result = traces
                    .last()
                    .map_or_else(|| s.prime.clone(), |t| t.result.clone());
                let trace = MoveTrace {
                    steps,
                    outcome: Outcome::Related,
                    result,
                };
                Document::wrap(DocKind::Trace, &TraceDoc { input, trace })?.to_json()?
            }
        };
        Ok(Output::ok(stdout))
    })
}

pub fn generate_cmd(seed: u64, cfg: &GrowConfig) -> Output {
    run(|| {
        Ok(Output::ok(foliation_document(
            &grow_sphere(seed, cfg)?.surface,
        )?))
    })
}

pub fn audit_cmd(text: &str) -> Output {
    run(|| {
        let doc: TraceDoc = Document::parse(text, DocKind::Trace)?;
        let rep = audit(&doc.input, &doc.trace)?;
        let code = if rep.matches { EXIT_OK } else { EXIT_GUARD };
        Ok(Output {
            code,
            stdout: json(&rep)?,
            ..Default::default()
        })
    })
}
