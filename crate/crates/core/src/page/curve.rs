use serde::{Deserialize, Serialize};

use super::surface::CombinatorialSurface;
use crate::error::{ObfError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveKind {
    Arc,
    Circle,
}

/// A simple vertex walk in a page complex.
///
/// Arcs run between two distinct boundary vertices; `puncture_end` marks an arc
/// whose last vertex continues into the face holding that puncture. Circles list
/// each vertex once and close up implicitly.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EmbeddedCurve {
    pub kind: CurveKind,
    pub walk: Vec<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub puncture_end: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "at")]
pub enum Endpoint {
    Binding { label: String, slot: usize },
    Puncture { id: u32 },
}

impl EmbeddedCurve {
    pub fn arc(walk: Vec<u32>) -> Self {
        EmbeddedCurve {
            kind: CurveKind::Arc,
            walk,
            puncture_end: None,
        }
    }

    pub fn circle(walk: Vec<u32>) -> Self {
        EmbeddedCurve {
            kind: CurveKind::Circle,
            walk,
            puncture_end: None,
        }
    }

    pub fn is_arc(&self) -> bool {
        self.kind == CurveKind::Arc
    }

    /// Undirected edges traversed, circle closure included.
    pub fn edges(&self) -> Vec<(u32, u32)> {
        let w = &self.walk;
        let mut out: Vec<(u32, u32)> = w.windows(2).map(|p| (p[0], p[1])).collect();
        if self.kind == CurveKind::Circle && w.len() > 2 {
            out.push((w[w.len() - 1], w[0]));
        }
        out
    }

    pub fn reversed(&self) -> Self {
        if self.puncture_end.is_some() {
            return self.clone();
        }
        let mut walk = self.walk.clone();
        walk.reverse();
        EmbeddedCurve {
            kind: self.kind,
            walk,
            puncture_end: None,
        }
    }

    pub fn validate(&self, s: &CombinatorialSurface) -> Result<()> {
        let cx = s.complex();
        let w = &self.walk;
        let min_len = if self.kind == CurveKind::Circle { 3 } else { 2 };
        if w.len() < min_len && !(self.puncture_end.is_some() && w.len() == 1) {
            return Err(ObfError::Curve(format!(
                "walk too short ({} vertices)",
                w.len()
            )));
        }
        for (i, &v) in w.iter().enumerate() {
            if v >= s.vertex_count() {
                return Err(ObfError::Curve(format!("unknown vertex {v}")));
            }
            if w[..i].contains(&v) {
                return Err(ObfError::Curve(format!(
                    "walk is not simple: vertex {v} repeats"
                )));
            }
        }
        for (a, b) in self.edges() {
            if cx.dart(a, b).is_none() {
                return Err(ObfError::Curve(format!("{a}-{b} is not an edge")));
            }
            if !cx.is_interior_edge(a, b) {
                return Err(ObfError::Curve(format!("{a}-{b} runs along the boundary")));
            }
        }
        match self.kind {
            CurveKind::Circle => {
                if let Some(&v) = w.iter().find(|&&v| cx.is_boundary_vertex(v)) {
                    return Err(ObfError::Curve(format!(
                        "circle touches the boundary at {v}"
                    )));
                }
                if self.puncture_end.is_some() {
                    return Err(ObfError::Curve("a circle has no puncture end".into()));
                }
            }
            CurveKind::Arc => {
                let last = w.len() - 1;
                if !cx.is_boundary_vertex(w[0]) {
                    return Err(ObfError::Curve(format!(
                        "arc start {} is not on the boundary",
                        w[0]
                    )));
                }
                let interior_end = match self.puncture_end {
                    Some(p) => {
                        let Some(pc) = s.punctures().iter().find(|x| x.id == p) else {
                            return Err(ObfError::Curve(format!("unknown puncture {p}")));
                        };
                        if !s.faces()[pc.face].contains(&w[last]) {
                            return Err(ObfError::Curve(format!(
                                "vertex {} is not on the face of puncture {p}",
                                w[last]
                            )));
                        }
                        last + 1
                    }
                    None => {
                        if !cx.is_boundary_vertex(w[last]) {
                            return Err(ObfError::Curve(format!(
                                "arc end {} is not on the boundary",
                                w[last]
                            )));
                        }
                        last
                    }
                };
                if let Some(&v) = w[1..interior_end]
                    .iter()
                    .find(|&&v| cx.is_boundary_vertex(v))
                {
                    return Err(ObfError::Curve(format!(
                        "arc touches the boundary at interior vertex {v}"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn endpoints(&self, s: &CombinatorialSurface) -> Vec<Endpoint> {
        if self.kind == CurveKind::Circle || self.walk.is_empty() {
            return Vec::new();
        }
        let at = |v: u32| {
            s.boundary_slot(v)
                .map(|(label, slot)| Endpoint::Binding { label, slot })
                .unwrap_or(Endpoint::Binding {
                    label: String::new(),
                    slot: usize::MAX,
                })
        };
        let first = at(self.walk[0]);
        let second = match self.puncture_end {
            Some(id) => Endpoint::Puncture { id },
            None => at(*self.walk.last().unwrap()),
        };
        vec![first, second]
    }
}

/// Whether neighbor `w` of `walk[i]` lies to the left of the walk there, turning
/// counterclockwise from the next step to the previous one. `None` if `w` is not
/// adjacent or `i` is an end of the walk.
pub fn left_of(s: &CombinatorialSurface, walk: &[u32], i: usize, w: u32) -> Option<bool> {
    if i == 0 || i + 1 >= walk.len() {
        return None;
    }
    let cx = s.complex();
    let v = walk[i];
    let ahead = cx.dart(v, walk[i + 1])?;
    let behind = cx.dart(v, walk[i - 1])?;
    let target = cx.dart(v, w)?;
    if target == ahead || target == behind {
        return None;
    }
    for d in cx.rotation_orbit(ahead).into_iter().skip(1) {
        if d == target {
            return Some(true);
        }
        if d == behind {
            return Some(false);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::page::build::build_surface;

    #[test]
    fn boundary_walk_rejected() {
        let s = build_surface(0, 1, 0).unwrap();
        let b = s.boundary_vertices("C1");
        let c = EmbeddedCurve::arc(vec![b[0], b[1]]);
        assert!(c.validate(&s).is_err());
    }

    #[test]
    fn repeated_vertex_rejected() {
        let s = build_surface(0, 1, 0).unwrap();
        let c = EmbeddedCurve::arc(vec![0, 1, 0]);
        assert!(c.validate(&s).is_err());
    }

    #[test]
    fn left_side_of_a_grid_row() {
        use crate::page::build::{grid_disc, grid_vertex};
        let s = grid_disc(4, &[]).unwrap();
        let row: Vec<u32> = (0..=4).map(|i| grid_vertex(4, i, 2)).collect();
        assert_eq!(left_of(&s, &row, 2, grid_vertex(4, 2, 3)), Some(true));
        assert_eq!(left_of(&s, &row, 2, grid_vertex(4, 2, 1)), Some(false));
        assert_eq!(left_of(&s, &row, 0, grid_vertex(4, 0, 3)), None);
    }

    #[test]
    fn endpoints_report_binding_slots() {
        let s = build_surface(0, 1, 0).unwrap();
        let c = super::super::build::grid_column_arc(3, 1);
        c.validate(&s).unwrap();
        let ends = c.endpoints(&s);
        assert_eq!(ends.len(), 2);
        assert!(matches!(&ends[0], Endpoint::Binding { label, .. } if label == "C1"));
    }
}
