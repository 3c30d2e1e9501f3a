use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::complex::{Cell, Complex};
use crate::error::{ObfError, Result};
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Puncture {
    pub id: u32,
    pub face: usize,
}

/// A page `S_{g,r}`: oriented polygonal faces glued along edges, holes labeled
/// as binding components, punctures sitting in faces.
///
/// Holes are ordered by their smallest dart; `bindings[i]` labels hole `i`.
#[derive(Debug, Clone)]
pub struct CombinatorialSurface {
    cx: Complex,
    bindings: Vec<String>,
    punctures: Vec<Puncture>,
    fdtc: BTreeMap<String, Rational>,
    genus: u32,
}

impl PartialEq for CombinatorialSurface {
    fn eq(&self, other: &Self) -> bool {
        self.cx.vertex_count == other.cx.vertex_count
            && self.cx.faces == other.cx.faces
            && self.bindings == other.bindings
            && self.punctures == other.punctures
            && self.fdtc == other.fdtc
    }
}

impl CombinatorialSurface {
    pub fn new(
        vertex_count: u32,
        faces: Vec<Vec<u32>>,
        bindings: Option<Vec<String>>,
        punctures: Vec<Puncture>,
    ) -> Result<Self> {
        let cx = Complex::build(vertex_count, faces)?;
        if cx.used_vertex_count() != vertex_count as usize {
            return Err(ObfError::Surface("every vertex must lie on an edge".into()));
        }
        let (ncomp, _) = cx.face_components();
        if ncomp != 1 {
            return Err(ObfError::Surface(format!("complex has {ncomp} components")));
        }
        let r = cx.holes.len();
        if r == 0 {
            return Err(ObfError::Surface(
                "a page must have at least one binding component".into(),
            ));
        }
        let bindings = match bindings {
            Some(b) if b.len() == r => b,
            Some(b) => {
                return Err(ObfError::Surface(format!(
                    "{} binding labels for {r} holes",
                    b.len()
                )));
            }
            None => (1..=r).map(|i| format!("C{i}")).collect(),
        };
        let uniq: BTreeSet<&String> = bindings.iter().collect();
        if uniq.len() != bindings.len() {
            return Err(ObfError::Surface("binding labels must be distinct".into()));
        }
        let chi = cx.euler_characteristic();
        let twice_g = 2 - r as i64 - chi;
        if twice_g < 0 || twice_g % 2 != 0 {
            return Err(ObfError::Surface(format!(
                "inconsistent Euler characteristic {chi} with {r} holes"
            )));
        }
        let mut ids = BTreeSet::new();
        for p in &punctures {
            if p.face >= cx.faces.len() {
                return Err(ObfError::Surface(format!(
                    "puncture {} in unknown face {}",
                    p.id, p.face
                )));
            }
            if !ids.insert(p.id) {
                return Err(ObfError::Surface(format!("duplicate puncture id {}", p.id)));
            }
        }
        Ok(CombinatorialSurface {
            cx,
            bindings,
            punctures,
            fdtc: BTreeMap::new(),
            genus: (twice_g / 2) as u32,
        })
    }

    pub fn complex(&self) -> &Complex {
        &self.cx
    }

    pub fn vertex_count(&self) -> u32 {
        self.cx.vertex_count
    }

    pub fn faces(&self) -> &[Vec<u32>] {
        &self.cx.faces
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn binding_count(&self) -> usize {
        self.bindings.len()
    }

    pub fn bindings(&self) -> &[String] {
        &self.bindings
    }

    pub fn punctures(&self) -> &[Puncture] {
        &self.punctures
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.cx.euler_characteristic()
    }

    pub fn fdtc(&self) -> &BTreeMap<String, Rational> {
        &self.fdtc
    }

    pub fn with_fdtc(mut self, label: &str, c: Rational) -> Result<Self> {
        if !self.bindings.iter().any(|b| b == label) {
            return Err(ObfError::Surface(format!("no binding {label}")));
        }
        self.fdtc.insert(label.to_string(), c);
        Ok(self)
    }

    pub(crate) fn set_fdtc_map(&mut self, m: BTreeMap<String, Rational>) {
        self.fdtc = m;
    }

    pub fn with_punctures(self, punctures: Vec<Puncture>) -> Result<Self> {
        CombinatorialSurface::new(
            self.cx.vertex_count,
            self.cx.faces.clone(),
            Some(self.bindings.clone()),
            punctures,
        )
        .map(|s| CombinatorialSurface {
            fdtc: self.fdtc.clone(),
            ..s
        })
    }

    /// Binding label of the hole at boundary vertex `v`.
    pub fn binding_at(&self, v: u32) -> Option<&str> {
        let h = (*self.cx.hole_out.get(v as usize)?)?;
        match self.cx.dart_cell[h as usize] {
            Cell::Hole(i) => Some(&self.bindings[i]),
            Cell::Face(_) => None,
        }
    }

    /// Position of boundary vertex `v` along its hole cycle.
    pub fn boundary_slot(&self, v: u32) -> Option<(String, usize)> {
        let h = (*self.cx.hole_out.get(v as usize)?)?;
        let Cell::Hole(i) = self.cx.dart_cell[h as usize] else {
            return None;
        };
        let slot = self.cx.holes[i].iter().position(|&d| d == h)?;
        Some((self.bindings[i].clone(), slot))
    }

    pub fn boundary_vertices(&self, label: &str) -> Vec<u32> {
        match self.bindings.iter().position(|b| b == label) {
            Some(i) => self.cx.holes[i].iter().map(|&d| self.cx.tail(d)).collect(),
            None => Vec::new(),
        }
    }

    pub fn neighbors(&self, v: u32) -> Vec<u32> {
        self.cx
            .fan(v)
            .into_iter()
            .map(|d| self.cx.head(d))
            .collect()
    }

    pub(crate) fn relabel(&mut self, bindings: Vec<String>) {
        self.bindings = bindings;
    }

    /// One boundary vertex per binding, used to carry labels across rebuilds.
    pub fn label_hints(&self) -> Vec<(u32, String)> {
        self.cx
            .holes
            .iter()
            .zip(&self.bindings)
            .map(|(h, l)| (self.cx.tail(h[0]), l.clone()))
            .collect()
    }

    /// Build from faces, naming each hole by the hint vertex it contains.
    /// Holes without a hint get fresh `C<k>` labels.
    pub fn with_hints(
        vertex_count: u32,
        faces: Vec<Vec<u32>>,
        hints: &[(u32, String)],
        punctures: Vec<Puncture>,
        fdtc: BTreeMap<String, Rational>,
    ) -> Result<Self> {
        let mut s = CombinatorialSurface::new(vertex_count, faces, None, punctures)?;
        let mut labels: Vec<Option<String>> = vec![None; s.bindings.len()];
        for (v, l) in hints {
            let Some(h) = s.cx.hole_out.get(*v as usize).copied().flatten() else {
                continue;
            };
            if let Cell::Hole(i) = s.cx.dart_cell[h as usize] {
                if labels[i].is_none() {
                    labels[i] = Some(l.clone());
                }
            }
        }
        let mut k = labels.len();
        let taken: BTreeSet<String> = labels.iter().flatten().cloned().collect();
        let labels = labels
            .into_iter()
            .map(|l| {
                l.unwrap_or_else(|| loop {
                    k += 1;
                    let c = format!("C{k}");
                    if !taken.contains(&c) {
                        break c;
                    }
                })
            })
            .collect::<Vec<_>>();
        let uniq: BTreeSet<&String> = labels.iter().collect();
        if uniq.len() != labels.len() {
            return Err(ObfError::Surface(
                "binding hints name two holes alike".into(),
            ));
        }
        s.fdtc = fdtc
            .into_iter()
            .filter(|(l, _)| labels.contains(l))
            .collect();
        s.bindings = labels;
        Ok(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn annulus_from_four_squares() {
        // outer square 0..3, inner square 4..7
        let faces = vec![
            vec![0, 1, 5, 4],
            vec![1, 2, 6, 5],
            vec![2, 3, 7, 6],
            vec![3, 0, 4, 7],
        ];
        let s = CombinatorialSurface::new(8, faces, None, vec![]).unwrap();
        assert_eq!(s.binding_count(), 2);
        assert_eq!(s.genus(), 0);
        assert_eq!(s.euler_characteristic(), 0);
        assert_eq!(s.binding_at(0), Some("C1"));
        assert_eq!(s.binding_at(4), Some("C2"));
    }

    #[test]
    fn closed_surface_rejected() {
        let faces = vec![vec![0, 1, 2], vec![0, 2, 3], vec![0, 3, 1], vec![1, 3, 2]];
        assert!(CombinatorialSurface::new(4, faces, None, vec![]).is_err());
    }

    #[test]
    fn duplicate_puncture_rejected() {
        let faces = vec![vec![0, 1, 2]];
        let p = vec![Puncture { id: 1, face: 0 }, Puncture { id: 1, face: 0 }];
        assert!(CombinatorialSurface::new(3, faces, None, p).is_err());
    }
}
