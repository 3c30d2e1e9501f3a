//! Pages of an open book: surfaces with boundary, punctures and embedded curves.

pub mod build;
pub mod complex;
pub mod curve;
pub mod cut;
pub mod homotopy;
pub mod plumb;
pub mod refine;
pub mod surface;
pub mod twist;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub use build::build_surface;
pub use curve::{left_of, CurveKind, EmbeddedCurve, Endpoint};
pub use cut::{classify_arc, cut_along, is_tree, ArcClass, CutReport, Essentiality};
pub use plumb::{plumb_annulus, AnnulusGrid, Plumbing};
pub use surface::{CombinatorialSurface, Puncture};
pub use twist::dehn_twist;

use crate::error::{ObfError, Result};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BindingDoc {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fdtc: Option<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexDoc {
    pub vertex_count: u32,
    pub faces: Vec<Vec<u32>>,
    #[serde(default)]
    pub puncture_faces: Vec<usize>,
}

/// Serialized page. Without `complex` the canonical `build_surface` complex is used.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceDoc {
    pub genus: u32,
    pub bindings: Vec<BindingDoc>,
    pub punctures: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub complex: Option<ComplexDoc>,
    #[serde(default)]
    pub curves: BTreeMap<String, EmbeddedCurve>,
}

/// A page together with the named curves registered on it.
#[derive(Debug, Clone, PartialEq)]
pub struct Page {
    pub surface: CombinatorialSurface,
    pub curves: BTreeMap<String, EmbeddedCurve>,
}

impl Page {
    pub fn new(surface: CombinatorialSurface) -> Self {
        Page {
            surface,
            curves: BTreeMap::new(),
        }
    }

    pub fn register(&mut self, name: impl Into<String>, c: EmbeddedCurve) -> Result<()> {
        c.validate(&self.surface)?;
        self.curves.insert(name.into(), c);
        Ok(())
    }

    pub fn curve(&self, name: &str) -> Result<&EmbeddedCurve> {
        self.curves
            .get(name)
            .ok_or_else(|| ObfError::Curve(format!("no curve named {name}")))
    }

    pub fn to_doc(&self) -> SurfaceDoc {
        let s = &self.surface;
        let by_id: BTreeMap<u32, usize> = s.punctures().iter().map(|p| (p.id, p.face)).collect();
        SurfaceDoc {
            genus: s.genus(),
            bindings: s
                .bindings()
                .iter()
                .map(|l| BindingDoc {
                    id: l.clone(),
                    fdtc: s.fdtc().get(l).copied(),
                })
                .collect(),
            punctures: s.punctures().len() as u32,
            complex: Some(ComplexDoc {
                vertex_count: s.vertex_count(),
                faces: s.faces().to_vec(),
                puncture_faces: by_id.values().copied().collect(),
            }),
            curves: self.curves.clone(),
        }
    }

    pub fn from_doc(doc: &SurfaceDoc) -> Result<Page> {
        let labels: Vec<String> = doc.bindings.iter().map(|b| b.id.clone()).collect();
        let mut surface = match &doc.complex {
            Some(c) => {
                if c.puncture_faces.len() != doc.punctures as usize {
                    return Err(ObfError::Document(
                        "puncture count disagrees with puncture_faces".into(),
                    ));
                }
                let punctures = c
                    .puncture_faces
                    .iter()
                    .enumerate()
                    .map(|(i, &face)| Puncture {
                        id: i as u32 + 1,
                        face,
                    })
                    .collect();
                CombinatorialSurface::new(c.vertex_count, c.faces.clone(), Some(labels), punctures)?
            }
            None => {
                let s = build_surface(doc.genus, doc.bindings.len() as u32, doc.punctures)?;
                let mut s = s;
                s.relabel(labels);
                s
            }
        };
        if surface.genus() != doc.genus {
            return Err(ObfError::Document(format!(
                "declared genus {} but the complex has genus {}",
                doc.genus,
                surface.genus()
            )));
        }
        for b in &doc.bindings {
            if let Some(c) = b.fdtc {
                surface = surface.with_fdtc(&b.id, c)?;
            }
        }
        let mut page = Page::new(surface);
        for (name, c) in &doc.curves {
            page.register(name.clone(), c.clone())?;
        }
        Ok(page)
    }
}

impl Serialize for Page {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_doc().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Page {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let doc = SurfaceDoc::deserialize(d)?;
        Page::from_doc(&doc).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn doc_round_trip() {
        let s = build_surface(1, 2, 2)
            .unwrap()
            .with_fdtc("C1", Rational::new(3, 2))
            .unwrap();
        let mut page = Page::new(s);
        page.register("a", build::grid_column_arc(4, 2)).unwrap();
        let json = serde_json::to_string(&page).unwrap();
        let back: Page = serde_json::from_str(&json).unwrap();
        assert_eq!(back, page);
        assert_eq!(serde_json::to_string(&back).unwrap(), json);
    }

    #[test]
    fn short_doc_builds_canonical_complex() {
        let doc: SurfaceDoc = serde_json::from_str(
            r#"{"genus":1,"bindings":[{"id":"C1","fdtc":"3/2"}],"punctures":0}"#,
        )
        .unwrap();
        let page = Page::from_doc(&doc).unwrap();
        assert_eq!(page.surface.euler_characteristic(), -1);
        assert_eq!(page.surface.fdtc()["C1"], Rational::new(3, 2));
    }
}
