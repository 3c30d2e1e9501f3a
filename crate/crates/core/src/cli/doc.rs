//! Versioned JSON documents exchanged by the command line tool.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{ObfError, Result};
use crate::foliation::FoliatedSurface;
use crate::reduce::{MoveTrace, ReductionInput};

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DocKind {
    Surface,
    Foliation,
    Movie,
    Trace,
    Spec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Document {
    pub kind: DocKind,
    pub version: String,
    pub payload: Value,
}

/// A trace together with the input it replays from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceDoc {
    pub input: ReductionInput,
    pub trace: MoveTrace,
}

impl Document {
    pub fn wrap<T: Serialize>(kind: DocKind, payload: &T) -> Result<Self> {
        Ok(Document {
            kind,
            version: SCHEMA_VERSION.into(),
            payload: serde_json::to_value(payload)?,
        })
    }

    /// Pretty JSON with a trailing newline. Keys keep their declaration order.
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    /// Parse a document of `kind`. A bare payload without the envelope is
    /// accepted as well.
    pub fn parse<T: DeserializeOwned>(text: &str, kind: DocKind) -> Result<T> {
        let v: Value = serde_json::from_str(text).map_err(|e| ObfError::Document(e.to_string()))?;
        let payload = match v.get("kind").zip(v.get("payload")) {
            Some(_) => {
                let doc: Document =
                    serde_json::from_value(v).map_err(|e| ObfError::Document(e.to_string()))?;
                if doc.kind != kind {
                    return Err(ObfError::Document(format!(
                        "expected a {kind:?} document, got {:?}",
                        doc.kind
                    )));
                }
                if doc.version != SCHEMA_VERSION {
                    return Err(ObfError::Document(format!(
                        "unsupported schema version {}",
                        doc.version
                    )));
                }
                doc.payload
            }
            None => v,
        };
        serde_json::from_value(payload).map_err(|e| ObfError::Document(e.to_string()))
    }
}

pub fn foliation_document(f: &FoliatedSurface) -> Result<String> {
    let mut g = f.clone();
    g.canonicalize();
    Document::wrap(DocKind::Foliation, &g)?.to_json()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::foliation::standard::two_tile_sphere;

    #[test]
    fn canonical_documents_round_trip_byte_for_byte() {
        let text = foliation_document(&two_tile_sphere()).unwrap();
        let f: FoliatedSurface = Document::parse(&text, DocKind::Foliation).unwrap();
        assert_eq!(foliation_document(&f).unwrap(), text);
    }

    #[test]
    fn bare_payloads_parse() {
        let text = serde_json::to_string(&two_tile_sphere()).unwrap();
        let f: FoliatedSurface = Document::parse(&text, DocKind::Foliation).unwrap();
        assert_eq!(f, two_tile_sphere());
    }

    #[test]
    fn kind_mismatch_is_malformed() {
        let text = Document::wrap(DocKind::Movie, &two_tile_sphere())
            .unwrap()
            .to_json()
            .unwrap();
        assert!(matches!(
            Document::parse::<FoliatedSurface>(&text, DocKind::Foliation),
            Err(ObfError::Document(_))
        ));
    }
}
