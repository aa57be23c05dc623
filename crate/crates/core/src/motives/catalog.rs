//! The built-in descriptor catalog.

use serde::{Deserialize, Serialize};

use super::verdict::{beauville_voisin_obstruction, curve_verdict, surface_verdict, CurveDescriptor, SurfaceDescriptor, Verdict};
use super::MotivesError;

const BUILTIN: &str = include_str!("../../data/catalog.json");

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Catalog {
    #[serde(default)]
    pub surfaces: Vec<SurfaceDescriptor>,
    #[serde(default)]
    pub curves: Vec<CurveDescriptor>,
}

impl Catalog {
    pub fn builtin() -> Catalog {
        Catalog::from_json(BUILTIN).expect("shipped catalog parses")
    }

    pub fn from_json(text: &str) -> Result<Catalog, MotivesError> {
        serde_json::from_str(text).map_err(|e| MotivesError::Json(e.to_string()))
    }

    pub fn surface(&self, name: &str) -> Option<&SurfaceDescriptor> {
        self.surfaces.iter().find(|s| s.name == name)
    }

    pub fn curve(&self, name: &str) -> Option<&CurveDescriptor> {
        self.curves.iter().find(|c| c.name == name)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SurfaceEntry {
    pub verdict: Verdict,
    /// Present when the descriptor carries Picard data.
    pub obstruction: Option<Verdict>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CatalogReport {
    pub surfaces: Vec<SurfaceEntry>,
    pub curves: Vec<Verdict>,
}

impl CatalogReport {
    pub fn surface(&self, name: &str) -> Option<&SurfaceEntry> {
        self.surfaces.iter().find(|e| e.verdict.name == name)
    }
}

/// Entries are independent; the report keeps the catalog order.
pub fn evaluate(c: &Catalog) -> CatalogReport {
    CatalogReport {
        surfaces: c
            .surfaces
            .iter()
            .map(|s| SurfaceEntry {
                verdict: surface_verdict(s),
                obstruction: beauville_voisin_obstruction(s).ok(),
            })
            .collect(),
        curves: c.curves.iter().map(curve_verdict).collect(),
    }
}
