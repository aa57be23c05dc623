//! Splitting verdicts for curves and surfaces, and a projector calculus for
//! decompositions of the diagonal.

pub mod catalog;
pub mod pipeline;
pub mod projector;
pub mod verdict;

use thiserror::Error;

use crate::witt::WittError;

pub use catalog::{evaluate, Catalog, CatalogReport, SurfaceEntry};
pub use pipeline::{chowwitt_lift_pipeline, curve_lift_preset, CurveDecomposition, PipelineOutcome, PipelineReport};
pub use projector::{
    curve_preset, jacobian_pi3_check, jacobian_preset, projector_check, CurvePreset, JacobianPreset, Pi3Report,
    Projector, ProjectorCheck, ProjectorReport, Realization,
};
pub use verdict::{
    beauville_voisin_obstruction, curve_verdict, surface_verdict, BaseField, CurveDescriptor, Outcome,
    PicRationalCurveData, Rule, SurfaceDescriptor, TriState, Verdict,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MotivesError {
    #[error("surface `{0}` has no Picard rational-curve data")]
    MissingPicData(String),
    #[error("projector `{projector}` is not an endomorphism of weight {weight}")]
    ShapeMismatch { projector: String, weight: usize },
    #[error("projector `{projector}` has {found} blocks, expected {expected}")]
    WeightCount {
        projector: String,
        expected: usize,
        found: usize,
    },
    #[error("block {weight} of projector `{projector}`: {source}")]
    Block {
        projector: String,
        weight: usize,
        source: WittError,
    },
    #[error("cycle `{cycle}` has {found} coordinates, expected {expected}")]
    CycleLength {
        cycle: String,
        expected: usize,
        found: usize,
    },
    #[error(transparent)]
    Witt(#[from] WittError),
    #[error("bad JSON: {0}")]
    Json(String),
}
