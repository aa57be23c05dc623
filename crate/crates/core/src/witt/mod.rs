//! Finitely generated abelian groups, Smith normal form, diagrams of groups
//! and the Chow–Witt lifting criteria built on them.

pub mod diagram;
pub mod group;
pub mod lift;
pub mod matrix;
pub mod snf;

use thiserror::Error;

pub use diagram::{bar_sequence, check_diagram, totaro_check, Assertion, BarArrow, DiagramReport, DiagramSpec};
pub use group::{group_calc, is_exact_at, FgAbGroup, GroupAnswer, GroupQuery, Homo, Subgroup};
pub use lift::{lift_query, lift_via, psi_obstruction, LiftQuery, LiftReport, LiftRoute, LiftVerdict, PsiReport};
pub use matrix::IntMatrix;
pub use snf::{snf, Snf};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WittError {
    #[error("matrix is {}x{}, expected {}x{}", found.0, found.1, expected.0, expected.1)]
    ShapeMismatch {
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("source relation {0} does not map into the target relations")]
    IllDefinedHomo(usize),
    #[error("maps are not composable")]
    NotComposable,
    #[error("malformed diagram: {0}")]
    MalformedSpec(String),
    #[error("diagram has no arrow named `{0}`")]
    MissingArrow(String),
    #[error("endpoints do not match at map {0}")]
    EndpointMismatch(usize),
    #[error("a twist class needs a bilinear entry named `cup`")]
    TwistWithoutCup,
    #[error("ill-defined cup product {0}")]
    IllDefinedCup(String),
    #[error("cycle is not in the kernel of Sq2")]
    CycleNotInKernel,
    #[error("psi is not well defined: {0}")]
    PsiNotWellDefined(String),
    #[error("bad diagram JSON: {0}")]
    Json(String),
}
