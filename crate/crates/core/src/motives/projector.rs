//! Correspondences acting on a graded realization.
//!
//! A correspondence is stored as its action, one endomorphism per weight, so
//! composition of correspondences is blockwise composition of maps.

use serde::Serialize;

use super::MotivesError;
use crate::witt::{FgAbGroup, Homo, IntMatrix};

/// Weights `0..=2d`, each an abelian group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Realization {
    pub weights: Vec<FgAbGroup>,
}

impl Realization {
    pub fn new(weights: Vec<FgAbGroup>) -> Self {
        Realization { weights }
    }

    /// Free weights of the given ranks.
    pub fn free(ranks: &[usize]) -> Self {
        Realization::new(ranks.iter().map(|&n| FgAbGroup::free(n)).collect())
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Projector {
    pub name: String,
    pub blocks: Vec<Homo>,
}

impl Projector {
    /// Builds from one matrix per weight, checking well-definedness.
    pub fn from_matrices(name: &str, r: &Realization, mats: Vec<IntMatrix>) -> Result<Self, MotivesError> {
        if mats.len() != r.len() {
            return Err(MotivesError::WeightCount {
                projector: name.to_string(),
                expected: r.len(),
                found: mats.len(),
            });
        }
        let blocks = mats
            .into_iter()
            .zip(&r.weights)
            .enumerate()
            .map(|(w, (m, g))| {
                Homo::new(g.clone(), g.clone(), m).map_err(|e| MotivesError::Block {
                    projector: name.to_string(),
                    weight: w,
                    source: e,
                })
            })
            .collect::<Result<_, _>>()?;
        Ok(Projector {
            name: name.to_string(),
            blocks,
        })
    }

    pub fn identity(name: &str, r: &Realization) -> Self {
        Projector {
            name: name.to_string(),
            blocks: r.weights.iter().map(Homo::identity).collect(),
        }
    }

    pub fn zero(name: &str, r: &Realization) -> Self {
        Projector {
            name: name.to_string(),
            blocks: r.weights.iter().map(|g| Homo::zero(g, g)).collect(),
        }
    }

    /// Identity on the listed weights, zero elsewhere.
    pub fn on_weights(name: &str, r: &Realization, weights: &[usize]) -> Self {
        Projector {
            name: name.to_string(),
            blocks: r
                .weights
                .iter()
                .enumerate()
                .map(|(w, g)| {
                    if weights.contains(&w) {
                        Homo::identity(g)
                    } else {
                        Homo::zero(g, g)
                    }
                })
                .collect(),
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Projector) -> Result<Projector, MotivesError> {
        same_len(self, other)?;
        let blocks = other
            .blocks
            .iter()
            .zip(&self.blocks)
            .map(|(a, b)| a.then(b))
            .collect::<Result<_, _>>()?;
        Ok(Projector {
            name: format!("{}*{}", self.name, other.name),
            blocks,
        })
    }

    pub fn add(&self, other: &Projector) -> Result<Projector, MotivesError> {
        same_len(self, other)?;
        let blocks = self
            .blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| a.add(b))
            .collect::<Result<_, _>>()?;
        Ok(Projector {
            name: format!("{}+{}", self.name, other.name),
            blocks,
        })
    }

    pub fn neg(&self) -> Projector {
        let m1 = num_bigint::BigInt::from(-1);
        Projector {
            name: format!("-{}", self.name),
            blocks: self
                .blocks
                .iter()
                .map(|h| {
                    Homo::new(h.source().clone(), h.target().clone(), h.matrix().scale(&m1))
                        .expect("negation of a homomorphism is well defined")
                })
                .collect(),
        }
    }

    pub fn sub(&self, other: &Projector) -> Result<Projector, MotivesError> {
        let mut d = self.add(&other.neg())?;
        d.name = format!("{}-{}", self.name, other.name);
        Ok(d)
    }

    /// Equal as maps, block by block.
    pub fn agrees_with(&self, other: &Projector) -> bool {
        self.blocks.len() == other.blocks.len()
            && self.blocks.iter().zip(&other.blocks).all(|(a, b)| a.agrees_with(b))
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.iter().all(Homo::is_zero_map)
    }

    pub fn is_idempotent(&self) -> Result<bool, MotivesError> {
        Ok(self.compose(self)?.agrees_with(self))
    }

    /// Sum of the free ranks of the images, a proxy for the size of the
    /// summand the projector cuts out.
    pub fn image_rank(&self) -> usize {
        self.blocks.iter().map(|h| h.image().as_group().free_rank()).sum()
    }

    /// Checks every block is an endomorphism of the matching weight.
    pub fn check_shape(&self, r: &Realization) -> Result<(), MotivesError> {
        if self.blocks.len() != r.len() {
            return Err(MotivesError::WeightCount {
                projector: self.name.clone(),
                expected: r.len(),
                found: self.blocks.len(),
            });
        }
        for (w, (h, g)) in self.blocks.iter().zip(&r.weights).enumerate() {
            if h.source() != g || h.target() != g {
                return Err(MotivesError::ShapeMismatch {
                    projector: self.name.clone(),
                    weight: w,
                });
            }
        }
        Ok(())
    }
}

fn same_len(a: &Projector, b: &Projector) -> Result<(), MotivesError> {
    if a.blocks.len() != b.blocks.len() {
        return Err(MotivesError::WeightCount {
            projector: b.name.clone(),
            expected: a.blocks.len(),
            found: b.blocks.len(),
        });
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "check", rename_all = "snake_case")]
pub enum ProjectorCheck {
    DeltaIsIdentity,
    Idempotent { projector: String },
    Orthogonal { left: String, right: String },
    /// The remainder `Δ − Σpᵢ` is idempotent.
    RemainderIdempotent,
    /// `Σpᵢ + (Δ − Σpᵢ) = Δ`.
    Complete,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckLine {
    #[serde(flatten)]
    pub check: ProjectorCheck,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProjectorReport {
    pub lines: Vec<CheckLine>,
    pub pass: bool,
}

impl ProjectorReport {
    pub fn failures(&self) -> impl Iterator<Item = &CheckLine> {
        self.lines.iter().filter(|l| !l.holds)
    }
}

/// Idempotency of each `pᵢ`, pairwise orthogonality, and that the remainder
/// `Δ − Σpᵢ` is a projector completing the family.
pub fn projector_check(r: &Realization, ps: &[Projector], delta: &Projector) -> Result<ProjectorReport, MotivesError> {
    delta.check_shape(r)?;
    for p in ps {
        p.check_shape(r)?;
    }
    let mut lines = Vec::new();
    let mut push = |check, holds| lines.push(CheckLine { check, holds });

    push(ProjectorCheck::DeltaIsIdentity, delta.agrees_with(&Projector::identity("id", r)));
    for p in ps {
        push(
            ProjectorCheck::Idempotent {
                projector: p.name.clone(),
            },
            p.is_idempotent()?,
        );
    }
    for (i, a) in ps.iter().enumerate() {
        for (j, b) in ps.iter().enumerate() {
            if i != j {
                push(
                    ProjectorCheck::Orthogonal {
                        left: a.name.clone(),
                        right: b.name.clone(),
                    },
                    a.compose(b)?.is_zero(),
                );
            }
        }
    }
    let mut sum = Projector::zero("sum", r);
    for p in ps {
        sum = sum.add(p)?;
    }
    let rest = delta.sub(&sum)?;
    push(ProjectorCheck::RemainderIdempotent, rest.is_idempotent()?);
    push(ProjectorCheck::Complete, sum.add(&rest)?.agrees_with(delta));

    let pass = lines.iter().all(|l| l.holds);
    Ok(ProjectorReport { lines, pass })
}

#[derive(Clone, Debug)]
pub struct CurvePreset {
    pub realization: Realization,
    pub pi0: Projector,
    pub pi1: Projector,
    pub pi2: Projector,
    pub delta: Projector,
}

impl CurvePreset {
    pub fn projectors(&self) -> Vec<Projector> {
        vec![self.pi0.clone(), self.pi1.clone(), self.pi2.clone()]
    }
}

/// `Δ = [e×X] + (Δ − [e×X] − [X×e]) + [X×e]` acting on `ℤ ⊕ ℤ^{2g} ⊕ ℤ`.
pub fn curve_preset(genus: usize) -> CurvePreset {
    let r = Realization::free(&[1, 2 * genus, 1]);
    CurvePreset {
        pi0: Projector::on_weights("pi0", &r, &[0]),
        pi1: Projector::on_weights("pi1", &r, &[1]),
        pi2: Projector::on_weights("pi2", &r, &[2]),
        delta: Projector::identity("delta", &r),
        realization: r,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Pi3Report {
    /// Weights where `π₁ᵗ − π₁∘π₁ᵗ` is nonzero.
    pub nonzero_weights: Vec<usize>,
    pub is_zero: bool,
}

/// `π₃ = π₁ᵗ − π₁∘π₁ᵗ`, with the transpose given as its own block family.
pub fn jacobian_pi3_check(r: &Realization, pi1: &Projector, pi1_t: &Projector) -> Result<Pi3Report, MotivesError> {
    pi1.check_shape(r)?;
    pi1_t.check_shape(r)?;
    let pi3 = pi1_t.sub(&pi1.compose(pi1_t)?)?;
    let nonzero_weights: Vec<usize> = pi3
        .blocks
        .iter()
        .enumerate()
        .filter(|(_, h)| !h.is_zero_map())
        .map(|(w, _)| w)
        .collect();
    Ok(Pi3Report {
        is_zero: nonzero_weights.is_empty(),
        nonzero_weights,
    })
}

#[derive(Clone, Debug)]
pub struct JacobianPreset {
    pub realization: Realization,
    pub pi1: Projector,
    pub pi1_t: Projector,
}

/// Abelian-surface stand-in with weights of ranks `1, 4, 6, 4, 1`.
///
/// `π₁` is the identity on weights 1 and 3 plus the idempotent
/// `[[1,1],[0,0]]` on the first two coordinates of weight 2. The adjoint
/// family is the identity on weight 3 plus `[[1,0],[0,0]]` on weight 2, so
/// `π₁∘π₁ᵗ = π₁ᵗ` holds by construction.
pub fn jacobian_preset() -> JacobianPreset {
    let r = Realization::free(&[1, 4, 6, 4, 1]);
    let mut w2 = IntMatrix::zeros(6, 6);
    w2[(0, 0)] = 1.into();
    w2[(0, 1)] = 1.into();
    let mut w2t = IntMatrix::zeros(6, 6);
    w2t[(0, 0)] = 1.into();
    let pi1 = Projector::from_matrices(
        "pi1",
        &r,
        vec![
            IntMatrix::zeros(1, 1),
            IntMatrix::identity(4),
            w2,
            IntMatrix::identity(4),
            IntMatrix::zeros(1, 1),
        ],
    )
    .expect("preset blocks are endomorphisms of free groups");
    let pi1_t = Projector::from_matrices(
        "pi1_t",
        &r,
        vec![
            IntMatrix::zeros(1, 1),
            IntMatrix::zeros(4, 4),
            w2t,
            IntMatrix::identity(4),
            IntMatrix::zeros(1, 1),
        ],
    )
    .expect("preset blocks are endomorphisms of free groups");
    JacobianPreset {
        realization: r,
        pi1,
        pi1_t,
    }
}
