//! Chern classes of bundles and virtual bundles.
//!
//! Total Chern classes live in a caller-chosen [`GradedRing`]. A negative
//! summand contributes the formal inverse of its total class, truncated at
//! the requested dimension.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gring::{GradedRing, RingBuilder, RingElement, RingError, TermRecord};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ChernError {
    #[error("summands live over different base rings")]
    MixedBaseRings,
    #[error("total Chern class must have constant term 1, found {0}")]
    NonUnitConstant(BigInt),
    #[error("Chern root `{0}` is not homogeneous of degree 1")]
    BadRoot(String),
    #[error("dimension cap {dim_cap} exceeds the ring's degree cap {ring_cap}")]
    DimCapTooLarge { dim_cap: u32, ring_cap: u32 },
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// A vector bundle recorded by rank and total Chern class, optionally with
/// Chern roots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BundleClass {
    rank: u32,
    chern: RingElement,
    roots: Option<Vec<RingElement>>,
}

impl BundleClass {
    /// Bundle with total class `1 + c₁ + c₂ + ⋯`.
    pub fn from_chern_classes(rank: u32, classes: &[RingElement]) -> Result<Self, ChernError> {
        let ring = match classes.first() {
            Some(c) => Arc::clone(c.ring()),
            None => return Err(ChernError::MixedBaseRings),
        };
        let mut total = ring.one();
        for c in classes {
            total = total.try_add(c).map_err(|_| ChernError::MixedBaseRings)?;
        }
        Self::from_total(rank, total)
    }

    pub fn from_total(rank: u32, chern: RingElement) -> Result<Self, ChernError> {
        let c0 = chern.constant_term();
        if !c0.is_one() {
            return Err(ChernError::NonUnitConstant(c0));
        }
        Ok(BundleClass {
            rank,
            chern,
            roots: None,
        })
    }

    /// Splitting-model bundle `⊕ L_i` with `c₁(L_i) = roots[i]`.
    pub fn from_roots(ring: &Arc<GradedRing>, roots: Vec<RingElement>) -> Result<Self, ChernError> {
        let mut chern = ring.one();
        for root in &roots {
            if !root.ring().as_ref().eq(ring.as_ref()) {
                return Err(ChernError::MixedBaseRings);
            }
            if !root.is_zero() && (!root.is_homogeneous() || root.degree() != Some(1)) {
                return Err(ChernError::BadRoot(root.to_string()));
            }
            chern = &chern * &(&ring.one() + root);
        }
        Ok(BundleClass {
            rank: roots.len() as u32,
            chern,
            roots: Some(roots),
        })
    }

    pub fn line(c1: RingElement) -> Result<Self, ChernError> {
        let ring = Arc::clone(c1.ring());
        Self::from_roots(&ring, vec![c1])
    }

    pub fn trivial(ring: &Arc<GradedRing>, rank: u32) -> Self {
        BundleClass {
            rank,
            chern: ring.one(),
            roots: Some(vec![ring.zero(); rank as usize]),
        }
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    pub fn total(&self) -> &RingElement {
        &self.chern
    }

    pub fn roots(&self) -> Option<&[RingElement]> {
        self.roots.as_deref()
    }

    pub fn ring(&self) -> &Arc<GradedRing> {
        self.chern.ring()
    }

    /// `cᵢ ↦ (−1)ⁱcᵢ`; roots are negated.
    pub fn dual(&self) -> BundleClass {
        dual(self)
    }

    pub fn direct_sum(&self, other: &BundleClass) -> Result<BundleClass, ChernError> {
        let chern = self
            .chern
            .try_mul(&other.chern)
            .map_err(|_| ChernError::MixedBaseRings)?;
        let roots = match (&self.roots, &other.roots) {
            (Some(a), Some(b)) => Some(a.iter().chain(b).cloned().collect()),
            _ => None,
        };
        Ok(BundleClass {
            rank: self.rank + other.rank,
            chern,
            roots,
        })
    }
}

pub fn dual(b: &BundleClass) -> BundleClass {
    let chern = b
        .chern
        .homogeneous_components()
        .into_iter()
        .fold(b.ring().zero(), |acc, (d, c)| {
            if d % 2 == 0 {
                &acc + &c
            } else {
                &acc - &c
            }
        });
    BundleClass {
        rank: b.rank,
        chern,
        roots: b.roots.as_ref().map(|rs| rs.iter().map(|r| -r).collect()),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

/// Formal signed sum of bundles over one base ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VirtualClass {
    base: Arc<GradedRing>,
    summands: Vec<(Sign, BundleClass)>,
}

impl VirtualClass {
    pub fn new(
        base: &Arc<GradedRing>,
        summands: Vec<(Sign, BundleClass)>,
    ) -> Result<Self, ChernError> {
        if summands.iter().any(|(_, b)| **b.ring() != **base) {
            return Err(ChernError::MixedBaseRings);
        }
        Ok(VirtualClass {
            base: Arc::clone(base),
            summands,
        })
    }

    pub fn bundle(b: BundleClass) -> Self {
        VirtualClass {
            base: Arc::clone(b.ring()),
            summands: vec![(Sign::Plus, b)],
        }
    }

    pub fn summands(&self) -> &[(Sign, BundleClass)] {
        &self.summands
    }

    pub fn base(&self) -> &Arc<GradedRing> {
        &self.base
    }

    pub fn rank(&self) -> i64 {
        self.summands
            .iter()
            .map(|(s, b)| match s {
                Sign::Plus => b.rank as i64,
                Sign::Minus => -(b.rank as i64),
            })
            .sum()
    }

    pub fn negate(&self) -> VirtualClass {
        VirtualClass {
            base: Arc::clone(&self.base),
            summands: self
                .summands
                .iter()
                .map(|(s, b)| (s.flip(), b.clone()))
                .collect(),
        }
    }

    pub fn plus(&self, other: &VirtualClass) -> Result<VirtualClass, ChernError> {
        if *self.base != *other.base {
            return Err(ChernError::MixedBaseRings);
        }
        let mut summands = self.summands.clone();
        summands.extend(other.summands.iter().cloned());
        Ok(VirtualClass {
            base: Arc::clone(&self.base),
            summands,
        })
    }
}

/// `(1 + x)⁻¹ = Σ (−x)ᵏ`, truncated above `dim_cap`.
fn formal_inverse(c: &RingElement, dim_cap: u32) -> RingElement {
    let ring = c.ring();
    let x = &c.truncate(dim_cap) - &ring.one();
    let minus_x = -&x;
    let mut acc = ring.one();
    let mut power = ring.one();
    // x has no constant term, so (−x)ᵏ starts in degree ≥ k.
    for _ in 0..dim_cap {
        power = (&power * &minus_x).truncate(dim_cap);
        if power.is_zero() {
            break;
        }
        acc = &acc + &power;
    }
    acc
}

/// Total Chern class of a virtual bundle, truncated above `dim_cap`.
pub fn total_chern(v: &VirtualClass, dim_cap: u32) -> Result<RingElement, ChernError> {
    if let Some(cap) = v.base.degree_cap() {
        if dim_cap > cap {
            return Err(ChernError::DimCapTooLarge {
                dim_cap,
                ring_cap: cap,
            });
        }
    }
    let mut acc = v.base.one();
    for (sign, b) in &v.summands {
        let factor = match sign {
            Sign::Plus => b.chern.truncate(dim_cap),
            Sign::Minus => formal_inverse(&b.chern, dim_cap),
        };
        acc = (&acc * &factor).truncate(dim_cap);
    }
    Ok(acc)
}

pub fn chern_i(v: &VirtualClass, i: u32, dim_cap: u32) -> Result<RingElement, ChernError> {
    Ok(total_chern(v, dim_cap)?.degree_component(i))
}

/// Which hypotheses of the surface criterion to impose as rewrites.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VanishingOptions {
    /// `c₁(T) = 2v`, i.e. `c₁` even with half `v = c₁(V)`.
    pub impose_c1_even: bool,
    /// `c₂(T) = 2v²`, equivalent to `2c₂ = c₁²` once `c₁ = 2v`.
    pub impose_c2_relation: bool,
}

impl Default for VanishingOptions {
    fn default() -> Self {
        VanishingOptions {
            impose_c1_even: true,
            impose_c2_relation: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VanishingReport {
    pub rank: i64,
    pub c1: Vec<TermRecord>,
    pub c2: Vec<TermRecord>,
    pub c1_text: String,
    pub c2_text: String,
    pub pass: bool,
}

/// Universal surface ring `ℤ[a, b, v]` in degrees `(1, 2, 1)`, capped at 2,
/// with the requested substitutions as degree-preserving rewrites.
pub fn tangent_class_ring(opts: VanishingOptions) -> Result<Arc<GradedRing>, RingError> {
    let mut b = RingBuilder::new(0)
        .generators(&[("a", 1), ("b", 2), ("v", 1)])
        .degree_cap(Some(2));
    if opts.impose_c1_even {
        b = b.rule("a", 1, "2*v");
    }
    if opts.impose_c2_relation {
        b = b.rule("b", 1, "2*v^2");
    }
    b.build()
}

/// Rank, `c₁` and `c₂` of `[T] − 1 − [V] + [V̂]` for a rank-2 tangent class
/// `T` with `c(T) = 1 + a + b`, `1` the trivial rank-2 class and `V` a line
/// bundle with `c₁(V) = v`.
pub fn verify_tangent_class_vanishing(opts: VanishingOptions) -> Result<VanishingReport, ChernError> {
    let ring = tangent_class_ring(opts)?;
    let a = ring.gen("a")?;
    let b = ring.gen("b")?;
    let v = ring.gen("v")?;
    let tangent = BundleClass::from_chern_classes(2, &[a, b])?;
    let trivial = BundleClass::trivial(&ring, 2);
    let line = BundleClass::line(v)?;
    let class = VirtualClass::new(
        &ring,
        vec![
            (Sign::Plus, tangent),
            (Sign::Minus, trivial),
            (Sign::Minus, line.clone()),
            (Sign::Plus, line.dual()),
        ],
    )?;
    let c1 = chern_i(&class, 1, 2)?;
    let c2 = chern_i(&class, 2, 2)?;
    let rank = class.rank();
    Ok(VanishingReport {
        rank,
        pass: rank == 0 && c1.is_zero() && c2.is_zero(),
        c1_text: c1.to_string(),
        c2_text: c2.to_string(),
        c1: c1.to_term_list(),
        c2: c2.to_term_list(),
    })
}
