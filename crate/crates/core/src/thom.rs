//! Projective-bundle model of a Thom space and the eigen-equations for the
//! Thom class.
//!
//! For a rank-`r` bundle the model ring is `R[σ, c₁…c_r]` with one rule
//! expressing `σ^{r+1}` through lower powers and degree cap `r + 4`. Two sign
//! conventions are available:
//!
//! * [`SignConvention::Printed`]: `σ^{r+1} = −(c₁σ^r + ⋯ + c_rσ)` and
//!   `t = (−σ)^r + c₁σ^{r−1} + ⋯ + c_r`.
//! * [`SignConvention::Geometric`]: `σ^{r+1} = Σ (−1)^{i+1} cᵢ σ^{r+1−i}` and
//!   `t = Σ cᵢ (−σ)^{r−i}`, so that `σ·t = 0` holds integrally.
//!
//! Both agree mod 2, and for even `r` they differ by `σ ↦ −σ`.

use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::gring::{GradedRing, RingBuilder, RingElement, RingError, TermRecord};
use crate::steenrod::{total_op, SteenrodContext, SteenrodError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ThomError {
    #[error("prime {0} is not supported (use 0, 2 or 3)")]
    UnsupportedPrime(u64),
    #[error("rank must be at least 1")]
    ZeroRank,
    #[error("model has prime {found}, identity needs {expected}")]
    WrongPrime { expected: u64, found: u64 },
    #[error("{identity} fails at rank {rank}: residual {residual}")]
    EigenEquationFailed {
        rank: usize,
        identity: String,
        residual: String,
    },
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Steenrod(#[from] SteenrodError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SignConvention {
    Printed,
    Geometric,
}

#[derive(Clone, Debug)]
pub struct ThomModel {
    rank: usize,
    base_rank: usize,
    prime: u64,
    convention: SignConvention,
    ring: Arc<GradedRing>,
    thom_class: RingElement,
}

impl ThomModel {
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Rank before stabilization; `c_j` for `j` above it are zero.
    pub fn base_rank(&self) -> usize {
        self.base_rank
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn convention(&self) -> SignConvention {
        self.convention
    }

    pub fn ring(&self) -> &Arc<GradedRing> {
        &self.ring
    }

    pub fn thom_class(&self) -> &RingElement {
        &self.thom_class
    }

    pub fn sigma(&self) -> RingElement {
        self.ring.generator(0)
    }

    /// `cᵢ`, with `c₀ = 1` and zero above the rank.
    pub fn c(&self, i: usize) -> RingElement {
        match i {
            0 => self.ring.one(),
            i if i <= self.rank => self.ring.generator(i),
            _ => self.ring.zero(),
        }
    }

    fn chern_names(&self) -> Vec<String> {
        (1..=self.rank).map(|i| format!("c{i}")).collect()
    }
}

pub fn build_model(r: usize, p: u64) -> Result<ThomModel, ThomError> {
    build_model_with(r, p, SignConvention::Printed)
}

pub fn build_model_with(r: usize, p: u64, convention: SignConvention) -> Result<ThomModel, ThomError> {
    build_stabilized(r, r, p, convention)
}

fn build_stabilized(
    rank: usize,
    base_rank: usize,
    p: u64,
    convention: SignConvention,
) -> Result<ThomModel, ThomError> {
    if !matches!(p, 0 | 2 | 3) {
        return Err(ThomError::UnsupportedPrime(p));
    }
    if base_rank == 0 {
        return Err(ThomError::ZeroRank);
    }
    let mut b = RingBuilder::new(p)
        .generator("sigma", 1)
        .degree_cap(Some(rank as u32 + 4));
    for i in 1..=rank {
        b = b.generator(&format!("c{i}"), i as u32);
    }
    let rhs: Vec<String> = (1..=rank)
        .map(|i| {
            let negative = match convention {
                SignConvention::Printed => true,
                SignConvention::Geometric => i % 2 == 0,
            };
            format!("{}c{i}*sigma^{}", if negative { "-" } else { "+" }, rank + 1 - i)
        })
        .collect();
    b = b.rule("sigma", rank as u32 + 1, &rhs.concat());
    for j in base_rank + 1..=rank {
        b = b.rule(&format!("c{j}"), 1, "0");
    }
    let ring = b.build()?;

    let sigma = ring.generator(0);
    let minus_sigma = -&sigma;
    let c = |i: usize| if i == 0 { ring.one() } else { ring.generator(i) };
    let mut t = ring.zero();
    for i in 0..=rank {
        let term = match convention {
            SignConvention::Printed if i == 0 => minus_sigma.pow(rank as u32),
            SignConvention::Printed => &c(i) * &sigma.pow((rank - i) as u32),
            SignConvention::Geometric => &c(i) * &minus_sigma.pow((rank - i) as u32),
        };
        t = &t + &term;
    }
    Ok(ThomModel {
        rank,
        base_rank,
        prime: p,
        convention,
        ring,
        thom_class: t,
    })
}

/// Rank `r + k` model with `c_{r+1} = ⋯ = c_{r+k} = 0` (adding a trivial
/// summand of rank `k`).
pub fn stabilize_rank(model: &ThomModel, k: usize) -> Result<ThomModel, ThomError> {
    if k == 0 {
        return Ok(model.clone());
    }
    build_stabilized(model.rank + k, model.base_rank, model.prime, model.convention)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EigenReport {
    pub rank: usize,
    pub prime: u64,
    pub identity: String,
    pub convention: SignConvention,
    pub residual: Vec<TermRecord>,
    #[serde(skip)]
    pub residual_text: String,
    pub pass: bool,
    /// Whether the identity is claimed at this rank.
    pub asserted: bool,
}

fn context(model: &ThomModel, p: u64) -> Result<SteenrodContext, ThomError> {
    if model.prime != p {
        return Err(ThomError::WrongPrime {
            expected: p,
            found: model.prime,
        });
    }
    let names = model.chern_names();
    let names: Vec<&str> = names.iter().map(String::as_str).collect();
    Ok(SteenrodContext::new(p, &model.ring, &["sigma"])?.with_chern_classes(&names)?)
}

fn report(model: &ThomModel, identity: &str, residual: RingElement, asserted: bool) -> EigenReport {
    EigenReport {
        rank: model.rank,
        prime: model.prime,
        identity: identity.to_string(),
        convention: model.convention,
        pass: residual.is_zero(),
        residual_text: residual.to_string(),
        residual: residual.to_term_list(),
        asserted,
    }
}

pub const SQ4_IDENTITY: &str = "Sq4(t) = c2*t";
pub const P1_IDENTITY: &str = "P1(t) = (c1^2 - 2*c2)*t";

/// Residual `Sq⁴(t) − c₂·t` in a mod-2 model.
pub fn check_sq4(model: &ThomModel) -> Result<EigenReport, ThomError> {
    let ctx = context(model, 2)?;
    let t = model.thom_class();
    let sq4 = total_op(&ctx, t)?.component(2);
    let residual = &sq4 - &(&model.c(2) * t);
    Ok(report(model, SQ4_IDENTITY, residual, true))
}

/// Residual `P¹(t) − (c₁² − 2c₂)·t` in a mod-3 model. Claimed only for even
/// rank.
pub fn check_p1(model: &ThomModel) -> Result<EigenReport, ThomError> {
    let ctx = context(model, 3)?;
    let t = model.thom_class();
    let p1 = total_op(&ctx, t)?.component(2);
    let c1 = model.c(1);
    let q = &(&c1 * &c1) - &model.c(2).scale(2);
    let residual = &p1 - &(&q * t);
    Ok(report(model, P1_IDENTITY, residual, model.rank.is_multiple_of(2)))
}

/// Builds the mod-2 model and fails when `Sq⁴(t) ≠ c₂·t`.
pub fn verify_sq4_eigen(r: usize) -> Result<EigenReport, ThomError> {
    let rep = check_sq4(&build_model(r, 2)?)?;
    if !rep.pass {
        return Err(ThomError::EigenEquationFailed {
            rank: r,
            identity: rep.identity,
            residual: rep.residual_text,
        });
    }
    Ok(rep)
}

/// Builds the mod-3 model and reports `P¹(t) − (c₁² − 2c₂)·t`. Odd ranks
/// are recorded, not asserted.
pub fn verify_p1_eigen(r: usize) -> Result<EigenReport, ThomError> {
    check_p1(&build_model(r, 3)?)
}

/// `σ·t` in the integral model.
pub fn sigma_times_thom(r: usize, convention: SignConvention) -> Result<RingElement, ThomError> {
    let m = build_model_with(r, 0, convention)?;
    Ok(&m.sigma() * m.thom_class())
}
