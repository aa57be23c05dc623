//! Even Steenrod operations on Chow-degree classes via the splitting
//! principle.
//!
//! The total operation sends a codimension-one class `u` to `u + uᵖ` and is
//! multiplicative. Results are split by *shift*, the rise in codimension:
//! at `p = 2` shift 1 is `Sq²` and shift 2 is `Sq⁴`; at `p = 3` shift 2 is
//! `P¹`. Chern classes are handled through their roots: `cᵢ ↦ eᵢ(x + xᵖ)`
//! rewritten in elementary symmetric polynomials.

pub mod symmetric;

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::gring::{GradedRing, RingBuilder, RingElement, RingError, TermRecord};
use symmetric::RootModel;

pub use symmetric::RootModel as ChernRootModel;

/// Largest rank handled by [`op_on_chern`] unless a bound is passed.
pub const DEFAULT_RANK_BOUND: usize = 6;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SteenrodError {
    #[error("prime {0} is not supported (only 2 and 3)")]
    UnsupportedPrime(u64),
    #[error("base ring has modulus {found}, expected {expected}")]
    WrongModulus { expected: u64, found: u64 },
    #[error("codimension-one generator `{0}` must have degree 1")]
    NotCodimOne(String),
    #[error("generator `{0}` has no declared operation")]
    NonPolynomialInput(String),
    #[error("index {index} out of range for rank {rank} (bound {bound})")]
    IndexOutOfRange { index: usize, rank: usize, bound: usize },
    #[error("root expansion is not symmetric; remainder {0}")]
    NotSymmetric(String),
    #[error(transparent)]
    Ring(#[from] RingError),
}

fn check_prime(p: u64) -> Result<(), SteenrodError> {
    match p {
        2 | 3 => Ok(()),
        _ => Err(SteenrodError::UnsupportedPrime(p)),
    }
}

/// Images of `c₁…c_r` under the integral lift `x ↦ x + xᵖ` of the total
/// operation, in `ℤ[c₁…c_r]`, truncated above `max_degree`.
pub fn chern_images(p: u64, rank: usize, max_degree: Option<u32>) -> Result<Vec<RingElement>, SteenrodError> {
    let mut model = RootModel::new(rank, 0, max_degree);
    let roots = Arc::clone(model.root_ring());
    let images: Vec<RingElement> = (0..rank)
        .map(|j| {
            let x = roots.generator(j);
            &x + &x.pow(p as u32)
        })
        .collect();
    // eᵢ of the transformed roots, read off Π(1 + yⱼ).
    let mut total = roots.one();
    for y in &images {
        total = &total * &(&roots.one() + y);
    }
    let mut out = Vec::with_capacity(rank);
    for i in 1..=rank {
        // eᵢ(y) has degree between i and p·i in the roots.
        let mut f = roots.zero();
        for d in i as u32..=(p as u32) * i as u32 {
            let part = total.degree_component(d);
            // Terms of degree d in Π(1 + yⱼ) come from several eᵢ(y); keep the
            // ones using exactly i factors.
            f = &f + &split_by_factor_count(&part, i);
        }
        let e = model
            .to_elementary(&f)
            .map_err(|rest| SteenrodError::NotSymmetric(rest.to_string()))?;
        out.push(e);
    }
    Ok(out)
}

// A monomial of Π(1 + xⱼ + xⱼᵖ) uses factor j iff its xⱼ-exponent is 1 or p,
// so the number of factors used is the number of nonzero exponents.
fn split_by_factor_count(part: &RingElement, count: usize) -> RingElement {
    let ring = part.ring();
    ring.from_terms(
        part.terms()
            .filter(|(m, _)| m.exponents().iter().filter(|&&e| e > 0).count() == count)
            .map(|(m, c)| (m.clone(), c.clone())),
    )
}

/// Which generators of the base ring carry an operation, and how.
#[derive(Clone, Debug)]
pub struct SteenrodContext {
    prime: u64,
    base: Arc<GradedRing>,
    images: Vec<Option<RingElement>>,
}

impl SteenrodContext {
    /// Context over a mod-`p` ring with the named degree-one generators
    /// treated as codimension-one classes.
    pub fn new(prime: u64, base: &Arc<GradedRing>, codim1: &[&str]) -> Result<Self, SteenrodError> {
        check_prime(prime)?;
        if base.modulus() != prime {
            return Err(SteenrodError::WrongModulus {
                expected: prime,
                found: base.modulus(),
            });
        }
        let mut images = vec![None; base.num_generators()];
        for name in codim1 {
            let g = base
                .index_of(name)
                .ok_or_else(|| RingError::UnknownGenerator(name.to_string()))?;
            if base.generators()[g].degree != 1 {
                return Err(SteenrodError::NotCodimOne(name.to_string()));
            }
            let u = base.generator(g);
            images[g] = Some(&u + &u.pow(prime as u32));
        }
        Ok(SteenrodContext {
            prime,
            base: Arc::clone(base),
            images,
        })
    }

    /// Declares `names[i-1]` to be the `i`-th Chern class of one bundle of
    /// rank `names.len()`.
    pub fn with_chern_classes(mut self, names: &[&str]) -> Result<Self, SteenrodError> {
        let rank = names.len();
        let idx: Vec<usize> = names
            .iter()
            .map(|n| {
                self.base
                    .index_of(n)
                    .ok_or_else(|| RingError::UnknownGenerator(n.to_string()))
            })
            .collect::<Result<_, _>>()?;
        // Only degrees up to the cap can survive in the base.
        let cap = self.base.degree_cap();
        let raw = chern_images(self.prime, rank, cap)?;
        let targets: Vec<RingElement> = idx.iter().map(|&g| self.base.generator(g)).collect();
        for (i, img) in raw.iter().enumerate() {
            let mapped = img.substitute(&self.base, &targets)?;
            self.images[idx[i]] = Some(mapped);
        }
        Ok(self)
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn base(&self) -> &Arc<GradedRing> {
        &self.base
    }
}

/// Total operation split by codimension shift.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperationResult {
    pub prime: u64,
    pub input: RingElement,
    pub components: BTreeMap<u32, RingElement>,
}

impl OperationResult {
    /// Shift-`s` component, zero when absent.
    pub fn component(&self, s: u32) -> RingElement {
        self.components
            .get(&s)
            .cloned()
            .unwrap_or_else(|| self.input.ring().zero())
    }

    pub fn total(&self) -> RingElement {
        self.components
            .values()
            .fold(self.input.ring().zero(), |acc, c| &acc + c)
    }
}

pub fn total_op(ctx: &SteenrodContext, e: &RingElement) -> Result<OperationResult, SteenrodError> {
    if **e.ring() != *ctx.base {
        return Err(RingError::RingMismatch.into());
    }
    for (m, _) in e.terms() {
        for (g, &x) in m.exponents().iter().enumerate() {
            if x > 0 && ctx.images[g].is_none() {
                return Err(SteenrodError::NonPolynomialInput(
                    ctx.base.generators()[g].name.clone(),
                ));
            }
        }
    }
    let images: Vec<RingElement> = ctx
        .images
        .iter()
        .enumerate()
        .map(|(g, img)| img.clone().unwrap_or_else(|| ctx.base.generator(g)))
        .collect();
    let mut components: BTreeMap<u32, RingElement> = BTreeMap::new();
    components.insert(0, e.clone());
    for (d, part) in e.homogeneous_components() {
        let image = part.substitute(&ctx.base, &images)?;
        for (deg, piece) in image.homogeneous_components() {
            let shift = deg - d;
            if shift == 0 {
                continue;
            }
            let slot = components
                .entry(shift)
                .or_insert_with(|| ctx.base.zero());
            *slot = &*slot + &piece;
        }
    }
    components.retain(|&s, c| s == 0 || !c.is_zero());
    Ok(OperationResult {
        prime: ctx.prime,
        input: e.clone(),
        components,
    })
}

/// `T(ab) = T(a)·T(b)` shift by shift.
pub fn cartan_check(ctx: &SteenrodContext, a: &RingElement, b: &RingElement) -> Result<bool, SteenrodError> {
    let ab = total_op(ctx, &(a.try_mul(b)?))?;
    let ta = total_op(ctx, a)?;
    let tb = total_op(ctx, b)?;
    let mut conv: BTreeMap<u32, RingElement> = BTreeMap::new();
    for (i, x) in &ta.components {
        for (j, y) in &tb.components {
            let slot = conv.entry(i + j).or_insert_with(|| ctx.base.zero());
            *slot = &*slot + &(x * y);
        }
    }
    let shifts: std::collections::BTreeSet<u32> =
        conv.keys().chain(ab.components.keys()).copied().collect();
    Ok(shifts.into_iter().all(|s| {
        ab.component(s) == conv.get(&s).cloned().unwrap_or_else(|| ctx.base.zero())
    }))
}

/// Free Chern ring `ℤ/m[c₁…c_r]`.
pub fn chern_ring(modulus: u64, rank: usize) -> Arc<GradedRing> {
    let mut b = RingBuilder::new(modulus);
    for i in 1..=rank {
        b = b.generator(&format!("c{i}"), i as u32);
    }
    b.build().expect("free chern ring")
}

fn check_index(i: usize, r: usize, bound: usize) -> Result<(), SteenrodError> {
    if i == 0 || i > r || r > bound {
        return Err(SteenrodError::IndexOutOfRange {
            index: i,
            rank: r,
            bound,
        });
    }
    Ok(())
}

/// Shift-2 part of the integral lift applied to `cᵢ` of a rank-`r` bundle, in
/// `ℤ[c₁…c_r]`.
pub fn op_on_chern_integral(p: u64, i: usize, r: usize) -> Result<RingElement, SteenrodError> {
    check_prime(p)?;
    check_index(i, r, DEFAULT_RANK_BOUND)?;
    let images = chern_images(p, r, Some(i as u32 + 2))?;
    Ok(images[i - 1].degree_component(i as u32 + 2))
}

/// `Sq⁴(cᵢ)` (p = 2) or `P¹(cᵢ)` (p = 3) in `ℤ/p[c₁…c_r]`.
pub fn op_on_chern(p: u64, i: usize, r: usize) -> Result<RingElement, SteenrodError> {
    op_on_chern_bounded(p, i, r, DEFAULT_RANK_BOUND)
}

pub fn op_on_chern_bounded(p: u64, i: usize, r: usize, bound: usize) -> Result<RingElement, SteenrodError> {
    check_prime(p)?;
    check_index(i, r, bound)?;
    let images = chern_images(p, r, Some(i as u32 + 2))?;
    let integral = images[i - 1].degree_component(i as u32 + 2);
    let target = chern_ring(p, r);
    let gens: Vec<RingElement> = (0..r).map(|g| target.generator(g)).collect();
    Ok(integral.substitute(&target, &gens)?)
}

/// Closed forms for `Sq⁴(cᵢ)` and `P¹(cᵢ)` as printed, with `c_{>r} = 0`.
pub fn printed_wu_formula(p: u64, i: usize, r: usize) -> Result<RingElement, SteenrodError> {
    check_prime(p)?;
    let ring = chern_ring(p, r);
    let c = |k: usize| -> RingElement {
        if k == 0 {
            ring.one()
        } else if k <= r {
            ring.generator(k - 1)
        } else {
            ring.zero()
        }
    };
    let ii = i as i64;
    let out = match p {
        2 => {
            let a = &c(2) * &c(i);
            let b = (&c(1) * &c(i + 1)).scale(ii);
            let k = (ii + 2) * (ii - 1) / 2;
            &(&a - &b) + &c(i + 2).scale(k)
        }
        _ => {
            let q = &(&c(1) * &c(1)) - &c(2).scale(2);
            let a = &q * &c(i);
            let b = &c(1) * &c(i + 1);
            &(&a - &b) + &c(i + 2).scale(ii + 1)
        }
    };
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WuRow {
    pub prime: u64,
    pub rank: usize,
    pub index: usize,
    pub agrees: bool,
    pub discrepancy: Vec<TermRecord>,
    #[serde(skip)]
    pub discrepancy_text: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WuReport {
    pub prime: u64,
    pub rows: Vec<WuRow>,
}

impl WuReport {
    pub fn all_agree(&self) -> bool {
        self.rows.iter().all(|r| r.agrees)
    }

    pub fn row(&self, rank: usize, index: usize) -> Option<&WuRow> {
        self.rows.iter().find(|r| r.rank == rank && r.index == index)
    }
}

/// Printed closed form minus the root-expansion value, for `1 ≤ i ≤ r ≤ r_max`.
pub fn compare_wu_formulas(p: u64, r_max: usize) -> Result<WuReport, SteenrodError> {
    check_prime(p)?;
    if r_max > DEFAULT_RANK_BOUND {
        return Err(SteenrodError::IndexOutOfRange {
            index: 1,
            rank: r_max,
            bound: DEFAULT_RANK_BOUND,
        });
    }
    let mut rows = Vec::new();
    for r in 1..=r_max {
        let images = chern_images(p, r, Some(r as u32 + 2))?;
        let target = chern_ring(p, r);
        let gens: Vec<RingElement> = (0..r).map(|g| target.generator(g)).collect();
        for i in 1..=r {
            let oracle = images[i - 1]
                .degree_component(i as u32 + 2)
                .substitute(&target, &gens)?;
            let printed = printed_wu_formula(p, i, r)?;
            let diff = &printed - &oracle;
            rows.push(WuRow {
                prime: p,
                rank: r,
                index: i,
                agrees: diff.is_zero(),
                discrepancy_text: diff.to_string(),
                discrepancy: diff.to_term_list(),
            });
        }
    }
    Ok(WuReport { prime: p, rows })
}
