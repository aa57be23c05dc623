//! Symmetric polynomials in Chern roots, rewritten in elementary symmetric
//! polynomials.

use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigInt;

use crate::gring::{GradedRing, Monomial, RingBuilder, RingElement};

/// The root ring `ℤ[x₁…x_r]` (or `ℤ/m`) together with its elementary
/// symmetric polynomials and the matching Chern ring `ℤ[c₁…c_r]`.
pub struct RootModel {
    rank: usize,
    roots: Arc<GradedRing>,
    chern: Arc<GradedRing>,
    elementary: Vec<RingElement>,
    products: HashMap<Vec<u32>, RingElement>,
}

impl RootModel {
    pub fn new(rank: usize, modulus: u64, degree_cap: Option<u32>) -> Self {
        let root_names: Vec<String> = (1..=rank).map(|j| format!("x{j}")).collect();
        let mut rb = RingBuilder::new(modulus).degree_cap(degree_cap);
        for n in &root_names {
            rb = rb.generator(n, 1);
        }
        let roots = rb.build().expect("root ring is free");
        let mut cb = RingBuilder::new(modulus);
        for i in 1..=rank {
            cb = cb.generator(&format!("c{i}"), i as u32);
        }
        let chern = cb.build().expect("chern ring is free");

        let mut total = roots.one();
        for j in 0..rank {
            total = &total * &(&roots.one() + &roots.generator(j));
        }
        let elementary = (0..=rank as u32).map(|k| total.degree_component(k)).collect();
        RootModel {
            rank,
            roots,
            chern,
            elementary,
            products: HashMap::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn root_ring(&self) -> &Arc<GradedRing> {
        &self.roots
    }

    pub fn chern_ring(&self) -> &Arc<GradedRing> {
        &self.chern
    }

    /// `e_k(x₁…x_r)`, zero for `k > r`.
    pub fn elementary(&self, k: usize) -> RingElement {
        self.elementary
            .get(k)
            .cloned()
            .unwrap_or_else(|| self.roots.zero())
    }

    fn product(&mut self, exps: &[u32]) -> RingElement {
        if let Some(p) = self.products.get(exps) {
            return p.clone();
        }
        let mut acc = self.roots.one();
        for (k, &e) in exps.iter().enumerate() {
            if e > 0 {
                acc = &acc * &self.elementary[k + 1].pow(e);
            }
        }
        self.products.insert(exps.to_vec(), acc.clone());
        acc
    }

    /// Rewrites a symmetric `f` as a polynomial in `c_k = e_k`.
    ///
    /// Repeatedly cancels the lex-leading term `a·x^λ` against
    /// `a·e₁^{λ₁−λ₂}⋯e_r^{λ_r}`. Returns `Err(remainder)` when `f` is not
    /// symmetric.
    pub fn to_elementary(&mut self, f: &RingElement) -> Result<RingElement, RingElement> {
        let mut rest = f.clone();
        let mut out: Vec<(Monomial, BigInt)> = Vec::new();
        while let Some((lead, coeff)) = rest.lex_leading_term() {
            let lam = lead.exponents();
            if lam.windows(2).any(|w| w[0] < w[1]) {
                return Err(rest);
            }
            let exps: Vec<u32> = (0..self.rank)
                .map(|k| lam[k] - lam.get(k + 1).copied().unwrap_or(0))
                .collect();
            let coeff = coeff.clone();
            let term = self.product(&exps).scale(coeff.clone());
            rest = &rest - &term;
            out.push((Monomial::new(exps), coeff));
        }
        Ok(self.chern.from_terms(out))
    }
}
