//! Finitely presented graded-commutative rings with pure-power rewrite rules.
//!
//! A [`GradedRing`] is a polynomial ring over `ℤ` (modulus 0) or `ℤ/m` on
//! generators of positive degree, modulo rules of the shape `gᵏ → f` where
//! `f` is homogeneous of degree `k·deg(g)` and mentions `g` only with
//! exponent `< k`. Elements are always stored in normal form: every term is
//! irreducible under the rules, no term exceeds the optional degree cap, and
//! coefficients lie in `[0, m)` when the modulus is positive.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RingError {
    #[error("duplicate generator `{0}`")]
    DuplicateGenerator(String),
    #[error("generator `{0}` must have positive degree")]
    ZeroDegree(String),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("rule for `{generator}^{power}` has a term of degree {found}, expected {expected}")]
    InhomogeneousRule {
        generator: String,
        power: u32,
        expected: u32,
        found: u32,
    },
    #[error("rule for `{generator}^{power}` mentions `{generator}` with exponent {exponent}")]
    SelfReferencingRule {
        generator: String,
        power: u32,
        exponent: u32,
    },
    #[error("more than one rule for `{0}`")]
    DuplicateRule(String),
    #[error("rule for `{0}` must have power at least 1")]
    ZeroPower(String),
    #[error("rewrite rules form a cycle through `{0}`")]
    CyclicRules(String),
    #[error("monomial has {found} exponents but the ring has {expected} generators")]
    MonomialLength { expected: usize, found: usize },
    #[error("elements belong to different rings")]
    RingMismatch,
    #[error("rings differ in more than their modulus")]
    IncompatibleRings,
    #[error("cannot parse `{input}`: {reason}")]
    Parse { input: String, reason: String },
}

/// Exponent vector indexed by generator position.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn exponent(&self, g: usize) -> u32 {
        self.0[g]
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Generator {
    pub name: String,
    pub degree: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Rule {
    power: u32,
    rhs: Vec<(Monomial, BigInt)>,
}

/// A graded-commutative ring presented by generators and pure-power rules.
///
/// Rings are shared behind `Arc`; elements hold a reference to their ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedRing {
    modulus: u64,
    generators: Vec<Generator>,
    rules: Vec<Option<Rule>>,
    degree_cap: Option<u32>,
}

/// Rule input for [`GradedRing::new`]: `generator^power → Σ coeff·monomial`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleSpec {
    pub generator: String,
    pub power: u32,
    pub rhs: Vec<(BigInt, Monomial)>,
}

impl GradedRing {
    /// Validates a presentation and builds the ring.
    pub fn new(
        modulus: u64,
        generators: Vec<Generator>,
        rules: Vec<RuleSpec>,
        degree_cap: Option<u32>,
    ) -> Result<Arc<GradedRing>, RingError> {
        for (i, g) in generators.iter().enumerate() {
            if g.degree == 0 {
                return Err(RingError::ZeroDegree(g.name.clone()));
            }
            if generators[..i].iter().any(|h| h.name == g.name) {
                return Err(RingError::DuplicateGenerator(g.name.clone()));
            }
        }
        let n = generators.len();
        let mut ring = GradedRing {
            modulus,
            generators,
            rules: vec![None; n],
            degree_cap,
        };
        for spec in rules {
            let g = ring
                .index_of(&spec.generator)
                .ok_or_else(|| RingError::UnknownGenerator(spec.generator.clone()))?;
            if ring.rules[g].is_some() {
                return Err(RingError::DuplicateRule(spec.generator));
            }
            if spec.power == 0 {
                return Err(RingError::ZeroPower(spec.generator));
            }
            let expected = spec.power * ring.generators[g].degree;
            let mut rhs: BTreeMap<Monomial, BigInt> = BTreeMap::new();
            for (c, m) in spec.rhs {
                if m.0.len() != n {
                    return Err(RingError::MonomialLength {
                        expected: n,
                        found: m.0.len(),
                    });
                }
                let found = ring.monomial_degree(&m);
                if found != expected {
                    return Err(RingError::InhomogeneousRule {
                        generator: spec.generator,
                        power: spec.power,
                        expected,
                        found,
                    });
                }
                if m.0[g] >= spec.power {
                    return Err(RingError::SelfReferencingRule {
                        generator: spec.generator,
                        power: spec.power,
                        exponent: m.0[g],
                    });
                }
                *rhs.entry(m).or_insert_with(BigInt::zero) += c;
            }
            let rhs = rhs
                .into_iter()
                .map(|(m, c)| (m, ring.reduce_coeff(c)))
                .filter(|(_, c)| !c.is_zero())
                .collect();
            ring.rules[g] = Some(Rule {
                power: spec.power,
                rhs,
            });
        }
        ring.check_acyclic()?;
        Ok(Arc::new(ring))
    }

    /// Polynomial ring with no rules.
    pub fn free(
        modulus: u64,
        generators: &[(&str, u32)],
        degree_cap: Option<u32>,
    ) -> Result<Arc<GradedRing>, RingError> {
        RingBuilder::new(modulus)
            .generators(generators)
            .degree_cap(degree_cap)
            .build()
    }

    // A rule for g whose rhs mentions another ruled generator h gives an edge
    // g -> h. Termination needs this graph to be acyclic.
    fn check_acyclic(&self) -> Result<(), RingError> {
        let n = self.generators.len();
        let edges: Vec<Vec<usize>> = (0..n)
            .map(|g| match &self.rules[g] {
                None => Vec::new(),
                Some(rule) => (0..n)
                    .filter(|&h| {
                        h != g
                            && self.rules[h].is_some()
                            && rule.rhs.iter().any(|(m, _)| m.0[h] > 0)
                    })
                    .collect(),
            })
            .collect();
        // 0 = unvisited, 1 = on stack, 2 = done
        let mut state = vec![0u8; n];
        fn visit(v: usize, edges: &[Vec<usize>], state: &mut [u8]) -> Option<usize> {
            state[v] = 1;
            for &w in &edges[v] {
                if state[w] == 1 {
                    return Some(w);
                }
                if state[w] == 0 {
                    if let Some(c) = visit(w, edges, state) {
                        return Some(c);
                    }
                }
            }
            state[v] = 2;
            None
        }
        for v in 0..n {
            if state[v] == 0 {
                if let Some(c) = visit(v, &edges, &mut state) {
                    return Err(RingError::CyclicRules(self.generators[c].name.clone()));
                }
            }
        }
        Ok(())
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }

    pub fn degree_cap(&self) -> Option<u32> {
        self.degree_cap
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    /// `Some(k)` when generator `g` carries a rule `gᵏ → …`.
    pub fn rule_power(&self, g: usize) -> Option<u32> {
        self.rules[g].as_ref().map(|r| r.power)
    }

    pub fn monomial_degree(&self, m: &Monomial) -> u32 {
        m.0.iter()
            .zip(&self.generators)
            .map(|(e, g)| e * g.degree)
            .sum()
    }

    fn reduce_coeff(&self, c: BigInt) -> BigInt {
        if self.modulus == 0 {
            c
        } else {
            c.mod_floor(&BigInt::from(self.modulus))
        }
    }

    fn exceeds_cap(&self, m: &Monomial) -> bool {
        self.degree_cap
            .is_some_and(|cap| self.monomial_degree(m) > cap)
    }

    /// First generator, in declared order, whose rule applies to `m`.
    fn reducible_at(&self, m: &Monomial) -> Option<usize> {
        self.rules.iter().enumerate().find_map(|(g, rule)| {
            rule.as_ref()
                .filter(|r| m.0[g] >= r.power)
                .map(|_| g)
        })
    }

    /// Rewrites a term list into normal form.
    fn reduce_terms<I>(&self, terms: I) -> BTreeMap<Monomial, BigInt>
    where
        I: IntoIterator<Item = (Monomial, BigInt)>,
    {
        let mut pending: BTreeMap<Monomial, BigInt> = BTreeMap::new();
        for (m, c) in terms {
            if !self.exceeds_cap(&m) {
                *pending.entry(m).or_insert_with(BigInt::zero) += c;
            }
        }
        let mut done: BTreeMap<Monomial, BigInt> = BTreeMap::new();
        // Every rewrite strictly lowers the exponent of the rewritten generator,
        // and rule dependencies are acyclic, so this loop terminates.
        while !pending.is_empty() {
            let mut next: BTreeMap<Monomial, BigInt> = BTreeMap::new();
            for (m, c) in pending {
                let c = self.reduce_coeff(c);
                if c.is_zero() {
                    continue;
                }
                match self.reducible_at(&m) {
                    None => *done.entry(m).or_insert_with(BigInt::zero) += c,
                    Some(g) => {
                        let rule = self.rules[g].as_ref().expect("reducible generator has a rule");
                        let mut rest = m;
                        rest.0[g] -= rule.power;
                        for (rm, rc) in &rule.rhs {
                            *next.entry(rest.mul(rm)).or_insert_with(BigInt::zero) += &c * rc;
                        }
                    }
                }
            }
            pending = next;
        }
        done.into_iter()
            .map(|(m, c)| (m, self.reduce_coeff(c)))
            .filter(|(_, c)| !c.is_zero())
            .collect()
    }

    pub fn zero(self: &Arc<Self>) -> RingElement {
        RingElement {
            ring: Arc::clone(self),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(self: &Arc<Self>) -> RingElement {
        self.constant(1)
    }

    pub fn constant(self: &Arc<Self>, c: impl Into<BigInt>) -> RingElement {
        self.from_terms([(Monomial::one(self.num_generators()), c.into())])
    }

    /// The generator named `name`, as a normalized element.
    pub fn gen(self: &Arc<Self>, name: &str) -> Result<RingElement, RingError> {
        let g = self
            .index_of(name)
            .ok_or_else(|| RingError::UnknownGenerator(name.to_string()))?;
        Ok(self.generator(g))
    }

    pub fn generator(self: &Arc<Self>, g: usize) -> RingElement {
        let mut e = vec![0; self.num_generators()];
        e[g] = 1;
        self.monomial(Monomial(e))
    }

    pub fn monomial(self: &Arc<Self>, m: Monomial) -> RingElement {
        self.from_terms([(m, BigInt::one())])
    }

    /// Builds and normalizes an element from raw terms.
    pub fn from_terms<I>(self: &Arc<Self>, terms: I) -> RingElement
    where
        I: IntoIterator<Item = (Monomial, BigInt)>,
    {
        let n = self.num_generators();
        let terms = self.reduce_terms(terms.into_iter().inspect(|(m, _)| {
            assert_eq!(m.0.len(), n, "monomial length does not match ring");
        }));
        RingElement {
            ring: Arc::clone(self),
            terms,
        }
    }

    /// Parses `"2*c1^2*sigma - c2 + 3"`-style input. No parentheses.
    pub fn parse(self: &Arc<Self>, input: &str) -> Result<RingElement, RingError> {
        let err = |reason: &str| RingError::Parse {
            input: input.to_string(),
            reason: reason.to_string(),
        };
        let n = self.num_generators();
        let mut terms = Vec::new();
        let mut chunks: Vec<(bool, String)> = Vec::new();
        let mut current = String::new();
        let mut negative = false;
        for ch in input.chars().filter(|c| !c.is_whitespace()) {
            if (ch == '+' || ch == '-') && !current.is_empty() && !current.ends_with('^') {
                chunks.push((negative, std::mem::take(&mut current)));
                negative = ch == '-';
            } else if (ch == '+' || ch == '-') && current.is_empty() {
                if ch == '-' {
                    negative = !negative;
                }
            } else {
                current.push(ch);
            }
        }
        if current.is_empty() {
            if chunks.is_empty() {
                return Err(err("empty expression"));
            }
            return Err(err("dangling sign"));
        }
        chunks.push((negative, current));

        for (neg, chunk) in chunks {
            let mut coeff = BigInt::one();
            let mut exps = vec![0u32; n];
            for factor in chunk.split('*') {
                if factor.is_empty() {
                    return Err(err("empty factor"));
                }
                if factor.chars().all(|c| c.is_ascii_digit()) {
                    coeff *= factor.parse::<BigInt>().map_err(|_| err("bad integer"))?;
                    continue;
                }
                let (name, power) = match factor.split_once('^') {
                    Some((name, p)) => (name, p.parse::<u32>().map_err(|_| err("bad exponent"))?),
                    None => (factor, 1),
                };
                let g = self
                    .index_of(name)
                    .ok_or_else(|| err(&format!("unknown generator `{name}`")))?;
                exps[g] += power;
            }
            if neg {
                coeff = -coeff;
            }
            terms.push((Monomial(exps), coeff));
        }
        Ok(self.from_terms(terms))
    }

    /// Same presentation over `ℤ/m`.
    pub fn with_modulus(&self, m: u64) -> Result<Arc<GradedRing>, RingError> {
        let rules = self
            .rules
            .iter()
            .enumerate()
            .filter_map(|(g, r)| {
                r.as_ref().map(|r| RuleSpec {
                    generator: self.generators[g].name.clone(),
                    power: r.power,
                    rhs: r.rhs.iter().map(|(m, c)| (c.clone(), m.clone())).collect(),
                })
            })
            .collect();
        GradedRing::new(m, self.generators.clone(), rules, self.degree_cap)
    }

    pub fn to_presentation(&self) -> RingPresentation {
        RingPresentation {
            modulus: self.modulus,
            generators: self.generators.clone(),
            rules: self
                .rules
                .iter()
                .enumerate()
                .filter_map(|(g, r)| {
                    r.as_ref().map(|r| RulePresentation {
                        generator: self.generators[g].name.clone(),
                        power: r.power,
                        rhs: r
                            .rhs
                            .iter()
                            .map(|(m, c)| TermRecord {
                                coeff: c.clone(),
                                monomial: m.clone(),
                            })
                            .collect(),
                    })
                })
                .collect(),
            degree_cap: self.degree_cap,
        }
    }

    pub fn from_presentation(p: RingPresentation) -> Result<Arc<GradedRing>, RingError> {
        let rules = p
            .rules
            .into_iter()
            .map(|r| RuleSpec {
                generator: r.generator,
                power: r.power,
                rhs: r.rhs.into_iter().map(|t| (t.coeff, t.monomial)).collect(),
            })
            .collect();
        GradedRing::new(p.modulus, p.generators, rules, p.degree_cap)
    }
}

/// Convenience builder; rule right-hand sides are given as parse strings.
#[derive(Clone, Debug, Default)]
pub struct RingBuilder {
    modulus: u64,
    generators: Vec<Generator>,
    rules: Vec<(String, u32, String)>,
    degree_cap: Option<u32>,
}

impl RingBuilder {
    pub fn new(modulus: u64) -> Self {
        RingBuilder {
            modulus,
            ..Default::default()
        }
    }

    pub fn generator(mut self, name: &str, degree: u32) -> Self {
        self.generators.push(Generator {
            name: name.to_string(),
            degree,
        });
        self
    }

    pub fn generators(mut self, gens: &[(&str, u32)]) -> Self {
        for (name, degree) in gens {
            self = self.generator(name, *degree);
        }
        self
    }

    pub fn rule(mut self, generator: &str, power: u32, rhs: &str) -> Self {
        self.rules
            .push((generator.to_string(), power, rhs.to_string()));
        self
    }

    pub fn degree_cap(mut self, cap: Option<u32>) -> Self {
        self.degree_cap = cap;
        self
    }

    pub fn build(self) -> Result<Arc<GradedRing>, RingError> {
        // Parse right-hand sides in the free ring on the same generators.
        let free = GradedRing::new(self.modulus, self.generators.clone(), Vec::new(), None)?;
        let mut specs = Vec::with_capacity(self.rules.len());
        for (g, power, rhs) in self.rules {
            let e = free.parse(&rhs)?;
            specs.push(RuleSpec {
                generator: g,
                power,
                rhs: e.terms.into_iter().map(|(m, c)| (c, m)).collect(),
            });
        }
        GradedRing::new(self.modulus, self.generators, specs, self.degree_cap)
    }
}

/// Normalized element of a [`GradedRing`].
#[derive(Clone, Debug)]
pub struct RingElement {
    ring: Arc<GradedRing>,
    terms: BTreeMap<Monomial, BigInt>,
}

impl PartialEq for RingElement {
    fn eq(&self, other: &Self) -> bool {
        same_ring(&self.ring, &other.ring) && self.terms == other.terms
    }
}

impl Eq for RingElement {}

fn same_ring(a: &Arc<GradedRing>, b: &Arc<GradedRing>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

/// Binary arithmetic with a ring check. Scalars go through [`RingElement::scale`].
pub fn arith(a: &RingElement, b: &RingElement, op: ArithOp) -> Result<RingElement, RingError> {
    match op {
        ArithOp::Add => a.try_add(b),
        ArithOp::Sub => a.try_sub(b),
        ArithOp::Mul => a.try_mul(b),
    }
}

impl RingElement {
    pub fn ring(&self) -> &Arc<GradedRing> {
        &self.ring
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    /// Largest term in plain lexicographic order on exponent vectors.
    pub fn lex_leading_term(&self) -> Option<(&Monomial, &BigInt)> {
        self.terms.iter().next_back()
    }

    pub fn constant_term(&self) -> BigInt {
        self.coefficient(&Monomial::one(self.ring.num_generators()))
    }

    /// Highest degree of a term, `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| self.ring.monomial_degree(m)).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|m| self.ring.monomial_degree(m));
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    /// Re-normalizes. Elements are kept normal, so this is the identity on
    /// anything built through the public API.
    pub fn normalize(&self) -> RingElement {
        self.ring.from_terms(self.terms.clone())
    }

    fn check_ring(&self, other: &RingElement) -> Result<(), RingError> {
        if same_ring(&self.ring, &other.ring) {
            Ok(())
        } else {
            Err(RingError::RingMismatch)
        }
    }

    fn with_terms(&self, terms: BTreeMap<Monomial, BigInt>) -> RingElement {
        RingElement {
            ring: Arc::clone(&self.ring),
            terms,
        }
    }

    fn combine(&self, other: &RingElement, sign: i32) -> RingElement {
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            let entry = terms.entry(m.clone()).or_insert_with(BigInt::zero);
            if sign > 0 {
                *entry += c;
            } else {
                *entry -= c;
            }
        }
        let terms = terms
            .into_iter()
            .map(|(m, c)| (m, self.ring.reduce_coeff(c)))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        self.with_terms(terms)
    }

    pub fn try_add(&self, other: &RingElement) -> Result<RingElement, RingError> {
        self.check_ring(other)?;
        Ok(self.combine(other, 1))
    }

    pub fn try_sub(&self, other: &RingElement) -> Result<RingElement, RingError> {
        self.check_ring(other)?;
        Ok(self.combine(other, -1))
    }

    pub fn try_mul(&self, other: &RingElement) -> Result<RingElement, RingError> {
        self.check_ring(other)?;
        let mut raw = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.mul(mb);
                if self.ring.exceeds_cap(&m) {
                    continue;
                }
                *raw.entry(m).or_insert_with(BigInt::zero) += ca * cb;
            }
        }
        Ok(self.ring.from_terms(raw))
    }

    pub fn scale(&self, k: impl Into<BigInt>) -> RingElement {
        let k = k.into();
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (m.clone(), self.ring.reduce_coeff(c * &k)))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        self.with_terms(terms)
    }

    pub fn pow(&self, mut e: u32) -> RingElement {
        let mut base = self.clone();
        let mut acc = self.ring.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Sum of the terms of total degree exactly `d`.
    pub fn degree_component(&self, d: u32) -> RingElement {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| self.ring.monomial_degree(m) == d)
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        self.with_terms(terms)
    }

    /// Nonzero homogeneous components keyed by degree.
    pub fn homogeneous_components(&self) -> BTreeMap<u32, RingElement> {
        let mut out: BTreeMap<u32, BTreeMap<Monomial, BigInt>> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(self.ring.monomial_degree(m))
                .or_default()
                .insert(m.clone(), c.clone());
        }
        out.into_iter()
            .map(|(d, t)| (d, self.with_terms(t)))
            .collect()
    }

    /// Drops every term of degree above `max_degree`.
    pub fn truncate(&self, max_degree: u32) -> RingElement {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| self.ring.monomial_degree(m) <= max_degree)
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        self.with_terms(terms)
    }

    /// Coefficientwise reduction into `target`, which must be this ring's
    /// presentation over `ℤ/m`.
    pub fn reduce_mod(&self, target: &Arc<GradedRing>) -> Result<RingElement, RingError> {
        let src = &self.ring;
        if src.modulus != 0
            || target.modulus == 0
            || src.generators != target.generators
            || src.degree_cap != target.degree_cap
        {
            return Err(RingError::IncompatibleRings);
        }
        let expected = src.with_modulus(target.modulus)?;
        if *expected != **target {
            return Err(RingError::IncompatibleRings);
        }
        Ok(target.from_terms(self.terms.clone()))
    }

    /// Ring map sending generator `i` to `images[i]` in `target`.
    pub fn substitute(
        &self,
        target: &Arc<GradedRing>,
        images: &[RingElement],
    ) -> Result<RingElement, RingError> {
        if images.len() != self.ring.num_generators() {
            return Err(RingError::MonomialLength {
                expected: self.ring.num_generators(),
                found: images.len(),
            });
        }
        for img in images {
            if !same_ring(img.ring(), target) {
                return Err(RingError::RingMismatch);
            }
        }
        let mut powers: BTreeMap<(usize, u32), RingElement> = BTreeMap::new();
        let mut acc = target.zero();
        for (m, c) in &self.terms {
            let mut t = target.constant(c.clone());
            for (g, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let p = powers
                    .entry((g, e))
                    .or_insert_with(|| images[g].pow(e))
                    .clone();
                t = &t * &p;
                if t.is_zero() {
                    break;
                }
            }
            acc = &acc + &t;
        }
        Ok(acc)
    }

    /// Term list in display order (degree-lex, generator precedence as declared).
    pub fn to_term_list(&self) -> Vec<TermRecord> {
        self.sorted_terms()
            .into_iter()
            .map(|(m, c)| TermRecord {
                coeff: c.clone(),
                monomial: m.clone(),
            })
            .collect()
    }

    fn sorted_terms(&self) -> Vec<(&Monomial, &BigInt)> {
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|(a, _), (b, _)| {
            let da = self.ring.monomial_degree(a);
            let db = self.ring.monomial_degree(b);
            db.cmp(&da).then_with(|| b.cmp(a))
        });
        terms
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.sorted_terms().into_iter().enumerate() {
            let negative = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else if negative {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let factors: Vec<String> = m
                .0
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(g, &e)| {
                    let name = &self.ring.generators[g].name;
                    if e == 1 {
                        name.clone()
                    } else {
                        format!("{name}^{e}")
                    }
                })
                .collect();
            if factors.is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{abs}*{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

impl<'a> Add<&'a RingElement> for &'a RingElement {
    type Output = RingElement;
    fn add(self, rhs: &'a RingElement) -> RingElement {
        self.try_add(rhs).expect("ring mismatch in addition")
    }
}

impl<'a> Sub<&'a RingElement> for &'a RingElement {
    type Output = RingElement;
    fn sub(self, rhs: &'a RingElement) -> RingElement {
        self.try_sub(rhs).expect("ring mismatch in subtraction")
    }
}

impl<'a> Mul<&'a RingElement> for &'a RingElement {
    type Output = RingElement;
    fn mul(self, rhs: &'a RingElement) -> RingElement {
        self.try_mul(rhs).expect("ring mismatch in multiplication")
    }
}

impl Neg for &RingElement {
    type Output = RingElement;
    fn neg(self) -> RingElement {
        self.scale(-1)
    }
}

/// `{coeff, monomial}`; the coefficient is a JSON integer when it fits in
/// 64 bits and a decimal string otherwise.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermRecord {
    #[serde(with = "bigint_json")]
    pub coeff: BigInt,
    pub monomial: Monomial,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RulePresentation {
    pub generator: String,
    pub power: u32,
    pub rhs: Vec<TermRecord>,
}

/// Serializable ring presentation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingPresentation {
    pub modulus: u64,
    pub generators: Vec<Generator>,
    #[serde(default)]
    pub rules: Vec<RulePresentation>,
    #[serde(default)]
    pub degree_cap: Option<u32>,
}

pub mod bigint_json {
    use num_bigint::BigInt;
    use num_traits::ToPrimitive;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        match v.to_i64() {
            Some(x) => s.serialize_i64(x),
            None => s.serialize_str(&v.to_string()),
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Int(i64),
        Str(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Int(x) => Ok(BigInt::from(x)),
            Repr::Str(s) => s.parse().map_err(de::Error::custom),
        }
    }

    /// Same encoding for a vector of integers.
    pub fn serialize_vec<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        struct One<'a>(&'a BigInt);
        impl serde::Serialize for One<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                serialize(self.0, s)
            }
        }
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for x in v {
            seq.serialize_element(&One(x))?;
        }
        seq.end()
    }
}
