//! Algebraic laws for rings, Chern classes and total operations, each run
//! through a seeded proptest runner.

use std::collections::BTreeMap;
use std::sync::Arc;

use motsplit::chern::{total_chern, BundleClass, Sign, VirtualClass};
use motsplit::gring::{GradedRing, Monomial, RingBuilder, RingElement};
use motsplit::steenrod::{cartan_check, total_op, SteenrodContext};
use num_bigint::BigInt;
use proptest::prelude::*;
use proptest::test_runner::{RngSeed, TestCaseError, TestRunner};

pub const CASES: u32 = 256;
const SEED: u64 = 20_240_601;
const CAP: u32 = 6;

pub fn config() -> ProptestConfig {
    ProptestConfig {
        cases: CASES,
        rng_seed: RngSeed::Fixed(SEED),
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

fn run<S: Strategy>(strategy: S, law: fn(S::Value) -> Result<(), TestCaseError>) -> Result<(), String> {
    TestRunner::new(config())
        .run(&strategy, law)
        .map_err(|e| e.to_string())
}

fn reduce(v: BigInt, modulus: u64) -> BigInt {
    if modulus == 0 {
        v
    } else {
        ((v % modulus) + modulus) % modulus
    }
}

/// `x, z` in degree 1, `y` in degree 2, with `x² → y + 3z²` and
/// `y² → 2z⁴ − yz²`. Both rules hold under `x ↦ 2t, y ↦ t², z ↦ t` and
/// under `x ↦ t, y ↦ −2t², z ↦ t`.
fn rewrite_ring(modulus: u64) -> Arc<GradedRing> {
    RingBuilder::new(modulus)
        .generators(&[("x", 1), ("y", 2), ("z", 1)])
        .rule("x", 2, "y + 3*z^2")
        .rule("y", 2, "2*z^4 - y*z^2")
        .degree_cap(Some(CAP))
        .build()
        .unwrap()
}

type RawTerms = Vec<(i64, [u32; 3])>;

fn raw_terms() -> impl Strategy<Value = RawTerms> {
    prop::collection::vec((-6i64..=6, [0u32..4, 0u32..3, 0u32..4]), 0..6)
}

fn element(ring: &Arc<GradedRing>, raw: &RawTerms) -> RingElement {
    ring.from_terms(
        raw.iter()
            .map(|(c, e)| (Monomial::new(e.to_vec()), BigInt::from(*c))),
    )
}

/// Graded evaluation: degree `d` ↦ coefficient of `tᵈ` under the given
/// images of `x` and `y` (with `z ↦ t`). Degrees above the cap are dropped.
fn evaluate<'a, I>(terms: I, xv: i64, yv: i64, modulus: u64) -> BTreeMap<u32, BigInt>
where
    I: IntoIterator<Item = (&'a [u32], &'a BigInt)>,
{
    let mut out = BTreeMap::new();
    for (e, c) in terms {
        let deg = e[0] + 2 * e[1] + e[2];
        if deg > CAP {
            continue;
        }
        let w = BigInt::from(xv).pow(e[0]) * BigInt::from(yv).pow(e[1]);
        *out.entry(deg).or_insert_with(BigInt::default) += c * w;
    }
    out.into_iter()
        .map(|(d, v)| (d, reduce(v, modulus)))
        .filter(|(_, v)| *v != BigInt::default())
        .collect()
}

fn eval_element(e: &RingElement, xv: i64, yv: i64) -> BTreeMap<u32, BigInt> {
    evaluate(e.terms().map(|(m, c)| (m.exponents(), c)), xv, yv, e.ring().modulus())
}

fn eval_raw(raw: &RawTerms, xv: i64, yv: i64, modulus: u64) -> BTreeMap<u32, BigInt> {
    let owned: Vec<([u32; 3], BigInt)> = raw.iter().map(|(c, e)| (*e, BigInt::from(*c))).collect();
    evaluate(owned.iter().map(|(e, c)| (&e[..], c)), xv, yv, modulus)
}

const EVALUATIONS: [(i64, i64); 2] = [(2, 1), (1, -2)];

#[allow(clippy::eq_op)]
fn ring_axioms((a, b, c, modulus): (RawTerms, RawTerms, RawTerms, u64)) -> Result<(), TestCaseError> {
    let r = rewrite_ring(modulus);
    let (a, b, c) = (element(&r, &a), element(&r, &b), element(&r, &c));
    let zero = r.zero();
    let one = r.one();
    prop_assert_eq!(&(&(&a + &b) + &c), &(&a + &(&b + &c)));
    prop_assert_eq!(&(&a + &b), &(&b + &a));
    prop_assert_eq!(&(&a + &zero), &a);
    prop_assert!((&a - &a).is_zero());
    prop_assert_eq!(&(&(&a * &b) * &c), &(&a * &(&b * &c)));
    prop_assert_eq!(&(&a * &b), &(&b * &a));
    prop_assert_eq!(&(&a * &one), &a);
    prop_assert_eq!(&(&a * &(&b + &c)), &(&(&a * &b) + &(&a * &c)));
    for (xv, yv) in EVALUATIONS {
        let lhs = eval_element(&(&a * &b), xv, yv);
        let (ea, eb) = (eval_element(&a, xv, yv), eval_element(&b, xv, yv));
        let mut rhs: BTreeMap<u32, BigInt> = BTreeMap::new();
        for (i, u) in &ea {
            for (j, v) in &eb {
                if i + j <= CAP {
                    *rhs.entry(i + j).or_default() += u * v;
                }
            }
        }
        let rhs: BTreeMap<u32, BigInt> = rhs
            .into_iter()
            .map(|(d, v)| (d, reduce(v, modulus)))
            .filter(|(_, v)| *v != BigInt::default())
            .collect();
        prop_assert_eq!(lhs, rhs);
    }
    Ok(())
}

fn normalization((raw, modulus): (RawTerms, u64)) -> Result<(), TestCaseError> {
    let r = rewrite_ring(modulus);
    let e = element(&r, &raw);
    for (mono, c) in e.terms() {
        let x = mono.exponents();
        prop_assert!(x[0] < 2 && x[1] < 2, "unreduced monomial {:?} in {}", x, e);
        prop_assert!(x[0] + 2 * x[1] + x[2] <= CAP);
        prop_assert!(*c != BigInt::default());
        if modulus != 0 {
            prop_assert!(*c > BigInt::default() && *c < BigInt::from(modulus));
        }
    }
    prop_assert_eq!(&e.normalize(), &e);
    let again = r.from_terms(e.terms().map(|(m, c)| (m.clone(), c.clone())));
    prop_assert_eq!(&again, &e);
    for (xv, yv) in EVALUATIONS {
        prop_assert_eq!(eval_element(&e, xv, yv), eval_raw(&raw, xv, yv, modulus));
    }
    Ok(())
}

/// Free Chern ring with room for two small bundles.
fn bundle_ring() -> Arc<GradedRing> {
    RingBuilder::new(0)
        .generators(&[("a1", 1), ("a2", 2), ("b1", 1), ("b2", 2), ("b3", 3), ("u", 1), ("w", 1)])
        .degree_cap(Some(4))
        .build()
        .unwrap()
}

fn bundle(r: &Arc<GradedRing>, kind: u8, scale: (i64, i64)) -> BundleClass {
    let g = |n: &str| r.gen(n).unwrap();
    match kind % 4 {
        0 => BundleClass::from_chern_classes(2, &[g("a1").scale(scale.0), g("a2").scale(scale.1)]).unwrap(),
        1 => BundleClass::from_chern_classes(3, &[g("b1"), g("b2").scale(scale.0), g("b3").scale(scale.1)]).unwrap(),
        2 => BundleClass::from_roots(r, vec![g("u").scale(scale.0), g("w").scale(scale.1)]).unwrap(),
        _ => BundleClass::line(&g("u") + &g("w").scale(scale.0)).unwrap(),
    }
}

/// `Σ (−1)ⁱ cᵢ`, computed term by term.
fn alternate(e: &RingElement) -> RingElement {
    let r = e.ring();
    r.from_terms(e.terms().map(|(m, c)| {
        let d = r.monomial_degree(m);
        (m.clone(), if d.is_multiple_of(2) { c.clone() } else { -c })
    }))
}

type BundlePair = (u8, u8, (i64, i64), (i64, i64), u32);

fn whitney((k1, k2, s1, s2, cap): BundlePair) -> Result<(), TestCaseError> {
    let r = bundle_ring();
    let (e, f) = (bundle(&r, k1, s1), bundle(&r, k2, s2));
    let sum = VirtualClass::new(&r, vec![(Sign::Plus, e.clone()), (Sign::Plus, f.clone())]).unwrap();
    let product = (e.total() * f.total()).truncate(cap);
    prop_assert_eq!(&total_chern(&sum, cap).unwrap(), &product);
    let direct = VirtualClass::bundle(e.direct_sum(&f).unwrap());
    prop_assert_eq!(&total_chern(&direct, cap).unwrap(), &product);
    prop_assert_eq!(sum.rank(), (e.rank() + f.rank()) as i64);
    // c(E − F)·c(F) = c(E) below the cap.
    let diff = VirtualClass::new(&r, vec![(Sign::Plus, e.clone()), (Sign::Minus, f.clone())]).unwrap();
    let back = (&total_chern(&diff, cap).unwrap() * f.total()).truncate(cap);
    prop_assert_eq!(&back, &e.total().truncate(cap));
    Ok(())
}

fn dual_involution((k, s): (u8, (i64, i64))) -> Result<(), TestCaseError> {
    let r = bundle_ring();
    let e = bundle(&r, k, s);
    let d = e.dual();
    prop_assert_eq!(d.total(), &alternate(e.total()));
    prop_assert_eq!(d.rank(), e.rank());
    prop_assert_eq!(&d.dual(), &e);
    if let Some(roots) = e.roots() {
        let neg: Vec<RingElement> = roots.iter().map(|x| x.scale(-1)).collect();
        let split = BundleClass::from_roots(&r, neg).unwrap();
        prop_assert_eq!(d.total(), split.total());
    }
    Ok(())
}

/// `x, y` of codimension one and `c1, c2` the Chern classes of a rank-2
/// bundle, mod `p`.
pub fn operation_ring(p: u64) -> (Arc<GradedRing>, SteenrodContext) {
    let r = RingBuilder::new(p)
        .generators(&[("x", 1), ("y", 1), ("c1", 1), ("c2", 2)])
        .build()
        .unwrap();
    let ctx = SteenrodContext::new(p, &r, &["x", "y"])
        .unwrap()
        .with_chern_classes(&["c1", "c2"])
        .unwrap();
    (r, ctx)
}

type OpTerms = Vec<(i64, [u32; 4])>;

fn op_terms() -> impl Strategy<Value = OpTerms> {
    prop::collection::vec((-2i64..=2, [0u32..3, 0u32..3, 0u32..2, 0u32..2]), 0..4)
}

fn total_operation((a, b, p): (OpTerms, OpTerms, u64)) -> Result<(), TestCaseError> {
    let (r, ctx) = operation_ring(p);
    let mk = |t: &OpTerms| r.from_terms(t.iter().map(|(c, e)| (Monomial::new(e.to_vec()), BigInt::from(*c))));
    let (a, b) = (mk(&a), mk(&b));
    prop_assert!(cartan_check(&ctx, &a, &b).unwrap());
    let total = |e: &RingElement| total_op(&ctx, e).unwrap().total();
    prop_assert_eq!(total(&(&a * &b)), &total(&a) * &total(&b));
    prop_assert_eq!(total(&(&a + &b)), &total(&a) + &total(&b));
    prop_assert_eq!(total_op(&ctx, &a).unwrap().component(0), a);
    Ok(())
}

pub fn check_ring_axioms() -> Result<(), String> {
    run(
        (raw_terms(), raw_terms(), raw_terms(), prop::sample::select(vec![0u64, 2, 3, 4])),
        ring_axioms,
    )
}

pub fn check_normalization() -> Result<(), String> {
    run((raw_terms(), prop::sample::select(vec![0u64, 2, 3])), normalization)
}

pub fn check_whitney() -> Result<(), String> {
    let scale = || (-3i64..=3, -3i64..=3);
    run((0u8..4, 0u8..4, scale(), scale(), 1u32..=4), whitney)
}

pub fn check_dual_involution() -> Result<(), String> {
    run((0u8..4, (-3i64..=3, -3i64..=3)), dual_involution)
}

pub fn check_total_operation() -> Result<(), String> {
    run((op_terms(), op_terms(), prop::sample::select(vec![2u64, 3])), total_operation)
}

pub type Suite = (&'static str, fn() -> Result<(), String>);

/// Every suite by name.
pub fn all() -> [Suite; 5] {
    [
        ("ring axioms", check_ring_axioms),
        ("normalization idempotence", check_normalization),
        ("Whitney multiplicativity", check_whitney),
        ("dual involution", check_dual_involution),
        ("total-operation multiplicativity", check_total_operation),
    ]
}
