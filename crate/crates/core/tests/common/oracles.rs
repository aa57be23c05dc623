//! Chern numbers of the example surfaces from first principles.

use motsplit::chern::{total_chern, BundleClass, Sign, VirtualClass};
use motsplit::gring::{Monomial, RingBuilder};
use num_bigint::BigInt;

fn to_i64(x: BigInt) -> i64 {
    i64::try_from(x).unwrap()
}

/// `(c₁², c₂)` of `ℙ²` from the Euler sequence `0 → 𝒪 → 𝒪(1)³ → T → 0`.
pub fn projective_plane() -> (i64, i64) {
    let r = RingBuilder::new(0)
        .generator("h", 1)
        .degree_cap(Some(2))
        .build()
        .unwrap();
    let h = r.gen("h").unwrap();
    let line = BundleClass::line(h).unwrap();
    let tangent = VirtualClass::new(
        &r,
        vec![
            (Sign::Plus, line.clone()),
            (Sign::Plus, line.clone()),
            (Sign::Plus, line),
            (Sign::Minus, BundleClass::trivial(&r, 1)),
        ],
    )
    .unwrap();
    let c = total_chern(&tangent, 2).unwrap();
    let c1 = c.degree_component(1);
    let c2 = c.degree_component(2);
    let point = Monomial::new(vec![2]);
    (
        to_i64((&c1 * &c1).coefficient(&point)),
        to_i64(c2.coefficient(&point)),
    )
}

/// `c₂` from Noether's formula `12χ(𝒪) = c₁² + c₂`.
pub fn noether_c2(chi: i64, c1_squared: i64) -> i64 {
    12 * chi - c1_squared
}

/// `(c₁², c₂)` of `C₁ × C₂` with `T = pr₁*T_{C₁} ⊕ pr₂*T_{C₂}` and
/// `deg c₁(Cᵢ) = 2 − 2gᵢ`, in `ℤ[a, b]/(a², b²)` with `ab` the point.
pub fn curve_product(g1: i64, g2: i64) -> (i64, i64) {
    let r = RingBuilder::new(0)
        .generators(&[("a", 1), ("b", 1)])
        .rule("a", 2, "0")
        .rule("b", 2, "0")
        .build()
        .unwrap();
    let a = r.gen("a").unwrap().scale(2 - 2 * g1);
    let b = r.gen("b").unwrap().scale(2 - 2 * g2);
    let t = BundleClass::line(a)
        .unwrap()
        .direct_sum(&BundleClass::line(b).unwrap())
        .unwrap();
    let c = total_chern(&VirtualClass::bundle(t), 2).unwrap();
    let c1 = c.degree_component(1);
    let point = Monomial::new(vec![1, 1]);
    (
        to_i64((&c1 * &c1).coefficient(&point)),
        to_i64(c.degree_component(2).coefficient(&point)),
    )
}
