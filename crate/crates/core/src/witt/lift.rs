//! Deciding whether a Chow cycle lifts to the Chow–Witt group.
//!
//! Arrow names follow the key diagram:
//!
//! | name        | map                                     |
//! |-------------|-----------------------------------------|
//! | `partial`   | `CHⁿ → H^{n+1}(X, I^{n+1})`             |
//! | `mod2`      | `CHⁿ → Chⁿ`                             |
//! | `beta`      | `Chⁿ → H^{n+1}(X, I^{n+1})`             |
//! | `rho`       | `H^{n+1}(X, I^{n+1}) → Ch^{n+1}`        |
//! | `sq2`       | `Chⁿ → Ch^{n+1}`                        |
//! | `eta`       | `H^{n+1}(X, I^{n+2}) → H^{n+1}(X, I^{n+1})` |
//! | `sq2_upper` | the upper `Sq²` landing in the source of `eta` |
//!
//! and `cup` is a bilinear entry `Ch¹ × Chⁿ → Ch^{n+1}`.

use num_bigint::BigInt;
use serde::Serialize;

use super::diagram::DiagramSpec;
use crate::gring::bigint_json;
use super::WittError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftQuery {
    /// Element of `CHⁿ`, or of `Chⁿ` when the diagram has no `mod2`.
    pub cycle: Vec<BigInt>,
    /// `c̄₁(𝓛) ∈ Ch¹` for the twisted criterion.
    pub twist_class: Option<Vec<BigInt>>,
}

impl LiftQuery {
    pub fn new(cycle: Vec<BigInt>) -> Self {
        LiftQuery {
            cycle,
            twist_class: None,
        }
    }

    pub fn twisted(cycle: Vec<BigInt>, twist: Vec<BigInt>) -> Self {
        LiftQuery {
            cycle,
            twist_class: Some(twist),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LiftRoute {
    /// Lifts iff `∂c = 0`.
    Boundary,
    /// With `ρ` injective, lifts iff `(Sq² + c̄₁(𝓛)∪)(c̄) = 0`.
    Square,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum LiftVerdict {
    Lifts,
    Obstructed {
        #[serde(serialize_with = "bigint_json::serialize_vec")]
        witness: Vec<BigInt>,
    },
    NeedsInjectivity,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LiftReport {
    pub route: LiftRoute,
    pub verdict: LiftVerdict,
    /// Computed when the square route is used.
    pub rho_injective: Option<bool>,
}

/// Uses `partial` when present and no twist is requested, the square route
/// otherwise.
pub fn lift_query(spec: &DiagramSpec, q: &LiftQuery) -> Result<LiftReport, WittError> {
    let route = if q.twist_class.is_none() && spec.has_arrow("partial") {
        LiftRoute::Boundary
    } else {
        LiftRoute::Square
    };
    lift_via(spec, q, route)
}

pub fn lift_via(spec: &DiagramSpec, q: &LiftQuery, route: LiftRoute) -> Result<LiftReport, WittError> {
    match route {
        LiftRoute::Boundary => {
            if q.twist_class.is_some() {
                return Err(WittError::MalformedSpec(
                    "the boundary route takes no twist; supply the twisted boundary as `partial`".into(),
                ));
            }
            let partial = spec.arrow("partial")?;
            check_len(&q.cycle, partial.homo.source().generators(), "cycle")?;
            let w = partial.homo.apply(&q.cycle);
            let target = partial.homo.target();
            let verdict = if target.is_zero(&w) {
                LiftVerdict::Lifts
            } else {
                LiftVerdict::Obstructed {
                    witness: target.reduce(&w),
                }
            };
            Ok(LiftReport {
                route,
                verdict,
                rho_injective: None,
            })
        }
        LiftRoute::Square => {
            let sq2 = spec.arrow("sq2")?;
            let rho = spec.arrow("rho")?;
            let cbar = reduce_cycle(spec, &q.cycle)?;
            let mut v = sq2.homo.apply(&cbar);
            if let Some(twist) = &q.twist_class {
                let cup = spec.cup("cup").ok_or(WittError::TwistWithoutCup)?;
                if cup.right != sq2.src || cup.dst != sq2.dst {
                    return Err(WittError::MalformedSpec(
                        "cup must pair Ch¹ with the source of sq2 into its target".into(),
                    ));
                }
                check_len(twist, spec.node(&cup.left)?.generators(), "twist class")?;
                for (a, b) in v.iter_mut().zip(cup.apply(twist, &cbar)) {
                    *a += b;
                }
            }
            let injective = rho.homo.is_injective();
            let target = sq2.homo.target();
            let verdict = if !injective {
                LiftVerdict::NeedsInjectivity
            } else if target.is_zero(&v) {
                LiftVerdict::Lifts
            } else {
                LiftVerdict::Obstructed {
                    witness: target.reduce(&v),
                }
            };
            Ok(LiftReport {
                route,
                verdict,
                rho_injective: Some(injective),
            })
        }
    }
}

/// `c̄` from a cycle in `CHⁿ` via `mod2`, or the cycle itself when the
/// diagram has no `mod2` and starts at `Chⁿ`.
fn reduce_cycle(spec: &DiagramSpec, cycle: &[BigInt]) -> Result<Vec<BigInt>, WittError> {
    match spec.arrow("mod2") {
        Ok(m) => {
            check_len(cycle, m.homo.source().generators(), "cycle")?;
            Ok(m.homo.apply(cycle))
        }
        Err(_) => {
            check_len(cycle, spec.arrow("sq2")?.homo.source().generators(), "cycle")?;
            Ok(cycle.to_vec())
        }
    }
}

fn check_len(v: &[BigInt], n: usize, what: &str) -> Result<(), WittError> {
    if v.len() != n {
        return Err(WittError::MalformedSpec(format!(
            "{what} has {} coordinates, expected {n}",
            v.len()
        )));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PsiReport {
    pub verdict: LiftVerdict,
    /// A preimage `b` of `β(c̄)` under `η`.
    #[serde(serialize_with = "bigint_json::serialize_vec")]
    pub b: Vec<BigInt>,
    /// `ψ(c̄)` in canonical coordinates of `coker(sq2_upper)`.
    #[serde(serialize_with = "bigint_json::serialize_vec")]
    pub psi_class: Vec<BigInt>,
}

/// Secondary obstruction on `ker Sq²`: pick `b` with `η(b) = β(c̄)`; the
/// cycle lifts iff `b ∈ im(sq2_upper)`.
///
/// This is well defined only when `ker η = im(sq2_upper)`, which is checked.
/// The cycle is taken in `CHⁿ` when `mod2` exists and in `Chⁿ` otherwise.
pub fn psi_obstruction(spec: &DiagramSpec, cycle: &[BigInt]) -> Result<PsiReport, WittError> {
    let sq2 = spec.arrow("sq2")?;
    let beta = spec.arrow("beta")?;
    let eta = spec.arrow("eta")?;
    let upper = spec.arrow("sq2_upper")?;
    if upper.dst != eta.src || eta.dst != beta.dst || beta.src != sq2.src {
        return Err(WittError::MalformedSpec(
            "sq2_upper, eta, beta and sq2 do not fit the surface diagram".into(),
        ));
    }
    let cbar = reduce_cycle(spec, cycle)?;
    if !sq2.homo.target().is_zero(&sq2.homo.apply(&cbar)) {
        return Err(WittError::CycleNotInKernel);
    }
    if !upper.homo.then(&eta.homo)?.is_zero_map() {
        return Err(WittError::PsiNotWellDefined("eta does not kill the image of sq2_upper".into()));
    }
    if !eta.homo.kernel().is_subset_of(&upper.homo.image()) {
        return Err(WittError::PsiNotWellDefined("ker eta is larger than im sq2_upper".into()));
    }
    let y = beta.homo.apply(&cbar);
    let b = eta
        .homo
        .preimage(&y)
        .ok_or_else(|| WittError::PsiNotWellDefined("beta(c) is not in the image of eta".into()))?;
    let coker = upper.homo.cokernel();
    let psi_class = coker.canonical(&b);
    let verdict = if upper.homo.image().contains(&b) {
        LiftVerdict::Lifts
    } else {
        LiftVerdict::Obstructed {
            witness: eta.homo.source().reduce(&b),
        }
    };
    Ok(PsiReport {
        verdict,
        b,
        psi_class,
    })
}
