//! Lifting a curve's diagonal decomposition to Chow–Witt groups.
//!
//! The diagonal of a curve decomposes in `CH¹(X×X)` as
//! `Δ = [e×X] + (Δ − [e×X] − [X×e]) + [X×e]`. Each piece lifts to the
//! Chow–Witt group iff it lies in `ker ∂`; with `ρ` injective that is the
//! vanishing of `Sq²` on its mod 2 reduction. `Sq²(Δ̄) = Δ_*(c̄₁)`, so an
//! even `c₁` makes everything lift.

use num_bigint::BigInt;
use serde::Serialize;

use super::verdict::TriState;
use super::MotivesError;
use crate::gring::bigint_json;
use crate::witt::{
    check_diagram, group_calc, lift_via, DiagramSpec, FgAbGroup, GroupAnswer, GroupQuery, IntMatrix,
    LiftQuery, LiftReport, LiftRoute, LiftVerdict,
};

/// Cycle coordinates in the source of `partial`/`mod2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveDecomposition {
    pub delta: Vec<BigInt>,
    pub e_times_x: Vec<BigInt>,
    pub x_times_e: Vec<BigInt>,
}

impl CurveDecomposition {
    /// `Δ − [e×X] − [X×e]`.
    pub fn middle(&self) -> Vec<BigInt> {
        self.delta
            .iter()
            .zip(&self.e_times_x)
            .zip(&self.x_times_e)
            .map(|((d, a), b)| d - a - b)
            .collect()
    }

    fn named(&self) -> Vec<(&'static str, Vec<BigInt>)> {
        vec![
            ("delta", self.delta.clone()),
            ("e_x_X", self.e_times_x.clone()),
            ("X_x_e", self.x_times_e.clone()),
            ("middle", self.middle()),
        ]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NamedClass {
    pub name: String,
    #[serde(serialize_with = "bigint_json::serialize_vec")]
    pub class: Vec<BigInt>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NamedLift {
    pub name: String,
    pub report: LiftReport,
    /// Both routes were available and gave the same answer.
    pub routes_agree: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum PipelineOutcome {
    /// Every piece lifts, so the decomposition lifts and the curve splits.
    Splits,
    /// `witness` is `Sq²` of the reduction when `ρ` is injective, and the
    /// boundary `∂c` otherwise.
    Obstructed {
        cycle: String,
        #[serde(serialize_with = "bigint_json::serialize_vec")]
        witness: Vec<BigInt>,
    },
    NeedsInjectivity,
    DiagramFails,
    /// `c₁` was declared even but a square is nonzero.
    InconsistentInput,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PipelineReport {
    pub diagram_pass: bool,
    pub rho_injective: bool,
    /// `Sq²` of the reduction of each piece.
    pub squares: Vec<NamedClass>,
    pub squares_vanish: bool,
    pub lifts: Vec<NamedLift>,
    pub outcome: PipelineOutcome,
}

impl PipelineReport {
    pub fn square(&self, name: &str) -> Option<&[BigInt]> {
        self.squares
            .iter()
            .find(|s| s.name == name)
            .map(|s| s.class.as_slice())
    }
}

/// Runs the diagram checks, then `Sq²` and the lifting test on every piece of
/// the diagonal decomposition.
pub fn chowwitt_lift_pipeline(
    c1_even: TriState,
    diagram: &DiagramSpec,
    decomposition: &CurveDecomposition,
) -> Result<PipelineReport, MotivesError> {
    let diag = check_diagram(diagram)?;
    let mod2 = diagram.arrow("mod2")?;
    let sq2 = diagram.arrow("sq2")?;
    let rho = diagram.arrow("rho")?;
    let rho_injective = matches!(group_calc(&rho.homo, GroupQuery::IsInjective), GroupAnswer::Bool(true));
    let has_partial = diagram.has_arrow("partial");

    let mut squares = Vec::new();
    let mut lifts = Vec::new();
    for (name, cycle) in decomposition.named() {
        if cycle.len() != mod2.homo.source().generators() {
            return Err(MotivesError::CycleLength {
                cycle: name.to_string(),
                expected: mod2.homo.source().generators(),
                found: cycle.len(),
            });
        }
        let sq = sq2.homo.target().reduce(&sq2.homo.apply(&mod2.homo.apply(&cycle)));
        squares.push(NamedClass {
            name: name.to_string(),
            class: sq,
        });
        let q = LiftQuery::new(cycle);
        let square = lift_via(diagram, &q, LiftRoute::Square)?;
        let (report, routes_agree) = if has_partial {
            let boundary = lift_via(diagram, &q, LiftRoute::Boundary)?;
            let agree = rho_injective.then(|| same_answer(&boundary.verdict, &square.verdict));
            // The square route's witness lives in Ch^{n+1}, which is what
            // the obstruction is usually named by.
            (if rho_injective { square } else { boundary }, agree)
        } else {
            (square, None)
        };
        lifts.push(NamedLift {
            name: name.to_string(),
            report,
            routes_agree,
        });
    }
    let squares_vanish = squares.iter().all(|s| sq2.homo.target().is_zero(&s.class));

    let outcome = if !diag.pass {
        PipelineOutcome::DiagramFails
    } else if c1_even.is_yes() && !squares_vanish {
        PipelineOutcome::InconsistentInput
    } else if let Some(l) = lifts
        .iter()
        .find(|l| matches!(l.report.verdict, LiftVerdict::Obstructed { .. }))
    {
        let LiftVerdict::Obstructed { witness } = &l.report.verdict else {
            unreachable!()
        };
        PipelineOutcome::Obstructed {
            cycle: l.name.clone(),
            witness: witness.clone(),
        }
    } else if lifts
        .iter()
        .any(|l| l.report.verdict == LiftVerdict::NeedsInjectivity)
    {
        PipelineOutcome::NeedsInjectivity
    } else {
        PipelineOutcome::Splits
    };
    Ok(PipelineReport {
        diagram_pass: diag.pass,
        rho_injective,
        squares,
        squares_vanish,
        lifts,
        outcome,
    })
}

fn same_answer(a: &LiftVerdict, b: &LiftVerdict) -> bool {
    matches!(
        (a, b),
        (LiftVerdict::Lifts, LiftVerdict::Lifts) | (LiftVerdict::Obstructed { .. }, LiftVerdict::Obstructed { .. })
    )
}

/// Names of the coordinates of `Ch²(X×X)` in [`curve_lift_preset`].
pub const CH2_LABELS: [&str; 3] = ["Delta_*(c1)", "c1 x e", "e x c1"];

/// Desk-scale curve diagram over `ℤ/2`.
///
/// `CH¹(X×X)` is stood in for by `ℤ³` with basis `[e×X], [X×e], Δ`, and
/// `Ch²(X×X)` by `(ℤ/2)³` with basis [`CH2_LABELS`]. `H²(X×X, I³)` is
/// zero, so `ρ` is injective (an isomorphism here) and `β = ρ⁻¹∘Sq²`,
/// `∂ = β∘mod2`. When `c̄₁ ≠ 0`, `Sq²` sends `Δ̄ ↦ Δ_*(c̄₁)`,
/// `[X×e] ↦ c̄₁×e` and `[e×X] ↦ e×c̄₁`; otherwise `Sq² = 0`.
pub fn curve_lift_preset(c1_vanishes: bool) -> (DiagramSpec, CurveDecomposition) {
    let z2 = FgAbGroup::cyclic_sum(&[2, 2, 2]);
    let sq: Vec<Vec<i64>> = if c1_vanishes {
        vec![vec![0; 3]; 3]
    } else {
        vec![vec![0, 0, 1], vec![0, 1, 0], vec![1, 0, 0]]
    };
    let id: Vec<Vec<i64>> = (0..3).map(|i| (0..3).map(|j| i64::from(i == j)).collect()).collect();
    let mut d = DiagramSpec::new();
    d.add_node("CH1", FgAbGroup::free(3))
        .add_node("Ch1", z2.clone())
        .add_node("H_I2", z2.clone())
        .add_node("H_I3", FgAbGroup::trivial())
        .add_node("Ch2", z2);
    let build = |d: &mut DiagramSpec| -> Result<(), crate::witt::WittError> {
        d.add_arrow_i64("mod2", "CH1", "Ch1", &id)?;
        d.add_arrow_i64("sq2", "Ch1", "Ch2", &sq)?;
        d.add_arrow_i64("beta", "Ch1", "H_I2", &sq)?;
        d.add_arrow_i64("partial", "CH1", "H_I2", &sq)?;
        d.add_arrow_i64("rho", "H_I2", "Ch2", &id)?;
        d.add_arrow("eta", "H_I3", "H_I2", IntMatrix::zeros(3, 0))?;
        Ok(())
    };
    build(&mut d).expect("preset arrows are well defined");
    d.assert_commute(&["mod2", "beta"], &["partial"])
        .assert_commute(&["beta", "rho"], &["sq2"])
        .assert_exact("eta", "rho");
    let v = |x: [i64; 3]| x.iter().map(|&k| BigInt::from(k)).collect();
    let dec = CurveDecomposition {
        e_times_x: v([1, 0, 0]),
        x_times_e: v([0, 1, 0]),
        delta: v([0, 0, 1]),
    };
    (d, dec)
}
