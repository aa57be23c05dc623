//! The expected verdicts for the example surfaces.

use motsplit::motives::{evaluate, Catalog, Outcome, Rule};

use super::oracles;

/// Every way the built-in catalog departs from the expected outcome list,
/// including Chern numbers that disagree with the oracles.
pub fn mismatches() -> Vec<String> {
    let cat = Catalog::builtin();
    let rep = evaluate(&cat);
    let mut out = Vec::new();

    let (p2_c1sq, p2_c2) = oracles::projective_plane();
    let (prod_c1sq, prod_c2) = oracles::curve_product(2, 2);
    let numbers = [
        ("projective plane", p2_c1sq, p2_c2),
        ("abelian surface", 0, oracles::noether_c2(0, 0)),
        ("complex K3 surface", 0, oracles::noether_c2(2, 0)),
        ("Enriques surface", 0, oracles::noether_c2(1, 0)),
        ("product of two genus 2 curves", prod_c1sq, prod_c2),
    ];
    for (name, c1sq, c2) in numbers {
        match cat.surface(name) {
            Some(d) if (d.c1_squared, d.c2) == (c1sq, c2) => {}
            Some(d) => out.push(format!(
                "{name}: catalog has (c1^2, c2) = ({}, {}), oracle gives ({c1sq}, {c2})",
                d.c1_squared, d.c2
            )),
            None => out.push(format!("{name}: missing from the catalog")),
        }
    }

    let expected = [
        ("projective plane", Outcome::NotSplit, Some(Rule::TopCellNecessary)),
        ("abelian surface", Outcome::Splits, Some(Rule::ChernNumberCriterion)),
        ("complex K3 surface", Outcome::Splits, Some(Rule::CalabiYauLifting)),
        ("product of two genus 2 curves", Outcome::Splits, Some(Rule::ChernNumberCriterion)),
        ("Enriques surface", Outcome::Undecided, None),
    ];
    for (name, outcome, rule) in expected {
        let Some(e) = rep.surface(name) else { continue };
        if (e.verdict.outcome, e.verdict.rule) != (outcome, rule) {
            out.push(format!(
                "{name}: got {:?} via {:?}, expected {outcome:?} via {rule:?}",
                e.verdict.outcome, e.verdict.rule
            ));
        }
        if e.verdict.outcome != Outcome::Undecided && e.verdict.witness.is_empty() {
            out.push(format!("{name}: empty witness"));
        }
    }
    if let Some(k3) = rep.surface("complex K3 surface") {
        let marked = k3
            .verdict
            .witness
            .iter()
            .any(|w| w.starts_with(Rule::ChernNumberCriterion.title()) && w.contains("inapplicable"));
        if !marked {
            out.push("complex K3 surface: Chern-number criterion not marked inapplicable".into());
        }
        match &k3.obstruction {
            Some(v) if v.outcome == Outcome::ObstructedTwoPiece => {}
            other => out.push(format!("complex K3 surface: obstruction {other:?}, expected two-piece")),
        }
    }
    if let Some(p2) = rep.surface("projective plane") {
        if !p2.verdict.witness.iter().any(|w| w.contains("c1 is not divisible by 2")) {
            out.push("projective plane: witness does not name the odd c1".into());
        }
    }
    out
}
