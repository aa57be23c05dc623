//! Named diagrams of finitely generated abelian groups with commutativity
//! and exactness assertions.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::group::{is_exact_at, FgAbGroup, Homo};
use super::matrix::IntMatrix;
use super::WittError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrow {
    pub src: String,
    pub dst: String,
    pub homo: Homo,
}

/// Bilinear map `left × right → dst`: `cup(a, b) = Σᵢ aᵢ · blocks[i] · b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cup {
    pub left: String,
    pub right: String,
    pub dst: String,
    blocks: Vec<IntMatrix>,
}

impl Cup {
    pub fn apply(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let rows = self.blocks.first().map_or(0, IntMatrix::rows);
        let mut out = vec![BigInt::default(); rows];
        for (ai, m) in a.iter().zip(&self.blocks) {
            for (o, x) in out.iter_mut().zip(m.mul_vec(b)) {
                *o += ai * x;
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Assertion {
    /// Two arrow paths, each listed in order of application.
    Commute(Vec<String>, Vec<String>),
    /// `im f = ker g`.
    Exact(String, String),
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DiagramSpec {
    nodes: BTreeMap<String, FgAbGroup>,
    arrows: BTreeMap<String, Arrow>,
    assertions: Vec<Assertion>,
    cups: BTreeMap<String, Cup>,
}

impl DiagramSpec {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_node(&mut self, name: &str, group: FgAbGroup) -> &mut Self {
        self.nodes.insert(name.to_string(), group);
        self
    }

    pub fn add_arrow(&mut self, name: &str, src: &str, dst: &str, matrix: IntMatrix) -> Result<&mut Self, WittError> {
        let s = self.node(src)?.clone();
        let t = self.node(dst)?.clone();
        let homo = Homo::new(s, t, matrix).map_err(|e| match e {
            WittError::IllDefinedHomo(j) => {
                WittError::MalformedSpec(format!("arrow `{name}` sends relation {j} of `{src}` to a nonzero element"))
            }
            WittError::ShapeMismatch { expected, found } => WittError::MalformedSpec(format!(
                "arrow `{name}` has a {}x{} matrix, expected {}x{}",
                found.0, found.1, expected.0, expected.1
            )),
            other => other,
        })?;
        self.arrows.insert(
            name.to_string(),
            Arrow {
                src: src.to_string(),
                dst: dst.to_string(),
                homo,
            },
        );
        Ok(self)
    }

    pub fn add_arrow_i64(&mut self, name: &str, src: &str, dst: &str, rows: &[Vec<i64>]) -> Result<&mut Self, WittError> {
        let cols = self.node(src)?.generators();
        let m = IntMatrix::from_rows(rows, cols)
            .ok_or_else(|| WittError::MalformedSpec(format!("arrow `{name}` has ragged rows")))?;
        self.add_arrow(name, src, dst, m)
    }

    pub fn add_cup(&mut self, name: &str, left: &str, right: &str, dst: &str, blocks: Vec<IntMatrix>) -> Result<&mut Self, WittError> {
        let l = self.node(left)?.clone();
        let r = self.node(right)?.clone();
        let d = self.node(dst)?.clone();
        let bad = |why: &str| WittError::IllDefinedCup(format!("`{name}`: {why}"));
        if blocks.len() != l.generators() {
            return Err(bad("one block per left generator is required"));
        }
        if blocks.iter().any(|b| b.rows() != d.generators() || b.cols() != r.generators()) {
            return Err(bad("block shape does not match right and target groups"));
        }
        // Relations on either side must pair to zero.
        for block in &blocks {
            let img = block * r.relations();
            if (0..img.cols()).any(|j| !d.is_zero(&img.column(j))) {
                return Err(bad("a right relation pairs to a nonzero class"));
            }
        }
        let lrel = l.relations();
        for j in 0..lrel.cols() {
            let mut combo = IntMatrix::zeros(d.generators(), r.generators());
            for (i, block) in blocks.iter().enumerate() {
                combo = combo.add(&block.scale(&lrel[(i, j)]));
            }
            if (0..combo.cols()).any(|k| !d.is_zero(&combo.column(k))) {
                return Err(bad("a left relation pairs to a nonzero class"));
            }
        }
        self.cups.insert(
            name.to_string(),
            Cup {
                left: left.into(),
                right: right.into(),
                dst: dst.into(),
                blocks,
            },
        );
        Ok(self)
    }

    pub fn assert_commute(&mut self, a: &[&str], b: &[&str]) -> &mut Self {
        self.assertions.push(Assertion::Commute(
            a.iter().map(|s| s.to_string()).collect(),
            b.iter().map(|s| s.to_string()).collect(),
        ));
        self
    }

    pub fn assert_exact(&mut self, f: &str, g: &str) -> &mut Self {
        self.assertions.push(Assertion::Exact(f.into(), g.into()));
        self
    }

    pub fn node(&self, name: &str) -> Result<&FgAbGroup, WittError> {
        self.nodes
            .get(name)
            .ok_or_else(|| WittError::MalformedSpec(format!("unknown node `{name}`")))
    }

    pub fn arrow(&self, name: &str) -> Result<&Arrow, WittError> {
        self.arrows
            .get(name)
            .ok_or_else(|| WittError::MissingArrow(name.to_string()))
    }

    pub fn has_arrow(&self, name: &str) -> bool {
        self.arrows.contains_key(name)
    }

    pub fn cup(&self, name: &str) -> Option<&Cup> {
        self.cups.get(name)
    }

    pub fn nodes(&self) -> &BTreeMap<String, FgAbGroup> {
        &self.nodes
    }

    pub fn arrows(&self) -> &BTreeMap<String, Arrow> {
        &self.arrows
    }

    pub fn assertions(&self) -> &[Assertion] {
        &self.assertions
    }

    /// Composite of a path, with its endpoint names.
    pub fn compose_path(&self, path: &[String]) -> Result<(String, String, Homo), WittError> {
        let (first, rest) = path
            .split_first()
            .ok_or_else(|| WittError::MalformedSpec("empty path".into()))?;
        let a = self
            .arrows
            .get(first)
            .ok_or_else(|| WittError::MalformedSpec(format!("unknown arrow `{first}`")))?;
        let mut h = a.homo.clone();
        let src = a.src.clone();
        let mut dst = a.dst.clone();
        for name in rest {
            let next = self
                .arrows
                .get(name)
                .ok_or_else(|| WittError::MalformedSpec(format!("unknown arrow `{name}`")))?;
            if next.src != dst {
                return Err(WittError::MalformedSpec(format!(
                    "path step `{name}` starts at `{}` but the path is at `{dst}`",
                    next.src
                )));
            }
            h = h.then(&next.homo)?;
            dst = next.dst.clone();
        }
        Ok((src, dst, h))
    }

    pub fn from_json(text: &str) -> Result<Self, WittError> {
        let raw: DiagramJson =
            serde_json::from_str(text).map_err(|e| WittError::Json(e.to_string()))?;
        raw.into_spec()
    }

    pub fn to_json(&self) -> DiagramJson {
        let mat = |m: &IntMatrix| -> Vec<Vec<i64>> {
            m.to_rows()
                .iter()
                .map(|r| r.iter().map(|x| x.to_i64().expect("entry fits in i64")).collect())
                .collect()
        };
        DiagramJson {
            nodes: self
                .nodes
                .iter()
                .map(|(k, g)| {
                    (
                        k.clone(),
                        NodeJson {
                            generators: Some(g.generators()),
                            relations: mat(&g.relations().transpose()),
                        },
                    )
                })
                .collect(),
            arrows: self
                .arrows
                .iter()
                .map(|(k, a)| {
                    (
                        k.clone(),
                        ArrowJson {
                            src: a.src.clone(),
                            dst: a.dst.clone(),
                            matrix: mat(a.homo.matrix()),
                        },
                    )
                })
                .collect(),
            assertions: self.assertions.clone(),
            cups: self
                .cups
                .iter()
                .map(|(k, c)| {
                    (
                        k.clone(),
                        CupJson {
                            left: c.left.clone(),
                            right: c.right.clone(),
                            dst: c.dst.clone(),
                            blocks: c.blocks.iter().map(mat).collect(),
                        },
                    )
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeJson {
    /// Needed only when `relations` is empty.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<usize>,
    #[serde(default)]
    pub relations: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrowJson {
    pub src: String,
    pub dst: String,
    #[serde(default)]
    pub matrix: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CupJson {
    pub left: String,
    pub right: String,
    pub dst: String,
    pub blocks: Vec<Vec<Vec<i64>>>,
}

/// Wire format of a [`DiagramSpec`].
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagramJson {
    pub nodes: BTreeMap<String, NodeJson>,
    #[serde(default)]
    pub arrows: BTreeMap<String, ArrowJson>,
    #[serde(default)]
    pub assertions: Vec<Assertion>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub cups: BTreeMap<String, CupJson>,
}

impl DiagramJson {
    pub fn into_spec(self) -> Result<DiagramSpec, WittError> {
        let mut spec = DiagramSpec::new();
        for (name, node) in &self.nodes {
            let n = match (node.generators, node.relations.first()) {
                (Some(n), _) => n,
                (None, Some(r)) => r.len(),
                (None, None) => {
                    return Err(WittError::MalformedSpec(format!(
                        "node `{name}` has no relations; give `generators`"
                    )))
                }
            };
            let g = FgAbGroup::from_relations(n, &node.relations).ok_or_else(|| {
                WittError::MalformedSpec(format!("node `{name}` has a relation of the wrong length"))
            })?;
            spec.add_node(name, g);
        }
        for (name, a) in &self.arrows {
            let rows = if a.matrix.is_empty() {
                vec![vec![0; spec.node(&a.src)?.generators()]; spec.node(&a.dst)?.generators()]
            } else {
                a.matrix.clone()
            };
            spec.add_arrow_i64(name, &a.src, &a.dst, &rows)?;
        }
        for (name, c) in &self.cups {
            let cols = spec.node(&c.right)?.generators();
            let blocks = c
                .blocks
                .iter()
                .map(|b| {
                    IntMatrix::from_rows(b, cols)
                        .ok_or_else(|| WittError::IllDefinedCup(format!("`{name}` has a ragged block")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            spec.add_cup(name, &c.left, &c.right, &c.dst, blocks)?;
        }
        spec.assertions = self.assertions;
        for a in &spec.assertions {
            validate_assertion(&spec, a)?;
        }
        Ok(spec)
    }
}

fn validate_assertion(spec: &DiagramSpec, a: &Assertion) -> Result<(), WittError> {
    match a {
        Assertion::Commute(p, q) => {
            let (s1, t1, _) = spec.compose_path(p)?;
            let (s2, t2, _) = spec.compose_path(q)?;
            if s1 != s2 || t1 != t2 {
                return Err(WittError::MalformedSpec(format!(
                    "paths {p:?} and {q:?} have different endpoints"
                )));
            }
        }
        Assertion::Exact(f, g) => {
            let (_, mid, _) = spec.compose_path(std::slice::from_ref(f))?;
            let (start, _, _) = spec.compose_path(std::slice::from_ref(g))?;
            if mid != start {
                return Err(WittError::MalformedSpec(format!(
                    "`{f}` ends at `{mid}` but `{g}` starts at `{start}`"
                )));
            }
        }
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub assertion: Assertion,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiagramReport {
    pub checks: Vec<CheckResult>,
    pub pass: bool,
}

impl DiagramReport {
    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.holds)
    }
}

pub fn check_diagram(spec: &DiagramSpec) -> Result<DiagramReport, WittError> {
    let mut checks = Vec::new();
    for a in &spec.assertions {
        validate_assertion(spec, a)?;
        let holds = match a {
            Assertion::Commute(p, q) => {
                let (_, _, f) = spec.compose_path(p)?;
                let (_, _, g) = spec.compose_path(q)?;
                f.agrees_with(&g)
            }
            Assertion::Exact(f, g) => is_exact_at(&spec.arrow(f)?.homo, &spec.arrow(g)?.homo)?,
        };
        checks.push(CheckResult {
            assertion: a.clone(),
            holds,
        });
    }
    let pass = checks.iter().all(|c| c.holds);
    Ok(DiagramReport { checks, pass })
}

/// `Sq² = ρ∘β` for the arrows named `sq2`, `rho` and `beta`.
pub fn totaro_check(spec: &DiagramSpec) -> Result<bool, WittError> {
    let beta = spec.arrow("beta")?;
    let rho = spec.arrow("rho")?;
    let sq2 = spec.arrow("sq2")?;
    if beta.dst != rho.src || beta.src != sq2.src || rho.dst != sq2.dst {
        return Err(WittError::MalformedSpec(
            "beta, rho and sq2 do not form a triangle".into(),
        ));
    }
    Ok(beta.homo.then(&rho.homo)?.agrees_with(&sq2.homo))
}

/// Position in the cycle `β → η → ρ → β → ⋯` of a Bär sequence.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BarArrow {
    Beta,
    Eta,
    Rho,
}

impl BarArrow {
    fn next(self) -> Self {
        match self {
            BarArrow::Beta => BarArrow::Eta,
            BarArrow::Eta => BarArrow::Rho,
            BarArrow::Rho => BarArrow::Beta,
        }
    }

    fn label(self) -> &'static str {
        match self {
            BarArrow::Beta => "beta",
            BarArrow::Eta => "eta",
            BarArrow::Rho => "rho",
        }
    }
}

/// Chain `G₀ → G₁ → ⋯` with arrows labelled cyclically from `first`, and
/// exactness asserted at every interior node. Nodes are `G0, G1, …`; arrow
/// `i` is `<label>_<i>`.
pub fn bar_sequence(groups: &[FgAbGroup], maps: &[IntMatrix], first: BarArrow) -> Result<DiagramSpec, WittError> {
    if maps.len() + 1 != groups.len() && !(groups.is_empty() && maps.is_empty()) {
        return Err(WittError::EndpointMismatch(maps.len()));
    }
    let mut spec = DiagramSpec::new();
    for (i, g) in groups.iter().enumerate() {
        spec.add_node(&format!("G{i}"), g.clone());
    }
    let mut label = first;
    let mut names = Vec::new();
    for (i, m) in maps.iter().enumerate() {
        let name = format!("{}_{i}", label.label());
        let src = &groups[i];
        let dst = &groups[i + 1];
        Homo::new(src.clone(), dst.clone(), m.clone()).map_err(|_| WittError::EndpointMismatch(i))?;
        spec.add_arrow(&name, &format!("G{i}"), &format!("G{}", i + 1), m.clone())?;
        names.push(name);
        label = label.next();
    }
    for w in names.windows(2) {
        spec.assert_exact(&w[0], &w[1]);
    }
    Ok(spec)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ses() -> DiagramSpec {
        let mut d = DiagramSpec::new();
        d.add_node("Z0", FgAbGroup::trivial())
            .add_node("A", FgAbGroup::free(1))
            .add_node("B", FgAbGroup::free(1))
            .add_node("C", FgAbGroup::cyclic_sum(&[2]))
            .add_node("Z1", FgAbGroup::trivial());
        d.add_arrow_i64("i", "Z0", "A", &[vec![]]).unwrap();
        d.add_arrow_i64("two", "A", "B", &[vec![2]]).unwrap();
        d.add_arrow_i64("q", "B", "C", &[vec![1]]).unwrap();
        d.add_arrow_i64("z", "C", "Z1", &[]).unwrap();
        d.assert_exact("i", "two").assert_exact("two", "q").assert_exact("q", "z");
        d
    }

    #[test]
    fn short_exact_sequence_passes() {
        let rep = check_diagram(&ses()).unwrap();
        assert!(rep.pass, "{rep:?}");
        assert_eq!(rep.checks.len(), 3);
    }

    #[test]
    fn json_round_trip() {
        let d = ses();
        let text = serde_json::to_string(&d.to_json()).unwrap();
        let back = DiagramSpec::from_json(&text).unwrap();
        assert_eq!(back, d);
    }

    #[test]
    fn json_schema_example() {
        let text = r#"{
            "nodes": {"A": {"relations": [[2]]}, "B": {"relations": [[2]]}},
            "arrows": {"f": {"src": "A", "dst": "B", "matrix": [[1]]},
                       "g": {"src": "A", "dst": "B", "matrix": [[3]]}},
            "assertions": [{"commute": [["f"], ["g"]]}, {"exact": ["f", "f"]}]
        }"#;
        assert!(matches!(DiagramSpec::from_json(text), Err(WittError::MalformedSpec(_))));
        let ok = text.replace(r#", {"exact": ["f", "f"]}"#, "");
        let d = DiagramSpec::from_json(&ok).unwrap();
        assert!(check_diagram(&d).unwrap().pass);
    }

    fn z2_triangle(beta: i64, rho: i64, sq2: i64) -> DiagramSpec {
        let mut d = DiagramSpec::new();
        for n in ["Ch", "H", "Ch1"] {
            d.add_node(n, FgAbGroup::cyclic_sum(&[2]));
        }
        d.add_arrow_i64("beta", "Ch", "H", &[vec![beta]]).unwrap();
        d.add_arrow_i64("rho", "H", "Ch1", &[vec![rho]]).unwrap();
        d.add_arrow_i64("sq2", "Ch", "Ch1", &[vec![sq2]]).unwrap();
        d.assert_commute(&["beta", "rho"], &["sq2"]);
        d
    }

    #[test]
    fn totaro_triangles() {
        assert!(totaro_check(&z2_triangle(1, 1, 1)).unwrap());
        assert!(totaro_check(&z2_triangle(0, 1, 0)).unwrap());
        assert!(totaro_check(&z2_triangle(0, 0, 0)).unwrap());
        let bad = z2_triangle(0, 1, 1);
        assert!(!totaro_check(&bad).unwrap());
        let rep = check_diagram(&bad).unwrap();
        assert_eq!(rep.failures().count(), 1);
        assert!(matches!(totaro_check(&DiagramSpec::new()), Err(WittError::MissingArrow(_))));
    }

    #[test]
    fn bar_sequence_examples() {
        let zero = FgAbGroup::trivial();
        let d = bar_sequence(
            &[zero.clone(), zero.clone(), zero.clone()],
            &[IntMatrix::zeros(0, 0), IntMatrix::zeros(0, 0)],
            BarArrow::Beta,
        )
        .unwrap();
        assert!(check_diagram(&d).unwrap().pass);

        // Z/2 →(2) Z/4 →(1) Z/2 → 0
        let z2 = FgAbGroup::cyclic_sum(&[2]);
        let z4 = FgAbGroup::cyclic_sum(&[4]);
        let maps = [
            IntMatrix::from_i64(&[&[2]]),
            IntMatrix::from_i64(&[&[1]]),
            IntMatrix::zeros(0, 1),
        ];
        let d = bar_sequence(&[z2.clone(), z4.clone(), z2.clone(), zero.clone()], &maps, BarArrow::Beta).unwrap();
        assert!(d.has_arrow("beta_0") && d.has_arrow("eta_1") && d.has_arrow("rho_2"));
        assert!(check_diagram(&d).unwrap().pass);

        // Break exactness at G1: first map zero.
        let broken = [IntMatrix::from_i64(&[&[0]]), maps[1].clone(), maps[2].clone()];
        let d = bar_sequence(&[z2.clone(), z4, z2.clone(), zero], &broken, BarArrow::Beta).unwrap();
        let rep = check_diagram(&d).unwrap();
        assert_eq!(rep.failures().count(), 1);

        assert!(matches!(
            bar_sequence(&[z2.clone(), z2], &[IntMatrix::from_i64(&[&[1]]), IntMatrix::from_i64(&[&[1]])], BarArrow::Eta),
            Err(WittError::EndpointMismatch(_))
        ));
    }
}
