//! Splitting verdicts for curves and surfaces.
//!
//! Every hypothesis that cannot be computed from Chern numbers is a
//! tri-state input, so the engine says `Undecided` instead of guessing.

use serde::{Deserialize, Serialize};

use super::MotivesError;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TriState {
    Yes,
    No,
    #[default]
    Unknown,
}

impl TriState {
    pub fn is_yes(self) -> bool {
        self == TriState::Yes
    }

    pub fn is_no(self) -> bool {
        self == TriState::No
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BaseField {
    /// Algebraically closed, characteristic different from 2.
    #[serde(rename = "alg_closed_char_ne_2")]
    AlgClosedCharNe2,
    #[default]
    #[serde(rename = "other")]
    Other,
}

/// Hypotheses of the rational-curve obstruction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PicRationalCurveData {
    pub pic_spanned_by_rational_curves: bool,
    pub ample_sum_of_rational_curves: bool,
    /// `(K·Cᵢ) ≠ −2` for every spanning curve.
    #[serde(rename = "all_KC_ne_minus2")]
    pub all_kc_ne_minus2: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceDescriptor {
    pub name: String,
    pub c1_squared: i64,
    pub c2: i64,
    /// `c₁` divisible by 2 in the divisor class group.
    #[serde(default)]
    pub c1_even: TriState,
    #[serde(default)]
    pub has_rational_point: TriState,
    #[serde(default)]
    pub canonical_trivial: TriState,
    /// `H¹_ét(X×X, ℤ/2) = 0`.
    #[serde(default)]
    pub h1_et_square_vanishes: TriState,
    #[serde(default)]
    pub base_field: BaseField,
    #[serde(default)]
    pub pic_rational_curve_data: Option<PicRationalCurveData>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveDescriptor {
    pub name: String,
    pub genus: u32,
    #[serde(default)]
    pub has_theta_char: TriState,
    #[serde(default)]
    pub has_rational_point: TriState,
    #[serde(default)]
    pub base_field: BaseField,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Outcome {
    Splits,
    NotSplit,
    ObstructedTwoPiece,
    Undecided,
    InconsistentInput,
}

impl Outcome {
    /// Process exit code used by the command line.
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Splits => 0,
            Outcome::NotSplit | Outcome::ObstructedTwoPiece => 1,
            Outcome::InconsistentInput => 2,
            Outcome::Undecided => 3,
        }
    }
}

/// The criterion a verdict rests on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    /// Sq² and Sq⁴ (mod 2) and P¹ (mod 3) must vanish on the top cell.
    TopCellNecessary,
    /// Rational point, `2c₂ = c₁²` and `c₁` even.
    ChernNumberCriterion,
    /// Trivial canonical bundle and `H¹_ét(X×X, ℤ/2) = 0` over an
    /// algebraically closed field.
    CalabiYauLifting,
    /// Picard group spanned by rational curves.
    RationalCurveObstruction,
    /// Splitting iff a theta characteristic exists.
    ThetaCharacteristic,
    /// Curves over algebraically closed fields carry a canonical theta
    /// characteristic.
    CanonicalTheta,
}

impl Rule {
    pub fn title(self) -> &'static str {
        match self {
            Rule::TopCellNecessary => "top-cell necessary conditions",
            Rule::ChernNumberCriterion => "Chern-number splitting criterion",
            Rule::CalabiYauLifting => "Calabi-Yau Chow-Witt lifting criterion",
            Rule::RationalCurveObstruction => "rational-curve two-piece obstruction",
            Rule::ThetaCharacteristic => "theta-characteristic criterion for curves",
            Rule::CanonicalTheta => "canonical theta characteristic over an algebraically closed field",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub name: String,
    pub outcome: Outcome,
    /// `None` only for `Undecided`.
    pub rule: Option<Rule>,
    /// The checked (in)equalities, or the missing information.
    pub witness: Vec<String>,
}

impl Verdict {
    fn new(name: &str, outcome: Outcome, rule: Option<Rule>, witness: Vec<String>) -> Self {
        Verdict {
            name: name.to_string(),
            outcome,
            rule,
            witness,
        }
    }
}

fn tri(t: TriState) -> &'static str {
    match t {
        TriState::Yes => "yes",
        TriState::No => "no",
        TriState::Unknown => "unknown",
    }
}

/// Violated necessary conditions, one line each.
fn necessary_violations(d: &SurfaceDescriptor) -> Vec<String> {
    let mut out = Vec::new();
    if d.c1_even.is_no() {
        out.push("c1 is not divisible by 2 (Sq2 on the top cell would be nonzero)".to_string());
    }
    if d.c2.rem_euclid(2) != 0 {
        out.push(format!("c2 = {} is odd (Sq4 on the top cell would be nonzero)", d.c2));
    }
    let m3 = d.c1_squared - 2 * d.c2;
    if m3.rem_euclid(3) != 0 {
        out.push(format!("c1^2 - 2*c2 = {m3} is not divisible by 3 (P1 on the top cell would be nonzero)"));
    }
    out
}

fn chern_number_fires(d: &SurfaceDescriptor) -> bool {
    d.has_rational_point.is_yes() && 2 * d.c2 == d.c1_squared && d.c1_even.is_yes()
}

fn calabi_yau_fires(d: &SurfaceDescriptor) -> bool {
    d.base_field == BaseField::AlgClosedCharNe2 && d.canonical_trivial.is_yes() && d.h1_et_square_vanishes.is_yes()
}

fn chern_number_witness(d: &SurfaceDescriptor) -> Vec<String> {
    vec![
        "rational point: yes".to_string(),
        format!("2*c2 = {} = c1^2", 2 * d.c2),
        "c1 divisible by 2: yes".to_string(),
    ]
}

fn calabi_yau_witness() -> Vec<String> {
    vec![
        "base field algebraically closed, char != 2".to_string(),
        "canonical bundle trivial: yes".to_string(),
        "H1_et(XxX, Z/2) = 0: yes, so rho is injective and Sq2 vanishes on the point projectors".to_string(),
    ]
}

/// Why the Chern-number criterion does not apply.
fn chern_number_gaps(d: &SurfaceDescriptor) -> Vec<String> {
    let mut out = Vec::new();
    if !d.has_rational_point.is_yes() {
        out.push(format!("rational point: {}", tri(d.has_rational_point)));
    }
    if 2 * d.c2 != d.c1_squared {
        out.push(format!("2*c2 = {} != c1^2 = {}", 2 * d.c2, d.c1_squared));
    }
    if !d.c1_even.is_yes() {
        out.push(format!("c1 divisible by 2: {}", tri(d.c1_even)));
    }
    out
}

fn calabi_yau_gaps(d: &SurfaceDescriptor) -> Vec<String> {
    let mut out = Vec::new();
    if d.base_field != BaseField::AlgClosedCharNe2 {
        out.push("base field is not known to be algebraically closed of char != 2".to_string());
    }
    if !d.canonical_trivial.is_yes() {
        out.push(format!("canonical bundle trivial: {}", tri(d.canonical_trivial)));
    }
    if !d.h1_et_square_vanishes.is_yes() {
        out.push(format!("H1_et(XxX, Z/2) = 0: {}", tri(d.h1_et_square_vanishes)));
    }
    out
}

/// Necessary conditions first, then the two sufficient criteria.
///
/// A necessary-condition failure together with a firing sufficient rule
/// means the descriptor contradicts itself, reported as
/// `InconsistentInput`.
pub fn surface_verdict(d: &SurfaceDescriptor) -> Verdict {
    let violations = necessary_violations(d);
    let chern = chern_number_fires(d);
    let cy = calabi_yau_fires(d);

    if !violations.is_empty() {
        if chern || cy {
            let mut w = violations;
            if chern {
                w.push(format!("yet the {} fires", Rule::ChernNumberCriterion.title()));
            }
            if cy {
                w.push(format!("yet the {} fires", Rule::CalabiYauLifting.title()));
            }
            return Verdict::new(&d.name, Outcome::InconsistentInput, Some(Rule::TopCellNecessary), w);
        }
        return Verdict::new(&d.name, Outcome::NotSplit, Some(Rule::TopCellNecessary), violations);
    }
    if chern {
        let mut w = chern_number_witness(d);
        if cy {
            w.push(format!("the {} also applies", Rule::CalabiYauLifting.title()));
        }
        return Verdict::new(&d.name, Outcome::Splits, Some(Rule::ChernNumberCriterion), w);
    }
    if cy {
        let mut w = calabi_yau_witness();
        for gap in chern_number_gaps(d) {
            w.push(format!("{} inapplicable: {gap}", Rule::ChernNumberCriterion.title()));
        }
        return Verdict::new(&d.name, Outcome::Splits, Some(Rule::CalabiYauLifting), w);
    }
    let mut missing: Vec<String> = chern_number_gaps(d)
        .into_iter()
        .map(|g| format!("{}: {g}", Rule::ChernNumberCriterion.title()))
        .collect();
    missing.extend(
        calabi_yau_gaps(d)
            .into_iter()
            .map(|g| format!("{}: {g}", Rule::CalabiYauLifting.title())),
    );
    Verdict::new(&d.name, Outcome::Undecided, None, missing)
}

/// Theta characteristic decides; over algebraically closed fields one always
/// exists. A splitting also needs a rational point.
pub fn curve_verdict(d: &CurveDescriptor) -> Verdict {
    let closed = d.base_field == BaseField::AlgClosedCharNe2;
    let mut w = vec![format!("genus {}", d.genus)];
    if closed && d.has_rational_point.is_no() {
        w.push("rational point: no, impossible over an algebraically closed field".to_string());
        return Verdict::new(&d.name, Outcome::InconsistentInput, None, w);
    }
    let (rule, splits) = match (d.has_theta_char, closed) {
        (TriState::No, true) => {
            w.push("theta characteristic: no, but one always exists over an algebraically closed field".into());
            return Verdict::new(&d.name, Outcome::InconsistentInput, Some(Rule::CanonicalTheta), w);
        }
        (TriState::No, false) => {
            w.push("theta characteristic: no".into());
            return Verdict::new(&d.name, Outcome::NotSplit, Some(Rule::ThetaCharacteristic), w);
        }
        (TriState::Yes, _) => {
            w.push("theta characteristic: yes".into());
            (Rule::ThetaCharacteristic, true)
        }
        (TriState::Unknown, true) => {
            w.push("theta characteristic: canonical, base field algebraically closed of char != 2".into());
            (Rule::CanonicalTheta, true)
        }
        (TriState::Unknown, false) => (Rule::ThetaCharacteristic, false),
    };
    if !splits {
        w.push("theta characteristic: unknown over a general base field".into());
        return Verdict::new(&d.name, Outcome::Undecided, None, w);
    }
    match d.has_rational_point {
        TriState::Yes => {
            w.push("rational point: yes".into());
            Verdict::new(&d.name, Outcome::Splits, Some(rule), w)
        }
        other => {
            w.push(format!("{} would apply, but rational point: {}", rule.title(), tri(other)));
            Verdict::new(&d.name, Outcome::Undecided, None, w)
        }
    }
}

/// No splitting into two pieces with nontrivial `H^{2,1}` when the Picard
/// group is spanned by suitable rational curves.
///
/// This forbids a different shape than the top-cell splitting, so it may
/// be reported next to a `Splits` verdict.
pub fn beauville_voisin_obstruction(d: &SurfaceDescriptor) -> Result<Verdict, MotivesError> {
    let data = d
        .pic_rational_curve_data
        .ok_or_else(|| MotivesError::MissingPicData(d.name.clone()))?;
    let flags = [
        ("Pic spanned by rational curves", data.pic_spanned_by_rational_curves),
        ("ample divisor is a sum of rational curves", data.ample_sum_of_rational_curves),
        ("(K.C_i) != -2 for all spanning curves", data.all_kc_ne_minus2),
    ];
    let mut w: Vec<String> = flags
        .iter()
        .map(|(what, ok)| format!("{what}: {}", if *ok { "yes" } else { "no" }))
        .collect();
    if flags.iter().all(|(_, ok)| *ok) {
        w.push("assumes an algebraically closed base field of characteristic 0".into());
        Ok(Verdict::new(
            &d.name,
            Outcome::ObstructedTwoPiece,
            Some(Rule::RationalCurveObstruction),
            w,
        ))
    } else {
        Ok(Verdict::new(&d.name, Outcome::Undecided, None, w))
    }
}
