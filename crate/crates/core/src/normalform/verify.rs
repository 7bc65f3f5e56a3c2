use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::hermite::Relation;
use super::NormalFormError;
use crate::classify::ClassificationLabel;
use crate::flow::{find_singularities, DomainU, FinderConfig, FlowError, SingularPoint};
use crate::polyfield::{fmt_rational, int, parse_rational, serde_rational, JacobianData, PlanarVectorField, Rational};
use crate::report::classify_point_label;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum JacobianQuantity {
    #[serde(rename = "tr")]
    Trace,
    #[serde(rename = "det")]
    Determinant,
    #[serde(rename = "disc")]
    Discriminant,
}

impl JacobianQuantity {
    pub fn name(self) -> &'static str {
        match self {
            JacobianQuantity::Trace => "tr",
            JacobianQuantity::Determinant => "det",
            JacobianQuantity::Discriminant => "disc",
        }
    }

    pub fn of(self, j: &JacobianData) -> &Rational {
        match self {
            JacobianQuantity::Trace => &j.trace,
            JacobianQuantity::Determinant => &j.det,
            JacobianQuantity::Discriminant => &j.discriminant,
        }
    }
}

/// `tr < 0`, `det > 0`, `disc = 0` and so on.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JacobianCondition {
    pub quantity: JacobianQuantity,
    pub relation: Relation,
    #[serde(serialize_with = "serde_rational::one")]
    pub value: Rational,
}

impl JacobianCondition {
    pub fn new(quantity: JacobianQuantity, relation: Relation, value: Rational) -> Self {
        JacobianCondition {
            quantity,
            relation,
            value,
        }
    }

    fn sign(quantity: JacobianQuantity, relation: Relation) -> Self {
        Self::new(quantity, relation, Rational::zero())
    }

    pub fn holds(&self, j: &JacobianData) -> bool {
        self.relation.holds(self.quantity.of(j), &self.value)
    }
}

impl fmt::Display for JacobianCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.quantity.name(), self.relation, fmt_rational(&self.value))
    }
}

impl FromStr for JacobianCondition {
    type Err = NormalFormError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || NormalFormError::BadConstraint(s.to_string());
        let pos = s.find(['=', '<', '>']).ok_or_else(bad)?;
        let relation = match &s[pos..pos + 1] {
            "=" => Relation::Eq,
            "<" => Relation::Lt,
            _ => Relation::Gt,
        };
        let quantity = match s[..pos].trim().to_ascii_lowercase().as_str() {
            "tr" | "trace" | "tau" => JacobianQuantity::Trace,
            "det" | "delta" => JacobianQuantity::Determinant,
            "disc" | "discriminant" => JacobianQuantity::Discriminant,
            _ => return Err(bad()),
        };
        let value = parse_rational(s[pos + 1..].trim()).map_err(|_| bad())?;
        Ok(JacobianCondition::new(quantity, relation, value))
    }
}

/// Jacobian sign conditions that any point with this label satisfies.
pub fn implied_conditions(label: ClassificationLabel) -> Vec<JacobianCondition> {
    use ClassificationLabel::*;
    use JacobianQuantity::*;
    use Relation::*;
    let c = JacobianCondition::sign;
    match label {
        Saddle => vec![c(Determinant, Lt)],
        StableNode => vec![c(Determinant, Gt), c(Trace, Lt), c(Discriminant, Gt)],
        UnstableNode => vec![c(Determinant, Gt), c(Trace, Gt), c(Discriminant, Gt)],
        ImproperNodeStable => vec![c(Determinant, Gt), c(Trace, Lt), c(Discriminant, Eq)],
        ImproperNodeUnstable => vec![c(Determinant, Gt), c(Trace, Gt), c(Discriminant, Eq)],
        StableFocus => vec![c(Determinant, Gt), c(Trace, Lt), c(Discriminant, Lt)],
        UnstableFocus => vec![c(Determinant, Gt), c(Trace, Gt), c(Discriminant, Lt)],
        SaddleNode | Cusp | EllipticDomainPoint => vec![c(Determinant, Eq)],
        Center | FocusOrCenter | DegenerateUnresolved | NonSingular => Vec::new(),
    }
}

/// A singular point the field must have, with an optional label and explicit
/// Jacobian conditions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrescribedPoint {
    #[serde(serialize_with = "serde_rational::one")]
    pub x: Rational,
    #[serde(serialize_with = "serde_rational::one")]
    pub y: Rational,
    pub label: Option<ClassificationLabel>,
    pub jacobian: Vec<JacobianCondition>,
}

impl PrescribedPoint {
    pub fn new(x: Rational, y: Rational) -> Self {
        PrescribedPoint {
            x,
            y,
            label: None,
            jacobian: Vec::new(),
        }
    }

    pub fn with_label(mut self, label: ClassificationLabel) -> Self {
        self.label = Some(label);
        self
    }

    pub fn with_condition(mut self, c: JacobianCondition) -> Self {
        self.jacobian.push(c);
        self
    }

    fn name(&self) -> String {
        format!("({}, {})", fmt_rational(&self.x), fmt_rational(&self.y))
    }
}

/// The prescribed singular points must be the only zeros of the field in
/// `domain`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConditionSpec {
    pub domain: DomainU,
    pub points: Vec<PrescribedPoint>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionOutcome {
    pub condition: String,
    pub passed: bool,
    pub evidence: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub passed: bool,
    pub conditions: Vec<ConditionOutcome>,
}

impl VerificationReport {
    pub fn failures(&self) -> impl Iterator<Item = &ConditionOutcome> {
        self.conditions.iter().filter(|c| !c.passed)
    }
}

/// Saddles at `(+-pi, 0)`, a centre at the origin with `tr = 0, det > 0`, on
/// `|x|, |y| <= 4`.
pub fn pendulum_conditions(pi: &Rational) -> ConditionSpec {
    use JacobianQuantity::*;
    use Relation::*;
    let saddle = |x: Rational| {
        PrescribedPoint::new(x, int(0)).with_condition(JacobianCondition::sign(Determinant, Lt))
    };
    ConditionSpec {
        domain: DomainU::square(4.0).expect("valid domain"),
        points: vec![
            saddle(-pi.clone()),
            PrescribedPoint::new(int(0), int(0))
                .with_condition(JacobianCondition::sign(Trace, Eq))
                .with_condition(JacobianCondition::sign(Determinant, Gt)),
            saddle(pi.clone()),
        ],
    }
}

/// A centre at the origin and cusps at `(+-1, 0)` on `[-2, 2]^2`.
pub fn whorl_conditions() -> ConditionSpec {
    use ClassificationLabel::*;
    ConditionSpec {
        domain: DomainU::square(2.0).expect("valid domain"),
        points: vec![
            PrescribedPoint::new(int(-1), int(0)).with_label(Cusp),
            PrescribedPoint::new(int(0), int(0)).with_label(Center),
            PrescribedPoint::new(int(1), int(0)).with_label(Cusp),
        ],
    }
}

fn matches(found: &SingularPoint, p: &PrescribedPoint) -> bool {
    match &found.exact {
        Some((x, y)) => *x == p.x && *y == p.y,
        None => {
            let (px, py) = (num_traits::ToPrimitive::to_f64(&p.x), num_traits::ToPrimitive::to_f64(&p.y));
            match (px, py) {
                (Some(px), Some(py)) => (found.approx[0] - px).hypot(found.approx[1] - py) <= 1e-6,
                _ => false,
            }
        }
    }
}

fn show(found: &SingularPoint) -> String {
    match &found.exact {
        Some((x, y)) => format!("({}, {})", fmt_rational(x), fmt_rational(y)),
        None => format!("({}, {})", found.approx[0], found.approx[1]),
    }
}

/// Checks that the zeros of `field` in the domain are exactly the prescribed
/// points, and every label and Jacobian condition at each.
pub fn verify_conditions(
    field: &PlanarVectorField,
    spec: &ConditionSpec,
    finder: &FinderConfig,
) -> Result<VerificationReport, FlowError> {
    let found = find_singularities(field, &spec.domain, finder)?;
    let mut out = Vec::new();

    let missing: Vec<String> = spec
        .points
        .iter()
        .filter(|p| !found.iter().any(|f| matches(f, p)))
        .map(PrescribedPoint::name)
        .collect();
    let extra: Vec<String> = found
        .iter()
        .filter(|f| !spec.points.iter().any(|p| matches(f, p)))
        .map(show)
        .collect();
    let mut evidence = format!("finder returned {} point(s)", found.len());
    if !missing.is_empty() {
        evidence.push_str(&format!("; missing {}", missing.join(", ")));
    }
    if !extra.is_empty() {
        evidence.push_str(&format!("; unexpected {}", extra.join(", ")));
    }
    out.push(ConditionOutcome {
        condition: format!("zeros in {} are exactly the prescribed points", spec.domain),
        passed: missing.is_empty() && extra.is_empty(),
        evidence,
    });

    for p in &spec.points {
        let at = p.name();
        let (a, b) = field.evaluate_exact(&p.x, &p.y);
        out.push(ConditionOutcome {
            condition: format!("f vanishes at {at}"),
            passed: a.is_zero() && b.is_zero(),
            evidence: format!("f = ({}, {})", fmt_rational(&a), fmt_rational(&b)),
        });
        let j = field.jacobian_at(&p.x, &p.y);
        let mut conditions = p.jacobian.clone();
        if let Some(label) = p.label {
            for c in implied_conditions(label) {
                if !conditions.contains(&c) {
                    conditions.push(c);
                }
            }
        }
        for c in &conditions {
            out.push(ConditionOutcome {
                condition: format!("{c} at {at}"),
                passed: c.holds(&j),
                evidence: format!("{} = {}", c.quantity.name(), fmt_rational(c.quantity.of(&j))),
            });
        }
        if let Some(label) = p.label {
            let point = SingularPoint::exact(p.x.clone(), p.y.clone());
            let (got, ..) = classify_point_label(field, &point);
            out.push(ConditionOutcome {
                condition: format!("{label} at {at}"),
                passed: got == label,
                evidence: format!("classified as {got}"),
            });
        }
    }
    Ok(VerificationReport {
        passed: out.iter().all(|c| c.passed),
        conditions: out,
    })
}
