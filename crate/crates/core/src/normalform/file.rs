use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::hermite::{DerivativeConstraint, HermiteConstraint, HermiteProblem};
use super::verify::{ConditionSpec, JacobianCondition, PrescribedPoint};
use super::NormalFormError;
use crate::classify::ClassificationLabel;
use crate::flow::DomainU;
use crate::polyfield::{fmt_rational, parse_polynomial, BivariatePolynomial, Rational};

/// TOML constraint file for `synth`.
///
/// ```toml
/// [constants]
/// pi = "355/113"
///
/// [[points]]
/// at = "0"
/// multiplicity = 1
/// conditions = ["f' = -1"]
///
/// [[points]]
/// at = "pi"
/// multiplicity = 1
/// conditions = ["f' > 0"]
/// ```
///
/// Numbers may be written with the named constants. An optional `y_factor`
/// multiplies the solved profile, `leading_coefficient` normalizes it, and an
/// optional `[verify]` table lists the singular points the assembled field
/// must have.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstraintFile {
    #[serde(default)]
    pub constants: BTreeMap<String, String>,
    pub leading_coefficient: Option<String>,
    pub y_factor: Option<String>,
    #[serde(default)]
    pub points: Vec<PointEntry>,
    pub verify: Option<VerifyEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointEntry {
    pub at: String,
    pub multiplicity: u32,
    #[serde(default)]
    pub conditions: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyEntry {
    /// `"xmin,xmax,ymin,ymax"`.
    pub domain: String,
    pub points: Vec<VerifyPoint>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyPoint {
    pub at: [String; 2],
    pub label: Option<String>,
    #[serde(default)]
    pub jacobian: Vec<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ParsedConstraints {
    pub problem: HermiteProblem,
    pub y_factor: Option<BivariatePolynomial>,
    pub conditions: Option<ConditionSpec>,
}

fn file_err(msg: impl Into<String>) -> NormalFormError {
    NormalFormError::ConstraintFile(msg.into())
}

/// Replaces every named constant in `text` by its parenthesized value.
fn substitute(text: &str, constants: &BTreeMap<String, Rational>, allow_xy: bool) -> Result<String, NormalFormError> {
    let mut out = String::with_capacity(text.len());
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let starts_word = (c.is_alphabetic() || c == '_')
            && (i == 0 || !(chars[i - 1].is_alphanumeric() || chars[i - 1] == '.'));
        if !starts_word {
            out.push(c);
            i += 1;
            continue;
        }
        let start = i;
        while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
            i += 1;
        }
        let word: String = chars[start..i].iter().collect();
        if let Some(v) = constants.get(&word) {
            out.push_str(&format!("({})", fmt_rational(v)));
        } else if allow_xy && (word == "x" || word == "y") {
            out.push_str(&word);
        } else {
            return Err(file_err(format!("unknown name '{word}' in '{text}'")));
        }
    }
    Ok(out)
}

fn number(text: &str, constants: &BTreeMap<String, Rational>) -> Result<Rational, NormalFormError> {
    let p = parse_polynomial(&substitute(text, constants, false)?)
        .map_err(|e| file_err(format!("'{text}': {e}")))?;
    if !p.is_constant() {
        return Err(file_err(format!("'{text}' is not a number")));
    }
    Ok(p.coeff(0, 0))
}

impl ConstraintFile {
    pub fn from_toml(text: &str) -> Result<Self, NormalFormError> {
        toml::from_str(text).map_err(|e| file_err(e.to_string()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("constraint file serializes")
    }

    /// The Whorl problem with its expected singular points.
    pub fn whorl() -> Self {
        Self::from_toml(include_str!("whorl.toml")).expect("built-in constraint file parses")
    }

    /// The polynomial pendulum with `pi = 355/113`.
    pub fn pendulum() -> Self {
        Self::from_toml(include_str!("pendulum.toml")).expect("built-in constraint file parses")
    }

    pub fn parse(&self) -> Result<ParsedConstraints, NormalFormError> {
        let mut constants = BTreeMap::new();
        for (name, value) in &self.constants {
            if name == "x" || name == "y" {
                return Err(file_err(format!("constant name '{name}' is reserved")));
            }
            constants.insert(name.clone(), number(value, &BTreeMap::new())?);
        }
        let mut constraints = Vec::with_capacity(self.points.len());
        for p in &self.points {
            let location = number(&p.at, &constants)?;
            let derivatives = p
                .conditions
                .iter()
                .map(|c| DerivativeConstraint::parse_with(c, |v| number(v, &constants).ok()))
                .collect::<Result<Vec<_>, _>>()?;
            constraints.push(HermiteConstraint::new(location, p.multiplicity, derivatives));
        }
        let leading_coefficient = self
            .leading_coefficient
            .as_deref()
            .map(|v| number(v, &constants))
            .transpose()?;
        let y_factor = self
            .y_factor
            .as_deref()
            .map(|v| {
                parse_polynomial(&substitute(v, &constants, true)?).map_err(|e| file_err(format!("y_factor: {e}")))
            })
            .transpose()?;
        let conditions = self.verify.as_ref().map(|v| verify_spec(v, &constants)).transpose()?;
        Ok(ParsedConstraints {
            problem: HermiteProblem {
                constraints,
                leading_coefficient,
            },
            y_factor,
            conditions,
        })
    }
}

fn verify_spec(v: &VerifyEntry, constants: &BTreeMap<String, Rational>) -> Result<ConditionSpec, NormalFormError> {
    let domain: DomainU = v.domain.parse().map_err(|e| file_err(format!("verify domain: {e}")))?;
    let mut points = Vec::with_capacity(v.points.len());
    for p in &v.points {
        let mut point = PrescribedPoint::new(number(&p.at[0], constants)?, number(&p.at[1], constants)?);
        if let Some(l) = &p.label {
            let label: ClassificationLabel = l.parse().map_err(|e| file_err(format!("{e}")))?;
            point = point.with_label(label);
        }
        for c in &p.jacobian {
            point = point.with_condition(c.parse::<JacobianCondition>()?);
        }
        points.push(point);
    }
    Ok(ConditionSpec { domain, points })
}
