//! Normal-form fields of the Arch, Whorl, Spiral and Twist patterns.
//!
//! A normal form is a system `x' = y, y' = g(x, y)` whose profile along the
//! `x`-axis solves a univariate Hermite interpolation problem: roots at the
//! prescribed singular points with given multiplicities, plus conditions on
//! the first free derivatives there. [`hermite_solve`] fixes the equality
//! conditions exactly and reports the sign of every inequality;
//! [`assemble_field`] turns the profile into a field; [`verify_conditions`]
//! checks a field against prescribed singular points and Jacobian signs.

mod file;
mod hermite;
mod templates;
mod verify;

use thiserror::Error;

use crate::flow::FlowError;
use crate::polyfield::{BivariatePolynomial, PlanarVectorField};

pub use file::{ConstraintFile, ParsedConstraints};
pub use hermite::{
    hermite_solve, pendulum_problem, whorl_problem, DerivativeConstraint, HermiteConstraint, HermiteProblem,
    HermiteSolution, InequalityCheck, Relation,
};
pub use templates::{assembled, default_spec, template, TemplateId};
pub use verify::{
    implied_conditions, pendulum_conditions, verify_conditions, whorl_conditions, ConditionOutcome, ConditionSpec,
    JacobianCondition, JacobianQuantity, PrescribedPoint, VerificationReport,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NormalFormError {
    #[error("bad constraint: {0}")]
    BadConstraint(String),
    #[error("two constraints share the location {0}")]
    DuplicateLocation(String),
    #[error("inconsistent constraints: {0}")]
    Inconsistent(String),
    #[error("no equality constraint or leading coefficient fixes the solution")]
    UnderDetermined,
    #[error("the interpolation problem is not poised")]
    NotPoised,
    #[error("constraint {constraint} at x = {location} fails: actual value {actual}")]
    InfeasibleInequalities {
        location: String,
        constraint: String,
        actual: String,
    },
    #[error("unknown template '{0}'")]
    UnknownTemplate(String),
    #[error("constraint file: {0}")]
    ConstraintFile(String),
    #[error(transparent)]
    Flow(#[from] FlowError),
}

/// `(y, f)` without a factor, `(y, y_factor * f)` with one.
pub fn assemble_field(f: &BivariatePolynomial, y_factor: Option<&BivariatePolynomial>) -> PlanarVectorField {
    let q = match y_factor {
        Some(factor) => factor * f,
        None => f.clone(),
    };
    PlanarVectorField::new(BivariatePolynomial::y(), q).expect("assembled field is valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyfield::parse_polynomial;

    #[test]
    fn assemble_from_solution() {
        let s = hermite_solve(&whorl_problem()).unwrap();
        assert_eq!(assemble_field(&s.poly, None), TemplateId::Whorl.field());
        let f = assemble_field(
            &parse_polynomial("(x-1)^2").unwrap(),
            Some(&parse_polynomial("2*y - x").unwrap()),
        );
        assert_eq!(f.q().to_string(), parse_polynomial("(2*y-x)*(x-1)^2").unwrap().to_string());
    }
}
