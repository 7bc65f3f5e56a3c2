use num_traits::{Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use super::ClassificationLabel::{self, *};
use crate::polyfield::{int, serde_rational, split_xy, BivariatePolynomial, PlanarVectorField, Rational};

/// Leading data of a nilpotent point written as
/// `x' = y`, `y' = a_k x^k (1 + h(x)) + b_n x^n y (1 + g(x)) + y^2 R(x, y)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NilpotentData {
    pub k: u32,
    pub m: u32,
    #[serde(serialize_with = "serde_rational::one")]
    pub a_k: Rational,
    /// `None` when `b_n = 0` (the exponent is then infinite).
    #[serde(serialize_with = "ser_n")]
    pub n: Option<u32>,
    #[serde(serialize_with = "serde_rational::one")]
    pub b_n: Rational,
    /// `b_n^2 + 4 (m + 1) a_k`, only defined for odd `k`.
    #[serde(serialize_with = "serde_rational::opt")]
    pub lambda: Option<Rational>,
}

fn ser_n<S: serde::Serializer>(n: &Option<u32>, s: S) -> Result<S::Ok, S::Error> {
    match n {
        Some(n) => s.serialize_u32(*n),
        None => s.serialize_str("inf"),
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NilpotentError {
    #[error("x' is not exactly y after moving the point to the origin")]
    NotInNormalForm,
    #[error("the point is not singular")]
    NotSingular,
    #[error("y' has no pure-x part (F is identically zero)")]
    ZeroF,
    #[error("the Jacobian is not nilpotent and nonzero")]
    JacobianNotNilpotent,
}

/// Case table for nilpotent points in the normal form above.
pub fn classify_nilpotent(
    field: &PlanarVectorField,
    point: (&Rational, &Rational),
) -> Result<(ClassificationLabel, NilpotentData), NilpotentError> {
    let zero = Rational::zero();
    let g = field.recenter(point.0, point.1);
    if *g.p() != BivariatePolynomial::y() {
        return Err(NilpotentError::NotInNormalForm);
    }
    if !g.is_singular_at(&zero, &zero) {
        return Err(NilpotentError::NotSingular);
    }
    let j = g.jacobian_at(&zero, &zero);
    if j.is_zero() || !j.trace.is_zero() || !j.det.is_zero() {
        return Err(NilpotentError::JacobianNotNilpotent);
    }
    let split = split_xy(g.q());
    let (k, a_k) = split.f.lowest_x_term().ok_or(NilpotentError::ZeroF)?;
    debug_assert!(k >= 2, "nilpotency rules out constant and linear F terms");
    let (n, b_n) = match split.g.lowest_x_term() {
        Some((n, b)) => (Some(n), b),
        None => (None, zero.clone()),
    };
    let data = if k % 2 == 1 {
        let m = (k - 1) / 2;
        let lambda = &b_n * &b_n + int(4 * (m as i64 + 1)) * &a_k;
        NilpotentData {
            k,
            m,
            a_k,
            n,
            b_n,
            lambda: Some(lambda),
        }
    } else {
        NilpotentData {
            k,
            m: k / 2,
            a_k,
            n,
            b_n,
            lambda: None,
        }
    };
    Ok((nilpotent_label(&data), data))
}

fn nilpotent_label(d: &NilpotentData) -> ClassificationLabel {
    let m = d.m;
    if d.k.is_multiple_of(2) {
        return match d.n {
            Some(n) if n < m => SaddleNode,
            _ => Cusp,
        };
    }
    if d.a_k.is_positive() {
        return Saddle;
    }
    let Some(n) = d.n else {
        return FocusOrCenter;
    };
    let lambda = d.lambda.as_ref().expect("odd k carries lambda");
    if n > m || (n == m && lambda.is_negative()) {
        return FocusOrCenter;
    }
    // here n < m, or n == m with lambda >= 0
    if n % 2 == 0 {
        // divergence ~ b_n x^n with n even keeps the sign of b_n
        if d.b_n.is_negative() {
            StableNode
        } else {
            UnstableNode
        }
    } else {
        EllipticDomainPoint
    }
}
