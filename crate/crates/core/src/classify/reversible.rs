use serde::Serialize;

use crate::polyfield::{BivariatePolynomial, PlanarVectorField, Rational};

/// Symmetry that certifies a monodromic point as a center.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReversibilityCertificate {
    /// `x' = y`, `y' = F(x)` after recentering.
    SecondOrderConservative,
    /// Invariant under `(t, y) -> (-t, -y)`.
    ReflectY,
    /// Invariant under `(t, x) -> (-t, -x)`.
    ReflectX,
}

/// Checks, coefficient by coefficient after moving `point` to the origin,
/// whether the system is reversible with respect to an axis through it.
pub fn classify_reversible(
    field: &PlanarVectorField,
    point: (&Rational, &Rational),
) -> Option<ReversibilityCertificate> {
    let g = field.recenter(point.0, point.1);
    let (p, q) = (g.p(), g.q());
    if *p == BivariatePolynomial::y() && q.is_univariate_x() {
        return Some(ReversibilityCertificate::SecondOrderConservative);
    }
    if p.reflect(false, true) == -p && q.reflect(false, true) == *q {
        return Some(ReversibilityCertificate::ReflectY);
    }
    if p.reflect(true, false) == *p && q.reflect(true, false) == -q {
        return Some(ReversibilityCertificate::ReflectX);
    }
    None
}
