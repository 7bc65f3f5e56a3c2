use num_traits::{Signed, Zero};

use super::ClassificationLabel::{self, *};
use crate::polyfield::JacobianData;

/// Trace-determinant classification of a singular point from its linear part.
///
/// A zero trace with positive determinant gives `FocusOrCenter`; only a
/// reversibility certificate may promote it to `Center`. A zero determinant
/// gives `DegenerateUnresolved`, to be handed to the nilpotent classifier.
/// On the parabola `tau^2 = 4 delta` a scalar Jacobian is a star (proper)
/// node; any other Jacobian there is an improper node.
pub fn classify_linear(j: &JacobianData) -> ClassificationLabel {
    let (tau, delta, disc) = (&j.trace, &j.det, &j.discriminant);
    if delta.is_negative() {
        return Saddle;
    }
    if delta.is_zero() {
        return DegenerateUnresolved;
    }
    if tau.is_zero() {
        return FocusOrCenter;
    }
    let stable = tau.is_negative();
    if disc.is_negative() {
        if stable {
            StableFocus
        } else {
            UnstableFocus
        }
    } else if disc.is_zero() && !is_scalar(j) {
        if stable {
            ImproperNodeStable
        } else {
            ImproperNodeUnstable
        }
    } else if stable {
        StableNode
    } else {
        UnstableNode
    }
}

fn is_scalar(j: &JacobianData) -> bool {
    let e = &j.entries;
    e[0][1].is_zero() && e[1][0].is_zero() && e[0][0] == e[1][1]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyfield::{int, rational, Rational};
    use proptest::prelude::*;

    fn jac(a: Rational, b: Rational, c: Rational, d: Rational) -> JacobianData {
        JacobianData::from_entries([[a, b], [c, d]])
    }

    #[test]
    fn examples() {
        assert_eq!(
            classify_linear(&jac(int(0), int(1), int(-1), int(0))),
            FocusOrCenter
        );
        assert_eq!(
            classify_linear(&jac(int(1), int(0), int(0), int(1))),
            UnstableNode,
            "identity is a star node"
        );
        assert_eq!(
            classify_linear(&jac(int(-2), int(0), int(0), int(-2))),
            StableNode
        );
        assert_eq!(
            classify_linear(&jac(int(-1), int(1), int(0), int(-1))),
            ImproperNodeStable
        );
        assert_eq!(
            classify_linear(&jac(int(2), int(0), int(0), int(1))),
            UnstableNode
        );
        assert_eq!(
            classify_linear(&jac(int(0), int(1), int(-1), int(2))),
            ImproperNodeUnstable
        );
        assert_eq!(
            classify_linear(&jac(int(0), int(1), rational(-1, 2), int(1))),
            UnstableFocus
        );
        assert_eq!(classify_linear(&jac(int(1), int(0), int(0), int(-1))), Saddle);
        assert_eq!(
            classify_linear(&jac(int(0), int(1), int(0), int(0))),
            DegenerateUnresolved
        );
        assert_eq!(
            classify_linear(&jac(int(-1), int(1), int(-1), int(-1))),
            StableFocus
        );
        assert_eq!(
            classify_linear(&jac(int(-1), int(0), int(0), int(-3))),
            StableNode
        );
    }

    proptest! {
        #[test]
        fn invariant_under_positive_rescaling(
            a in -9i64..9, b in -9i64..9, c in -9i64..9, d in -9i64..9,
            sn in 1i64..20, sd in 1i64..20,
        ) {
            let s = rational(sn, sd);
            let base = jac(int(a), int(b), int(c), int(d));
            let scaled = jac(int(a) * &s, int(b) * &s, int(c) * &s, int(d) * &s);
            prop_assert_eq!(classify_linear(&base), classify_linear(&scaled));
        }
    }
}
