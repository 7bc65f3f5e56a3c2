//! Exact bivariate polynomial algebra and the planar vector field built on it.
//!
//! Coefficients are exact rationals everywhere in the algebra; floats only
//! appear at evaluation time.

mod field;
mod parse;
mod poly;

use thiserror::Error;

pub use field::{split_xy, JacobianData, PlanarVectorField, XySplit};
pub use parse::{parse_decimal, parse_polynomial, parse_rational};
pub use poly::{int, rational, BivariatePolynomial, FloatPoly, Monomial};

pub(crate) use poly::fmt_rational;

pub type Rational = num_rational::BigRational;

/// Maximum total degree accepted by the parser.
pub const MAX_DEGREE: u32 = 32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("parse error at offset {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("degree {degree} exceeds the maximum of {max}")]
    DegreeTooHigh { degree: u32, max: u32 },
    #[error("both field components are identically zero")]
    ZeroField,
    #[error("coefficient is not representable as a finite float")]
    NonFiniteCoefficient,
}

/// Rationals serialize as `"n"` or `"n/d"` strings.
pub(crate) mod serde_rational {
    use super::{fmt_rational, Rational};
    use serde::ser::SerializeSeq;
    use serde::Serializer;

    pub fn one<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_rational(r))
    }

    pub fn opt<S: Serializer>(r: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        match r {
            Some(r) => s.serialize_str(&fmt_rational(r)),
            None => s.serialize_none(),
        }
    }

    pub fn pair<S: Serializer>(r: &Option<(Rational, Rational)>, s: S) -> Result<S::Ok, S::Error> {
        match r {
            Some((a, b)) => {
                let mut seq = s.serialize_seq(Some(2))?;
                seq.serialize_element(&fmt_rational(a))?;
                seq.serialize_element(&fmt_rational(b))?;
                seq.end()
            }
            None => s.serialize_none(),
        }
    }

    pub fn matrix<S: Serializer>(m: &[[Rational; 2]; 2], s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = m
            .iter()
            .map(|row| row.iter().map(fmt_rational).collect())
            .collect();
        let mut seq = s.serialize_seq(Some(2))?;
        for row in &rows {
            seq.serialize_element(row)?;
        }
        seq.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;
    use proptest::prelude::*;

    fn field(s: &str) -> PlanarVectorField {
        s.parse().unwrap()
    }

    fn whorl() -> PlanarVectorField {
        field("y ; -x*(x^2-1)^2")
    }

    #[test]
    fn evaluate_examples() {
        assert_eq!(whorl().evaluate(0.0, 1.0), (1.0, 0.0));
        assert_eq!(whorl().evaluate(1.0, 0.0), (0.0, 0.0));
        assert_eq!(field("1 ; 0").evaluate(3.7, -2.0), (1.0, 0.0));
    }

    #[test]
    fn jacobian_examples() {
        let z = int(0);
        let j = whorl().jacobian_at(&z, &z);
        assert_eq!(j.entries, [[int(0), int(1)], [int(-1), int(0)]]);
        assert_eq!((j.trace.clone(), j.det.clone()), (int(0), int(1)));
        assert!(j.is_consistent());

        let j = field("y ; -x").jacobian_at(&z, &z);
        assert_eq!(j.entries, [[int(0), int(1)], [int(-1), int(0)]]);

        let twist = field("y ; (2*y-x)*(x-1)^2");
        let j = twist.jacobian_at(&z, &z);
        assert_eq!(j.entries, [[int(0), int(1)], [int(-1), int(2)]]);
        assert_eq!(j.trace, int(2));
        assert_eq!(j.det, int(1));
        assert_eq!(j.discriminant, int(0));
    }

    #[test]
    fn recenter_examples() {
        let shifted = whorl().recenter(&int(1), &int(0));
        // -(1+u) u^2 (2+u)^2 = -4u^2 - 8u^3 - 5u^4 - u^5
        let q = shifted.q();
        assert_eq!(q.coeff(2, 0), int(-4));
        assert_eq!(q.coeff(3, 0), int(-8));
        assert_eq!(q.coeff(4, 0), int(-5));
        assert_eq!(q.coeff(5, 0), int(-1));
        assert_eq!(q.coeff(0, 0), int(0));
        assert_eq!(q.coeff(1, 0), int(0));
        assert_eq!(whorl().recenter(&int(0), &int(0)), whorl());

        let a = rational(3, 7);
        let b = rational(-2, 5);
        let g = field("y ; x").recenter(&a, &b);
        assert_eq!(g, field("y - 2/5 ; x + 3/7"));
    }

    #[test]
    fn split_examples() {
        let s = split_xy(whorl().q());
        assert_eq!(s.f, parse_polynomial("-x*(x^2-1)^2").unwrap());
        assert!(s.g.is_zero() && s.r.is_zero());

        let spiral = parse_polynomial("(y-x/2)*(x^2-1)^2").unwrap();
        let s = split_xy(&spiral);
        assert_eq!(s.f, parse_polynomial("-(x/2)*(x^2-1)^2").unwrap());
        assert_eq!(s.g, parse_polynomial("(x^2-1)^2").unwrap());
        assert!(s.r.is_zero());

        let s = split_xy(&parse_polynomial("y^2").unwrap());
        assert!(s.f.is_zero() && s.g.is_zero());
        assert_eq!(s.r, BivariatePolynomial::one());
    }

    #[test]
    fn zero_polynomial_degree_and_zero_field() {
        assert_eq!(BivariatePolynomial::zero().degree(), -1);
        assert_eq!(
            "0 ; 0".parse::<PlanarVectorField>(),
            Err(PolyError::ZeroField)
        );
        assert!("y".parse::<PlanarVectorField>().is_err());
        assert!("y;x;1".parse::<PlanarVectorField>().is_err());
    }

    #[test]
    fn field_text_round_trip() {
        let w = whorl();
        assert_eq!(w.to_string(), "y ; -x^5+2*x^3-x");
        assert_eq!(w.to_string().parse::<PlanarVectorField>().unwrap(), w);
    }

    fn arb_rational() -> impl Strategy<Value = Rational> {
        (-20i64..=20, 1i64..=6).prop_map(|(n, d)| rational(n, d))
    }

    fn arb_poly(max_deg: u32) -> impl Strategy<Value = BivariatePolynomial> {
        prop::collection::vec(((0..=max_deg), (0..=max_deg), arb_rational()), 0..8).prop_map(
            move |terms| {
                BivariatePolynomial::from_terms(
                    terms
                        .into_iter()
                        .filter(|(i, j, _)| i + j <= max_deg)
                        .map(|(i, j, c)| ((i, j), c)),
                )
            },
        )
    }

    fn arb_field(max_deg: u32) -> impl Strategy<Value = PlanarVectorField> {
        (arb_poly(max_deg), arb_poly(max_deg))
            .prop_filter_map("nonzero field", |(p, q)| PlanarVectorField::new(p, q).ok())
    }

    proptest! {
        #[test]
        fn recenter_round_trip(f in arb_field(6), a in arb_rational(), b in arb_rational()) {
            let back = f.recenter(&a, &b).recenter(&-a.clone(), &-b.clone());
            prop_assert_eq!(back, f);
        }

        #[test]
        fn recenter_preserves_degree(f in arb_field(6), a in arb_rational(), b in arb_rational()) {
            prop_assert_eq!(f.recenter(&a, &b).degree(), f.degree());
        }

        #[test]
        fn recenter_matches_shifted_evaluation(
            f in arb_field(5),
            a in arb_rational(), b in arb_rational(),
            u in -1.5f64..1.5, v in -1.5f64..1.5,
        ) {
            let g = f.recenter(&a, &b);
            let (ga, gb) = g.evaluate(u, v);
            let (fa, fb) = f.evaluate(u + a.to_f64().unwrap(), v + b.to_f64().unwrap());
            let radius = 1.0 + (u + a.to_f64().unwrap()).abs() + (v + b.to_f64().unwrap()).abs();
            let scale = f.p().terms().chain(f.q().terms())
                .map(|(m, c)| c.to_f64().unwrap().abs() * radius.powi(m.total() as i32))
                .sum::<f64>().max(1.0);
            prop_assert!((ga - fa).abs() <= 1e-12 * scale, "{ga} vs {fa}");
            prop_assert!((gb - fb).abs() <= 1e-12 * scale, "{gb} vs {fb}");
        }

        #[test]
        fn split_reassembles(p in arb_poly(7)) {
            prop_assert_eq!(split_xy(&p).reassemble(), p);
        }

        #[test]
        fn canonical_text_parses_back(p in arb_poly(7)) {
            prop_assert_eq!(parse_polynomial(&p.to_string()).unwrap(), p);
        }

        #[test]
        fn jacobian_matches_finite_differences(
            f in arb_field(7), x in -1.0f64..1.0, y in -1.0f64..1.0,
        ) {
            // exact point, central differences with step 1e-6
            let xr = Rational::from_float(x).unwrap();
            let yr = Rational::from_float(y).unwrap();
            let exact = f.jacobian_at(&xr, &yr).to_f64();
            let h = 1e-6;
            let (pxp, qxp) = f.evaluate(x + h, y);
            let (pxm, qxm) = f.evaluate(x - h, y);
            let (pyp, qyp) = f.evaluate(x, y + h);
            let (pym, qym) = f.evaluate(x, y - h);
            let fd = [
                [(pxp - pxm) / (2.0 * h), (pyp - pym) / (2.0 * h)],
                [(qxp - qxm) / (2.0 * h), (qyp - qym) / (2.0 * h)],
            ];
            for i in 0..2 {
                for j in 0..2 {
                    prop_assert!((fd[i][j] - exact[i][j]).abs() < 1e-5,
                        "entry ({i},{j}): fd {} exact {}", fd[i][j], exact[i][j]);
                }
            }
        }
    }
}
