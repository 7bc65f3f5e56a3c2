use std::fmt;
use std::str::FromStr;

use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use super::poly::FloatPoly;
use super::{parse_polynomial, BivariatePolynomial, PolyError, Rational};

/// Planar polynomial system `x' = p(x, y)`, `y' = q(x, y)`.
#[derive(Clone, Debug)]
pub struct PlanarVectorField {
    p: BivariatePolynomial,
    q: BivariatePolynomial,
    num: NumericForms,
}

#[derive(Clone, Debug)]
struct NumericForms {
    p: FloatPoly,
    q: FloatPoly,
    px: FloatPoly,
    py: FloatPoly,
    qx: FloatPoly,
    qy: FloatPoly,
}

impl PartialEq for PlanarVectorField {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.q == other.q
    }
}

impl Eq for PlanarVectorField {}

impl PlanarVectorField {
    pub fn new(p: BivariatePolynomial, q: BivariatePolynomial) -> Result<Self, PolyError> {
        if p.is_zero() && q.is_zero() {
            return Err(PolyError::ZeroField);
        }
        let all_finite = p
            .terms()
            .chain(q.terms())
            .all(|(_, c)| c.to_f64().is_some_and(f64::is_finite));
        if !all_finite {
            return Err(PolyError::NonFiniteCoefficient);
        }
        let num = NumericForms {
            p: p.to_float(),
            q: q.to_float(),
            px: p.partial_x().to_float(),
            py: p.partial_y().to_float(),
            qx: q.partial_x().to_float(),
            qy: q.partial_y().to_float(),
        };
        Ok(PlanarVectorField { p, q, num })
    }

    pub fn p(&self) -> &BivariatePolynomial {
        &self.p
    }

    pub fn q(&self) -> &BivariatePolynomial {
        &self.q
    }

    pub fn degree(&self) -> i64 {
        self.p.degree().max(self.q.degree())
    }

    /// `(P, Q)` at a point, by Horner evaluation.
    #[inline]
    pub fn evaluate(&self, x: f64, y: f64) -> (f64, f64) {
        (self.num.p.eval(x, y), self.num.q.eval(x, y))
    }

    /// Float Jacobian `[[P_x, P_y], [Q_x, Q_y]]`.
    #[inline]
    pub fn jacobian_f64(&self, x: f64, y: f64) -> [[f64; 2]; 2] {
        [
            [self.num.px.eval(x, y), self.num.py.eval(x, y)],
            [self.num.qx.eval(x, y), self.num.qy.eval(x, y)],
        ]
    }

    /// Exact value at a rational point.
    pub fn evaluate_exact(&self, x: &Rational, y: &Rational) -> (Rational, Rational) {
        (self.p.eval(x, y), self.q.eval(x, y))
    }

    pub fn is_singular_at(&self, x: &Rational, y: &Rational) -> bool {
        let (a, b) = self.evaluate_exact(x, y);
        a.is_zero() && b.is_zero()
    }

    /// Exact Jacobian data at a rational point.
    pub fn jacobian_at(&self, x: &Rational, y: &Rational) -> JacobianData {
        JacobianData::from_entries([
            [self.p.partial_x().eval(x, y), self.p.partial_y().eval(x, y)],
            [self.q.partial_x().eval(x, y), self.q.partial_y().eval(x, y)],
        ])
    }

    /// Exact translation: the result `g` satisfies `g(u) = f(u + center)`.
    pub fn recenter(&self, cx: &Rational, cy: &Rational) -> PlanarVectorField {
        PlanarVectorField::new(self.p.shift(cx, cy), self.q.shift(cx, cy))
            .expect("translation preserves a nonzero field")
    }

    /// The field `-f`, whose orbits are those of `f` traversed backwards.
    pub fn negated(&self) -> PlanarVectorField {
        PlanarVectorField::new(-&self.p, -&self.q).expect("negation preserves a nonzero field")
    }
}

impl fmt::Display for PlanarVectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ; {}", self.p, self.q)
    }
}

impl FromStr for PlanarVectorField {
    type Err = PolyError;

    /// Two polynomials separated by `;`: `P ; Q`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (p, q) = s.split_once(';').ok_or(PolyError::Parse {
            pos: 0,
            msg: "field text must be 'P ; Q'".into(),
        })?;
        if q.contains(';') {
            return Err(PolyError::Parse {
                pos: p.len() + 1,
                msg: "field text has more than two components".into(),
            });
        }
        PlanarVectorField::new(parse_polynomial(p)?, parse_polynomial(q)?)
    }
}

impl Serialize for PlanarVectorField {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Exact Jacobian at a point together with its trace, determinant and discriminant.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JacobianData {
    #[serde(serialize_with = "super::serde_rational::matrix")]
    pub entries: [[Rational; 2]; 2],
    #[serde(serialize_with = "super::serde_rational::one")]
    pub trace: Rational,
    #[serde(serialize_with = "super::serde_rational::one")]
    pub det: Rational,
    #[serde(serialize_with = "super::serde_rational::one")]
    pub discriminant: Rational,
}

impl JacobianData {
    pub fn from_entries(entries: [[Rational; 2]; 2]) -> Self {
        let trace = &entries[0][0] + &entries[1][1];
        let det = &entries[0][0] * &entries[1][1] - &entries[0][1] * &entries[1][0];
        let discriminant = &trace * &trace - &det * Rational::from_integer(4.into());
        JacobianData {
            entries,
            trace,
            det,
            discriminant,
        }
    }

    /// Trace, determinant and discriminant agree with the entries.
    pub fn is_consistent(&self) -> bool {
        *self == JacobianData::from_entries(self.entries.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(Zero::is_zero)
    }

    pub fn to_f64(&self) -> [[f64; 2]; 2] {
        let e = |r: &Rational| r.to_f64().unwrap_or(f64::NAN);
        [
            [e(&self.entries[0][0]), e(&self.entries[0][1])],
            [e(&self.entries[1][0]), e(&self.entries[1][1])],
        ]
    }
}

/// `Q(x, y) = F(x) + y G(x) + y^2 R(x, y)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct XySplit {
    pub f: BivariatePolynomial,
    pub g: BivariatePolynomial,
    pub r: BivariatePolynomial,
}

impl XySplit {
    pub fn reassemble(&self) -> BivariatePolynomial {
        let y = BivariatePolynomial::y();
        &(&self.f + &(&y * &self.g)) + &(&(&y * &y) * &self.r)
    }
}

pub fn split_xy(poly: &BivariatePolynomial) -> XySplit {
    let f = poly.y_slice(0);
    let g = poly.y_slice(1);
    let r = BivariatePolynomial::from_terms(
        poly.terms()
            .filter(|(m, _)| m.y >= 2)
            .map(|(m, c)| ((m.x, m.y - 2), c.clone())),
    );
    XySplit { f, g, r }
}
