use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::Rational;

/// Exponent pair of a monomial `x^x * y^y`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    pub x: u32,
    pub y: u32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { x: 0, y: 0 };

    pub fn new(x: u32, y: u32) -> Self {
        Monomial { x, y }
    }

    pub fn total(self) -> u32 {
        self.x + self.y
    }
}

/// Sparse polynomial in `x` and `y` with exact rational coefficients.
///
/// No stored coefficient is ever zero, so structural equality is
/// polynomial equality.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct BivariatePolynomial {
    terms: BTreeMap<Monomial, Rational>,
}

pub fn rational(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

impl BivariatePolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(c, 0, 0)
    }

    pub fn x() -> Self {
        Self::monomial(Rational::one(), 1, 0)
    }

    pub fn y() -> Self {
        Self::monomial(Rational::one(), 0, 1)
    }

    pub fn monomial(c: Rational, x: u32, y: u32) -> Self {
        let mut p = Self::zero();
        p.add_term(Monomial::new(x, y), c);
        p
    }

    pub fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = ((u32, u32), Rational)>,
    {
        let mut p = Self::zero();
        for ((i, j), c) in terms {
            p.add_term(Monomial::new(i, j), c);
        }
        p
    }

    /// Univariate polynomial in `x` from ascending coefficients.
    pub fn from_x_coeffs(coeffs: &[Rational]) -> Self {
        Self::from_terms(
            coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| ((i as u32, 0), c.clone())),
        )
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(m).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree, `-1` for the zero polynomial.
    pub fn degree(&self) -> i64 {
        self.terms
            .keys()
            .map(|m| m.total() as i64)
            .max()
            .unwrap_or(-1)
    }

    /// Lowest total degree among the stored terms, `None` for zero.
    pub fn min_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.total()).min()
    }

    pub fn degree_x(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.x).max()
    }

    pub fn degree_y(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.y).max()
    }

    pub fn coeff(&self, x: u32, y: u32) -> Rational {
        self.terms
            .get(&Monomial::new(x, y))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (Monomial, &Rational)> {
        self.terms.iter().map(|(m, c)| (*m, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in canonical order: total degree descending, then x-degree descending.
    pub fn canonical_terms(&self) -> Vec<(Monomial, &Rational)> {
        let mut v: Vec<_> = self.terms().collect();
        v.sort_by(|(a, _), (b, _)| b.total().cmp(&a.total()).then(b.x.cmp(&a.x)));
        v
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.total() == 0)
    }

    /// True when no term involves `y`.
    pub fn is_univariate_x(&self) -> bool {
        self.terms.keys().all(|m| m.y == 0)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        BivariatePolynomial {
            terms: self.terms.iter().map(|(m, v)| (*m, v * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn partial_x(&self) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .filter(|(m, _)| m.x > 0)
                .map(|(m, c)| ((m.x - 1, m.y), c * int(m.x as i64))),
        )
    }

    pub fn partial_y(&self) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .filter(|(m, _)| m.y > 0)
                .map(|(m, c)| ((m.x, m.y - 1), c * int(m.y as i64))),
        )
    }

    /// `k`-th derivative in `x`.
    pub fn derivative_x(&self, k: u32) -> Self {
        (0..k).fold(self.clone(), |p, _| p.partial_x())
    }

    /// Exact value at a rational point.
    pub fn eval(&self, x: &Rational, y: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            acc += c * pow_rational(x, m.x) * pow_rational(y, m.y);
        }
        acc
    }

    /// Exact value of a univariate-in-`x` restriction at `y = 0`.
    pub fn eval_x(&self, x: &Rational) -> Rational {
        self.eval(x, &Rational::zero())
    }

    /// Homogeneous part of total degree `d`.
    pub fn homogeneous_part(&self, d: u32) -> Self {
        BivariatePolynomial {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.total() == d)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    /// Collect the terms with `y`-degree exactly `j`, returned with `y^j` divided out.
    pub fn y_slice(&self, j: u32) -> Self {
        BivariatePolynomial {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.y == j)
                .map(|(m, c)| (Monomial::new(m.x, 0), c.clone()))
                .collect(),
        }
    }

    /// Exact Taylor shift: the returned polynomial `g` satisfies `g(u, v) = p(u + a, v + b)`.
    pub fn shift(&self, a: &Rational, b: &Rational) -> Self {
        if a.is_zero() && b.is_zero() {
            return self.clone();
        }
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let xs = binomial_expand(a, m.x);
            let ys = binomial_expand(b, m.y);
            for (i, cx) in xs.iter().enumerate() {
                if cx.is_zero() {
                    continue;
                }
                for (j, cy) in ys.iter().enumerate() {
                    if cy.is_zero() {
                        continue;
                    }
                    out.add_term(Monomial::new(i as u32, j as u32), c * cx * cy);
                }
            }
        }
        out
    }

    /// Substitute `(x, y) -> (sx * x, sy * y)` with `sx, sy` in `{1, -1}`.
    pub fn reflect(&self, flip_x: bool, flip_y: bool) -> Self {
        BivariatePolynomial {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let odd = (flip_x && m.x % 2 == 1) ^ (flip_y && m.y % 2 == 1);
                    (*m, if odd { -c.clone() } else { c.clone() })
                })
                .collect(),
        }
    }

    /// Lowest-degree term of a univariate polynomial in `x`: `(degree, coefficient)`.
    pub fn lowest_x_term(&self) -> Option<(u32, Rational)> {
        self.terms
            .iter()
            .filter(|(m, _)| m.y == 0)
            .min_by_key(|(m, _)| m.x)
            .map(|(m, c)| (m.x, c.clone()))
    }

    /// Highest power of `x` dividing every term.
    pub fn x_valuation(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.x).min()
    }

    /// Float coefficients, used by the numerical evaluators.
    pub fn to_float(&self) -> FloatPoly {
        FloatPoly::from_poly(self)
    }
}

fn pow_rational(base: &Rational, e: u32) -> Rational {
    num_traits::pow::pow(base.clone(), e as usize)
}

/// Coefficients of `(t + a)^n` in ascending powers of `t`.
fn binomial_expand(a: &Rational, n: u32) -> Vec<Rational> {
    let n = n as usize;
    let mut out = Vec::with_capacity(n + 1);
    let mut binom = BigInt::one();
    for k in 0..=n {
        // coefficient of t^k is C(n,k) a^(n-k)
        out.push(Rational::from_integer(binom.clone()) * pow_rational(a, (n - k) as u32));
        binom = binom * BigInt::from(n - k) / BigInt::from(k + 1);
    }
    out
}

impl Add for &BivariatePolynomial {
    type Output = BivariatePolynomial;
    fn add(self, rhs: &BivariatePolynomial) -> BivariatePolynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, c.clone());
        }
        out
    }
}

impl Sub for &BivariatePolynomial {
    type Output = BivariatePolynomial;
    fn sub(self, rhs: &BivariatePolynomial) -> BivariatePolynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, -c.clone());
        }
        out
    }
}

impl Mul for &BivariatePolynomial {
    type Output = BivariatePolynomial;
    fn mul(self, rhs: &BivariatePolynomial) -> BivariatePolynomial {
        let mut out = BivariatePolynomial::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(Monomial::new(ma.x + mb.x, ma.y + mb.y), ca * cb);
            }
        }
        out
    }
}

impl Neg for &BivariatePolynomial {
    type Output = BivariatePolynomial;
    fn neg(self) -> BivariatePolynomial {
        BivariatePolynomial {
            terms: self.terms.iter().map(|(m, c)| (*m, -c.clone())).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for BivariatePolynomial {
            type Output = BivariatePolynomial;
            fn $f(self, rhs: BivariatePolynomial) -> BivariatePolynomial {
                (&self).$f(&rhs)
            }
        }
        impl $tr<&BivariatePolynomial> for BivariatePolynomial {
            type Output = BivariatePolynomial;
            fn $f(self, rhs: &BivariatePolynomial) -> BivariatePolynomial {
                (&self).$f(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for BivariatePolynomial {
    type Output = BivariatePolynomial;
    fn neg(self) -> BivariatePolynomial {
        -&self
    }
}

pub(crate) fn fmt_rational(c: &Rational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

fn fmt_monomial(m: Monomial) -> String {
    let mut parts = Vec::new();
    match m.x {
        0 => {}
        1 => parts.push("x".to_string()),
        e => parts.push(format!("x^{e}")),
    }
    match m.y {
        0 => {}
        1 => parts.push("y".to_string()),
        e => parts.push(format!("y^{e}")),
    }
    parts.join("*")
}

impl fmt::Display for BivariatePolynomial {
    /// Canonical text: expanded, terms sorted by total degree then x-degree, descending.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (idx, (m, c)) in self.canonical_terms().into_iter().enumerate() {
            let negative = c.is_negative();
            if negative {
                f.write_str("-")?;
            } else if idx > 0 {
                f.write_str("+")?;
            }
            let mag = c.abs();
            if m == Monomial::ONE {
                f.write_str(&fmt_rational(&mag))?;
            } else if mag.is_one() {
                f.write_str(&fmt_monomial(m))?;
            } else {
                write!(f, "{}*{}", fmt_rational(&mag), fmt_monomial(m))?;
            }
        }
        Ok(())
    }
}

/// Dense float copy of a polynomial: `rows[j][i]` is the coefficient of `x^i y^j`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct FloatPoly {
    rows: Vec<Vec<f64>>,
}

impl FloatPoly {
    pub fn from_poly(p: &BivariatePolynomial) -> Self {
        let ny = p.degree_y().map(|d| d as usize + 1).unwrap_or(0);
        let mut rows = vec![Vec::new(); ny];
        for (m, c) in p.terms() {
            let row = &mut rows[m.y as usize];
            if row.len() <= m.x as usize {
                row.resize(m.x as usize + 1, 0.0);
            }
            row[m.x as usize] = c.to_f64().unwrap_or(f64::NAN);
        }
        FloatPoly { rows }
    }

    /// Nested Horner evaluation.
    #[inline]
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        let mut acc = 0.0;
        for row in self.rows.iter().rev() {
            let mut r = 0.0;
            for c in row.iter().rev() {
                r = r * x + c;
            }
            acc = acc * y + r;
        }
        acc
    }
}
