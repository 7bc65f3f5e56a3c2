use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::NormalFormError;
use crate::polyfield::{fmt_rational, int, serde_rational, BivariatePolynomial, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "=")]
    Eq,
    #[serde(rename = "<")]
    Lt,
    #[serde(rename = ">")]
    Gt,
}

impl Relation {
    pub fn holds(self, actual: &Rational, value: &Rational) -> bool {
        match self {
            Relation::Eq => actual == value,
            Relation::Lt => actual < value,
            Relation::Gt => actual > value,
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Eq => "=",
            Relation::Lt => "<",
            Relation::Gt => ">",
        })
    }
}

/// `f^(order)(location) <relation> value`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DerivativeConstraint {
    pub order: u32,
    pub relation: Relation,
    #[serde(serialize_with = "serde_rational::one")]
    pub value: Rational,
}

impl DerivativeConstraint {
    pub fn new(order: u32, relation: Relation, value: Rational) -> Self {
        DerivativeConstraint {
            order,
            relation,
            value,
        }
    }
}

impl fmt::Display for DerivativeConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let primes = if self.order <= 3 {
            "'".repeat(self.order as usize)
        } else {
            format!("^({})", self.order)
        };
        write!(f, "f{primes} {} {}", self.relation, fmt_rational(&self.value))
    }
}

impl FromStr for DerivativeConstraint {
    type Err = NormalFormError;

    /// `f' = -1`, `f'' < 0`, `f^(4) > 1/2`, or `f = 0` for the value itself.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse_with(s, |v| crate::polyfield::parse_rational(v).ok())
    }
}

impl DerivativeConstraint {
    /// Parses the constraint text, evaluating the right-hand side with `value`.
    pub fn parse_with<V>(s: &str, value: V) -> Result<Self, NormalFormError>
    where
        V: Fn(&str) -> Option<Rational>,
    {
        let bad = || NormalFormError::BadConstraint(s.to_string());
        let (pos, relation) = s
            .char_indices()
            .find_map(|(i, c)| match c {
                '=' => Some((i, Relation::Eq)),
                '<' => Some((i, Relation::Lt)),
                '>' => Some((i, Relation::Gt)),
                _ => None,
            })
            .ok_or_else(bad)?;
        let lhs: String = s[..pos].chars().filter(|c| !c.is_whitespace()).collect();
        let rest = lhs.strip_prefix('f').ok_or_else(bad)?;
        let order = if let Some(inner) = rest.strip_prefix("^(").and_then(|r| r.strip_suffix(')')) {
            inner.parse::<u32>().map_err(|_| bad())?
        } else if rest.chars().all(|c| c == '\'') {
            rest.len() as u32
        } else {
            return Err(bad());
        };
        let value = value(s[pos + 1..].trim()).ok_or_else(bad)?;
        Ok(DerivativeConstraint {
            order,
            relation,
            value,
        })
    }
}

/// A root of `f` at `location` of the given multiplicity, with extra
/// conditions on derivatives there.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HermiteConstraint {
    #[serde(serialize_with = "serde_rational::one")]
    pub location: Rational,
    pub multiplicity: u32,
    pub derivatives: Vec<DerivativeConstraint>,
}

impl HermiteConstraint {
    pub fn new(location: Rational, multiplicity: u32, derivatives: Vec<DerivativeConstraint>) -> Self {
        HermiteConstraint {
            location,
            multiplicity,
            derivatives,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct HermiteProblem {
    pub constraints: Vec<HermiteConstraint>,
    /// Fixes the leading coefficient of the solution.
    #[serde(serialize_with = "serde_rational::opt")]
    pub leading_coefficient: Option<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InequalityCheck {
    #[serde(serialize_with = "serde_rational::one")]
    pub location: Rational,
    pub constraint: String,
    #[serde(serialize_with = "serde_rational::one")]
    pub actual: Rational,
    pub satisfied: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HermiteSolution {
    /// Univariate polynomial in `x`.
    #[serde(serialize_with = "ser_poly")]
    pub poly: BivariatePolynomial,
    pub inequalities: Vec<InequalityCheck>,
}

fn ser_poly<S: serde::Serializer>(p: &BivariatePolynomial, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(p)
}

/// Solves Gaussian elimination `a x = b` over the rationals.
fn solve_linear(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let inv = Rational::one() / &a[col][col];
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let factor = &a[r][col] * &inv;
            let pivot = a[col].clone();
            for (x, p) in a[r].iter_mut().zip(&pivot).skip(col) {
                *x -= &factor * p;
            }
            let v = &factor * &b[col];
            b[r] -= v;
        }
    }
    Some((0..n).map(|i| &b[i] / &a[i][i]).collect())
}

fn leading_x_coefficient(p: &BivariatePolynomial) -> Rational {
    p.degree_x().map(|d| p.coeff(d, 0)).unwrap_or_else(Rational::zero)
}

/// Minimal-degree `f = c(x) prod (x - x_i)^(m_i)` meeting every equality
/// constraint; `c` has one coefficient per equality. Inequalities are then
/// evaluated and reported, and any violation is an error.
pub fn hermite_solve(problem: &HermiteProblem) -> Result<HermiteSolution, NormalFormError> {
    let cs = &problem.constraints;
    for (i, a) in cs.iter().enumerate() {
        if a.multiplicity == 0 {
            return Err(NormalFormError::BadConstraint(format!(
                "multiplicity at {} must be at least 1",
                fmt_rational(&a.location)
            )));
        }
        if cs[i + 1..].iter().any(|b| b.location == a.location) {
            return Err(NormalFormError::DuplicateLocation(fmt_rational(&a.location)));
        }
    }
    let x = BivariatePolynomial::x();
    let w = cs.iter().fold(BivariatePolynomial::one(), |acc, c| {
        let factor = &x - &BivariatePolynomial::constant(c.location.clone());
        &acc * &factor.pow(c.multiplicity)
    });

    // equations: (location, order, value); orders below the multiplicity are implied
    let mut equations = Vec::new();
    for c in cs {
        for d in &c.derivatives {
            if d.relation != Relation::Eq {
                continue;
            }
            if d.order < c.multiplicity {
                if !d.value.is_zero() {
                    return Err(NormalFormError::Inconsistent(format!(
                        "f^({}) at {} vanishes by multiplicity {}",
                        d.order,
                        fmt_rational(&c.location),
                        c.multiplicity
                    )));
                }
                continue;
            }
            equations.push((c.location.clone(), d.order, d.value.clone()));
        }
    }
    let unknowns = equations.len() + usize::from(problem.leading_coefficient.is_some());
    if unknowns == 0 {
        return Err(NormalFormError::UnderDetermined);
    }
    let basis: Vec<BivariatePolynomial> = (0..unknowns)
        .map(|j| &BivariatePolynomial::monomial(Rational::one(), j as u32, 0) * &w)
        .collect();
    let mut a = Vec::with_capacity(unknowns);
    let mut b = Vec::with_capacity(unknowns);
    for (loc, order, value) in &equations {
        a.push(basis.iter().map(|p| p.derivative_x(*order).eval_x(loc)).collect());
        b.push(value.clone());
    }
    if let Some(lc) = &problem.leading_coefficient {
        let mut row = vec![Rational::zero(); unknowns];
        row[unknowns - 1] = leading_x_coefficient(&w);
        a.push(row);
        b.push(lc.clone());
    }
    let coeffs = solve_linear(a, b).ok_or(NormalFormError::NotPoised)?;
    let poly = basis
        .iter()
        .zip(&coeffs)
        .fold(BivariatePolynomial::zero(), |acc, (p, c)| &acc + &p.scale(c));
    if poly.is_zero() {
        return Err(NormalFormError::Inconsistent("the only solution is f = 0".into()));
    }

    let mut inequalities = Vec::new();
    for c in cs {
        for d in &c.derivatives {
            let actual = poly.derivative_x(d.order).eval_x(&c.location);
            debug_assert!(d.relation != Relation::Eq || actual == d.value);
            if d.relation == Relation::Eq {
                continue;
            }
            let satisfied = d.relation.holds(&actual, &d.value);
            inequalities.push(InequalityCheck {
                location: c.location.clone(),
                constraint: d.to_string(),
                actual,
                satisfied,
            });
        }
    }
    if let Some(v) = inequalities.iter().find(|v| !v.satisfied) {
        return Err(NormalFormError::InfeasibleInequalities {
            location: fmt_rational(&v.location),
            constraint: v.constraint.clone(),
            actual: fmt_rational(&v.actual),
        });
    }
    Ok(HermiteSolution { poly, inequalities })
}

/// The Whorl problem: a simple root at 0 with `f'(0) = -1` and double roots
/// at `+-1` with `f''(1) < 0 < f''(-1)`.
pub fn whorl_problem() -> HermiteProblem {
    use Relation::*;
    HermiteProblem {
        constraints: vec![
            HermiteConstraint::new(int(0), 1, vec![DerivativeConstraint::new(1, Eq, int(-1))]),
            HermiteConstraint::new(int(1), 2, vec![DerivativeConstraint::new(2, Lt, int(0))]),
            HermiteConstraint::new(int(-1), 2, vec![DerivativeConstraint::new(2, Gt, int(0))]),
        ],
        leading_coefficient: None,
    }
}

/// Polynomial pendulum: simple roots at `0, +-pi` with `f'(0) = -1` and
/// `f'(+-pi) > 0`, for a rational stand-in `pi`.
pub fn pendulum_problem(pi: &Rational) -> HermiteProblem {
    use Relation::*;
    HermiteProblem {
        constraints: vec![
            HermiteConstraint::new(int(0), 1, vec![DerivativeConstraint::new(1, Eq, int(-1))]),
            HermiteConstraint::new(pi.clone(), 1, vec![DerivativeConstraint::new(1, Gt, int(0))]),
            HermiteConstraint::new(-pi.clone(), 1, vec![DerivativeConstraint::new(1, Gt, int(0))]),
        ],
        leading_coefficient: None,
    }
}
