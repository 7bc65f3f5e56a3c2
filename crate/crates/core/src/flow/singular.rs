use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::{DomainU, FlowError, SingularPoint};
use crate::parallel::{map_range, Parallelism};
use crate::polyfield::{PlanarVectorField, Rational};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FinderConfig {
    /// Cells per side of the scan grid.
    pub grid: usize,
    /// Newton stops once `|f|` drops below this.
    pub newton_tol: f64,
    pub max_newton_iterations: usize,
    /// Numeric points closer than this are merged.
    pub merge_tol: f64,
    /// Largest denominator tried when snapping to exact rationals.
    pub max_denominator: i64,
    pub parallelism: Parallelism,
}

impl Default for FinderConfig {
    fn default() -> Self {
        FinderConfig {
            grid: 256,
            newton_tol: 1e-12,
            max_newton_iterations: 400,
            merge_tol: 1e-8,
            max_denominator: 1_000_000,
            parallelism: Parallelism::default(),
        }
    }
}

/// Zeros of the field in the domain, sorted lexicographically.
///
/// Candidates are local minima of `|f|` on a scan grid. Each is refined by
/// damped Newton (Levenberg-Marquardt when the Jacobian is singular) and then
/// snapped to nearby rationals, which are kept when the field vanishes there
/// exactly.
pub fn find_singularities(
    field: &PlanarVectorField,
    domain: &DomainU,
    cfg: &FinderConfig,
) -> Result<Vec<SingularPoint>, FlowError> {
    let (p, q) = (field.p(), field.q());
    if p.is_zero() || q.is_zero() {
        let other = if p.is_zero() { q } else { p };
        if other.is_constant() {
            return Ok(Vec::new());
        }
    }
    let n = cfg.grid.max(4);
    let dx = domain.width() / n as f64;
    let dy = domain.height() / n as f64;
    let node = |i: usize, j: usize| [domain.x_min() + i as f64 * dx, domain.y_min() + j as f64 * dy];
    let mags: Vec<Vec<f64>> = map_range(n + 1, cfg.parallelism, |j| {
        (0..=n)
            .map(|i| {
                let z = node(i, j);
                let (a, b) = field.evaluate(z[0], z[1]);
                a.hypot(b)
            })
            .collect()
    });

    let candidates: Vec<[f64; 2]> = (0..=n)
        .flat_map(|j| (0..=n).map(move |i| (i, j)))
        .filter(|&(i, j)| {
            let m = mags[j][i];
            let mut spread: f64 = 0.0;
            for (di, dj) in [(-1i64, -1i64), (0, -1), (1, -1), (-1, 0), (1, 0), (-1, 1), (0, 1), (1, 1)] {
                let (ii, jj) = (i as i64 + di, j as i64 + dj);
                if ii < 0 || jj < 0 || ii > n as i64 || jj > n as i64 {
                    continue;
                }
                let v = mags[jj as usize][ii as usize];
                if v < m {
                    return false;
                }
                spread = spread.max(v - m);
            }
            m == 0.0 || m <= 2.0 * spread
        })
        .map(|(i, j)| node(i, j))
        .collect();

    let slack = 1e-9 * domain.diameter();
    let refined: Vec<Option<SingularPoint>> = map_range(candidates.len(), cfg.parallelism, |k| {
        let z = newton(field, candidates[k], cfg)?;
        if !domain.contains_with(z, slack) {
            return None;
        }
        Some(snap(field, z, cfg.max_denominator).unwrap_or(SingularPoint::approx(z[0], z[1])))
    });

    let mut points: Vec<SingularPoint> = Vec::new();
    for cand in refined.into_iter().flatten() {
        if let Some(ex) = &cand.exact {
            let (x, y) = (&ex.0, &ex.1);
            let inside = domain.contains([x.to_f64().unwrap_or(f64::NAN), y.to_f64().unwrap_or(f64::NAN)]);
            if !inside {
                continue;
            }
        }
        merge_into(&mut points, cand, cfg.merge_tol);
    }
    // exact points absorb numeric neighbours
    let exact: Vec<[f64; 2]> = points.iter().filter(|p| p.exact.is_some()).map(|p| p.approx).collect();
    points.retain(|p| p.exact.is_some() || !exact.iter().any(|e| dist(*e, p.approx) < 1e-6));

    let bound = bezout_bound(field);
    if points.len() > bound {
        return Err(FlowError::NonIsolatedZeroSet {
            found: points.len(),
            bound,
        });
    }
    points.sort_by(|a, b| {
        a.approx[0]
            .total_cmp(&b.approx[0])
            .then(a.approx[1].total_cmp(&b.approx[1]))
    });
    Ok(points)
}

fn bezout_bound(field: &PlanarVectorField) -> usize {
    let (dp, dq) = (field.p().degree(), field.q().degree());
    if dp <= 0 || dq <= 0 {
        // one component is constant or zero: any zero set is a curve or empty
        return 0;
    }
    (dp * dq) as usize
}

fn merge_into(points: &mut Vec<SingularPoint>, cand: SingularPoint, tol: f64) {
    for p in points.iter_mut() {
        let same = match (&p.exact, &cand.exact) {
            (Some(a), Some(b)) => a == b,
            _ => dist(p.approx, cand.approx) < tol,
        };
        if same {
            if p.exact.is_none() && cand.exact.is_some() {
                *p = cand;
            }
            return;
        }
    }
    points.push(cand);
}

fn dist(a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

fn norm(z: [f64; 2], field: &PlanarVectorField) -> f64 {
    let (a, b) = field.evaluate(z[0], z[1]);
    a.hypot(b)
}

fn newton(field: &PlanarVectorField, start: [f64; 2], cfg: &FinderConfig) -> Option<[f64; 2]> {
    let mut z = start;
    let mut r = norm(z, field);
    let mut mu = 1e-3;
    for _ in 0..cfg.max_newton_iterations {
        if r == 0.0 {
            return Some(z);
        }
        let (f0, f1) = field.evaluate(z[0], z[1]);
        let j = field.jacobian_f64(z[0], z[1]);
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        let scale = j.iter().flatten().map(|v| v.abs()).fold(0.0, f64::max);
        let mut next = None;
        if det.abs() > 1e-14 * scale * scale && det.is_finite() {
            let d = [
                -(j[1][1] * f0 - j[0][1] * f1) / det,
                -(-j[1][0] * f0 + j[0][0] * f1) / det,
            ];
            let mut t = 1.0;
            for _ in 0..30 {
                let w = [z[0] + t * d[0], z[1] + t * d[1]];
                let rw = norm(w, field);
                if rw < r {
                    next = Some((w, rw));
                    break;
                }
                t *= 0.5;
            }
        }
        if next.is_none() {
            // Levenberg-Marquardt on the normal equations
            let g = [j[0][0] * f0 + j[1][0] * f1, j[0][1] * f0 + j[1][1] * f1];
            let a = j[0][0] * j[0][0] + j[1][0] * j[1][0];
            let b = j[0][0] * j[0][1] + j[1][0] * j[1][1];
            let c = j[0][1] * j[0][1] + j[1][1] * j[1][1];
            for _ in 0..40 {
                let (aa, cc) = (a + mu, c + mu);
                let dd = aa * cc - b * b;
                if dd == 0.0 || !dd.is_finite() {
                    mu *= 10.0;
                    continue;
                }
                let d = [-(cc * g[0] - b * g[1]) / dd, -(-b * g[0] + aa * g[1]) / dd];
                let w = [z[0] + d[0], z[1] + d[1]];
                let rw = norm(w, field);
                if rw < r {
                    mu = (mu / 3.0).max(1e-300);
                    next = Some((w, rw));
                    break;
                }
                mu *= 4.0;
            }
        }
        match next {
            Some((w, rw)) => {
                let step = dist(w, z);
                z = w;
                r = rw;
                if r < cfg.newton_tol * 1e-3 || step <= 1e-15 * (1.0 + z[0].abs() + z[1].abs()) {
                    break;
                }
            }
            None => break,
        }
    }
    (r < cfg.newton_tol).then_some(z)
}

/// Continued-fraction convergents of `x` with denominators up to `max_den`.
pub fn convergents(x: f64, max_den: i64) -> Vec<Rational> {
    let mut out = Vec::new();
    if !x.is_finite() {
        return out;
    }
    let (mut h0, mut h1) = (BigInt::from(0), BigInt::from(1));
    let (mut k0, mut k1) = (BigInt::from(1), BigInt::from(0));
    let mut v = x;
    for _ in 0..40 {
        let a = v.floor();
        let Some(ai) = BigInt::from_float(a) else {
            break;
        };
        let h2 = &ai * &h1 + &h0;
        let k2 = &ai * &k1 + &k0;
        if k2 > BigInt::from(max_den) {
            break;
        }
        out.push(Rational::new(h2.clone(), k2.clone()));
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let frac = v - a;
        if frac < 1e-15 {
            break;
        }
        v = 1.0 / frac;
    }
    out
}

trait FromFloat: Sized {
    fn from_float(v: f64) -> Option<Self>;
}

impl FromFloat for BigInt {
    fn from_float(v: f64) -> Option<Self> {
        num_traits::FromPrimitive::from_f64(v)
    }
}

fn snap(field: &PlanarVectorField, z: [f64; 2], max_den: i64) -> Option<SingularPoint> {
    let xs = convergents(z[0], max_den);
    let ys = convergents(z[1], max_den);
    let close = |r: &Rational, v: f64| (r.to_f64().unwrap_or(f64::NAN) - v).abs() <= 1e-4 * (1.0 + v.abs());
    for x in xs.iter().filter(|r| close(r, z[0])) {
        for y in ys.iter().filter(|r| close(r, z[1])) {
            if field.is_singular_at(x, y) {
                return Some(SingularPoint::exact(x.clone(), y.clone()));
            }
        }
    }
    None
}
