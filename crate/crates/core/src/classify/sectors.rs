//! Empirical sector decomposition around an isolated singular point.
//!
//! Test orbits are launched from a ring of points around the singularity and
//! followed in both time directions. Each end either reaches the point,
//! escapes the neighbourhood, or winds around it. Contiguous runs of launch
//! points with the same behaviour form the sectors; a jump of the total polar
//! angle swept by neighbouring orbits marks a separatrix between two sectors
//! of the same type.
//!
//! Near nilpotent points the orbits are flattened along the `x` axis
//! (`y ~ x^alpha`), so distances and angles are measured after the
//! homeomorphism `(x, y) -> (x, sign(y) |y|^(1/alpha))`. Sector counts are
//! topological and do not depend on the choice of `alpha`, but a ring that is
//! round in the rescaled picture keeps every test orbit local.

use std::f64::consts::{PI, TAU};

use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::nilpotent::classify_nilpotent;
use crate::flow::ode::{drive, unit_direction, Control, DriveEnd, StepControl, Vec2};
use crate::flow::SingularPoint;
use crate::parallel::{map_range, Parallelism};
use crate::polyfield::{BivariatePolynomial, PlanarVectorField, Rational};

/// Which component ordering the characteristic-direction function uses.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DirectionFormula {
    /// `cos(t) X_m(cos t, sin t) - sin(t) Y_m(cos t, sin t)`.
    #[default]
    Direct,
    /// `cos(t) Y_m(cos t, sin t) - sin(t) X_m(cos t, sin t)`: zeros are the
    /// radial directions of the leading homogeneous field.
    Radial,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SectorConfig {
    pub formula: DirectionFormula,
    /// Grid size for the sign-change scan of the direction function.
    pub direction_samples: usize,
    pub bisection_tol: f64,
    /// Number of launch points on the ring.
    pub sweep_samples: usize,
    /// An orbit reaches the point when it enters `radius * reach_fraction`.
    pub reach_fraction: f64,
    /// An orbit escapes when it leaves `radius * escape_factor`.
    pub escape_factor: f64,
    /// Arclength budget per orbit end, in units of `radius`.
    pub arclength_budget: f64,
    /// Exponent `alpha` of the rescaling; `None` derives it from the nilpotent
    /// normal form when available and uses 1 otherwise.
    pub y_weight: Option<f64>,
    /// Runs shorter than this are separatrix crossings, not sectors.
    pub min_arc_samples: usize,
    /// Swept-angle difference between neighbours that marks a separatrix.
    pub jump_threshold: f64,
    /// Largest tolerated fraction of launch points with no verdict.
    pub max_undetermined_fraction: f64,
    /// Bisection steps locating each boundary between two launch points.
    pub boundary_bisections: usize,
    pub rtol: f64,
    pub atol: f64,
    pub parallelism: Parallelism,
}

impl Default for SectorConfig {
    fn default() -> Self {
        SectorConfig {
            formula: DirectionFormula::Direct,
            direction_samples: 4096,
            bisection_tol: 1e-12,
            sweep_samples: 720,
            reach_fraction: 1.0 / 50.0,
            escape_factor: 4.0,
            arclength_budget: 20.0,
            y_weight: None,
            min_arc_samples: 3,
            jump_threshold: PI / 2.0,
            max_undetermined_fraction: 0.05,
            boundary_bisections: 40,
            rtol: 1e-9,
            atol: 1e-12,
            parallelism: Parallelism::default(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SectorKind {
    Hyperbolic,
    Parabolic,
    Elliptic,
    Rotational,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SectorArc {
    pub kind: SectorKind,
    /// Angles (original coordinates) of the first and last launch point.
    pub start: f64,
    pub end: f64,
    pub samples: usize,
}

/// Zeros of the characteristic-direction function of the leading homogeneous part.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct CharacteristicDirections {
    /// Degree of the leading homogeneous part.
    pub degree: Option<u32>,
    pub angles: Vec<f64>,
    pub identically_zero: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SectorProfile {
    pub e: u32,
    pub h: u32,
    pub p: u32,
    /// Characteristic directions (radians).
    pub directions: Vec<f64>,
    pub direction_degree: Option<u32>,
    /// Angles where sector boundaries cross the launch ring.
    pub boundaries: Vec<f64>,
    /// Points where sector boundaries cross the launch ring.
    pub boundary_points: Vec<[f64; 2]>,
    pub arcs: Vec<SectorArc>,
    /// No hyperbolic or elliptic sector: node, focus or center.
    pub trivial: bool,
    pub radius: f64,
    pub y_weight: f64,
}

impl SectorProfile {
    pub fn parity_ok(&self) -> bool {
        self.e % 2 == self.h % 2
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SectorError {
    #[error("{undetermined} of {samples} test orbits were inconclusive; shrink the radius")]
    TooManyNearMisses { undetermined: usize, samples: usize },
    #[error("sector counts e={e}, h={h} violate the parity rule")]
    ParityViolation { e: u32, h: u32 },
    #[error("radius must be positive and finite")]
    InvalidRadius,
}

/// Taylor polynomials of the field at the point, exactly when possible.
fn local_polys(field: &PlanarVectorField, point: &SingularPoint) -> (BivariatePolynomial, BivariatePolynomial, bool) {
    match &point.exact {
        Some((x, y)) => {
            let g = field.recenter(x, y);
            (g.p().clone(), g.q().clone(), true)
        }
        None => {
            let x = Rational::from_float(point.approx[0]).unwrap_or_else(Rational::zero);
            let y = Rational::from_float(point.approx[1]).unwrap_or_else(Rational::zero);
            let g = field.recenter(&x, &y);
            (g.p().clone(), g.q().clone(), false)
        }
    }
}

/// Drop coefficients that are rounding noise of a numerically located point.
fn clean(p: &BivariatePolynomial, tol: f64) -> BivariatePolynomial {
    BivariatePolynomial::from_terms(
        p.terms()
            .filter(|(_, c)| c.to_f64().map(|v| v.abs() > tol).unwrap_or(true))
            .map(|(m, c)| ((m.x, m.y), c.clone())),
    )
}

/// Characteristic directions of the leading homogeneous part at `point`.
pub fn characteristic_directions(
    field: &PlanarVectorField,
    point: &SingularPoint,
    cfg: &SectorConfig,
) -> CharacteristicDirections {
    let (mut p, mut q, exact) = local_polys(field, point);
    if !exact {
        p = clean(&p, 1e-9);
        q = clean(&q, 1e-9);
    }
    let m = match (p.min_degree(), q.min_degree()) {
        (Some(a), Some(b)) => a.min(b),
        (Some(a), None) => a,
        (None, Some(b)) => b,
        (None, None) => return CharacteristicDirections::default(),
    };
    let xm = p.homogeneous_part(m);
    let ym = q.homogeneous_part(m);
    let (first, second) = match cfg.formula {
        DirectionFormula::Direct => (&xm, &ym),
        DirectionFormula::Radial => (&ym, &xm),
    };
    let x = BivariatePolynomial::x();
    let y = BivariatePolynomial::y();
    let g = &(&x * first) - &(&y * second);
    if g.is_zero() {
        return CharacteristicDirections {
            degree: Some(m),
            angles: Vec::new(),
            identically_zero: true,
        };
    }
    let gf = g.to_float();
    let f = |t: f64| gf.eval(t.cos(), t.sin());
    let n = cfg.direction_samples.max(8);
    let mut angles = Vec::new();
    let step = TAU / n as f64;
    for i in 0..n {
        let (a, b) = (i as f64 * step, (i + 1) as f64 * step);
        let (fa, fb) = (f(a), f(b));
        if fa == 0.0 {
            angles.push(a);
        } else if fa * fb < 0.0 {
            let (mut lo, mut hi, mut flo) = (a, b, fa);
            while hi - lo > cfg.bisection_tol {
                let mid = 0.5 * (lo + hi);
                let fm = f(mid);
                if fm == 0.0 {
                    lo = mid;
                    hi = mid;
                    break;
                }
                if fm * flo < 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                    flo = fm;
                }
            }
            angles.push(0.5 * (lo + hi));
        }
    }
    CharacteristicDirections {
        degree: Some(m),
        angles,
        identically_zero: false,
    }
}

/// Rescaling exponent for the ring: `min((k + 1) / 2, n + 1)` at nilpotent
/// points in normal form, 1 elsewhere.
pub fn natural_y_weight(field: &PlanarVectorField, point: &SingularPoint) -> f64 {
    let Some((x, y)) = &point.exact else {
        return 1.0;
    };
    match classify_nilpotent(field, (x, y)) {
        Ok((_, d)) => {
            let from_f = (d.k as f64 + 1.0) / 2.0;
            match d.n {
                Some(n) => from_f.min(n as f64 + 1.0),
                None => from_f,
            }
        }
        Err(_) => 1.0,
    }
}

#[derive(Clone, Copy, Debug)]
struct Gauge {
    center: Vec2,
    alpha: f64,
}

impl Gauge {
    #[inline]
    fn ring_coords(&self, z: Vec2) -> Vec2 {
        let dx = z[0] - self.center[0];
        let dy = z[1] - self.center[1];
        let yy = if self.alpha == 1.0 {
            dy
        } else {
            dy.signum() * dy.abs().powf(1.0 / self.alpha)
        };
        [dx, yy]
    }

    #[inline]
    fn plane_coords(&self, w: Vec2) -> Vec2 {
        let dy = if self.alpha == 1.0 {
            w[1]
        } else {
            w[1].signum() * w[1].abs().powf(self.alpha)
        };
        [self.center[0] + w[0], self.center[1] + dy]
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum EndFate {
    Reach,
    Escape,
    Winds,
    Undetermined,
}

#[derive(Clone, Copy, Debug)]
struct End {
    fate: EndFate,
    swept: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum SampleKind {
    Hyperbolic,
    Parabolic,
    Elliptic,
    Rotational,
    Undetermined,
}

#[inline]
fn wrap(a: f64) -> f64 {
    let mut a = (a + PI) % TAU;
    if a < 0.0 {
        a += TAU;
    }
    a - PI
}

fn follow(
    field: &PlanarVectorField,
    gauge: &Gauge,
    start: Vec2,
    sign: f64,
    radius: f64,
    cfg: &SectorConfig,
) -> End {
    let reach = radius * cfg.reach_fraction;
    let escape = radius * cfg.escape_factor;
    let budget = radius * cfg.arclength_budget;
    let rhs = |z: Vec2| {
        let (a, b) = field.evaluate(z[0], z[1]);
        unit_direction([a, b], sign)
    };
    let ctl = StepControl {
        rtol: cfg.rtol,
        atol: cfg.atol,
        h_init: radius * 1e-3,
        h_min: radius * 1e-13,
    };
    let center = gauge.center;
    let h_max = |z: Vec2| {
        let d = (z[0] - center[0]).hypot(z[1] - center[1]);
        (0.05 * radius).min(0.25 * d.max(radius * 1e-9))
    };
    let w0 = gauge.ring_coords(start);
    let mut phi = w0[1].atan2(w0[0]);
    let mut swept = 0.0;
    let mut travelled = 0.0;
    let mut fate = EndFate::Undetermined;
    let end = drive(&rhs, start, &ctl, 200_000, h_max, |_, z, h| {
        travelled += h;
        let w = gauge.ring_coords(z);
        let rho = w[0].hypot(w[1]);
        let next = w[1].atan2(w[0]);
        swept += wrap(next - phi);
        phi = next;
        if rho < reach {
            fate = EndFate::Reach;
        } else if rho > escape {
            fate = EndFate::Escape;
        } else if swept.abs() >= TAU {
            fate = EndFate::Winds;
        } else if travelled > budget {
            fate = EndFate::Undetermined;
            return Control::Stop;
        } else {
            return Control::Continue;
        }
        Control::Stop
    });
    if end != DriveEnd::Stopped {
        fate = EndFate::Undetermined;
    }
    End { fate, swept }
}

fn sample_kind(fwd: EndFate, bwd: EndFate) -> SampleKind {
    use EndFate::*;
    match (fwd, bwd) {
        (Undetermined, _) | (_, Undetermined) => SampleKind::Undetermined,
        (Winds, _) | (_, Winds) => SampleKind::Rotational,
        (Reach, Reach) => SampleKind::Elliptic,
        (Escape, Escape) => SampleKind::Hyperbolic,
        _ => SampleKind::Parabolic,
    }
}

/// Bisects the launch ring between two samples on either side of a sector
/// boundary. A probe belongs to the side whose kind it shares and, for equal
/// kinds, whose swept angle it is closer to; a probe of a third kind lies on
/// the separatrix itself.
fn refine_boundary<F>(probe: &F, mut lo: f64, a: (SampleKind, f64), mut hi: f64, b: (SampleKind, f64), cfg: &SectorConfig) -> f64
where
    F: Fn(f64) -> (SampleKind, f64),
{
    for _ in 0..cfg.boundary_bisections {
        let mid = 0.5 * (lo + hi);
        let (k, sw) = probe(mid);
        let side_a = if a.0 != b.0 {
            if k == a.0 {
                Some(true)
            } else if k == b.0 {
                Some(false)
            } else {
                None
            }
        } else if k == a.0 {
            Some((sw - a.1).abs() <= (sw - b.1).abs())
        } else {
            None
        };
        match side_a {
            Some(true) => lo = mid,
            Some(false) => hi = mid,
            None => return mid,
        }
    }
    0.5 * (lo + hi)
}

/// Sector counts of the isolated singular point `point`, measured on a ring of
/// the given radius (in rescaled coordinates).
pub fn sector_profile(
    field: &PlanarVectorField,
    point: &SingularPoint,
    radius: f64,
    cfg: &SectorConfig,
) -> Result<SectorProfile, SectorError> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(SectorError::InvalidRadius);
    }
    let dirs = characteristic_directions(field, point, cfg);
    let alpha = cfg
        .y_weight
        .unwrap_or_else(|| natural_y_weight(field, point))
        .max(1.0);
    let gauge = Gauge {
        center: point.approx,
        alpha,
    };
    let n = cfg.sweep_samples.max(16);
    let step = TAU / n as f64;
    let offset = 0.1234 * step;
    // `ring` is a fractional launch index
    let launch = |ring: f64| {
        let phi = offset + ring * step;
        gauge.plane_coords([radius * phi.cos(), radius * phi.sin()])
    };
    let probe = |ring: f64| {
        let z = launch(ring);
        let fwd = follow(field, &gauge, z, 1.0, radius, cfg);
        let bwd = follow(field, &gauge, z, -1.0, radius, cfg);
        (sample_kind(fwd.fate, bwd.fate), fwd.swept - bwd.swept)
    };
    let samples: Vec<(SampleKind, f64)> = map_range(n, cfg.parallelism, |i| probe(i as f64));

    let undetermined = samples
        .iter()
        .filter(|(k, _)| *k == SampleKind::Undetermined)
        .count();
    if undetermined as f64 > cfg.max_undetermined_fraction * n as f64 {
        return Err(SectorError::TooManyNearMisses {
            undetermined,
            samples: n,
        });
    }

    // inconclusive launches are skipped rather than treated as sector breaks
    let valid: Vec<usize> = (0..n)
        .filter(|&i| samples[i].0 != SampleKind::Undetermined)
        .collect();
    let m = valid.len();
    let angle_of = |ring: f64| {
        let z = launch(ring);
        (z, (z[1] - point.approx[1]).atan2(z[0] - point.approx[0]))
    };
    let breaks: Vec<bool> = (0..m)
        .map(|k| {
            let (ka, sa) = samples[valid[k]];
            let (kb, sb) = samples[valid[(k + 1) % m]];
            ka != kb
                || (matches!(ka, SampleKind::Hyperbolic | SampleKind::Elliptic)
                    && (sa - sb).abs() > cfg.jump_threshold)
        })
        .collect();

    // runs over the compressed sequence: (kind, first position, length)
    let mut runs: Vec<(SampleKind, usize, usize)> = Vec::new();
    let any_break = breaks.iter().any(|b| *b);
    if m > 0 {
        match breaks.iter().position(|b| *b) {
            None => runs.push((samples[valid[0]].0, 0, m)),
            Some(first_break) => {
                let mut run_start = (first_break + 1) % m;
                for k in 0..m {
                    let i = (first_break + 1 + k) % m;
                    if breaks[i] {
                        let len = (i + m - run_start) % m + 1;
                        runs.push((samples[valid[run_start]].0, run_start, len));
                        run_start = (i + 1) % m;
                    }
                }
            }
        }
    }
    let kept: Vec<(SectorKind, usize, usize)> = runs
        .iter()
        .filter(|(_, _, len)| *len >= cfg.min_arc_samples || runs.len() == 1)
        .map(|&(kind, first, len)| {
            let kind = match kind {
                SampleKind::Hyperbolic => SectorKind::Hyperbolic,
                SampleKind::Parabolic => SectorKind::Parabolic,
                SampleKind::Elliptic => SectorKind::Elliptic,
                _ => SectorKind::Rotational,
            };
            (kind, first, len)
        })
        .collect();

    let ring_index = |pos: usize| valid[pos % m];
    let mut arcs = Vec::new();
    let (mut e, mut h, mut p) = (0u32, 0u32, 0u32);
    for &(kind, first, len) in &kept {
        match kind {
            SectorKind::Hyperbolic => h += 1,
            SectorKind::Parabolic => p += 1,
            SectorKind::Elliptic => e += 1,
            SectorKind::Rotational => {}
        }
        arcs.push(SectorArc {
            kind,
            start: angle_of(ring_index(first) as f64).1,
            end: angle_of(ring_index(first + len - 1) as f64).1,
            samples: len,
        });
    }
    let mut boundaries = Vec::new();
    let mut boundary_points = Vec::new();
    if any_break {
        for (k, &(_, first, len)) in kept.iter().enumerate() {
            let last = ring_index(first + len - 1);
            let next = ring_index(kept[(k + 1) % kept.len()].1);
            let gap = (next + n - last) % n;
            let gap = if gap == 0 { n } else { gap };
            let ring = refine_boundary(&probe, last as f64, samples[last], (last + gap) as f64, samples[next], cfg);
            let (z, a) = angle_of(ring);
            boundaries.push(a);
            boundary_points.push(z);
        }
    }
    let trivial = e == 0 && h == 0;
    if trivial {
        p = 0;
    }
    if e % 2 != h % 2 {
        return Err(SectorError::ParityViolation { e, h });
    }
    Ok(SectorProfile {
        e,
        h,
        p,
        directions: dirs.angles,
        direction_degree: dirs.degree,
        boundaries,
        boundary_points,
        arcs,
        trivial,
        radius,
        y_weight: alpha,
    })
}
