//! Poincare indices: winding numbers along Jordan curves, Bendixson's sector
//! formula, and connexion feasibility on closed surfaces.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classify::{ClassificationLabel, SectorProfile};
use crate::polyfield::{int, rational, serde_rational, PlanarVectorField, Rational};

/// Smallest field magnitude tolerated on a contour.
pub const CONTOUR_ZERO_TOL: f64 = 1e-9;
/// Refinement stops at this many samples.
pub const MAX_CONTOUR_SAMPLES: usize = 1 << 20;
/// Largest accepted distance of `dtheta / 2pi` from an integer.
pub const WINDING_RESIDUAL_TOL: f64 = 1e-6;
/// Depth of local bisection applied to a step that turns by more than `pi/4`.
const LOCAL_BISECTIONS: u32 = 30;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum ContourShape {
    Circle { center: [f64; 2], radius: f64 },
    Rectangle { min: [f64; 2], max: [f64; 2] },
    /// Closed polygon, vertices listed counterclockwise.
    Polyline { vertices: Vec<[f64; 2]> },
}

/// A positively oriented Jordan curve and its initial sample count.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContourSpec {
    pub shape: ContourShape,
    pub samples: usize,
}

impl ContourSpec {
    pub fn circle(center: [f64; 2], radius: f64) -> Self {
        ContourSpec {
            shape: ContourShape::Circle { center, radius },
            samples: 256,
        }
    }

    pub fn rectangle(x_min: f64, x_max: f64, y_min: f64, y_max: f64) -> Self {
        ContourSpec {
            shape: ContourShape::Rectangle {
                min: [x_min, y_min],
                max: [x_max, y_max],
            },
            samples: 256,
        }
    }

    pub fn polyline(vertices: Vec<[f64; 2]>) -> Self {
        ContourSpec {
            shape: ContourShape::Polyline { vertices },
            samples: 256,
        }
    }

    fn validate(&self) -> Result<(), IndexError> {
        let ok = match &self.shape {
            ContourShape::Circle { center, radius } => {
                *radius > 0.0 && radius.is_finite() && center.iter().all(|c| c.is_finite())
            }
            ContourShape::Rectangle { min, max } => {
                min.iter().chain(max).all(|c| c.is_finite()) && min[0] < max[0] && min[1] < max[1]
            }
            ContourShape::Polyline { vertices } => {
                vertices.len() >= 3
                    && vertices.iter().flatten().all(|c| c.is_finite())
                    && signed_area(vertices) > 0.0
            }
        };
        if ok && self.samples > 0 {
            Ok(())
        } else {
            Err(IndexError::InvalidContour)
        }
    }

    fn corners(&self) -> Option<Vec<[f64; 2]>> {
        match &self.shape {
            ContourShape::Circle { .. } => None,
            ContourShape::Rectangle { min, max } => Some(vec![
                [min[0], min[1]],
                [max[0], min[1]],
                [max[0], max[1]],
                [min[0], max[1]],
            ]),
            ContourShape::Polyline { vertices } => Some(vertices.clone()),
        }
    }

    /// Point at curve parameter `t` in `[0, 1)`; polygons are parameterized
    /// by arclength.
    pub fn point_at(&self, t: f64) -> [f64; 2] {
        match &self.shape {
            ContourShape::Circle { center, radius } => {
                let a = TAU * t;
                [center[0] + radius * a.cos(), center[1] + radius * a.sin()]
            }
            _ => {
                let v = self.corners().expect("polygonal contour");
                let lens: Vec<f64> = (0..v.len())
                    .map(|i| dist(v[i], v[(i + 1) % v.len()]))
                    .collect();
                let total: f64 = lens.iter().sum();
                let mut s = t.rem_euclid(1.0) * total;
                for (i, l) in lens.iter().enumerate() {
                    if s <= *l || i + 1 == lens.len() {
                        let a = v[i];
                        let b = v[(i + 1) % v.len()];
                        let u = if *l > 0.0 { (s / l).min(1.0) } else { 0.0 };
                        return [a[0] + u * (b[0] - a[0]), a[1] + u * (b[1] - a[1])];
                    }
                    s -= l;
                }
                unreachable!()
            }
        }
    }

    /// Strict interior test.
    pub fn contains(&self, p: [f64; 2]) -> bool {
        match &self.shape {
            ContourShape::Circle { center, radius } => dist(*center, p) < *radius,
            ContourShape::Rectangle { min, max } => {
                p[0] > min[0] && p[0] < max[0] && p[1] > min[1] && p[1] < max[1]
            }
            ContourShape::Polyline { vertices } => {
                let n = vertices.len();
                let mut inside = false;
                for i in 0..n {
                    let a = vertices[i];
                    let b = vertices[(i + 1) % n];
                    if (a[1] > p[1]) != (b[1] > p[1]) {
                        let x = a[0] + (p[1] - a[1]) / (b[1] - a[1]) * (b[0] - a[0]);
                        if p[0] < x {
                            inside = !inside;
                        }
                    }
                }
                inside
            }
        }
    }
}

fn dist(a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

fn signed_area(v: &[[f64; 2]]) -> f64 {
    let n = v.len();
    0.5 * (0..n)
        .map(|i| {
            let (a, b) = (v[i], v[(i + 1) % n]);
            a[0] * b[1] - b[0] * a[1]
        })
        .sum::<f64>()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IndexMethod {
    Winding,
    Bendixson,
    TableLookup,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IndexValue {
    #[serde(serialize_with = "serde_rational::one")]
    pub value: Rational,
    pub method: IndexMethod,
    /// Distance of `dtheta / 2pi` from the reported integer.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
}

impl IndexValue {
    fn exact(value: Rational, method: IndexMethod) -> Self {
        IndexValue {
            value,
            method,
            residual: None,
            samples: None,
        }
    }

    pub fn is_integer(&self) -> bool {
        self.value.is_integer()
    }

    pub fn as_integer(&self) -> Option<i64> {
        if self.is_integer() {
            self.value.to_integer().to_i64()
        } else {
            None
        }
    }
}

impl fmt::Display for IndexValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::polyfield::fmt_rational(&self.value))
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IndexError {
    #[error("field vanishes on or near the contour (|f| = {magnitude:e} at ({}, {}))", at[0], at[1])]
    ZeroOnContour { magnitude: f64, at: [f64; 2] },
    #[error("winding number did not stabilize within {samples} samples")]
    NoConvergence { samples: usize },
    #[error("contour is degenerate or not positively oriented")]
    InvalidContour,
    #[error("no index is known for '{0}'; give an explicit index")]
    UnknownIndex(String),
    #[error("point ({}, {}) is not strictly inside the contour", .0[0], .0[1])]
    PointOutsideContour([f64; 2]),
}

struct Sweep {
    total: f64,
    max_step: f64,
    min_mag: f64,
    min_at: [f64; 2],
    worst: usize,
}

fn sweep(field: &PlanarVectorField, contour: &ContourSpec, n: usize) -> Sweep {
    let eval = |t: f64| {
        let z = contour.point_at(t);
        let (a, b) = field.evaluate(z[0], z[1]);
        (b.atan2(a), a.hypot(b), z)
    };
    let mut out = Sweep {
        total: 0.0,
        max_step: 0.0,
        min_mag: f64::INFINITY,
        min_at: [0.0, 0.0],
        worst: 0,
    };
    let (mut prev, mag, z) = eval(0.0);
    out.min_mag = mag;
    out.min_at = z;
    for i in 0..n {
        let (t0, t1) = (i as f64 / n as f64, ((i + 1) % n) as f64 / n as f64);
        let (theta, mag, z) = eval(t1);
        if mag < out.min_mag {
            out.min_mag = mag;
            out.min_at = z;
        }
        let t1 = if i + 1 == n { 1.0 } else { t1 };
        let (d, step) = refine(&eval, t0, prev, t1, theta, LOCAL_BISECTIONS, &mut out);
        out.total += d;
        if step > out.max_step {
            out.max_step = step;
            out.worst = i;
        }
        prev = theta;
    }
    out
}

fn wrap(d: f64) -> f64 {
    d - TAU * (d / TAU).round()
}

/// Turn between `t0` and `t1`, bisecting sharp steps; returns the turn and
/// the largest unresolved step.
fn refine<E>(eval: &E, t0: f64, a0: f64, t1: f64, a1: f64, depth: u32, out: &mut Sweep) -> (f64, f64)
where
    E: Fn(f64) -> (f64, f64, [f64; 2]),
{
    let d = wrap(a1 - a0);
    if d.abs() < PI / 4.0 || depth == 0 {
        return (d, d.abs());
    }
    let tm = 0.5 * (t0 + t1);
    let (am, mag, z) = eval(tm);
    if mag < out.min_mag {
        out.min_mag = mag;
        out.min_at = z;
    }
    let (d1, s1) = refine(eval, t0, a0, tm, am, depth - 1, out);
    let (d2, s2) = refine(eval, tm, am, t1, a1, depth - 1, out);
    (d1 + d2, s1.max(s2))
}

/// Halves the parameter interval `[t, t + dt]` towards the sharper turn and
/// returns the smallest magnitude seen.
fn narrow_turn(field: &PlanarVectorField, contour: &ContourSpec, mut t: f64, mut dt: f64) -> (f64, [f64; 2]) {
    let eval = |t: f64| {
        let z = contour.point_at(t);
        let (a, b) = field.evaluate(z[0], z[1]);
        (b.atan2(a), a.hypot(b), z)
    };
    let turn = |a: f64, b: f64| {
        let d = b - a;
        (d - TAU * (d / TAU).round()).abs()
    };
    let (mut best, mut at) = (f64::INFINITY, contour.point_at(t));
    for _ in 0..80 {
        let (a, ma, za) = eval(t);
        let (m, mm, zm) = eval(t + dt / 2.0);
        let (b, mb, zb) = eval(t + dt);
        for (v, z) in [(ma, za), (mm, zm), (mb, zb)] {
            if v < best {
                best = v;
                at = z;
            }
        }
        if turn(a, m) < turn(m, b) {
            t += dt / 2.0;
        }
        dt /= 2.0;
    }
    (best, at)
}

/// Winding number of the field direction along the contour.
///
/// Steps that turn sharply are bisected locally; the sample count is doubled
/// until every step turns by less than a quarter turn and two successive
/// refinements agree.
pub fn winding_index(field: &PlanarVectorField, contour: &ContourSpec) -> Result<IndexValue, IndexError> {
    contour.validate()?;
    let mut n = contour.samples.max(8);
    let mut last: Option<i64> = None;
    loop {
        let s = sweep(field, contour, n);
        if s.min_mag.is_nan() || s.min_mag <= CONTOUR_ZERO_TOL {
            return Err(IndexError::ZeroOnContour {
                magnitude: s.min_mag,
                at: s.min_at,
            });
        }
        let turns = s.total / TAU;
        let k = turns.round();
        let residual = (turns - k).abs();
        if s.max_step < PI / 2.0 && residual < WINDING_RESIDUAL_TOL {
            if last == Some(k as i64) {
                return Ok(IndexValue {
                    value: int(k as i64),
                    method: IndexMethod::Winding,
                    residual: Some(residual),
                    samples: Some(n),
                });
            }
            last = Some(k as i64);
        } else {
            last = None;
        }
        if n >= MAX_CONTOUR_SAMPLES {
            let (magnitude, at) = narrow_turn(field, contour, s.worst as f64 / n as f64, 1.0 / n as f64);
            if magnitude <= CONTOUR_ZERO_TOL {
                return Err(IndexError::ZeroOnContour { magnitude, at });
            }
            return Err(IndexError::NoConvergence { samples: n });
        }
        n = (2 * n).min(MAX_CONTOUR_SAMPLES);
    }
}

/// `1 + (e - h) / 2` for explicit sector counts.
pub fn bendixson_from_counts(e: u32, h: u32) -> IndexValue {
    let v = Rational::one() + rational(e as i64 - h as i64, 2);
    IndexValue::exact(v, IndexMethod::Bendixson)
}

/// Bendixson's formula applied to a sector profile. Non-integer values mark
/// profiles that cannot occur.
pub fn bendixson_index(profile: &SectorProfile) -> IndexValue {
    bendixson_from_counts(profile.e, profile.h)
}

/// Index of a point of the given type, when the type fixes it.
pub fn table_index(label: ClassificationLabel) -> Option<IndexValue> {
    label
        .table_index()
        .map(|i| IndexValue::exact(int(i), IndexMethod::TableLookup))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DeltaVerdict {
    pub hyperbolic_sectors: u32,
    pub all_hyperbolic: bool,
    pub feasible: bool,
    /// `1 - h/2` when every sector is hyperbolic.
    #[serde(serialize_with = "serde_rational::opt")]
    pub bendixson: Option<Rational>,
}

/// A point whose sectors are all hyperbolic needs an even number of them.
pub fn delta_feasibility(h_sectors: u32, all_hyperbolic: bool) -> DeltaVerdict {
    let bendixson = all_hyperbolic.then(|| bendixson_from_counts(0, h_sectors).value);
    DeltaVerdict {
        hyperbolic_sectors: h_sectors,
        all_hyperbolic,
        feasible: !(all_hyperbolic && h_sectors % 2 == 1),
        bendixson,
    }
}

/// One local portrait in a connexion problem.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConnexionEntry {
    Label(ClassificationLabel),
    Index(i64),
    Sectors { e: u32, h: u32 },
}

impl FromStr for ConnexionEntry {
    type Err = IndexError;

    /// `saddle`, `node`, ..., an integer such as `-1`, or `sectors:E:H`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if let Ok(i) = t.parse::<i64>() {
            return Ok(ConnexionEntry::Index(i));
        }
        if let Some(rest) = t.strip_prefix("sectors:") {
            let mut it = rest.split(':').map(|v| v.trim().parse::<u32>());
            if let (Some(Ok(e)), Some(Ok(h)), None) = (it.next(), it.next(), it.next()) {
                return Ok(ConnexionEntry::Sectors { e, h });
            }
            return Err(IndexError::UnknownIndex(s.to_string()));
        }
        t.parse::<ClassificationLabel>()
            .map(ConnexionEntry::Label)
            .map_err(|_| IndexError::UnknownIndex(s.to_string()))
    }
}

impl fmt::Display for ConnexionEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConnexionEntry::Label(l) => f.write_str(l.cli_name()),
            ConnexionEntry::Index(i) => write!(f, "{i}"),
            ConnexionEntry::Sectors { e, h } => write!(f, "sectors:{e}:{h}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PointIndex {
    pub entry: String,
    #[serde(serialize_with = "serde_rational::one")]
    pub index: Rational,
    pub method: IndexMethod,
}

/// `n + f - s = 2(1 - p)` for fields with only hyperbolic points.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HyperbolicIdentity {
    pub nodes: u32,
    pub foci: u32,
    pub saddles: u32,
    pub lhs: i64,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConnexionCheck {
    pub genus: u32,
    pub points: Vec<PointIndex>,
    #[serde(serialize_with = "serde_rational::one")]
    pub total_index: Rational,
    pub euler: i64,
    pub feasible: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hyperbolic_identity: Option<HyperbolicIdentity>,
}

/// Whether local portraits with these indices can be connected on a closed
/// orientable surface of the given genus.
pub fn connexion_check(entries: &[ConnexionEntry], genus: u32) -> Result<ConnexionCheck, IndexError> {
    let mut points = Vec::with_capacity(entries.len());
    for e in entries {
        let v = match e {
            ConnexionEntry::Label(l) => {
                table_index(*l).ok_or_else(|| IndexError::UnknownIndex(l.cli_name().into()))?
            }
            ConnexionEntry::Index(i) => IndexValue::exact(int(*i), IndexMethod::TableLookup),
            ConnexionEntry::Sectors { e, h } => bendixson_from_counts(*e, *h),
        };
        points.push(PointIndex {
            entry: e.to_string(),
            index: v.value,
            method: v.method,
        });
    }
    let total: Rational = points.iter().map(|p| p.index.clone()).fold(Rational::zero(), |a, b| a + b);
    let euler = 2 * (1 - genus as i64);
    let integral = points.iter().all(|p| p.index.is_integer());
    let feasible = integral && total == int(euler);

    let labels: Option<Vec<ClassificationLabel>> = entries
        .iter()
        .map(|e| match e {
            ConnexionEntry::Label(l) if l.is_hyperbolic() => Some(*l),
            _ => None,
        })
        .collect();
    let hyperbolic_identity = labels.filter(|l| !l.is_empty()).map(|labels| {
        let nodes = labels.iter().filter(|l| l.is_node()).count() as u32;
        let foci = labels.iter().filter(|l| l.is_focus()).count() as u32;
        let saddles = labels.len() as u32 - nodes - foci;
        let lhs = nodes as i64 + foci as i64 - saddles as i64;
        HyperbolicIdentity {
            nodes,
            foci,
            saddles,
            lhs,
            holds: lhs == euler,
        }
    });
    Ok(ConnexionCheck {
        genus,
        points,
        total_index: total,
        euler,
        feasible,
        hyperbolic_identity,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EnclosedIndexReport {
    pub boundary: i64,
    pub points: Vec<([f64; 2], i64)>,
    pub sum: i64,
    pub consistent: bool,
}

/// Compares the winding number of `contour` with the sum of winding numbers
/// on small circles around each of `known_points`.
pub fn enclosed_index_sum(
    field: &PlanarVectorField,
    contour: &ContourSpec,
    known_points: &[[f64; 2]],
    small_radius: f64,
) -> Result<EnclosedIndexReport, IndexError> {
    let boundary = integer(winding_index(field, contour)?)?;
    let mut r = small_radius;
    for (i, a) in known_points.iter().enumerate() {
        if !contour.contains(*a) {
            return Err(IndexError::PointOutsideContour(*a));
        }
        for b in &known_points[i + 1..] {
            r = r.min(0.45 * dist(*a, *b));
        }
    }
    let mut points = Vec::with_capacity(known_points.len());
    for p in known_points {
        let v = integer(winding_index(field, &ContourSpec::circle(*p, r))?)?;
        points.push((*p, v));
    }
    let sum = points.iter().map(|(_, v)| v).sum();
    Ok(EnclosedIndexReport {
        boundary,
        points,
        sum,
        consistent: boundary == sum,
    })
}

fn integer(v: IndexValue) -> Result<i64, IndexError> {
    v.as_integer().ok_or(IndexError::NoConvergence {
        samples: v.samples.unwrap_or(0),
    })
}

/// Sign-only summary used by reports.
pub fn index_sign(v: &IndexValue) -> i32 {
    if v.value.is_positive() {
        1
    } else if v.value.is_negative() {
        -1
    } else {
        0
    }
}
