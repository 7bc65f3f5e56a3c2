//! End-to-end classification of every singular point of a field in a domain.

use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classify::{
    classify_linear, classify_nilpotent, classify_reversible, sector_profile, ClassificationLabel, NilpotentData,
    ReversibilityCertificate, SectorConfig, SectorProfile,
};
use crate::flow::export::fmt_sig;
use crate::flow::{find_singularities, DomainU, FinderConfig, FlowError, SingularPoint};
use crate::index::{bendixson_index, winding_index, ContourSpec, IndexValue};
use crate::parallel::Parallelism;
use crate::polyfield::{fmt_rational, JacobianData, PlanarVectorField, Rational};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ClassifyConfig {
    pub finder: FinderConfig,
    pub sectors: SectorConfig,
    /// Run the empirical sector sweep at every point.
    pub compute_sectors: bool,
    /// Ring radius of the sector sweep, capped at a quarter of the distance
    /// to the nearest other singular point.
    pub sector_radius: f64,
    /// Radius of the circle used for the winding index, capped at 0.45 of
    /// the distance to the nearest other singular point.
    pub index_radius: f64,
}

impl Default for ClassifyConfig {
    fn default() -> Self {
        ClassifyConfig {
            finder: FinderConfig::default(),
            sectors: SectorConfig::default(),
            compute_sectors: true,
            sector_radius: 0.05,
            index_radius: 0.1,
        }
    }
}

impl ClassifyConfig {
    pub fn with_parallelism(mut self, par: Parallelism) -> Self {
        self.finder.parallelism = par;
        self.sectors.parallelism = par;
        self
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ReportError {
    #[error(transparent)]
    Flow(#[from] FlowError),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SingularityReport {
    pub location: [f64; 2],
    /// Exact coordinates as rational strings, when certified.
    pub exact: Option<[String; 2]>,
    pub label: ClassificationLabel,
    pub tau: String,
    pub delta: String,
    pub discriminant: String,
    /// Exact Jacobian, when the location is exact.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub jacobian: Option<JacobianData>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<ReversibilityCertificate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nilpotent: Option<NilpotentData>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sectors: Option<SectorProfile>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bendixson_index: Option<IndexValue>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub winding_index: Option<IndexValue>,
    pub table_index: Option<i64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FieldReport {
    pub field: PlanarVectorField,
    pub domain: DomainU,
    pub direction_formula: crate::classify::DirectionFormula,
    pub points: Vec<SingularityReport>,
}

impl FieldReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// Label, certificate and nilpotent data of one singular point, without the
/// numerical sector and index work.
pub fn classify_point_label(
    field: &PlanarVectorField,
    point: &SingularPoint,
) -> (ClassificationLabel, JacobianData, Option<ReversibilityCertificate>, Option<NilpotentData>, Vec<String>) {
    let mut notes = Vec::new();
    let (x, y) = match &point.exact {
        Some((x, y)) => (x.clone(), y.clone()),
        None => {
            notes.push("location is numeric; labels rely on floating-point signs".into());
            (
                Rational::from_float(point.approx[0]).unwrap_or_else(Rational::zero),
                Rational::from_float(point.approx[1]).unwrap_or_else(Rational::zero),
            )
        }
    };
    let mut j = field.jacobian_at(&x, &y);
    if point.exact.is_none() {
        // treat a determinant at rounding level as zero
        let jf = j.to_f64();
        let scale = jf.iter().flatten().map(|v| v.abs()).fold(0.0, f64::max);
        if j.det.to_f64().unwrap_or(0.0).abs() <= 1e-9 * scale * scale {
            j.det = Rational::zero();
        }
    }
    let mut label = classify_linear(&j);
    let mut certificate = None;
    let mut nilpotent = None;
    if label == ClassificationLabel::DegenerateUnresolved && point.exact.is_some() {
        match classify_nilpotent(field, (&x, &y)) {
            Ok((l, d)) => {
                label = l;
                nilpotent = Some(d);
            }
            Err(e) => notes.push(format!("nilpotent classifier: {e}")),
        }
    }
    if label == ClassificationLabel::FocusOrCenter && point.exact.is_some() {
        certificate = classify_reversible(field, (&x, &y));
        if certificate.is_some() {
            label = ClassificationLabel::Center;
        }
    }
    (label, j, certificate, nilpotent, notes)
}

fn nearest_other(points: &[SingularPoint], k: usize) -> f64 {
    let a = points[k].approx;
    points
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != k)
        .map(|(_, p)| (p.approx[0] - a[0]).hypot(p.approx[1] - a[1]))
        .fold(f64::INFINITY, f64::min)
}

/// Full report for the `k`-th of `points`.
pub fn classify_point(
    field: &PlanarVectorField,
    points: &[SingularPoint],
    k: usize,
    cfg: &ClassifyConfig,
) -> SingularityReport {
    let point = &points[k];
    let (label, j, certificate, nilpotent, mut notes) = classify_point_label(field, point);
    let gap = nearest_other(points, k);
    let exact = point.exact.is_some();
    let show = |r: &Rational| {
        if exact {
            fmt_rational(r)
        } else {
            fmt_sig(r.to_f64().unwrap_or(f64::NAN))
        }
    };

    let index_radius = cfg.index_radius.min(0.45 * gap);
    let winding = match winding_index(field, &ContourSpec::circle(point.approx, index_radius)) {
        Ok(v) => Some(v),
        Err(e) => {
            notes.push(format!("winding index: {e}"));
            None
        }
    };
    let (sectors, bendixson) = if cfg.compute_sectors {
        let radius = cfg.sector_radius.min(0.25 * gap);
        match sector_profile(field, point, radius, &cfg.sectors) {
            Ok(p) => {
                let b = bendixson_index(&p);
                (Some(p), Some(b))
            }
            Err(e) => {
                notes.push(format!("sector profile: {e}"));
                (None, None)
            }
        }
    } else {
        (None, None)
    };
    if !exact && j.det.is_positive() && j.trace.to_f64().is_some_and(|t| t.abs() < 1e-12) {
        notes.push("trace is zero only to rounding".into());
    }
    SingularityReport {
        location: point.approx,
        exact: point.exact.as_ref().map(|(x, y)| [fmt_rational(x), fmt_rational(y)]),
        label,
        tau: show(&j.trace),
        delta: show(&j.det),
        discriminant: show(&j.discriminant),
        jacobian: exact.then_some(j),
        certificate,
        nilpotent,
        sectors,
        bendixson_index: bendixson,
        winding_index: winding,
        table_index: label.table_index(),
        notes,
    }
}

/// Finds the singular points of `field` in `domain` and classifies each.
pub fn classify_field(
    field: &PlanarVectorField,
    domain: &DomainU,
    cfg: &ClassifyConfig,
) -> Result<FieldReport, ReportError> {
    let points = find_singularities(field, domain, &cfg.finder)?;
    let reports = (0..points.len())
        .map(|k| classify_point(field, &points, k, cfg))
        .collect();
    Ok(FieldReport {
        field: field.clone(),
        domain: *domain,
        direction_formula: cfg.sectors.formula,
        points: reports,
    })
}
