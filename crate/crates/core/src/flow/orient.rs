use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::DomainU;
use crate::parallel::{map_range, Parallelism};
use crate::polyfield::PlanarVectorField;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct OrientationConfig {
    pub nx: usize,
    pub ny: usize,
    /// Also emit `(cos 2t, sin 2t)`.
    pub doubled: bool,
    /// Cells where `|f|` is at most this are masked.
    pub mask_tol: f64,
    /// Cells within this distance of a known singular point are masked.
    pub singular_eps: f64,
    pub parallelism: Parallelism,
}

impl Default for OrientationConfig {
    fn default() -> Self {
        OrientationConfig {
            nx: 64,
            ny: 64,
            doubled: false,
            mask_tol: 1e-6,
            singular_eps: 1e-6,
            parallelism: Parallelism::default(),
        }
    }
}

/// Flow direction modulo `pi` on a cell-centred grid. Cell `(i, j)` is stored
/// at `j * nx + i`, with `j = 0` the bottom row.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OrientationField {
    pub nx: usize,
    pub ny: usize,
    pub domain: DomainU,
    /// Angles in `[0, pi)`; `NaN` on masked cells.
    pub theta: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub doubled: Option<Vec<[f64; 2]>>,
    pub mask: Vec<bool>,
}

impl OrientationField {
    pub fn cell_center(&self, i: usize, j: usize) -> [f64; 2] {
        cell_center(&self.domain, self.nx, self.ny, i, j)
    }

    pub fn at(&self, i: usize, j: usize) -> Option<f64> {
        let k = j * self.nx + i;
        (!self.mask[k]).then(|| self.theta[k])
    }
}

fn cell_center(d: &DomainU, nx: usize, ny: usize, i: usize, j: usize) -> [f64; 2] {
    [
        d.x_min() + (i as f64 + 0.5) * d.width() / nx as f64,
        d.y_min() + (j as f64 + 0.5) * d.height() / ny as f64,
    ]
}

/// Reduces an angle to `[0, pi)`.
pub fn reduce_mod_pi(a: f64) -> f64 {
    let t = a.rem_euclid(PI);
    if t >= PI {
        0.0
    } else {
        t
    }
}

/// Angle of the field with the x-axis modulo `pi`, or `None` where `|f|` is
/// at most `mask_tol`.
pub fn orientation_at(field: &PlanarVectorField, x: f64, y: f64, mask_tol: f64) -> Option<f64> {
    let (a, b) = field.evaluate(x, y);
    if a.hypot(b) <= mask_tol {
        return None;
    }
    Some(reduce_mod_pi(b.atan2(a)))
}

pub fn orientation_field(
    field: &PlanarVectorField,
    domain: &DomainU,
    singular: &[[f64; 2]],
    cfg: &OrientationConfig,
) -> OrientationField {
    let (nx, ny) = (cfg.nx.max(1), cfg.ny.max(1));
    let rows: Vec<Vec<Option<f64>>> = map_range(ny, cfg.parallelism, |j| {
        (0..nx)
            .map(|i| {
                let z = cell_center(domain, nx, ny, i, j);
                let near = singular
                    .iter()
                    .any(|p| (p[0] - z[0]).hypot(p[1] - z[1]) <= cfg.singular_eps);
                if near {
                    None
                } else {
                    orientation_at(field, z[0], z[1], cfg.mask_tol)
                }
            })
            .collect()
    });
    let cells: Vec<Option<f64>> = rows.into_iter().flatten().collect();
    let theta = cells.iter().map(|c| c.unwrap_or(f64::NAN)).collect();
    let mask = cells.iter().map(Option::is_none).collect();
    let doubled = cfg.doubled.then(|| {
        cells
            .iter()
            .map(|c| match c {
                Some(t) => [(2.0 * t).cos(), (2.0 * t).sin()],
                None => [0.0, 0.0],
            })
            .collect()
    });
    OrientationField {
        nx,
        ny,
        domain: *domain,
        theta,
        doubled,
        mask,
    }
}
