//! Singular point search, trajectory integration and rendering.

mod domain;
pub mod export;
mod integrate;
pub mod ode;
mod orient;
mod portrait;
mod singular;

use num_traits::ToPrimitive;
use serde::Serialize;
use thiserror::Error;

use crate::polyfield::{serde_rational, Rational};

pub use domain::DomainU;
pub use integrate::{
    flow_samples, integrate, orbit_period, Direction, IntegrationSettings, Polyline, TerminationReason,
};
pub use orient::{orientation_at, orientation_field, reduce_mod_pi, OrientationConfig, OrientationField};
pub use portrait::{phase_portrait, separatrix_seeds, Portrait, PortraitSpec, Seed, SeedPoint, Trajectory};
pub use singular::{convergents, find_singularities, FinderConfig};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FlowError {
    #[error("invalid domain '{0}' (expected xmin,xmax,ymin,ymax with xmin<xmax, ymin<ymax)")]
    InvalidDomain(String),
    #[error("zero set is not isolated: {found} zeros exceed the bound {bound}")]
    NonIsolatedZeroSet { found: usize, bound: usize },
    #[error("Newton refinement did not converge near ({}, {})", .0[0], .0[1])]
    NoConvergence([f64; 2]),
    #[error("seed {index} lies outside the domain")]
    SeedOutsideDomain { index: usize },
    #[error("portrait has no included seed")]
    NoIncludedSeed,
}

/// A zero of the field, with exact coordinates when they could be certified.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SingularPoint {
    pub approx: [f64; 2],
    #[serde(serialize_with = "serde_rational::pair")]
    pub exact: Option<(Rational, Rational)>,
}

impl SingularPoint {
    pub fn exact(x: Rational, y: Rational) -> Self {
        let approx = [x.to_f64().unwrap_or(f64::NAN), y.to_f64().unwrap_or(f64::NAN)];
        SingularPoint {
            approx,
            exact: Some((x, y)),
        }
    }

    pub fn approx(x: f64, y: f64) -> Self {
        SingularPoint {
            approx: [x, y],
            exact: None,
        }
    }
}
