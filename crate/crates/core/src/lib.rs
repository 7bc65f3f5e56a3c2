//! Phase-portrait models of fingerprint patterns.
//!
//! Fingerprint ridge flow is modelled as the phase portrait of a planar
//! polynomial system. This crate classifies the singular points of such
//! systems, computes Poincare indices and checks whether a set of local
//! portraits can be connected on a surface, builds normal-form fields for the
//! Arch, Whorl, Spiral and Twist patterns by Hermite interpolation, and
//! renders seeded phase portraits and orientation fields.
//!
//! ```
//! use phaseprint::normalform::{template, TemplateId};
//! use phaseprint::report::classify_field;
//!
//! let (field, spec) = template(TemplateId::Whorl);
//! let report = classify_field(&field, &spec.domain, &Default::default()).unwrap();
//! let labels: Vec<_> = report.points.iter().map(|p| p.label).collect();
//! assert_eq!(labels.len(), 3);
//! ```

pub mod classify;
pub mod flow;
pub mod index;
pub mod normalform;
pub mod parallel;
pub mod polyfield;
pub mod report;

pub use parallel::Parallelism;
pub use polyfield::{BivariatePolynomial, PlanarVectorField, Rational};
