//! Local classification of singular points.
//!
//! Hyperbolic points are read off the trace and determinant of the Jacobian.
//! Nilpotent points in the normal form `x' = y` go through the case table of
//! [`classify_nilpotent`]. Linear centers need a reversibility certificate.
//! [`sector_profile`] counts elliptic, hyperbolic and parabolic sectors
//! numerically.

mod label;
mod linear;
mod nilpotent;
mod reversible;
mod sectors;

pub use label::{ClassificationLabel, UnknownLabel};
pub use linear::classify_linear;
pub use nilpotent::{classify_nilpotent, NilpotentData, NilpotentError};
pub use reversible::{classify_reversible, ReversibilityCertificate};
pub use sectors::{
    characteristic_directions, natural_y_weight, sector_profile, CharacteristicDirections,
    DirectionFormula, SectorArc, SectorConfig, SectorError, SectorKind, SectorProfile,
};
