//! Weighted colimits and limits, extensions, absoluteness, density and creation.

mod absolute;
mod cocone;
mod creation;

pub use absolute::{
    is_dense, is_j_absolute, AbsolutenessReport, AbsolutenessWitness, DensityReport,
    DensityWitness,
};
pub use cocone::{
    left_extension, weighted_colimit, weighted_limit, Certificate, Cocone, Cone, WeightedColimit,
    WeightedLimit,
};
pub use creation::{
    check_colimit_creation_at, check_creation, colimiting_cocones, CreationReport, Kind, Mode,
};
