//! Relative adjunctions: validation, left-adjoint search, pasting and
//! right-morphisms.

mod adjunction;
mod pasting;
mod right;

pub use adjunction::{
    find_left_relative_adjoint, validate_relative_adjunction, AdjunctionDesc,
    AdjunctionViolation, RelativeAdjunction, TieBreak,
};
pub use pasting::{paste, unpaste, Direction, PastingReport};
pub use right::{
    check_right_morphisms, derive_rho, extension_cocone, induced_adjunction,
    right_morphism_case, RightMorphismCase, RightMorphismReport,
};
