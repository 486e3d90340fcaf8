//! Finite categories, functors and natural transformations.

mod category;
mod classify;
mod functor;
mod natural;
mod product;

pub use category::{
    opposite, validate_category, CategoryDesc, CategoryError, CategoryViolation, FinCategory,
    Mor, MorphismDesc, MorphismSig, Obj,
};
pub use classify::{
    classify_functor, conservative_on_cells, verify_equivalence, FlagWitness,
    FunctorClassification,
};
pub use functor::{
    enumerate_functors, search_functors, validate_functor, Functor, FunctorDesc,
    FunctorViolation,
};
pub(crate) use functor::same_category;
pub use natural::{
    enumerate_natural_transformations, find_natural_iso, search_natural_transformations,
    NatTrans,
};
pub use product::{full_subcategory, product};
