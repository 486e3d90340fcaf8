//! Built-in and generated instances, and instance persistence.

mod builtin;
mod bundle;
mod generate;
mod shapes;

pub use builtin::{
    arrow_into_involution, bm3, bt2, builtin_corpus, bz2, bz3, indiscrete2, interval, span, split,
    square, GOLDEN_PARAMS, GOLDEN_SEED,
};
pub use bundle::{
    document_json, load_any, load_category, load_document, load_instance, read_json, save_instance,
    to_canonical_json, AdjunctionEntry,
    DistributorEntry, FunctorEntry, Instance, MonadEntry, Provenance, BUNDLE_SCHEMA,
};
pub use generate::{delooping, generate_category, GenParams, MonoidTable};
pub use shapes::{small_categories, ShapeBounds};
