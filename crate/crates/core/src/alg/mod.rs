//! Algebras for relative monads, the algebra category with `u_T` and `f_T`,
//! comparison functors, the universal property and algebra transport.

mod algebra;
mod category;
mod object;
mod transport;

pub use algebra::{
    enumerate_algebra_morphisms, enumerate_algebras, search_algebra_morphisms, search_algebras,
    search_with_carrier, Algebra,
};
pub use category::{
    build_algebra_category, comparison_functor, factorizations, resolution_algebra,
    AlgebraCategory, ComparisonData, ComparisonSummary,
};
pub use object::{
    factor_through, verify_algebra_object, AlgebraObjectOptions, AlgebraObjectReport,
    ClauseFailure,
};
pub use transport::{transport_algebras, GradeCount, Transport, TransportDirection, TransportReport};
