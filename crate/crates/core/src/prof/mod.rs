//! Finite Set-valued distributors, restrictions, tensors and graded cells.

mod distributor;
mod enumerate;
mod graded;
mod tensor;

pub use distributor::{
    corepresentable, hom_distributor, restrict_distributor, Distributor, DistributorDesc,
};
pub use enumerate::{enumerate_distributors, enumerate_weights, with_sizes};
pub use graded::{enumerate_graded_cells, search_graded_cells, GradedCell, MAX_GRADE};
pub use tensor::{push_forward, TensorSet};
