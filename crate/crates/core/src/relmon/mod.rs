//! Relative monads: validation, induction from adjunctions, trivial monads,
//! root precomposition and exhaustive enumeration.

mod monad;

pub use monad::{
    enumerate_relative_monads, monad_from_adjunction, precompose_root, search_relative_monads,
    trivial_relative_monad, validate_relative_monad, MonadDesc, RelativeMonad, LAWS,
};
