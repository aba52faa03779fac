//! Polynomial approximation on compact plane sets with certified avoidance
//! of countably many forbidden values.

pub mod avoid_countable;
pub mod avoid_one;
pub mod cli;
pub mod compact_set;
pub mod countable;
pub mod error;
pub mod geometry;
pub mod mergelyan;
pub mod obstruction;
pub mod pipeline;
pub mod poly;

pub use error::{Error, Result, Stage};
pub use poly::{Polynomial, RootFactorization, C64};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/polynomials.md")]
    pub struct Polynomials;

    #[doc = include_str!("../../../book/src/compact-sets.md")]
    pub struct CompactSets;

    #[doc = include_str!("../../../book/src/forbidden-values.md")]
    pub struct ForbiddenValues;

    #[doc = include_str!("../../../book/src/avoid-one.md")]
    pub struct AvoidOne;

    #[doc = include_str!("../../../book/src/avoid-countable.md")]
    pub struct AvoidCountable;

    #[doc = include_str!("../../../book/src/pipeline.md")]
    pub struct Pipeline;

    #[doc = include_str!("../../../book/src/obstruction.md")]
    pub struct Obstruction;

    #[doc = include_str!("../../../book/src/cli.md")]
    pub struct Cli;
}
