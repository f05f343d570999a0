pub mod data;
pub mod error;
pub mod exact;
pub mod fine;
pub mod geometry;
pub mod io;
pub mod lp;
pub mod spectrum;
pub mod verify;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/exact.md")]
    mod exact {}
    #[doc = include_str!("../../../book/src/polytopes.md")]
    mod polytopes {}
    #[doc = include_str!("../../../book/src/fine.md")]
    mod fine {}
    #[doc = include_str!("../../../book/src/projections.md")]
    mod projections {}
    #[doc = include_str!("../../../book/src/numerators.md")]
    mod numerators {}
    #[doc = include_str!("../../../book/src/milp.md")]
    mod milp {}
    #[doc = include_str!("../../../book/src/verification.md")]
    mod verification {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
