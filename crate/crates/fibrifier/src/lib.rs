//! Finite-category toolkit: comma objects and the slice monads they induce,
//! fibration detection by independent criteria, identees and their
//! coidentifiers/coinverters, the Grothendieck correspondence, and the
//! comprehensive and groupoid-fibre factorization systems — all computed on
//! explicit composition tables and checked exhaustively.

// Objects and morphisms are positional indices, so index-driven loops are the
// native idiom here.
#![allow(clippy::needless_range_loop)]

pub mod adjoint;
pub mod builders;
pub mod cat;
pub mod colim;
pub mod comma;
pub mod corpus;
pub mod dot;
pub mod error;
pub mod factor;
pub mod fibcheck;
pub mod groth;
pub mod json;

pub use cat::{FinCat, FunctorData, NatTransData, ValidationReport};
pub use error::CatError;

/// Default bound on closure engines (distinct normal forms / cosets).
pub const DEFAULT_CAP: usize = 10_000;
