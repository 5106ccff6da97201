//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CatError {
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("functors do not share the required (co)domain")]
    TargetMismatch,
    #[error("cap of {cap} exceeded while {during}")]
    CapExceeded { cap: usize, during: String },
    #[error("functor is not a fibration")]
    NotAFibration,
    #[error("functor is not an isofibration: no isomorphism lift for ({object}, {base_mor})")]
    NotIsofibration { object: usize, base_mor: usize },
    #[error("pseudofunctor fails coherence: {0}")]
    IncoherentPseudoFunctor(String),
    #[error("morphism of fibrations is not a fibrewise opfibration")]
    NotFibrewiseOpfibration,
    #[error("morphism of fibrations does not preserve the chosen cleavages strictly")]
    CleavageNotPreserved,
    #[error("{0}")]
    Invalid(String),
}

impl CatError {
    pub fn cap(cap: usize, during: &str) -> CatError {
        CatError::CapExceeded { cap, during: during.to_string() }
    }
}
