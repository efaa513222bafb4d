//! Directed colimits of finite-dimensional Hilbert spaces along linear
//! contractions.
//!
//! An ω-chain `H₀ → H₁ → …` of contractions ([`chain::OmegaChain`]) has a
//! colimit whose vectors are classes `(n, x)`; the inner product of two classes
//! is a limit along the chain, evaluated in [`colimit`] with an error radius
//! and a status saying how far it can be trusted. Around that construction the
//! crate provides:
//!
//! * [`linalg`]: operators, spectral norms, the isometry / contraction /
//!   bounded classification and the norm-gap inequality;
//! * [`colimit`]: classes, limit inner products, zero classes, cocones and
//!   induced maps;
//! * [`tensor`]: checks that `H ⊗ −` preserves the colimit;
//! * [`normalisation`]: the normalisation of chains of bounded maps;
//! * [`counterexamples`]: why bounded cocones need a global bound.
//!
//! ```
//! use hilbert_colim::colimit::{colim_norm, inclusion, LimitParams};
//! use hilbert_colim::counterexamples::scaling_chain;
//! use hilbert_colim::linalg::FinVector;
//!
//! let chain = scaling_chain(); // ℂ → ℂ → … by ½
//! let class = inclusion(&chain, 0, FinVector::from_real(&[1.0])?)?;
//! let norm = colim_norm(&chain, &class, &LimitParams::default())?;
//! assert_eq!(norm.value, 0.0);
//! # Ok::<(), hilbert_colim::Error>(())
//! ```
//!
//! A guide with worked examples lives in the `book/` directory of the
//! repository; its code blocks run as doctests of this crate.

pub mod chain;
pub mod colimit;
pub mod counterexamples;
pub mod error;
pub mod linalg;
pub mod normalisation;
pub mod sampling;
pub mod tensor;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub struct Introduction;
    #[doc = include_str!("../../../book/src/operators.md")]
    pub struct Operators;
    #[doc = include_str!("../../../book/src/chains.md")]
    pub struct Chains;
    #[doc = include_str!("../../../book/src/colimits.md")]
    pub struct Colimits;
    #[doc = include_str!("../../../book/src/cocones.md")]
    pub struct Cocones;
    #[doc = include_str!("../../../book/src/tensor.md")]
    pub struct Tensor;
    #[doc = include_str!("../../../book/src/normalisation.md")]
    pub struct Normalisation;
    #[doc = include_str!("../../../book/src/counterexamples.md")]
    pub struct Counterexamples;
    #[doc = include_str!("../../../book/src/cli.md")]
    pub struct Cli;
    #[doc = include_str!("../../../README.md")]
    pub struct Readme;
}
