//! Neuro-symbolic relational learning with randomly weighted feature
//! networks.
//!
//! The crate grounds first-order-logic predicates in feature vectors: a
//! frozen random encoder (a sparse binary fan-in projection concatenated
//! with random Fourier features) feeds a trained linear decoder, giving a
//! `[0, 1]`-valued score per predicate. A neural-tensor-network grounding is
//! included as a baseline. Groundings are trained by maximizing the fuzzy
//! satisfiability of a knowledge base of example atoms and universally
//! quantified constraints, and evaluated on visual-relationship-detection
//! style tasks (phrase / relationship / predicate detection, recall@N,
//! zero-shot triples).
//!
//! Start with the runnable programs under `examples/`; each one exercises a
//! major capability end to end. The `rwfn` binary wraps the same library
//! calls behind `train`, `eval`, `params`, `gen-data`, and `split`
//! subcommands driven by a TOML experiment config.

pub mod encoders;
pub mod error;
pub mod eval;
pub mod experiment;
pub mod fuzzy;
pub mod groundings;
pub mod kb;
pub mod numeric;
pub mod scene;
pub mod training;

pub use error::{Error, Result};
