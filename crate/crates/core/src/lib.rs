//! Learning per-step validity of discrete sequences.
//!
//! This crate estimates whether a prefix of a discrete sequence can still be
//! completed into a valid one, and puts that estimate to work: exact validity
//! oracles for arithmetic expressions and a SMILES subset, a recurrent
//! validity model trained with a product-of-steps likelihood, Bayesian active
//! acquisition of training sequences, generative sampling with coverage
//! estimation, and constrained decoding by masking infeasible continuations.

pub mod alphabet;
pub mod data;
pub mod oracle;

pub use alphabet::{Alphabet, TokenId};
pub use data::{Dataset, LabeledExample, Sequence};
pub use oracle::Verdict;
