//! Krull-Schmidt decomposition theory on finite modules over
//! finite-dimensional algebras over prime fields.
//!
//! Algebras are given by structure constants and modules by action
//! matrices. From there the crate computes endomorphism rings and their
//! idempotents, the poset of direct summands, indecomposable decompositions,
//! Krull-Schmidt length by four independent routes, class-relative splits,
//! stratification by projective dimension, and counts of decompositions and
//! summands up to isomorphism.
//!
//! Every search is exhaustive and bounded by the budgets in [`Config`];
//! exceeding one is an error, never a silent truncation. Results are
//! deterministic and independent of the execution mode.

pub mod aks;
pub mod algmod;
pub mod analysis;
pub mod builtin;
pub mod config;
pub mod corpus;
pub mod decomp;
pub mod endo;
mod error;
pub mod exec;
pub mod input;
pub mod linalg;
pub mod summands;

pub use config::Config;
pub use error::{Error, Result};
pub use exec::Exec;
