//! Exact linear algebra over prime fields.

mod field;
mod mat;
mod solve;
mod subspace;

pub use field::FieldSpec;
pub use mat::{Echelon, Mat};
pub use solve::{solve_linear, LinearSolution};
pub(crate) use subspace::SpanBuilder;
pub use subspace::Subspace;
