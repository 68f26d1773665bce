//! Algebras by structure constants, modules by action matrices, and the
//! morphism machinery between them.

mod algebra;
pub mod generators;
mod hom;
mod module;

pub use algebra::{validate_algebra, Algebra, AlgebraViolation};
pub use generators::{
    group_algebra_abelian, group_algebra_cyclic, product_fields, random_module, simple_modules_of,
    truncated_poly, upper_triangular,
};
pub(crate) use hom::digits;
pub use hom::{
    hom_basis, hom_dim, hom_space, is_intertwiner, is_isomorphic, IsoVerdict, NonIsoCertificate,
};
pub use module::{quotient_module, spin, validate_module, Module, ModuleViolation};
