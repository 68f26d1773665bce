//! Decompositions and the invariants built on them: indecomposable
//! decompositions, Krull-Schmidt length, class-relative splits,
//! stratification by projective dimension, and composition length.

mod classes;
mod split;
mod structure;

pub(crate) use classes::class_holds;
pub use classes::{
    check_class_supported, class_predicate, ks_additivity_check, ks_additivity_in, omega_split,
    omega_split_in, stratify, stratify_in, verify_split_uniqueness, verify_split_uniqueness_in,
    AdditivityReport, ClassVerdict, GradingFunction, GradingLaw, ModuleClass, OmegaSplit,
    SplitUniqueness, Stratification,
};
pub use split::{
    fitting_split, indecomposable_decomposition, is_indecomposable, ks_length, refine,
    Decomposition, IndecomposabilityCertificate, KsLengthReport,
};
pub use structure::{
    algebra_structure, composition_factors, is_projective, is_semisimple, module_length, pdim,
    projective_cover, radical_of, syzygy, AlgebraStructure, Grade, Primitive, ProjectiveCover,
};

use std::sync::Arc;

use crate::algmod::{Algebra, Module};
use crate::config::Config;
use crate::error::Result;

/// The regular module plus the first simple module.
pub fn regular_plus_simple(a: &Arc<Algebra>, cfg: &Config) -> Result<Module> {
    let st = algebra_structure(a, cfg)?;
    Ok(Module::regular(a.clone()).direct_sum(&st.simples[0]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algmod::{
        group_algebra_cyclic, is_isomorphic, product_fields, truncated_poly, upper_triangular,
    };
    use crate::analysis::Analysis;
    use crate::linalg::Subspace;

    fn iso(a: &Module, b: &Module) -> bool {
        is_isomorphic(a, b, &Config::default())
            .unwrap()
            .is_isomorphic()
    }

    #[test]
    fn class_examples() {
        let cfg = Config::default();
        let pf = product_fields(2, 2).unwrap();
        let s = algebra_structure(&pf, &cfg).unwrap().simples[0].clone();
        assert!(
            class_predicate(&s, ModuleClass::Semisimple, &cfg)
                .unwrap()
                .holds
        );
        let d = Module::regular(truncated_poly(2, 2).unwrap());
        assert!(
            !class_predicate(&d, ModuleClass::Semisimple, &cfg)
                .unwrap()
                .holds
        );
        assert!(
            class_predicate(&d, ModuleClass::Projective, &cfg)
                .unwrap()
                .holds
        );
        assert!(class_predicate(&d, ModuleClass::Free, &cfg).unwrap().holds);
        let v = class_predicate(&d, ModuleClass::Fitting, &cfg).unwrap();
        assert!(v.holds && v.trivially_true);
        let t2 = Module::regular(upper_triangular(2, 2).unwrap());
        assert!(matches!(
            class_predicate(&t2, ModuleClass::Injective, &cfg),
            Err(crate::Error::ClassUnsupported(_))
        ));
        assert!(matches!(
            class_predicate(&t2, ModuleClass::Free, &cfg),
            Err(crate::Error::ClassUnsupported(_))
        ));
    }

    #[test]
    fn class_tags_round_trip() {
        for c in ModuleClass::ALL {
            assert_eq!(c.tag().parse::<ModuleClass>().unwrap(), c);
        }
        assert!("bogus".parse::<ModuleClass>().is_err());
    }

    #[test]
    fn witness_split_semisimple() {
        let cfg = Config::default();
        let a = truncated_poly(2, 2).unwrap();
        let m = regular_plus_simple(&a, &cfg).unwrap();
        let split = omega_split(&m, ModuleClass::Semisimple, &cfg).unwrap();
        let s = &algebra_structure(&a, &cfg).unwrap().simples[0];
        assert!(iso(&m.restrict(&split.a).unwrap(), s));
        assert!(iso(
            &m.restrict(&split.b).unwrap(),
            &Module::regular(a.clone())
        ));
        assert!(split.b_class_free);
        let u = verify_split_uniqueness(&m, ModuleClass::Semisimple, &cfg).unwrap();
        assert!(u.unique, "{u:?}");
    }

    #[test]
    fn split_edge_cases() {
        let cfg = Config::default();
        let d = Module::regular(truncated_poly(2, 2).unwrap());
        let split = omega_split(&d, ModuleClass::Semisimple, &cfg).unwrap();
        assert!(split.a.is_zero() && split.b.is_full());
        let pf = Module::regular(product_fields(2, 2).unwrap());
        let split = omega_split(&pf, ModuleClass::Semisimple, &cfg).unwrap();
        assert!(split.a.is_full() && split.b.is_zero());
        let u = verify_split_uniqueness(&pf, ModuleClass::Semisimple, &cfg).unwrap();
        assert_eq!(u.splits, 1);
        assert!(u.unique);
    }

    #[test]
    fn stratify_upper_triangular_simples() {
        let cfg = Config::default();
        let a = upper_triangular(2, 2).unwrap();
        let st = algebra_structure(&a, &cfg).unwrap();
        let m = st.simples[0].direct_sum(&st.simples[1]);
        let s = stratify(&m, GradingFunction::pdim(), 8, &cfg).unwrap();
        assert!(s.grades_exact && s.infinite_bucket_clean);
        assert_eq!(s.buckets[0].dim(), 1);
        assert_eq!(s.buckets[1].dim(), 1);
        assert!(s.infinite.is_zero());
        assert!(is_projective(&m.restrict(&s.buckets[0]).unwrap(), &cfg).unwrap());
        assert_eq!(
            pdim(&m.restrict(&s.buckets[1]).unwrap(), 8, &cfg).unwrap(),
            Grade::Finite(1)
        );
    }

    #[test]
    fn stratify_periodic_simple() {
        let cfg = Config::default();
        let a = truncated_poly(2, 2).unwrap();
        let m = regular_plus_simple(&a, &cfg).unwrap();
        let s = stratify(&m, GradingFunction::pdim(), 3, &cfg).unwrap();
        assert_eq!(s.buckets[0].dim(), 2);
        assert!(s.buckets[1..].iter().all(Subspace::is_zero));
        assert_eq!(s.infinite.dim(), 1);
        assert!(s.infinite_bucket_clean);
    }

    #[test]
    fn projective_module_stratifies_to_bucket_zero() {
        let cfg = Config::default();
        let m = Module::regular(group_algebra_cyclic(2, 4).unwrap());
        let s = stratify(&m, GradingFunction::pdim(), 2, &cfg).unwrap();
        assert!(s.buckets[0].is_full());
    }

    #[test]
    fn additivity() {
        let cfg = Config::default();
        let pf = Module::regular(product_fields(2, 2).unwrap());
        let r = ks_additivity_check(&pf, &cfg).unwrap();
        assert!(r.holds);
        assert_eq!(r.indecomposable_cardinalities, vec![2]);
        let s = algebra_structure(&product_fields(2, 2).unwrap(), &cfg)
            .unwrap()
            .simples[0]
            .clone();
        let ss = s.direct_sum(&s);
        let an = Analysis::new(&ss, &cfg).unwrap();
        assert_eq!(an.ks_of(an.poset().top()), 2);
        assert!(ks_additivity_in(&an).unwrap().holds);
    }
}
