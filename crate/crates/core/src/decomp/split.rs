use serde::Serialize;

use crate::algmod::{is_intertwiner, Module};
use crate::config::Config;
use crate::endo::{
    endomorphism_ring, enumerate_idempotents, first_nontrivial_idempotent, is_local,
    max_orthogonal_family,
};
use crate::error::{Error, Result};
use crate::linalg::{Mat, Subspace};
use crate::summands::{longest_nonzero_chain, max_independent_family, summand_poset};

/// An internal direct sum decomposition into nonzero parts.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Decomposition {
    pub parts: Vec<Subspace>,
}

impl Decomposition {
    /// Drops zero parts and sorts the rest canonically.
    pub fn new(mut parts: Vec<Subspace>) -> Self {
        parts.retain(|p| !p.is_zero());
        parts.sort();
        Decomposition { parts }
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Parts are invariant, independent and span the module.
    pub fn is_valid(&self, m: &Module) -> bool {
        let n = m.dim();
        if self
            .parts
            .iter()
            .any(|p| p.ambient_dim() != n || !m.is_submodule(p))
        {
            return false;
        }
        let total: usize = self.parts.iter().map(Subspace::dim).sum();
        if total != n {
            return false;
        }
        let stacked = self
            .parts
            .iter()
            .fold(Mat::zeros(m.field(), 0, n), |acc, p| acc.vstack(p.basis()));
        stacked.rank() == n
    }

    /// Whether every part of `self` lies inside exactly one part of `coarse`.
    pub fn refines(&self, coarse: &Decomposition) -> bool {
        self.parts
            .iter()
            .all(|p| coarse.parts.iter().filter(|c| c.contains(p)).count() == 1)
    }
}

/// `(ker φ^n, im φ^n)` with `n = dim M`.
pub fn fitting_split(m: &Module, phi: &Mat) -> Result<(Subspace, Subspace)> {
    if !is_intertwiner(phi, m, m) {
        return Err(Error::Input(
            "map is not an endomorphism of the module".into(),
        ));
    }
    let power = phi.pow(m.dim());
    Ok((Subspace::kernel_of(&power), Subspace::image_of(&power)))
}

/// Idempotent count of `End(M)` and the locality verdict; on a nonzero
/// finite module these agree: exactly two idempotents iff `End(M)` is local.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct IndecomposabilityCertificate {
    pub idempotent_count: usize,
    pub local: bool,
}

pub fn is_indecomposable(m: &Module, cfg: &Config) -> Result<(bool, IndecomposabilityCertificate)> {
    let e = endomorphism_ring(m)?;
    let count = enumerate_idempotents(&e, cfg)?.len();
    let local = is_local(&e, cfg)?;
    let cert = IndecomposabilityCertificate {
        idempotent_count: count,
        local,
    };
    let by_count = !m.is_zero() && count == 2;
    if by_count != local {
        return Err(Error::CheckFailed(format!(
            "{count} idempotents but End(M) local = {local}"
        )));
    }
    Ok((local, cert))
}

fn split_into(m: &Module, cfg: &Config, out: &mut Vec<Subspace>) -> Result<()> {
    if m.is_zero() {
        return Ok(());
    }
    let e = endomorphism_ring(m)?;
    match first_nontrivial_idempotent(&e, cfg)? {
        None => {
            if !is_local(&e, cfg)? {
                return Err(Error::CheckFailed(
                    "only trivial idempotents but End(M) is not local".into(),
                ));
            }
            out.push(Subspace::full(m.field(), m.dim()));
        }
        Some(idem) => {
            for piece in [
                Subspace::image_of(&idem.matrix),
                Subspace::image_of(&idem.complement(&e).matrix),
            ] {
                let mut inner = Vec::new();
                split_into(&m.restrict(&piece)?, cfg, &mut inner)?;
                out.extend(inner.iter().map(|s| piece.absolute(s)));
            }
        }
    }
    Ok(())
}

/// Splits along the first nontrivial idempotent until every part has local
/// endomorphism ring.
pub fn indecomposable_decomposition(m: &Module, cfg: &Config) -> Result<Decomposition> {
    let mut parts = Vec::new();
    split_into(m, cfg, &mut parts)?;
    Ok(Decomposition::new(parts))
}

/// Decomposes each part of `d` inside itself.
pub fn refine(m: &Module, d: &Decomposition, cfg: &Config) -> Result<Decomposition> {
    if !d.is_valid(m) {
        return Err(Error::Input("not a decomposition of the module".into()));
    }
    let mut parts = Vec::new();
    for p in &d.parts {
        let inner = indecomposable_decomposition(&m.restrict(p)?, cfg)?;
        parts.extend(inner.parts.iter().map(|s| p.absolute(s)));
    }
    let out = Decomposition::new(parts);
    if !out.refines(d) {
        return Err(Error::CheckFailed(
            "refinement leaves its parent parts".into(),
        ));
    }
    Ok(out)
}

/// Krull-Schmidt length by four independent routes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KsLengthReport {
    pub value: usize,
    pub by_decomposition: usize,
    pub by_chain: usize,
    pub by_independent: usize,
    pub by_orthogonal_idempotents: usize,
    pub decomposition: Decomposition,
    pub chain: Vec<Subspace>,
    pub independent_family: Vec<Subspace>,
    /// Ranks of the members of a maximal orthogonal family.
    pub idempotent_ranks: Vec<usize>,
}

impl KsLengthReport {
    /// Builds the report, failing if the four counts disagree.
    pub fn from_parts(
        decomposition: Decomposition,
        chain: Vec<Subspace>,
        independent_family: Vec<Subspace>,
        idempotent_ranks: Vec<usize>,
    ) -> Result<Self> {
        let counts = [
            decomposition.len(),
            chain.len(),
            independent_family.len(),
            idempotent_ranks.len(),
        ];
        if counts.iter().any(|&c| c != counts[0]) {
            return Err(Error::CheckFailed(format!(
                "KS length strategies disagree: decomposition {}, chain {}, independent {}, idempotents {}",
                counts[0], counts[1], counts[2], counts[3]
            )));
        }
        Ok(KsLengthReport {
            value: counts[0],
            by_decomposition: counts[0],
            by_chain: counts[1],
            by_independent: counts[2],
            by_orthogonal_idempotents: counts[3],
            decomposition,
            chain,
            independent_family,
            idempotent_ranks,
        })
    }
}

pub fn ks_length(m: &Module, cfg: &Config) -> Result<KsLengthReport> {
    let e = endomorphism_ring(m)?;
    let poset = summand_poset(&e, cfg)?;
    let decomposition = indecomposable_decomposition(m, cfg)?;
    let chain = longest_nonzero_chain(&poset);
    let family = max_independent_family(&poset);
    let orth = max_orthogonal_family(&e, cfg)?;
    KsLengthReport::from_parts(
        decomposition,
        chain
            .witness
            .iter()
            .map(|&i| poset.element(i).clone())
            .collect(),
        family
            .witness
            .iter()
            .map(|&i| poset.element(i).clone())
            .collect(),
        orth.members.iter().map(|i| i.rank()).collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algmod::{product_fields, truncated_poly, upper_triangular};
    use crate::linalg::FieldSpec;

    fn line(v: Vec<u16>) -> Subspace {
        Subspace::from_vectors(FieldSpec::gf(2), v.len(), &[v])
    }

    #[test]
    fn fitting_examples() {
        let m = Module::regular(product_fields(2, 2).unwrap());
        let f = m.field();
        let (k, i) = fitting_split(&m, &Mat::identity(f, 2)).unwrap();
        assert!(k.is_zero() && i.is_full());
        let (k, i) = fitting_split(&m, &Mat::zeros(f, 2, 2)).unwrap();
        assert!(k.is_full() && i.is_zero());
        let (k, i) = fitting_split(&m, &Mat::diagonal(f, &[1, 0])).unwrap();
        assert_eq!((k, i), (line(vec![0, 1]), line(vec![1, 0])));
    }

    #[test]
    fn indecomposability() {
        let cfg = Config::default();
        let (ind, cert) =
            is_indecomposable(&Module::regular(truncated_poly(2, 2).unwrap()), &cfg).unwrap();
        assert!(ind);
        assert_eq!(cert.idempotent_count, 2);
        let (ind, cert) =
            is_indecomposable(&Module::regular(product_fields(2, 2).unwrap()), &cfg).unwrap();
        assert!(!ind);
        assert_eq!(cert.idempotent_count, 4);
    }

    #[test]
    fn decompositions_and_refinement() {
        let cfg = Config::default();
        let m = Module::regular(product_fields(2, 2).unwrap());
        let d = indecomposable_decomposition(&m, &cfg).unwrap();
        assert_eq!(d.parts, vec![line(vec![0, 1]), line(vec![1, 0])]);
        let whole = Decomposition::new(vec![Subspace::full(m.field(), 2)]);
        assert_eq!(refine(&m, &whole, &cfg).unwrap(), d);
        assert_eq!(refine(&m, &d, &cfg).unwrap(), d);

        let dual = Module::regular(truncated_poly(2, 2).unwrap());
        assert_eq!(indecomposable_decomposition(&dual, &cfg).unwrap().len(), 1);
        let padded = dual.direct_sum(&Module::zero(dual.algebra().clone()));
        assert_eq!(
            indecomposable_decomposition(&padded, &cfg).unwrap(),
            indecomposable_decomposition(&dual, &cfg).unwrap()
        );
    }

    #[test]
    fn ks_values() {
        let cfg = Config::default();
        let v = |m: Module| ks_length(&m, &cfg).unwrap().value;
        assert_eq!(v(Module::regular(product_fields(2, 2).unwrap())), 2);
        assert_eq!(v(Module::regular(truncated_poly(2, 2).unwrap())), 1);
        assert_eq!(v(Module::regular(upper_triangular(2, 2).unwrap())), 2);
        assert_eq!(v(Module::zero(product_fields(2, 2).unwrap())), 0);
    }

    #[test]
    fn disagreement_is_reported() {
        let err = KsLengthReport::from_parts(
            Decomposition::new(vec![]),
            vec![line(vec![1])],
            vec![],
            vec![],
        );
        assert!(matches!(err, Err(Error::CheckFailed(_))));
    }
}
