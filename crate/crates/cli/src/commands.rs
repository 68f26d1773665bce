//! One function per subcommand. Each returns the JSON report, its text
//! rendering, and whether every check it ran held.

use std::collections::BTreeMap;
use std::fmt::Write;
use std::path::Path;
use std::sync::Arc;

use serde_json::{json, Value};
use summand_core::aks::{aks_report, bell_refinement_check};
use summand_core::algmod::{validate_algebra, validate_module, Algebra, Module};
use summand_core::corpus::corpus_check as run_corpus;
use summand_core::decomp::{
    composition_factors, indecomposable_decomposition, is_indecomposable, ks_length as ks_report,
    module_length, omega_split, pdim as pdim_of, stratify as stratify_by, verify_split_uniqueness,
    Grade, GradingFunction, ModuleClass,
};
use summand_core::endo::{endomorphism_ring, enumerate_idempotents, is_local};
use summand_core::input::{parse_file, violation_triple};
use summand_core::summands::{
    deviation_finite, dual_deviation_check, lift_chain_to_complements, maximal_chains,
    summand_poset, SummandPoset,
};
use summand_core::{builtin, Config, Error, Result};

use crate::render;

pub struct Output {
    pub json: Value,
    pub text: String,
    pub ok: bool,
}

/// The algebra and named modules an invocation works over.
pub struct Source {
    algebra: Arc<Algebra>,
    named: BTreeMap<String, Module>,
    from_file: bool,
}

pub struct Selection {
    pub module: Module,
    selector: String,
}

impl Source {
    pub fn load(file: Option<&Path>, spec: Option<&str>) -> Result<Self> {
        match (file, spec) {
            (Some(path), None) => {
                let inp = parse_file(path)?;
                Ok(Source {
                    algebra: inp.algebra,
                    named: inp.modules,
                    from_file: true,
                })
            }
            (None, Some(spec)) => Ok(Source {
                algebra: builtin::algebra(spec)?,
                named: BTreeMap::new(),
                from_file: false,
            }),
            _ => Err(Error::Input("give exactly one of FILE or --builtin".into())),
        }
    }

    /// Without a selector: the only module of the input, or the regular
    /// module when there is none.
    pub fn select(&self, selector: Option<&str>, cfg: &Config) -> Result<Selection> {
        let selector = match selector {
            Some(s) => s.to_string(),
            None if self.named.len() == 1 => self.named.keys().next().cloned().unwrap_or_default(),
            None if self.named.is_empty() => "regular".to_string(),
            None => {
                let names: Vec<&str> = self.named.keys().map(String::as_str).collect();
                return Err(Error::Input(format!(
                    "input has several modules; pick one with --module ({})",
                    names.join(", ")
                )));
            }
        };
        let module = builtin::module_in(&self.algebra, &selector, &self.named, cfg)?;
        Ok(Selection { module, selector })
    }
}

impl Selection {
    fn output(&self, report: Value, body: String, ok: bool) -> Output {
        let a = self.module.algebra();
        let json = json!({
            "input": {
                "algebra": a.name(),
                "p": a.field().p(),
                "algebra_dim": a.dim(),
                "module": self.selector,
                "module_dim": self.module.dim(),
            },
            "report": report,
        });
        let text = format!(
            "module {} over {} (dim {})\n{body}",
            self.selector,
            a.name(),
            self.module.dim()
        );
        Output { json, text, ok }
    }
}

fn to_json<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

pub fn validate(src: &Source, selector: Option<&str>, cfg: &Config) -> Result<Output> {
    let a = &src.algebra;
    validate_algebra(a).map_err(|v| {
        Error::Input(format!(
            "algebra axiom violated: {v} {}",
            violation_triple(&v)
        ))
    })?;
    let mut modules: Vec<(String, usize)> = src
        .named
        .iter()
        .map(|(n, m)| (n.clone(), m.dim()))
        .collect();
    if let Some(sel) = selector.or(if src.from_file { None } else { Some("regular") }) {
        let m = builtin::module_in(a, sel, &src.named, cfg)?;
        validate_module(&m).map_err(|v| Error::Input(format!("module `{sel}`: {v}")))?;
        if !src.named.contains_key(sel) {
            modules.push((sel.to_string(), m.dim()));
        }
    }
    let mut text = format!(
        "algebra {}: GF({}), dim {}: ok\n",
        a.name(),
        a.field().p(),
        a.dim()
    );
    for (n, d) in &modules {
        let _ = writeln!(text, "module {n}: dim {d}: ok");
    }
    let json = json!({
        "algebra": {"name": a.name(), "p": a.field().p(), "dim": a.dim(), "valid": true},
        "modules": modules.iter().map(|(n, d)| json!({"name": n, "dim": d, "valid": true})).collect::<Vec<_>>(),
    });
    Ok(Output {
        json,
        text,
        ok: true,
    })
}

pub fn endo(sel: &Selection, cfg: &Config) -> Result<Output> {
    let e = endomorphism_ring(&sel.module)?;
    let local = if e.size() <= cfg.idempotent_limit as u128 {
        Some(is_local(&e, cfg)?)
    } else {
        None
    };
    let mut text = format!(
        "End(M): dim {}, size {}^{}\n",
        e.dim(),
        e.field().p(),
        e.dim()
    );
    match local {
        Some(l) => {
            let _ = writeln!(text, "local: {}", yes(l));
        }
        None => {
            let _ = writeln!(
                text,
                "local: not decided (ring exceeds the idempotent budget)"
            );
        }
    }
    let _ = writeln!(text, "unit coordinates: {:?}", e.unit());
    for (i, b) in e.basis().iter().enumerate() {
        let _ = writeln!(text, "  b{i} = {}", render::mat(b));
    }
    let report = json!({
        "dim": e.dim(),
        "size": u64::try_from(e.size()).ok(),
        "unit": e.unit(),
        "basis": e.basis().iter().map(|b| b.to_rows()).collect::<Vec<_>>(),
        "local": local,
    });
    Ok(sel.output(report, text, true))
}

pub fn idempotents(sel: &Selection, cfg: &Config) -> Result<Output> {
    let e = endomorphism_ring(&sel.module)?;
    let idems = enumerate_idempotents(&e, cfg)?;
    let mut text = format!("{} idempotents in End(M) (dim {})\n", idems.len(), e.dim());
    for i in &idems {
        let _ = writeln!(text, "  {:?} rank {}", i.coeffs, i.rank());
    }
    let report = json!({
        "count": idems.len(),
        "idempotents": idems.iter().map(|i| json!({"coeffs": i.coeffs, "rank": i.rank()})).collect::<Vec<_>>(),
    });
    Ok(sel.output(report, text, true))
}

fn poset_of(sel: &Selection, cfg: &Config) -> Result<SummandPoset> {
    summand_poset(&endomorphism_ring(&sel.module)?, cfg)
}

fn poset_json(p: &SummandPoset) -> Value {
    json!({
        "elements": p.elements().iter().map(|e| json!({"dim": e.dim(), "basis": e})).collect::<Vec<_>>(),
        "hasse_edges": p.hasse_edges(),
        "atoms": p.atoms(),
    })
}

pub fn summands(sel: &Selection, cfg: &Config) -> Result<Output> {
    let p = poset_of(sel, cfg)?;
    let mut text = render::hasse(&p);
    let _ = writeln!(text, "atoms: {:?}", p.atoms());
    Ok(sel.output(poset_json(&p), text, true))
}

pub fn decompose(sel: &Selection, cfg: &Config) -> Result<Output> {
    let m = &sel.module;
    let d = indecomposable_decomposition(m, cfg)?;
    let valid = d.is_valid(m);
    let mut ok = valid;
    let mut parts = Vec::new();
    let mut text = format!("{} indecomposable parts\n", d.len());
    for (k, part) in d.parts.iter().enumerate() {
        let (indec, cert) = is_indecomposable(&m.restrict(part)?, cfg)?;
        ok &= indec;
        let _ = writeln!(
            text,
            "  part {k}: dim {}  {}  ({} idempotents, local {})",
            part.dim(),
            render::subspace(part),
            cert.idempotent_count,
            yes(cert.local)
        );
        parts.push(
            json!({"dim": part.dim(), "basis": part, "indecomposable": indec, "certificate": cert}),
        );
    }
    let _ = writeln!(text, "direct sum equals M: {}", yes(valid));
    Ok(sel.output(json!({"parts": parts, "valid": valid}), text, ok))
}

pub fn ks_length(sel: &Selection, cfg: &Config) -> Result<Output> {
    let r = ks_report(&sel.module, cfg)?;
    let dims: Vec<usize> = r.decomposition.parts.iter().map(|p| p.dim()).collect();
    let chain: Vec<usize> = r.chain.iter().map(|p| p.dim()).collect();
    let fam: Vec<usize> = r.independent_family.iter().map(|p| p.dim()).collect();
    let text = format!(
        "KS length {}\n  indecomposable decomposition: {} parts, dims {dims:?}\n  longest nonzero chain: {}, dims {chain:?}\n  max independent family: {}, dims {fam:?}\n  max orthogonal idempotents: {}, ranks {:?}\n",
        r.value, r.by_decomposition, r.by_chain, r.by_independent, r.by_orthogonal_idempotents, r.idempotent_ranks
    );
    Ok(sel.output(to_json(&r), text, true))
}

fn class(tag: &str) -> Result<ModuleClass> {
    tag.parse().map_err(|_| {
        let tags: Vec<&str> = ModuleClass::ALL.iter().map(|c| c.tag()).collect();
        Error::Input(format!(
            "unknown class `{tag}` (expected one of {})",
            tags.join(", ")
        ))
    })
}

pub fn split(sel: &Selection, tag: &str, cfg: &Config) -> Result<Output> {
    let s = omega_split(&sel.module, class(tag)?, cfg)?;
    let text = format!(
        "class {}\n  A: dim {}  {}\n  B: dim {}  {}\n  B has no nonzero summand in the class: {}\n",
        s.class,
        s.a.dim(),
        render::subspace(&s.a),
        s.b.dim(),
        render::subspace(&s.b),
        yes(s.b_class_free)
    );
    let ok = s.b_class_free;
    Ok(sel.output(to_json(&s), text, ok))
}

pub fn split_verify(sel: &Selection, tag: &str, cfg: &Config) -> Result<Output> {
    let u = verify_split_uniqueness(&sel.module, class(tag)?, cfg)?;
    let text = format!(
        "class {}\n  splits: {}\n  A classes: {}, B classes: {}\n  complements containing a class member: {}\n  unique up to isomorphism: {}\n",
        u.class,
        u.splits,
        u.a_iso_classes,
        u.b_iso_classes,
        u.non_free_complements,
        yes(u.unique)
    );
    let ok = u.unique;
    Ok(sel.output(to_json(&u), text, ok))
}

pub fn stratify(sel: &Selection, grading: &str, cfg: &Config) -> Result<Output> {
    let g: GradingFunction = grading.parse()?;
    let s = stratify_by(&sel.module, g, cfg.pdim_cutoff, cfg)?;
    let mut text = format!("grading {} with cutoff {}\n", g.name, s.cutoff);
    for (v, b) in s.buckets.iter().enumerate() {
        let _ = writeln!(
            text,
            "  bucket {v}: dim {}  {}",
            b.dim(),
            render::subspace(b)
        );
    }
    let _ = writeln!(
        text,
        "  bucket inf: dim {}  {}",
        s.infinite.dim(),
        render::subspace(&s.infinite)
    );
    let _ = writeln!(text, "grades exact: {}", yes(s.grades_exact));
    let _ = writeln!(
        text,
        "infinite bucket clean: {}",
        yes(s.infinite_bucket_clean)
    );
    let ok = s.grades_exact && s.infinite_bucket_clean;
    Ok(sel.output(to_json(&s), text, ok))
}

pub fn pdim(sel: &Selection, cfg: &Config) -> Result<Output> {
    let g = pdim_of(&sel.module, cfg.pdim_cutoff, cfg)?;
    let text = match g {
        Grade::Finite(v) => format!("pdim {v}\n"),
        Grade::BeyondCutoff => format!("pdim inf (beyond cutoff {})\n", cfg.pdim_cutoff),
    };
    Ok(sel.output(json!({"pdim": g, "cutoff": cfg.pdim_cutoff}), text, true))
}

pub fn length(sel: &Selection, cfg: &Config) -> Result<Output> {
    let l = module_length(&sel.module, cfg)?;
    let factors: Vec<usize> = composition_factors(&sel.module, cfg)?
        .iter()
        .map(Module::dim)
        .collect();
    let agree = factors.len() == l;
    let text = format!(
        "length {l}\n  composition factor dims {factors:?}\n  factor scan agrees: {}\n",
        yes(agree)
    );
    Ok(sel.output(
        json!({"length": l, "factor_dims": factors, "agree": agree}),
        text,
        agree,
    ))
}

pub fn aks(sel: &Selection, cfg: &Config) -> Result<Output> {
    let r = aks_report(&sel.module, cfg)?;
    let mut text = format!(
        "AKS1 {}  (decompositions up to isomorphism)\nAKS2 {}  (indecomposable decompositions up to isomorphism)\nAKS3 {}  (summands up to isomorphism)\nAKS4 {}  (indecomposable summands up to isomorphism)\n",
        r.aks1, r.aks2, r.aks3, r.aks4
    );
    let _ = writeln!(text, "literal decompositions: {}", r.literal_decompositions);
    let _ = writeln!(
        text,
        "bound sum_(i=1..{}) {}^i = {}: {}",
        r.ks_length,
        r.aks3,
        r.decomposition_bound,
        if r.bound_holds { "holds" } else { "violated" }
    );
    let _ = writeln!(
        text,
        "proper isomorphic summand pairs: {}",
        r.proper_isomorphic_summands
    );
    for c in &r.classes {
        let _ = writeln!(
            text,
            "  class dims {:?} x{}{}",
            c.part_dims,
            c.multiplicity,
            if c.indecomposable {
                " indecomposable"
            } else {
                ""
            }
        );
    }
    let ok = r.consistent();
    Ok(sel.output(to_json(&r), text, ok))
}

pub fn bell_check(sel: &Selection, cfg: &Config) -> Result<Output> {
    let b = bell_refinement_check(&sel.module, cfg)?;
    let text = match b.holds {
        Some(h) => format!(
            "{} parts, {} refining decompositions, Bell({}) = {}: {}\n",
            b.parts,
            b.refining_decompositions,
            b.parts,
            b.bell,
            if h { "equal" } else { "different" }
        ),
        None => format!(
            "precondition not met (parts not pairwise non-isomorphic, or a summand is not a sum of parts); {} refining decompositions, Bell({}) = {}\n",
            b.refining_decompositions, b.parts, b.bell
        ),
    };
    let ok = b.holds != Some(false);
    Ok(sel.output(to_json(&b), text, ok))
}

pub fn chain_lift(sel: &Selection, cfg: &Config) -> Result<Output> {
    let p = poset_of(sel, cfg)?;
    let chains = maximal_chains(&p);
    let mut ok = true;
    let mut reports = Vec::new();
    let mut text = format!("{} maximal chains\n", chains.len());
    for c in &chains {
        let subs: Vec<_> = c.iter().map(|&i| p.element(i).clone()).collect();
        let lift = lift_chain_to_complements(&p, &subs, cfg)?;
        let verified = lift.all_verified();
        ok &= verified;
        let comp: Vec<usize> = lift.complements.iter().map(|s| s.dim()).collect();
        let _ = writeln!(
            text,
            "  chain {} complements {comp:?}: {}",
            render::dims(&p, c),
            if verified { "verified" } else { "FAILED" }
        );
        reports.push(json!({"chain": c, "lift": lift, "verified": verified}));
    }
    Ok(sel.output(json!({"chains": reports, "all_verified": ok}), text, ok))
}

pub fn poset(sel: &Selection, deviation: bool, cfg: &Config) -> Result<Output> {
    let p = poset_of(sel, cfg)?;
    let mut report = to_json(&p.export());
    let mut text = render::hasse(&p);
    let mut ok = true;
    if deviation {
        let fp = p.to_finite_poset();
        let (dev, dual) = (deviation_finite(&fp), deviation_finite(&fp.dual()));
        ok = dual_deviation_check(&fp);
        let _ = writeln!(
            text,
            "deviation {}, dual deviation {}: {}",
            dev.value(),
            dual.value(),
            if ok { "equal" } else { "different" }
        );
        report["deviation"] = to_json(&dev);
        report["dual_deviation"] = to_json(&dual);
        report["dual_deviation_check"] = json!(ok);
    }
    Ok(sel.output(report, text, ok))
}

pub fn corpus_check(cfg: &Config) -> Result<Output> {
    let r = run_corpus(cfg)?;
    let mut text = format!(
        "corpus: {} modules, seed {}, pdim cutoff {}\n",
        r.modules.len(),
        r.seed,
        r.pdim_cutoff
    );
    for m in &r.modules {
        let ks = m
            .ks_length
            .as_ref()
            .map_or("?".to_string(), |k| k.value.to_string());
        let _ = writeln!(
            text,
            "  {:<48} dim {:>2}  KSl {ks}  summands {:>3}  checks {:>2}  {}",
            m.name,
            m.dim,
            m.summands,
            m.passed.len() + m.failures.len(),
            if m.failures.is_empty() { "ok" } else { "FAIL" }
        );
        for f in &m.failures {
            let _ = writeln!(text, "      {f}");
        }
    }
    let _ = writeln!(
        text,
        "{} checks passed, {} failed",
        r.checks_passed, r.checks_failed
    );
    let ok = r.all_passed;
    Ok(Output {
        json: to_json(&r),
        text,
        ok,
    })
}
