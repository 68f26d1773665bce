//! Acceptance suite. Runs without the libtest harness so that one PASS or
//! FAIL line per criterion is always printed; exits nonzero if any fails.

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use summand_core::aks::{aks_report, aks_report_in, enumerate_in};
use summand_core::algmod::{is_isomorphic, Module};
use summand_core::analysis::Analysis;
use summand_core::builtin;
use summand_core::corpus::{corpus, corpus_check, CorpusEntry, EntryKind, CORPUS_ALGEBRAS};
use summand_core::decomp::{
    algebra_structure, indecomposable_decomposition, is_indecomposable, is_projective,
    module_length, refine, stratify, verify_split_uniqueness, verify_split_uniqueness_in,
    Decomposition, GradingFunction, ModuleClass,
};
use summand_core::endo::max_orthogonal_family;
use summand_core::linalg::Subspace;
use summand_core::summands::{
    dual_deviation_check, lift_chain_to_complements, longest_nonzero_chain, max_independent_family,
    maximal_chains,
};
use summand_core::{exec, Config, Exec};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn(&Fixture) -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn lib<T>(r: summand_core::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

struct Fixture {
    cfg: Config,
    entries: Vec<CorpusEntry>,
    analyses: Vec<Analysis>,
}

impl Fixture {
    fn each(&self) -> impl Iterator<Item = (&CorpusEntry, &Analysis)> {
        self.entries.iter().zip(&self.analyses)
    }
}

// ---------------------------------------------------------------------------
// Brute-force oracles over GF(2), independent of the library's linear algebra.

/// Action matrices as row-major bit rows.
fn bit_action(m: &Module) -> Vec<Vec<Vec<u8>>> {
    m.action()
        .iter()
        .map(|a| {
            a.to_rows()
                .into_iter()
                .map(|r| r.into_iter().map(|x| x as u8).collect())
                .collect()
        })
        .collect()
}

/// Image of the vector with bit `k` = coordinate `k` under a column action.
fn apply(a: &[Vec<u8>], v: usize) -> usize {
    a.iter().enumerate().fold(0, |acc, (r, row)| {
        let bit = row
            .iter()
            .enumerate()
            .fold(0u8, |s, (c, &x)| s ^ (x & ((v >> c) & 1) as u8));
        acc | ((bit as usize) << r)
    })
}

/// All subspaces of GF(2)^n (n <= 6) as sets of vectors, one bit per vector.
fn all_subspaces(n: usize) -> Vec<u64> {
    let mut seen: BTreeSet<u64> = BTreeSet::from([1]);
    let mut frontier = vec![1u64];
    while let Some(s) = frontier.pop() {
        for v in 0..1usize << n {
            if s >> v & 1 == 1 {
                continue;
            }
            let mut t = s;
            for u in 0..1usize << n {
                if s >> u & 1 == 1 {
                    t |= 1 << (u ^ v);
                }
            }
            if seen.insert(t) {
                frontier.push(t);
            }
        }
    }
    seen.into_iter().collect()
}

/// Summands of `m` by scanning every subspace for invariance and every
/// invariant subspace for a complement.
fn oracle_summands(m: &Module) -> BTreeSet<u64> {
    let n = m.dim();
    let action = bit_action(m);
    let invariant: Vec<u64> = all_subspaces(n)
        .into_iter()
        .filter(|&s| {
            (0..1usize << n)
                .filter(|&v| s >> v & 1 == 1)
                .all(|v| action.iter().all(|a| s >> apply(a, v) & 1 == 1))
        })
        .collect();
    invariant
        .iter()
        .copied()
        .filter(|&s| {
            invariant
                .iter()
                .any(|&t| s & t == 1 && (s.count_ones() as u64) * (t.count_ones() as u64) == 1 << n)
        })
        .collect()
}

fn vector_set(s: &Subspace) -> u64 {
    let rows = s.basis().to_rows();
    let vecs: Vec<usize> = rows
        .iter()
        .map(|r| {
            r.iter()
                .enumerate()
                .fold(0, |acc, (k, &x)| acc | ((x as usize) << k))
        })
        .collect();
    (0..1usize << vecs.len()).fold(0u64, |acc, mask| {
        let v = vecs
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .fold(0, |x, (_, &w)| x ^ w);
        acc | 1 << v
    })
}

/// KS length from all matrices commuting with the action: the largest set
/// of pairwise orthogonal nonzero idempotents summing to the identity.
fn oracle_ks_length(m: &Module) -> usize {
    let n = m.dim();
    let action = bit_action(m);
    // matrices as column images: col[c] = X e_c
    let mul = |x: &[usize], v: usize| (0..n).filter(|&c| v >> c & 1 == 1).fold(0, |s, c| s ^ x[c]);
    let compose =
        |x: &[usize], y: &[usize]| -> Vec<usize> { y.iter().map(|&col| mul(x, col)).collect() };
    let mut idempotents = Vec::new();
    for code in 0u64..1 << (n * n) {
        let x: Vec<usize> = (0..n)
            .map(|c| ((code >> (c * n)) & ((1 << n) - 1)) as usize)
            .collect();
        let commutes = action
            .iter()
            .all(|a| (0..n).all(|c| mul(&x, apply(a, 1 << c)) == apply(a, x[c])));
        if commutes && compose(&x, &x) == x && x.iter().any(|&c| c != 0) {
            idempotents.push(x);
        }
    }
    let identity: Vec<usize> = (0..n).map(|c| 1 << c).collect();
    fn search(
        idems: &[Vec<usize>],
        from: usize,
        chosen: &mut Vec<usize>,
        total: Vec<usize>,
        identity: &[usize],
        orth: &dyn Fn(&[usize], &[usize]) -> bool,
        best: &mut usize,
    ) {
        if total == identity {
            *best = (*best).max(chosen.len());
        }
        for k in from..idems.len() {
            if chosen
                .iter()
                .all(|&c| orth(&idems[c], &idems[k]) && orth(&idems[k], &idems[c]))
            {
                let t: Vec<usize> = total.iter().zip(&idems[k]).map(|(a, b)| a ^ b).collect();
                chosen.push(k);
                search(idems, k + 1, chosen, t, identity, orth, best);
                chosen.pop();
            }
        }
    }
    let orth = |x: &[usize], y: &[usize]| compose(x, y).iter().all(|&c| c == 0);
    let mut best = 0;
    search(
        &idempotents,
        0,
        &mut Vec::new(),
        vec![0; n],
        &identity,
        &orth,
        &mut best,
    );
    best
}

fn bell(n: usize) -> u128 {
    // Bell triangle
    let mut row = vec![1u128];
    for _ in 0..n {
        let mut next = vec![*row.last().unwrap()];
        for &x in &row {
            next.push(next.last().unwrap() + x);
        }
        row = next;
    }
    row[0]
}

// ---------------------------------------------------------------------------

fn criterion_1(fx: &Fixture) -> Outcome {
    let randoms = fx
        .entries
        .iter()
        .filter(|e| matches!(e.kind, EntryKind::Random { .. }))
        .count();
    let regulars = fx
        .entries
        .iter()
        .filter(|e| e.kind == EntryKind::Regular)
        .count();
    ensure!(
        randoms == 50 && regulars == 10,
        "corpus has {randoms} random and {regulars} regular modules"
    );
    for (e, an) in fx.each() {
        let m = &e.module;
        let by_decomposition = lib(indecomposable_decomposition(m, &fx.cfg))?.len();
        let by_chain = longest_nonzero_chain(an.poset()).length;
        let by_independent = max_independent_family(an.poset()).size;
        let by_orthogonal = lib(max_orthogonal_family(an.endo(), &fx.cfg))?.len();
        let counts = [by_decomposition, by_chain, by_independent, by_orthogonal];
        ensure!(
            counts.iter().all(|&c| c == counts[0]),
            "{}: counts {counts:?}",
            e.name
        );
    }
    Ok(format!(
        "four KS length routes agree on all {} corpus modules",
        fx.entries.len()
    ))
}

fn criterion_2(fx: &Fixture) -> Outcome {
    let mut seen = Vec::new();
    for (spec, want) in [
        ("product_fields:p=2,k=2", 2),
        ("truncated_poly:p=2,k=2", 1),
        ("upper_triangular:p=2,n=2", 2),
    ] {
        let m = Module::regular(lib(builtin::algebra(spec))?);
        let oracle = oracle_ks_length(&m);
        let got = lib(summand_core::decomp::ks_length(&m, &fx.cfg))?.value;
        ensure!(
            oracle == want && got == want,
            "{spec}: oracle {oracle}, library {got}, pinned {want}"
        );
        seen.push(format!("{spec}={got}"));
    }
    Ok(format!("regular KS lengths {}", seen.join(", ")))
}

fn criterion_3(fx: &Fixture) -> Outcome {
    let mut total = 0usize;
    for (e, an) in fx.each() {
        let m = &e.module;
        let mut indecomposable: BTreeMap<Subspace, bool> = BTreeMap::new();
        for d in lib(enumerate_in(an))? {
            let coarse =
                Decomposition::new(d.iter().map(|&i| an.poset().element(i).clone()).collect());
            let fine = lib(refine(m, &coarse, &fx.cfg))?;
            ensure!(
                fine.is_valid(m) && fine.refines(&coarse),
                "{}: refinement of {d:?} is not a refinement",
                e.name
            );
            for part in &fine.parts {
                if !indecomposable.contains_key(part) {
                    let (ind, _) = lib(is_indecomposable(&lib(m.restrict(part))?, &fx.cfg))?;
                    indecomposable.insert(part.clone(), ind);
                }
                ensure!(
                    indecomposable[part],
                    "{}: refined part of dim {} decomposes",
                    e.name,
                    part.dim()
                );
            }
            total += 1;
        }
        let r = lib(aks_report_in(an))?;
        ensure!(r.aks2 == 1, "{}: AKS2 = {}", e.name, r.aks2);
    }
    Ok(format!(
        "{total} enumerated decompositions refine to indecomposable ones; AKS2 = 1 throughout"
    ))
}

fn criterion_4(fx: &Fixture) -> Outcome {
    let expected_self_injective: BTreeSet<&str> = CORPUS_ALGEBRAS
        .iter()
        .map(|(s, _)| *s)
        .filter(|s| !s.starts_with("upper_triangular"))
        .collect();
    let mut injective_runs = 0;
    let mut runs = 0;
    for (e, an) in fx.each() {
        let st = lib(algebra_structure(e.algebra(), &fx.cfg))?;
        let is_expected = expected_self_injective.contains(e.algebra().name());
        ensure!(
            st.self_injective == is_expected,
            "{}: self-injective verdict {}",
            e.algebra().name(),
            st.self_injective
        );
        let mut classes = vec![ModuleClass::Semisimple, ModuleClass::Projective];
        if st.self_injective {
            classes.push(ModuleClass::Injective);
            injective_runs += 1;
        }
        for c in classes {
            let u = lib(verify_split_uniqueness_in(an, c))?;
            ensure!(
                u.unique && u.splits > 0,
                "{}: {c} splits not unique ({u:?})",
                e.name
            );
            runs += 1;
        }
    }
    // witness: regular F2[x]/(x^2) plus the simple
    let a = lib(builtin::algebra("truncated_poly:p=2,k=2"))?;
    let simple = lib(builtin::module(&a, "simple:0", &fx.cfg))?;
    let regular = Module::regular(a.clone());
    let m = regular.direct_sum(&simple);
    let s = lib(summand_core::decomp::omega_split(
        &m,
        ModuleClass::Semisimple,
        &fx.cfg,
    ))?;
    let a_part = lib(m.restrict(&s.a))?;
    let b_part = lib(m.restrict(&s.b))?;
    ensure!(
        lib(is_isomorphic(&a_part, &simple, &fx.cfg))?.is_isomorphic()
            && lib(is_isomorphic(&b_part, &regular, &fx.cfg))?.is_isomorphic(),
        "witness split has dims ({}, {})",
        s.a.dim(),
        s.b.dim()
    );
    ensure!(
        lib(verify_split_uniqueness(
            &m,
            ModuleClass::Semisimple,
            &fx.cfg
        ))?
        .unique,
        "witness split not unique"
    );
    Ok(format!("{runs} class splits unique ({injective_runs} modules with injective); witness splits as (simple, regular)"))
}

fn criterion_5(fx: &Fixture) -> Outcome {
    let t2 = lib(builtin::algebra("upper_triangular:p=2,n=2"))?;
    let m = lib(builtin::module(&t2, "simple:0+simple:1", &fx.cfg))?;
    // the projective simple is the 1-dimensional summand of the regular module
    let reg = Analysis::new(&Module::regular(t2.clone()), &fx.cfg).map_err(|e| e.to_string())?;
    let p1 = (0..reg.poset().len())
        .find(|&i| reg.poset().element(i).dim() == 1)
        .map(|i| reg.element_module(i).clone())
        .ok_or("regular T2 has no 1-dimensional summand")?;
    let s = lib(stratify(
        &m,
        GradingFunction::pdim(),
        fx.cfg.pdim_cutoff,
        &fx.cfg,
    ))?;
    let bucket = |v: usize| lib(m.restrict(&s.buckets[v]));
    let (b0, b1) = (bucket(0)?, bucket(1)?);
    ensure!(
        b0.dim() == 1 && b1.dim() == 1,
        "bucket dims {} and {}",
        b0.dim(),
        b1.dim()
    );
    ensure!(
        lib(is_isomorphic(&b0, &p1, &fx.cfg))?.is_isomorphic() && lib(is_projective(&b0, &fx.cfg))?,
        "bucket 0 is not the projective simple"
    );
    ensure!(
        !lib(is_isomorphic(&b1, &p1, &fx.cfg))?.is_isomorphic()
            && !lib(is_projective(&b1, &fx.cfg))?,
        "bucket 1 is projective"
    );
    ensure!(
        s.buckets[2..].iter().all(Subspace::is_zero),
        "higher buckets are nonzero"
    );
    ensure!(
        s.infinite.is_zero(),
        "infinite bucket has dim {}",
        s.infinite.dim()
    );

    let dual = lib(builtin::algebra("truncated_poly:p=2,k=2"))?;
    let simple = lib(builtin::module(&dual, "simple:0", &fx.cfg))?;
    for cutoff in 1..=fx.cfg.pdim_cutoff {
        let s = lib(stratify(&simple, GradingFunction::pdim(), cutoff, &fx.cfg))?;
        ensure!(
            s.infinite.dim() == 1 && s.buckets.iter().all(Subspace::is_zero),
            "cutoff {cutoff}: simple not in the infinite bucket"
        );
    }
    Ok(format!(
        "T2 buckets (P1 | S2 | 0); F2[x]/(x^2) simple infinite for cutoffs 1..={}",
        fx.cfg.pdim_cutoff
    ))
}

fn criterion_6(fx: &Fixture) -> Outcome {
    let mut total = 0;
    for (e, an) in fx.each() {
        let p = an.poset();
        let n = e.module.dim();
        for chain in maximal_chains(p) {
            let subs: Vec<Subspace> = chain.iter().map(|&i| p.element(i).clone()).collect();
            let lift = lib(lift_chain_to_complements(p, &subs, &fx.cfg))?;
            ensure!(
                lift.all_verified() && lift.complements.len() == subs.len(),
                "{}: chain {chain:?} fails",
                e.name
            );
            for (mk, nk) in subs.iter().zip(&lift.complements) {
                let meet = lib(mk.intersection(nk))?;
                ensure!(
                    meet.is_zero() && mk.dim() + nk.dim() == n && e.module.is_submodule(nk),
                    "{}: M != M_k + N_k on chain {chain:?}",
                    e.name
                );
            }
            total += 1;
        }
        ensure!(
            dual_deviation_check(&p.to_finite_poset()),
            "{}: dual deviation differs",
            e.name
        );
    }
    Ok(format!(
        "{total} maximal chains lifted; dual deviation check holds on every poset"
    ))
}

fn criterion_7(fx: &Fixture) -> Outcome {
    let f2x2 = lib(aks_report(
        &Module::regular(lib(builtin::algebra("product_fields:p=2,k=2"))?),
        &fx.cfg,
    ))?;
    let counts = (f2x2.aks1, f2x2.aks2, f2x2.aks3, f2x2.aks4);
    ensure!(counts == (2, 1, 4, 2), "F2xF2 counts {counts:?}");
    let f2x3 = lib(aks_report(
        &Module::regular(lib(builtin::algebra("product_fields:p=2,k=3"))?),
        &fx.cfg,
    ))?;
    ensure!(f2x3.aks1 == 5 && bell(3) == 5, "F2^3 AKS1 = {}", f2x3.aks1);
    let mut violations = 0;
    for (e, an) in fx.each() {
        let r = lib(aks_report_in(an))?;
        let ks = max_independent_family(an.poset()).size as u32;
        let bound: u128 = (1..=ks).map(|i| (r.aks3 as u128).pow(i)).sum();
        ensure!(
            (r.aks1 as u128) <= bound,
            "{}: AKS1 {} exceeds {bound}",
            e.name,
            r.aks1
        );
        violations += r.proper_isomorphic_summands;
    }
    ensure!(
        violations == 0,
        "{violations} proper isomorphic summand pairs"
    );
    Ok("F2xF2 (2, 1, 4, 2); F2^3 AKS1 = 5 = Bell(3); bound holds; 0 lemma violations".into())
}

fn criterion_8(fx: &Fixture) -> Outcome {
    let mut elements = 0;
    for (e, an) in fx.each() {
        let mut by_class: BTreeMap<usize, usize> = BTreeMap::new();
        for i in 0..an.poset().len() {
            let len = match by_class.get(&an.label(i)) {
                Some(&l) => l,
                None => {
                    let l = lib(module_length(an.element_module(i), &fx.cfg))?;
                    by_class.insert(an.label(i), l);
                    l
                }
            };
            ensure!(
                an.ks_of(i) <= len,
                "{}: element {i} has KS length {} > length {len}",
                e.name,
                an.ks_of(i)
            );
            elements += 1;
        }
    }
    Ok(format!(
        "KS length at most length on {elements} poset elements"
    ))
}

fn criterion_9(fx: &Fixture) -> Outcome {
    let mut checked = 0;
    for (e, an) in fx.each() {
        let m = &e.module;
        if m.dim() > 6 || m.field().p() != 2 {
            continue;
        }
        let p = an.poset();
        let fast: Vec<u64> = p.elements().iter().map(vector_set).collect();
        let fast_set: BTreeSet<u64> = fast.iter().copied().collect();
        ensure!(
            fast_set.len() == fast.len(),
            "{}: duplicate poset elements",
            e.name
        );
        let oracle = oracle_summands(m);
        ensure!(
            oracle == fast_set,
            "{}: oracle has {} summands, idempotent images {}",
            e.name,
            oracle.len(),
            fast_set.len()
        );
        for i in 0..p.len() {
            for j in 0..p.len() {
                ensure!(
                    p.leq(i, j) == (fast[i] & !fast[j] == 0),
                    "{}: order differs at ({i}, {j})",
                    e.name
                );
            }
        }
        checked += 1;
    }
    ensure!(checked >= 30, "only {checked} modules in oracle range");
    Ok(format!(
        "brute-force summand oracle matches the idempotent-image poset on {checked} modules"
    ))
}

fn criterion_10(fx: &Fixture) -> Outcome {
    let render = |cfg: Config| {
        lib(corpus_check(&cfg)).map(|r| serde_json::to_string(&r).expect("serializes"))
    };
    let reference = render(fx.cfg.with_exec(Exec::Sequential))?;
    ensure!(
        render(fx.cfg.with_exec(Exec::Sequential))? == reference,
        "sequential runs differ"
    );
    for threads in [1, 2, 4] {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| e.to_string())?;
        let out = pool.install(|| render(fx.cfg.with_exec(Exec::Parallel)))?;
        ensure!(
            out == reference,
            "{threads} workers differ from the sequential run"
        );
    }
    let v: serde_json::Value = serde_json::from_str(&reference).expect("valid JSON");
    ensure!(v["all_passed"] == true, "corpus check reports failures");
    Ok(format!(
        "corpus report ({} bytes) identical across runs and 1, 2, 4 workers",
        reference.len()
    ))
}

fn main() -> ExitCode {
    let start = Instant::now();
    let cfg = Config::default();
    let entries = corpus(&cfg).expect("corpus builds");
    let analyses = exec::map(cfg.exec, &entries, |e| Analysis::new(&e.module, &cfg))
        .into_iter()
        .collect::<summand_core::Result<Vec<_>>>()
        .expect("corpus analyses fit the budgets");
    let fx = Fixture {
        cfg,
        entries,
        analyses,
    };
    let criteria: [Criterion; 10] = [
        ("KS length four-way agreement", criterion_1),
        ("pinned KS lengths", criterion_2),
        ("refinement and AKS2 = 1", criterion_3),
        ("class split uniqueness", criterion_4),
        ("stratification", criterion_5),
        ("chain lifting and dual deviation", criterion_6),
        ("AKS counts", criterion_7),
        ("length bound", criterion_8),
        ("brute-force oracle equivalence", criterion_9),
        ("determinism", criterion_10),
    ];
    let mut failed = 0;
    for (k, (title, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(|| check(&fx)))
            .unwrap_or_else(|_| Err("panicked".to_string()));
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!(
                "criterion {:>2} PASS  {title}: {detail} [{secs:.1}s]",
                k + 1
            ),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {title}: {why} [{secs:.1}s]", k + 1);
            }
        }
    }
    println!(
        "acceptance: {} of 10 criteria passed in {:.1}s",
        10 - failed,
        start.elapsed().as_secs_f64()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
