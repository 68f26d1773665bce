//! Built-in algebras and modules addressed by short strings.
//!
//! Algebras are `name:key=value,...`, for example `truncated_poly:p=2,k=3`.
//! Modules are selectors joined by `+` into a direct sum:
//!
//! - `regular`, `dual` (dual of the right regular module), `free:rank=R`
//! - `simple:I` (the `I`-th simple, in the order of [`AlgebraStructure`])
//! - `random:seed=S,dim=D`
//!
//! [`AlgebraStructure`]: crate::decomp::AlgebraStructure

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::algmod::{
    group_algebra_abelian, group_algebra_cyclic, product_fields, random_module, truncated_poly,
    upper_triangular, Algebra, Module,
};
use crate::config::Config;
use crate::decomp::algebra_structure;
use crate::error::{Error, Result};

/// Largest algebra dimension a builtin may request.
pub const MAX_BUILTIN_DIM: usize = 64;

pub const ALGEBRA_NAMES: [&str; 5] = [
    "product_fields",
    "truncated_poly",
    "cyclic_group",
    "abelian_group",
    "upper_triangular",
];

struct Params<'a> {
    spec: &'a str,
    values: BTreeMap<&'a str, &'a str>,
}

impl<'a> Params<'a> {
    fn parse(spec: &'a str, body: &'a str, allowed: &[&str]) -> Result<Self> {
        let mut values = BTreeMap::new();
        for item in body.split(',').filter(|s| !s.is_empty()) {
            let (k, v) = item.split_once('=').ok_or_else(|| {
                Error::Input(format!("`{spec}`: expected key=value, found `{item}`"))
            })?;
            if !allowed.contains(&k) {
                return Err(Error::Input(format!(
                    "`{spec}`: unknown parameter `{k}` (expected one of {})",
                    allowed.join(", ")
                )));
            }
            if values.insert(k, v).is_some() {
                return Err(Error::Input(format!(
                    "`{spec}`: parameter `{k}` given twice"
                )));
            }
        }
        Ok(Params { spec, values })
    }

    fn raw(&self, key: &str) -> Result<&'a str> {
        self.values
            .get(key)
            .copied()
            .ok_or_else(|| Error::Input(format!("`{}`: missing parameter `{key}`", self.spec)))
    }

    fn number<T: std::str::FromStr>(&self, key: &str) -> Result<T> {
        let v = self.raw(key)?;
        v.parse().map_err(|_| {
            Error::Input(format!(
                "`{}`: `{key}={v}` is not a valid number",
                self.spec
            ))
        })
    }
}

fn check_dim(spec: &str, dim: usize) -> Result<()> {
    if dim > MAX_BUILTIN_DIM {
        return Err(Error::Input(format!(
            "`{spec}`: algebra dimension {dim} exceeds {MAX_BUILTIN_DIM}"
        )));
    }
    Ok(())
}

/// Parses a builtin algebra spec.
pub fn algebra(spec: &str) -> Result<Arc<Algebra>> {
    let (name, body) = spec.split_once(':').unwrap_or((spec, ""));
    match name {
        "product_fields" | "truncated_poly" => {
            let ps = Params::parse(spec, body, &["p", "k"])?;
            let (p, k): (u64, usize) = (ps.number("p")?, ps.number("k")?);
            check_dim(spec, k)?;
            if name == "product_fields" {
                product_fields(p, k)
            } else {
                truncated_poly(p, k)
            }
        }
        "cyclic_group" => {
            let ps = Params::parse(spec, body, &["p", "n"])?;
            let (p, n): (u64, usize) = (ps.number("p")?, ps.number("n")?);
            check_dim(spec, n)?;
            group_algebra_cyclic(p, n)
        }
        "abelian_group" => {
            let ps = Params::parse(spec, body, &["p", "orders"])?;
            let p: u64 = ps.number("p")?;
            let orders = ps
                .raw("orders")?
                .split('x')
                .map(|o| {
                    o.parse::<usize>()
                        .map_err(|_| Error::Input(format!("`{spec}`: bad group order `{o}`")))
                })
                .collect::<Result<Vec<_>>>()?;
            let dim = orders.iter().try_fold(1usize, |acc, &o| acc.checked_mul(o));
            check_dim(spec, dim.unwrap_or(usize::MAX))?;
            group_algebra_abelian(p, &orders)
        }
        "upper_triangular" => {
            let ps = Params::parse(spec, body, &["p", "n"])?;
            let (p, n): (u64, usize) = (ps.number("p")?, ps.number("n")?);
            check_dim(spec, n.saturating_mul(n + 1) / 2)?;
            upper_triangular(p, n)
        }
        other => Err(Error::Input(format!(
            "unknown builtin algebra `{other}` (expected one of {})",
            ALGEBRA_NAMES.join(", ")
        ))),
    }
}

/// Parses a module selector over `a`.
pub fn module(a: &Arc<Algebra>, selector: &str, cfg: &Config) -> Result<Module> {
    module_in(a, selector, &BTreeMap::new(), cfg)
}

/// Parses a module selector over `a` in which a term may also be the name of
/// a module in `named`. Names take precedence over builtin terms.
pub fn module_in(
    a: &Arc<Algebra>,
    selector: &str,
    named: &BTreeMap<String, Module>,
    cfg: &Config,
) -> Result<Module> {
    let mut out: Option<Module> = None;
    for term in selector.split('+') {
        let term = term.trim();
        let m = match named.get(term) {
            Some(m) => m.clone(),
            None => term_module(a, term, cfg)?,
        };
        out = Some(match out {
            None => m,
            Some(acc) => acc.direct_sum(&m),
        });
    }
    out.ok_or_else(|| Error::Input("empty module selector".into()))
}

fn term_module(a: &Arc<Algebra>, term: &str, cfg: &Config) -> Result<Module> {
    let (name, body) = term.split_once(':').unwrap_or((term, ""));
    match name {
        "regular" if body.is_empty() => Ok(Module::regular(a.clone())),
        "dual" if body.is_empty() => Ok(Module::dual_of_right_regular(a.clone())),
        "free" => {
            let ps = Params::parse(term, body, &["rank"])?;
            Ok(Module::free(a.clone(), ps.number("rank")?))
        }
        "simple" => {
            let i: usize = body
                .parse()
                .map_err(|_| Error::Input(format!("`{term}`: expected simple:INDEX")))?;
            let st = algebra_structure(a, cfg)?;
            st.simples.get(i).cloned().ok_or_else(|| {
                Error::Input(format!(
                    "`{term}`: {} has {} simple modules",
                    a.name(),
                    st.simples.len()
                ))
            })
        }
        "random" => {
            let ps = Params::parse(term, body, &["seed", "dim"])?;
            random_module(a, ps.number("seed")?, ps.number("dim")?)
        }
        _ => Err(Error::Input(format!(
            "unknown module selector `{term}` (expected regular, dual, free:rank=R, simple:I, random:seed=S,dim=D)"
        ))),
    }
}
