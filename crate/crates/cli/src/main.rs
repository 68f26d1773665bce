//! `summand-lab`: command-line front end to `summand-core`.

mod commands;
mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use summand_core::config::{DEFAULT_PDIM_CUTOFF, SOFT_MODULE_DIM};
use summand_core::{Config, Error, Exec};

use commands::Output;

#[derive(Debug, Parser)]
#[command(
    name = "summand-lab",
    version,
    about = "Direct-sum decompositions of finite modules over finite-dimensional GF(p)-algebras"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check the algebra axioms and the module relations of the input.
    Validate(Common),
    /// Basis of the endomorphism ring.
    Endo(Common),
    /// Every idempotent of the endomorphism ring.
    Idempotents(Common),
    /// The poset of direct summands as a Hasse diagram.
    Summands(Common),
    /// An indecomposable decomposition with certificates.
    Decompose(Common),
    /// Krull-Schmidt length by four independent routes.
    KsLength(Common),
    /// Split off a maximal summand in a module class.
    Split {
        #[arg(long, value_name = "TAG")]
        class: String,
        #[command(flatten)]
        common: Common,
    },
    /// Enumerate every class split and compare them up to isomorphism.
    SplitVerify {
        #[arg(long, value_name = "TAG")]
        class: String,
        #[command(flatten)]
        common: Common,
    },
    /// Stratify the module by a grading.
    Stratify {
        #[arg(long, default_value = "pdim")]
        grading: String,
        #[command(flatten)]
        common: Common,
    },
    /// Projective dimension.
    Pdim(Common),
    /// Composition length.
    Length(Common),
    /// Counts of decompositions and summands up to isomorphism.
    Aks(Common),
    /// Number of decompositions refining an indecomposable one.
    BellCheck(Common),
    /// Lift every maximal summand chain to a chain of complements.
    ChainLift(Common),
    /// The summand poset as covers and dimensions.
    Poset {
        /// Also report the deviation of the poset and its dual.
        #[arg(long)]
        deviation: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Run the property suite over the built-in corpus.
    CorpusCheck(Common),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Args)]
struct Common {
    /// JSON input file holding an algebra and named modules.
    #[arg(value_name = "FILE", conflicts_with = "builtin")]
    input: Option<PathBuf>,
    /// Built-in algebra, for example `truncated_poly:p=2,k=3`.
    #[arg(long, value_name = "NAME:PARAMS")]
    builtin: Option<String>,
    /// Module selector: terms such as `regular`, `dual`, `free:rank=R`,
    /// `simple:I`, `random:seed=S,dim=D` or an input module name, joined by `+`.
    #[arg(long, value_name = "SELECTOR")]
    module: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Largest endomorphism ring size whose elements may be enumerated.
    #[arg(long, env = "SUMMAND_LAB_BUDGET", value_parser = clap::value_parser!(u64).range(1..))]
    idempotent_budget: Option<u64>,
    /// Largest hom space size exhausted by the isomorphism search.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    iso_budget: Option<u64>,
    /// Largest number of literal decompositions enumerated.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    decomposition_budget: Option<u64>,
    /// Projective dimension cutoff; grades beyond it count as infinite.
    #[arg(long, default_value_t = DEFAULT_PDIM_CUTOFF)]
    cutoff: usize,
    /// Worker threads; 0 picks one per core.
    #[arg(long, default_value_t = 0)]
    threads: usize,
    /// Run every kernel on the calling thread.
    #[arg(long)]
    sequential: bool,
}

impl Common {
    fn config(&self) -> Config {
        let mut cfg = Config {
            seed: self.seed,
            pdim_cutoff: self.cutoff,
            exec: if self.sequential {
                Exec::Sequential
            } else {
                Exec::Parallel
            },
            ..Config::default()
        };
        if let Some(b) = self.idempotent_budget {
            cfg.idempotent_limit = b;
        }
        if let Some(b) = self.iso_budget {
            cfg.iso_limit = b;
        }
        if let Some(b) = self.decomposition_budget {
            cfg.decomposition_limit = b;
        }
        cfg
    }
}

const EXIT_CHECK: u8 = 1;
const EXIT_BUDGET: u8 = 2;
const EXIT_INPUT: u8 = 3;

fn error_kind(e: &Error) -> (&'static str, u8) {
    match e {
        Error::BudgetExceeded { .. } => ("budget_exceeded", EXIT_BUDGET),
        Error::CheckFailed(_) => ("check_failed", EXIT_CHECK),
        _ => ("input", EXIT_INPUT),
    }
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Validate(_) => "validate",
            Command::Endo(_) => "endo",
            Command::Idempotents(_) => "idempotents",
            Command::Summands(_) => "summands",
            Command::Decompose(_) => "decompose",
            Command::KsLength(_) => "ks-length",
            Command::Split { .. } => "split",
            Command::SplitVerify { .. } => "split-verify",
            Command::Stratify { .. } => "stratify",
            Command::Pdim(_) => "pdim",
            Command::Length(_) => "length",
            Command::Aks(_) => "aks",
            Command::BellCheck(_) => "bell-check",
            Command::ChainLift(_) => "chain-lift",
            Command::Poset { .. } => "poset",
            Command::CorpusCheck(_) => "corpus-check",
        }
    }

    fn common(&self) -> &Common {
        match self {
            Command::Validate(c)
            | Command::Endo(c)
            | Command::Idempotents(c)
            | Command::Summands(c)
            | Command::Decompose(c)
            | Command::KsLength(c)
            | Command::Pdim(c)
            | Command::Length(c)
            | Command::Aks(c)
            | Command::BellCheck(c)
            | Command::ChainLift(c)
            | Command::CorpusCheck(c) => c,
            Command::Split { common, .. }
            | Command::SplitVerify { common, .. }
            | Command::Stratify { common, .. }
            | Command::Poset { common, .. } => common,
        }
    }
}

fn dispatch(cmd: &Command, cfg: &Config) -> summand_core::Result<Output> {
    let c = cmd.common();
    if let Command::CorpusCheck(_) = cmd {
        if c.input.is_some() || c.builtin.is_some() || c.module.is_some() {
            return Err(Error::Input("corpus-check takes no input or module".into()));
        }
        return commands::corpus_check(cfg);
    }
    let src = commands::Source::load(c.input.as_deref(), c.builtin.as_deref())?;
    if let Command::Validate(_) = cmd {
        return commands::validate(&src, c.module.as_deref(), cfg);
    }
    let sel = src.select(c.module.as_deref(), cfg)?;
    if sel.module.dim() > SOFT_MODULE_DIM {
        eprintln!(
            "warning: module dimension {} exceeds {SOFT_MODULE_DIM}; searches may be slow",
            sel.module.dim()
        );
    }
    match cmd {
        Command::Endo(_) => commands::endo(&sel, cfg),
        Command::Idempotents(_) => commands::idempotents(&sel, cfg),
        Command::Summands(_) => commands::summands(&sel, cfg),
        Command::Decompose(_) => commands::decompose(&sel, cfg),
        Command::KsLength(_) => commands::ks_length(&sel, cfg),
        Command::Split { class, .. } => commands::split(&sel, class, cfg),
        Command::SplitVerify { class, .. } => commands::split_verify(&sel, class, cfg),
        Command::Stratify { grading, .. } => commands::stratify(&sel, grading, cfg),
        Command::Pdim(_) => commands::pdim(&sel, cfg),
        Command::Length(_) => commands::length(&sel, cfg),
        Command::Aks(_) => commands::aks(&sel, cfg),
        Command::BellCheck(_) => commands::bell_check(&sel, cfg),
        Command::ChainLift(_) => commands::chain_lift(&sel, cfg),
        Command::Poset { deviation, .. } => commands::poset(&sel, *deviation, cfg),
        Command::Validate(_) | Command::CorpusCheck(_) => unreachable!("handled above"),
    }
}

#[cfg(feature = "parallel")]
fn run_with_threads<R: Send>(threads: usize, f: impl FnOnce() -> R + Send) -> Result<R, String> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| format!("cannot start worker pool: {e}"))?;
    Ok(pool.install(f))
}

#[cfg(not(feature = "parallel"))]
fn run_with_threads<R: Send>(_threads: usize, f: impl FnOnce() -> R + Send) -> Result<R, String> {
    Ok(f())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let cmd = &cli.command;
    let common = cmd.common();
    let cfg = common.config();
    let result = match run_with_threads(common.threads, || dispatch(cmd, &cfg)) {
        Ok(r) => r,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(EXIT_INPUT);
        }
    };
    let json = common.format == Format::Json;
    match result {
        Ok(out) => {
            if json {
                println!("{}", render::envelope(cmd.name(), "result", out.json));
            } else {
                print!("{}", out.text);
            }
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_CHECK)
            }
        }
        Err(e) => {
            let (kind, code) = error_kind(&e);
            if json {
                let body = serde_json::json!({ "kind": kind, "message": e.to_string() });
                println!("{}", render::envelope(cmd.name(), "error", body));
            }
            eprintln!("error: {e}");
            ExitCode::from(code)
        }
    }
}
