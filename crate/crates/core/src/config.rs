use crate::exec::Exec;

pub const DEFAULT_IDEMPOTENT_LIMIT: u64 = 1 << 16;
pub const DEFAULT_ISO_LIMIT: u64 = 1 << 16;
pub const DEFAULT_PDIM_CUTOFF: usize = 8;
pub const DEFAULT_DECOMPOSITION_LIMIT: u64 = 200_000;
pub const ISO_RANDOM_TRIALS: usize = 256;
pub const SOFT_MODULE_DIM: usize = 24;

/// Budgets and execution mode threaded through every exhaustive search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Config {
    /// Largest ring size `p^d` whose elements may be enumerated.
    pub idempotent_limit: u64,
    /// Largest hom-space size `p^d` exhausted by the isomorphism search.
    pub iso_limit: u64,
    pub pdim_cutoff: usize,
    /// Largest number of literal decompositions enumerated per module.
    pub decomposition_limit: u64,
    pub seed: u64,
    pub exec: Exec,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            idempotent_limit: DEFAULT_IDEMPOTENT_LIMIT,
            iso_limit: DEFAULT_ISO_LIMIT,
            pdim_cutoff: DEFAULT_PDIM_CUTOFF,
            decomposition_limit: DEFAULT_DECOMPOSITION_LIMIT,
            seed: 0,
            exec: Exec::default(),
        }
    }
}

impl Config {
    pub fn sequential() -> Self {
        Config {
            exec: Exec::Sequential,
            ..Config::default()
        }
    }

    pub fn with_exec(mut self, exec: Exec) -> Self {
        self.exec = exec;
        self
    }
}

/// `p^d` as an exact integer, saturating far above any budget.
pub(crate) fn ring_size(p: u16, d: usize) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..d {
        acc = acc.saturating_mul(p as u128);
        if acc > u64::MAX as u128 {
            return acc;
        }
    }
    acc
}
