//! Enumeration caps used by the dispatch layer.
//!
//! Defaults come from the core crate (chosen so the full verification
//! suites run in minutes on one core). Each can be tightened through an
//! environment variable, e.g. to speed up smoke runs; the core caps remain
//! the hard ceiling — raising an override beyond them has no effect.

use densepf_core::oracles;

/// `DENSEPF_CAP_SN`: full symmetric-group sweeps.
pub const ENV_SN: &str = "DENSEPF_CAP_SN";
/// `DENSEPF_CAP_WALKS`: closed-walk enumeration.
pub const ENV_WALKS: &str = "DENSEPF_CAP_WALKS";
/// `DENSEPF_CAP_TREES`: spanning-tree enumeration.
pub const ENV_TREES: &str = "DENSEPF_CAP_TREES";
/// `DENSEPF_CAP_RYSER`: inclusion–exclusion permanent.
pub const ENV_RYSER: &str = "DENSEPF_CAP_RYSER";
/// `DENSEPF_CAP_HAMDP`: bitmask Hamiltonian DP.
pub const ENV_HAM_DP: &str = "DENSEPF_CAP_HAMDP";

#[derive(Clone, Copy, Debug)]
pub struct Caps {
    pub s_n: usize,
    pub walks: usize,
    pub trees: usize,
    pub ryser: usize,
    pub ham_dp: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            s_n: oracles::PERMUTATION_CAP,
            walks: oracles::WALK_CAP,
            trees: oracles::TREE_CAP,
            ryser: oracles::RYSER_CAP,
            ham_dp: oracles::HAM_DP_CAP,
        }
    }
}

impl Caps {
    /// Defaults with environment overrides applied (clamped to the core
    /// hard caps).
    pub fn from_env() -> Self {
        let read = |name: &str, hard: usize| -> usize {
            match std::env::var(name) {
                Ok(v) => v.parse::<usize>().map(|n| n.min(hard)).unwrap_or(hard),
                Err(_) => hard,
            }
        };
        let d = Caps::default();
        Caps {
            s_n: read(ENV_SN, d.s_n),
            walks: read(ENV_WALKS, d.walks),
            trees: read(ENV_TREES, d.trees),
            ryser: read(ENV_RYSER, d.ryser),
            ham_dp: read(ENV_HAM_DP, d.ham_dp),
        }
    }
}
