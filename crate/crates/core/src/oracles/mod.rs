//! Ground-truth values by exhaustive enumeration or exact dynamic
//! programming, feasible for small `n`. Every other module is validated
//! against these.
//!
//! Enumeration order is fixed (lexicographic over the enumerated objects)
//! and accumulation is compensated, so results are reproducible bit for bit.

use core::fmt;

use serde::{Deserialize, Serialize};

mod hamilton;
mod perm;
mod ryser;
mod tree;
mod walk;

pub use hamilton::{hamiltonian_permanent, HamMethod};
pub use perm::{
    cycle_count_weights, cycle_length_distribution, expected_cycle_count, merge_cycles,
    patch_to_hamiltonian, permanent_cycle_restricted, permanent_naive, Permutation,
};
pub use ryser::permanent_ryser;
pub use tree::{tree_sum_restricted, SpanningTree};
pub use walk::{walk_sum_restricted, ClosedWalk};

pub(crate) use hamilton::{ham_count_adjacency, ham_dp_entries};
pub(crate) use tree::for_each_tree;
pub(crate) use walk::for_each_walk;

/// Enumeration cap for operations that sweep the full symmetric group
/// (`n!` permutations).
pub const PERMUTATION_CAP: usize = 10;

/// Enumeration cap for the `n^n` closed walks of length `n`.
pub const WALK_CAP: usize = 7;

/// Enumeration cap for the `n^{n−2}` labeled spanning trees.
pub const TREE_CAP: usize = 9;

/// Cap for the inclusion–exclusion permanent (`2^n` column subsets).
pub const RYSER_CAP: usize = 24;

/// Cap for the bitmask Hamiltonian-cycle dynamic program
/// (`2^{n−1} (n−1)^2` time, `2^{n−1} (n−1)` doubles of memory).
pub const HAM_DP_CAP: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum OracleError {
    /// Instance exceeds the enumeration cap for the requested operation.
    TooLarge { n: usize, cap: usize },
    /// `merge_cycles` requires the second vertex outside the first one's
    /// cycle.
    SameCycle { i: usize, r: usize },
    /// The image array is not a bijection of `{0, …, n−1}`.
    NotABijection,
    /// Vertex label outside `{0, …, n−1}`.
    BadVertex { vertex: usize, n: usize },
    /// Edge set is not a spanning tree.
    NotATree,
}

impl fmt::Display for OracleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleError::TooLarge { n, cap } => {
                write!(f, "instance size {n} exceeds enumeration cap {cap}")
            }
            OracleError::SameCycle { i, r } => {
                write!(f, "vertices {i} and {r} share a cycle")
            }
            OracleError::NotABijection => write!(f, "images do not form a permutation"),
            OracleError::BadVertex { vertex, n } => {
                write!(f, "vertex {vertex} out of range for n = {n}")
            }
            OracleError::NotATree => write!(f, "edge set is not a spanning tree"),
        }
    }
}

impl core::error::Error for OracleError {}

pub(crate) fn check_cap(n: usize, cap: usize) -> Result<(), OracleError> {
    if n > cap {
        Err(OracleError::TooLarge { n, cap })
    } else {
        Ok(())
    }
}
