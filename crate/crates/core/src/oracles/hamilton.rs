//! The Hamiltonian permanent: weighted count of single-cycle permutations.

use alloc::vec;

use serde::{Deserialize, Serialize};

use crate::logdomain::LogValue;
use crate::matrix::WeightMatrix;
use crate::num::NeumaierSum;
use crate::oracles::{check_cap, OracleError, HAM_DP_CAP, PERMUTATION_CAP};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HamMethod {
    /// Enumerate the `(n−1)!` single cycles directly.
    Naive,
    /// Bitmask dynamic program over vertex subsets anchored at vertex 0.
    Dp,
}

/// `ham A = Σ_{σ ∈ H_n} Π_i a_{i σ(i)}`, the sum over the `(n−1)!`
/// permutations consisting of a single cycle.
pub fn hamiltonian_permanent(
    a: &WeightMatrix,
    method: HamMethod,
) -> Result<LogValue, OracleError> {
    let n = a.n();
    match method {
        HamMethod::Naive => {
            check_cap(n, PERMUTATION_CAP)?;
            Ok(LogValue::from_f64(ham_naive_entries(a.entries(), n)))
        }
        HamMethod::Dp => {
            check_cap(n, HAM_DP_CAP)?;
            Ok(LogValue::from_f64(ham_dp_entries(a.entries(), n)))
        }
    }
}

/// Cycle enumeration anchored at vertex 0, lexicographic in the path order.
/// Works on raw entries so the separator can reuse it for 0/1 adjacency
/// matrices.
pub(crate) fn ham_naive_entries(entries: &[f64], n: usize) -> f64 {
    if n == 1 {
        return entries[0];
    }
    let mut used = vec![false; n];
    let mut acc = NeumaierSum::new();
    fn rec(
        entries: &[f64],
        n: usize,
        prev: usize,
        remaining: usize,
        product: f64,
        used: &mut [bool],
        acc: &mut NeumaierSum,
    ) {
        if remaining == 0 {
            acc.add(product * entries[prev * n]);
            return;
        }
        for v in 1..n {
            if !used[v] {
                used[v] = true;
                rec(entries, n, v, remaining - 1, product * entries[prev * n + v], used, acc);
                used[v] = false;
            }
        }
    }
    rec(entries, n, 0, n - 1, 1.0, &mut used, &mut acc);
    acc.total()
}

/// Held–Karp style sum over weighted Hamiltonian cycles through vertex 0.
///
/// `dp[mask][j]` is the weighted sum of paths `0 → … → j` whose interior
/// visits are exactly the vertices of `mask ⊆ {1, …, n−1}`; closing each
/// full path back to 0 yields the cycle sum. `O(2^{n−1} (n−1)^2)` time.
pub(crate) fn ham_dp_entries(entries: &[f64], n: usize) -> f64 {
    if n == 1 {
        return entries[0];
    }
    let m = n - 1; // vertices 1..n encoded as bits 0..m
    let size = 1usize << m;
    let mut dp = vec![0.0f64; size * m];
    for j in 0..m {
        dp[(1 << j) * m + j] = entries[j + 1]; // edge 0 -> j+1
    }
    for mask in 1usize..size {
        for j in 0..m {
            if mask & (1 << j) == 0 {
                continue;
            }
            let cur = dp[mask * m + j];
            if cur == 0.0 {
                continue;
            }
            let from = (j + 1) * n;
            for k in 0..m {
                if mask & (1 << k) == 0 {
                    let next = mask | (1 << k);
                    dp[next * m + k] += cur * entries[from + k + 1];
                }
            }
        }
    }
    let full = size - 1;
    let mut acc = NeumaierSum::new();
    for j in 0..m {
        acc.add(dp[full * m + j] * entries[(j + 1) * n]);
    }
    acc.total()
}

/// Weighted Hamiltonian-cycle count of a 0/1 adjacency matrix, used by the
/// separator. Exact while counts stay within f64 integer range.
pub(crate) fn ham_count_adjacency(adjacency: &[f64], n: usize) -> Result<f64, OracleError> {
    check_cap(n, HAM_DP_CAP)?;
    Ok(ham_dp_entries(adjacency, n))
}
