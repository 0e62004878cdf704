//! Permutations, their cycle structure, and the `S_n` enumeration oracles.

use alloc::vec;
use alloc::vec::Vec;

use crate::logdomain::LogValue;
use crate::matrix::WeightMatrix;
use crate::num::NeumaierSum;
use crate::oracles::{check_cap, OracleError, PERMUTATION_CAP};

/// A permutation of `{0, …, n−1}` stored as its image array.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self, OracleError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &v in &images {
            if v >= n || seen[v] {
                return Err(OracleError::NotABijection);
            }
            seen[v] = true;
        }
        Ok(Permutation { images })
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (0..n).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    pub fn image(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// Cycle decomposition. Each cycle is listed in traversal order starting
    /// from its smallest element; cycles appear in order of those elements.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut v = start;
            while !seen[v] {
                seen[v] = true;
                cycle.push(v);
                v = self.images[v];
            }
            out.push(cycle);
        }
        out
    }

    pub fn cycle_count(&self) -> usize {
        self.cycles().len()
    }

    /// Length of the cycle containing `v`.
    pub fn cycle_len_containing(&self, v: usize) -> usize {
        let mut len = 1;
        let mut w = self.images[v];
        while w != v {
            w = self.images[w];
            len += 1;
        }
        len
    }

    /// `Π_i a_{i, σ(i)}`.
    pub fn weight(&self, a: &WeightMatrix) -> f64 {
        assert_eq!(a.n(), self.n());
        self.images
            .iter()
            .enumerate()
            .map(|(i, &j)| a.get(i, j))
            .product()
    }
}

/// The patching map: turns any permutation into a single cycle.
///
/// Cycles are ordered by increasing largest element `j_1 < … < j_r`; with
/// `i_k` the in-cycle predecessor of `j_k`, the arcs `i_k → j_k` are
/// replaced by `i_k → j_{k+1}` (cyclically). Restricted to single-cycle
/// permutations the map is the identity, and the output loses at most a
/// `δ^{c(σ)}` factor of weight on a δ-bounded matrix.
pub fn patch_to_hamiltonian(sigma: &Permutation) -> Permutation {
    let cycles = sigma.cycles();
    // (largest element, its predecessor) per cycle, ordered by the largest
    // element.
    let mut anchors: Vec<(usize, usize)> = cycles
        .iter()
        .map(|cycle| {
            let pos = cycle
                .iter()
                .enumerate()
                .max_by_key(|&(_, &v)| v)
                .map(|(p, _)| p)
                .expect("cycles are non-empty");
            let pred = cycle[(pos + cycle.len() - 1) % cycle.len()];
            (cycle[pos], pred)
        })
        .collect();
    anchors.sort_unstable();
    let r = anchors.len();
    let mut images = sigma.images().to_vec();
    for k in 0..r {
        let (_, pred) = anchors[k];
        let (next_max, _) = anchors[(k + 1) % r];
        images[pred] = next_max;
    }
    Permutation { images }
}

/// Merge the cycle containing `r` into the cycle containing `i`: the arc
/// into `i` is redirected to `r` and the arc into `r` closes back to `i`,
/// splicing the two cycles into one. Splitting the merged cycle after the
/// original length of `i`'s cycle recovers the input.
pub fn merge_cycles(
    sigma: &Permutation,
    i: usize,
    r: usize,
) -> Result<Permutation, OracleError> {
    let n = sigma.n();
    if i >= n {
        return Err(OracleError::BadVertex { vertex: i, n });
    }
    if r >= n {
        return Err(OracleError::BadVertex { vertex: r, n });
    }
    // predecessor of i while scanning its cycle; detects r on the way
    let mut pred_i = i;
    while sigma.image(pred_i) != i {
        pred_i = sigma.image(pred_i);
        if pred_i == r {
            return Err(OracleError::SameCycle { i, r });
        }
    }
    if i == r || pred_i == r {
        return Err(OracleError::SameCycle { i, r });
    }
    let mut pred_r = r;
    while sigma.image(pred_r) != r {
        pred_r = sigma.image(pred_r);
    }
    let mut images = sigma.images().to_vec();
    images[pred_i] = r;
    images[pred_r] = i;
    Ok(Permutation { images })
}

/// Backtracking sweep of `S_n` in lexicographic image order. Tracks the
/// running product and the number of closed cycles; at each leaf calls
/// `visit(cycle_count, weight)`.
///
/// Cycle counting is incremental: the partial assignment is a disjoint
/// union of paths, kept as an endpoint pairing. Assigning `row → col`
/// either closes a cycle (the two are ends of one path) or concatenates
/// two paths.
struct PermSweep<'a, F: FnMut(usize, f64)> {
    a: &'a WeightMatrix,
    n: usize,
    used: Vec<bool>,
    other_end: Vec<usize>,
    visit: F,
}

impl<'a, F: FnMut(usize, f64)> PermSweep<'a, F> {
    fn run(a: &'a WeightMatrix, visit: F) {
        let n = a.n();
        let mut sweep = PermSweep {
            a,
            n,
            used: vec![false; n],
            other_end: (0..n).collect(),
            visit,
        };
        sweep.rec(0, 1.0, 0);
    }

    fn rec(&mut self, row: usize, product: f64, cycles: usize) {
        if row == self.n {
            (self.visit)(cycles, product);
            return;
        }
        for col in 0..self.n {
            if self.used[col] {
                continue;
            }
            let p = product * self.a.get(row, col);
            self.used[col] = true;
            if self.other_end[row] == col {
                self.rec(row + 1, p, cycles + 1);
            } else {
                let e1 = self.other_end[row];
                let e2 = self.other_end[col];
                self.other_end[e1] = e2;
                self.other_end[e2] = e1;
                self.rec(row + 1, p, cycles);
                self.other_end[e1] = row;
                self.other_end[e2] = col;
            }
            self.used[col] = false;
        }
    }
}

/// `per A = Σ_{σ ∈ S_n} Π_i a_{i σ(i)}` by direct enumeration.
pub fn permanent_naive(a: &WeightMatrix) -> Result<LogValue, OracleError> {
    check_cap(a.n(), PERMUTATION_CAP)?;
    let n = a.n();
    let mut used = vec![false; n];
    let mut acc = NeumaierSum::new();
    fn rec(
        a: &WeightMatrix,
        row: usize,
        product: f64,
        used: &mut [bool],
        acc: &mut NeumaierSum,
    ) {
        let n = a.n();
        if row == n {
            acc.add(product);
            return;
        }
        for col in 0..n {
            if !used[col] {
                used[col] = true;
                rec(a, row + 1, product * a.get(row, col), used, acc);
                used[col] = false;
            }
        }
    }
    rec(a, 0, 1.0, &mut used, &mut acc);
    Ok(LogValue::from_f64(acc.total()))
}

/// Total permutation weight bucketed by cycle count: entry `c − 1` holds
/// `Σ_{σ: c(σ) = c} Π a_{i σ(i)}`. One sweep serves the cycle-restricted
/// permanent, the expected cycle count and the low-cycle mass checks.
pub fn cycle_count_weights(a: &WeightMatrix) -> Result<Vec<f64>, OracleError> {
    check_cap(a.n(), PERMUTATION_CAP)?;
    let n = a.n();
    let mut buckets = vec![NeumaierSum::new(); n];
    PermSweep::run(a, |cycles, weight| buckets[cycles - 1].add(weight));
    Ok(buckets.iter().map(NeumaierSum::total).collect())
}

/// `Σ over σ with c(σ) ≤ cmax of Π a_{i σ(i)}`. With `cmax = n` this is the
/// permanent; with `cmax = 1` the Hamiltonian permanent.
pub fn permanent_cycle_restricted(
    a: &WeightMatrix,
    cmax: usize,
) -> Result<LogValue, OracleError> {
    let buckets = cycle_count_weights(a)?;
    let mut acc = NeumaierSum::new();
    for w in buckets.iter().take(cmax) {
        acc.add(*w);
    }
    Ok(LogValue::from_f64(acc.total()))
}

/// `E c` under the measure `P(σ) = (per A)⁻¹ Π a_{i σ(i)}`.
pub fn expected_cycle_count(a: &WeightMatrix) -> Result<f64, OracleError> {
    let buckets = cycle_count_weights(a)?;
    let mut total = NeumaierSum::new();
    let mut weighted = NeumaierSum::new();
    for (idx, &w) in buckets.iter().enumerate() {
        total.add(w);
        weighted.add((idx + 1) as f64 * w);
    }
    Ok(weighted.total() / total.total())
}

/// The law of `l_i`, the length of the cycle containing `i`, under the same
/// measure: entry `m − 1` is `P(l_i = m)`. Entries sum to 1.
pub fn cycle_length_distribution(
    a: &WeightMatrix,
    i: usize,
) -> Result<Vec<f64>, OracleError> {
    check_cap(a.n(), PERMUTATION_CAP)?;
    let n = a.n();
    if i >= n {
        return Err(OracleError::BadVertex { vertex: i, n });
    }
    let mut by_len = vec![NeumaierSum::new(); n];
    let mut total = NeumaierSum::new();
    let mut images = vec![0usize; n];
    let mut used = vec![false; n];
    #[allow(clippy::too_many_arguments)]
    fn rec(
        a: &WeightMatrix,
        row: usize,
        product: f64,
        vertex: usize,
        images: &mut [usize],
        used: &mut [bool],
        by_len: &mut [NeumaierSum],
        total: &mut NeumaierSum,
    ) {
        let n = a.n();
        if row == n {
            let mut len = 1;
            let mut w = images[vertex];
            while w != vertex {
                w = images[w];
                len += 1;
            }
            by_len[len - 1].add(product);
            total.add(product);
            return;
        }
        for col in 0..n {
            if !used[col] {
                used[col] = true;
                images[row] = col;
                rec(a, row + 1, product * a.get(row, col), vertex, images, used, by_len, total);
                used[col] = false;
            }
        }
    }
    rec(a, 0, 1.0, i, &mut images, &mut used, &mut by_len, &mut total);
    let per = total.total();
    Ok(by_len.iter().map(|s| s.total() / per).collect())
}
