//! Closed walks of length `n` and their degree-restricted sums.

use alloc::vec;
use alloc::vec::Vec;

use crate::logdomain::LogValue;
use crate::matrix::WeightMatrix;
use crate::num::NeumaierSum;
use crate::oracles::{check_cap, OracleError, WALK_CAP};

/// A closed walk `i_1 → i_2 → … → i_n → i_1` on the vertex set
/// `{0, …, n−1}`, where `n` is both the number of vertices and the walk
/// length. Walks are sequences: every rotation is a distinct walk.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ClosedWalk {
    vertices: Vec<usize>,
}

impl ClosedWalk {
    pub fn new(vertices: Vec<usize>) -> Result<Self, OracleError> {
        let n = vertices.len();
        if n == 0 {
            return Err(OracleError::BadVertex { vertex: 0, n });
        }
        for &v in &vertices {
            if v >= n {
                return Err(OracleError::BadVertex { vertex: v, n });
            }
        }
        Ok(ClosedWalk { vertices })
    }

    pub fn n(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    /// Arrival counts: `deg_i(π)` is the number of steps `∗ → i`. Since the
    /// walk is closed, every position is an arrival, so this is the number
    /// of occurrences of `i` in the sequence (a self-loop step counts once).
    pub fn degree_profile(&self) -> Vec<usize> {
        let mut deg = vec![0usize; self.n()];
        for &v in &self.vertices {
            deg[v] += 1;
        }
        deg
    }

    /// `a_{i_1 i_2} ⋯ a_{i_{n−1} i_n} a_{i_n i_1}`.
    pub fn weight(&self, a: &WeightMatrix) -> f64 {
        assert_eq!(a.n(), self.n());
        let n = self.n();
        let mut w = 1.0;
        for k in 0..n {
            w *= a.get(self.vertices[k], self.vertices[(k + 1) % n]);
        }
        w
    }
}

/// Enumerates all `n^n` closed walks in lexicographic sequence order,
/// calling `visit(degree_profile, weight)` at each leaf.
pub(crate) fn for_each_walk(a: &WeightMatrix, visit: &mut impl FnMut(&[usize], f64)) {
    let n = a.n();
    let mut seq = vec![0usize; n];
    let mut deg = vec![0usize; n];
    #[allow(clippy::too_many_arguments)]
    fn rec(
        a: &WeightMatrix,
        pos: usize,
        product: f64,
        seq: &mut [usize],
        deg: &mut [usize],
        visit: &mut impl FnMut(&[usize], f64),
    ) {
        let n = a.n();
        if pos == n {
            let closing = a.get(seq[n - 1], seq[0]);
            visit(deg, product * closing);
            return;
        }
        for v in 0..n {
            seq[pos] = v;
            deg[v] += 1;
            let p = if pos == 0 {
                1.0
            } else {
                product * a.get(seq[pos - 1], v)
            };
            rec(a, pos + 1, p, seq, deg, visit);
            deg[v] -= 1;
        }
    }
    rec(a, 0, 1.0, &mut seq, &mut deg, visit);
}

/// `Σ over π ∈ Π_n with deg_i(π) ≤ degmax for all i of weight(π)`.
/// With `degmax ≥ n` this is the unrestricted sum `trace Aⁿ`; with
/// `degmax = 1` it is `n · ham A` (each Hamiltonian cycle read from each
/// of its `n` starting vertices).
pub fn walk_sum_restricted(a: &WeightMatrix, degmax: usize) -> Result<LogValue, OracleError> {
    let n = a.n();
    check_cap(n, WALK_CAP)?;
    let mut seq = vec![0usize; n];
    let mut deg = vec![0usize; n];
    let mut acc = NeumaierSum::new();
    #[allow(clippy::too_many_arguments)]
    fn rec(
        a: &WeightMatrix,
        pos: usize,
        degmax: usize,
        product: f64,
        seq: &mut [usize],
        deg: &mut [usize],
        acc: &mut NeumaierSum,
    ) {
        let n = a.n();
        if pos == n {
            acc.add(product * a.get(seq[n - 1], seq[0]));
            return;
        }
        for v in 0..n {
            if deg[v] + 1 > degmax {
                continue;
            }
            seq[pos] = v;
            deg[v] += 1;
            let p = if pos == 0 {
                1.0
            } else {
                product * a.get(seq[pos - 1], v)
            };
            rec(a, pos + 1, degmax, p, seq, deg, acc);
            deg[v] -= 1;
        }
    }
    rec(a, 0, degmax, 1.0, &mut seq, &mut deg, &mut acc);
    Ok(LogValue::from_f64(acc.total()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles::{hamiltonian_permanent, HamMethod};
    use crate::tol;

    #[test]
    fn unrestricted_sum_on_all_ones_is_n_to_the_n() {
        let a = WeightMatrix::all_ones(3);
        let s = walk_sum_restricted(&a, 3).unwrap();
        assert!((s.to_f64() - 27.0).abs() < 1e-12);
    }

    #[test]
    fn degree_one_walks_are_rotated_hamiltonian_cycles() {
        let a = WeightMatrix::all_ones(3);
        let s = walk_sum_restricted(&a, 1).unwrap();
        assert!((s.to_f64() - 6.0).abs() < 1e-12);
    }

    #[test]
    fn degree_one_sum_is_n_times_ham_on_weighted_instances() {
        let a = WeightMatrix::from_rows(
            &[
                vec![0.9, 0.5, 0.7, 0.6],
                vec![0.6, 1.0, 0.5, 0.9],
                vec![0.5, 0.8, 0.6, 0.7],
                vec![0.8, 0.6, 0.9, 0.5],
            ],
            0.5,
        )
        .unwrap();
        let s = walk_sum_restricted(&a, 1).unwrap();
        let ham = hamiltonian_permanent(&a, HamMethod::Naive).unwrap();
        let want = LogValue::from_f64(4.0) * ham;
        assert!(s.relative_error(want) < tol::REL_ORACLE);
    }

    #[test]
    fn degree_profile_counts_occurrences() {
        let w = ClosedWalk::new(vec![0, 2, 2, 1]).unwrap();
        assert_eq!(w.degree_profile(), vec![1, 1, 2, 0]);
        let total: usize = w.degree_profile().iter().sum();
        assert_eq!(total, w.n());
    }

    #[test]
    fn weight_multiplies_cyclic_edges() {
        let a = WeightMatrix::from_rows(&[vec![0.5, 1.0], vec![0.25, 0.5]], 0.25).unwrap();
        let w = ClosedWalk::new(vec![0, 1]).unwrap();
        assert!((w.weight(&a) - 0.25).abs() < 1e-15);
        let loopy = ClosedWalk::new(vec![0, 0]).unwrap();
        assert!((loopy.weight(&a) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn enumeration_visits_n_to_the_n_walks() {
        let a = WeightMatrix::all_ones(4);
        let mut count = 0usize;
        for_each_walk(&a, &mut |deg, w| {
            assert_eq!(deg.iter().sum::<usize>(), 4);
            assert_eq!(w, 1.0);
            count += 1;
        });
        assert_eq!(count, 256);
    }

    #[test]
    fn respects_cap() {
        let a = WeightMatrix::all_ones(8);
        assert!(walk_sum_restricted(&a, 8).is_err());
    }
}
