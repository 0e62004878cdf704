//! Deterministic random instances.
//!
//! All randomness flows from a ChaCha8 stream seeded with a user-supplied
//! 64-bit seed, so identical seed + parameters reproduce identical
//! instances byte for byte. Matrix entries are uniform on `[δ, 1]`
//! entrywise; graphs are directed Erdős–Rényi with independent edge
//! probability `p` over ordered pairs scanned in lexicographic order.

use densepf_core::matrix::{DirectedGraph, SymmetricWeightMatrix, WeightMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Default seed for every command that takes one.
pub const DEFAULT_SEED: u64 = 1729;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn matrix_with(rng: &mut ChaCha8Rng, n: usize, delta: f64) -> WeightMatrix {
    let entries = (0..n * n).map(|_| rng.random_range(delta..=1.0)).collect();
    WeightMatrix::new(n, entries, delta).expect("entries drawn inside [delta, 1]")
}

pub fn matrix(n: usize, delta: f64, seed: u64) -> WeightMatrix {
    matrix_with(&mut rng(seed), n, delta)
}

/// Symmetric instance: the upper triangle is drawn and mirrored, the
/// diagonal is zero.
pub fn symmetric_matrix_with(
    rng: &mut ChaCha8Rng,
    n: usize,
    delta: f64,
) -> SymmetricWeightMatrix {
    let mut entries = vec![0.0f64; n * n];
    for i in 0..n {
        for j in (i + 1)..n {
            let v = rng.random_range(delta..=1.0);
            entries[i * n + j] = v;
            entries[j * n + i] = v;
        }
    }
    SymmetricWeightMatrix::new(n, entries, delta).expect("construction is symmetric")
}

pub fn symmetric_matrix(n: usize, delta: f64, seed: u64) -> SymmetricWeightMatrix {
    symmetric_matrix_with(&mut rng(seed), n, delta)
}

pub fn graph_with(rng: &mut ChaCha8Rng, n: usize, edge_prob: f64) -> DirectedGraph {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j && rng.random::<f64>() < edge_prob {
                edges.push((i, j));
            }
        }
    }
    DirectedGraph::new(n, edges).expect("no loops or duplicates by construction")
}

pub fn graph(n: usize, edge_prob: f64, seed: u64) -> DirectedGraph {
    graph_with(&mut rng(seed), n, edge_prob)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_reproduces_instances() {
        assert_eq!(matrix(6, 0.3, 42), matrix(6, 0.3, 42));
        assert_eq!(graph(8, 0.4, 42), graph(8, 0.4, 42));
        assert_ne!(matrix(6, 0.3, 42), matrix(6, 0.3, 43));
    }

    #[test]
    fn matrices_respect_bounds() {
        let m = matrix(10, 0.2, 7);
        for &v in m.entries() {
            assert!((0.2..=1.0).contains(&v));
        }
        let s = symmetric_matrix(10, 0.2, 7);
        for i in 0..10 {
            assert_eq!(s.get(i, i), 0.0);
            for j in 0..10 {
                if i != j {
                    assert!((0.2..=1.0).contains(&s.get(i, j)));
                    assert_eq!(s.get(i, j), s.get(j, i));
                }
            }
        }
    }

    #[test]
    fn edge_probability_extremes() {
        assert_eq!(graph(5, 0.0, 1).edge_count(), 0);
        assert_eq!(graph(5, 1.0, 1).edge_count(), 20);
    }
}
