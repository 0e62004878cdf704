//! Weight matrices, directed graphs and the perturbation that embeds a
//! graph into a δ-bounded matrix.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum MatrixError {
    /// δ must lie in (0, 1] for matrices, (0, 1) for perturbations.
    BadDelta { delta: f64 },
    /// Entry outside the certified interval `[δ, 1]`. Indices are 0-based.
    EntryOutOfBounds { row: usize, col: usize, value: f64 },
    NotFinite { row: usize, col: usize },
    /// `entries.len()` must equal `n…n`, and `n ≥ 1`.
    BadShape { n: usize, len: usize },
    /// Stored entries must satisfy `a_ij == a_ji` bitwise.
    NotSymmetric { row: usize, col: usize },
    /// Loop edge or endpoint outside `{0, …, n−1}`.
    BadEdge { from: usize, to: usize },
    DuplicateEdge { from: usize, to: usize },
}

impl fmt::Display for MatrixError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatrixError::BadDelta { delta } => write!(f, "invalid delta {delta}"),
            MatrixError::EntryOutOfBounds { row, col, value } => {
                write!(f, "entry ({row}, {col}) = {value} outside [delta, 1]")
            }
            MatrixError::NotFinite { row, col } => {
                write!(f, "entry ({row}, {col}) is not finite")
            }
            MatrixError::BadShape { n, len } => {
                write!(f, "expected {n}x{n} = {} entries, got {len}", n * n)
            }
            MatrixError::NotSymmetric { row, col } => {
                write!(f, "entries ({row}, {col}) and ({col}, {row}) differ")
            }
            MatrixError::BadEdge { from, to } => write!(f, "invalid edge {from} -> {to}"),
            MatrixError::DuplicateEdge { from, to } => {
                write!(f, "duplicate edge {from} -> {to}")
            }
        }
    }
}

impl core::error::Error for MatrixError {}

/// An `n × n` matrix with certified entry bounds `δ ≤ a_ij ≤ 1`.
///
/// The stored `delta` is the caller's promised bound, not the tightened
/// minimum entry: theorem constants such as `4 + 4δ⁻² ln n` are evaluated
/// with the promise the caller made.
///
/// Immutable after construction; shareable across threads.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightMatrix {
    n: usize,
    entries: Vec<f64>, // row-major
    delta: f64,
}

impl WeightMatrix {
    /// Validates `0 < delta ≤ 1`, the shape, finiteness and the entry
    /// bounds. Entries are row-major.
    pub fn new(n: usize, entries: Vec<f64>, delta: f64) -> Result<Self, MatrixError> {
        if !(delta > 0.0 && delta <= 1.0) {
            return Err(MatrixError::BadDelta { delta });
        }
        if n == 0 || entries.len() != n * n {
            return Err(MatrixError::BadShape {
                n,
                len: entries.len(),
            });
        }
        for (idx, &v) in entries.iter().enumerate() {
            let (row, col) = (idx / n, idx % n);
            if !v.is_finite() {
                return Err(MatrixError::NotFinite { row, col });
            }
            if v < delta || v > 1.0 {
                return Err(MatrixError::EntryOutOfBounds { row, col, value: v });
            }
        }
        Ok(WeightMatrix { n, entries, delta })
    }

    /// Convenience constructor from nested rows.
    pub fn from_rows(rows: &[Vec<f64>], delta: f64) -> Result<Self, MatrixError> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(MatrixError::BadShape {
                    n,
                    len: rows.iter().map(Vec::len).sum(),
                });
            }
            entries.extend_from_slice(row);
        }
        Self::new(n, entries, delta)
    }

    /// The all-ones matrix (δ = 1).
    pub fn all_ones(n: usize) -> Self {
        WeightMatrix {
            n,
            entries: vec![1.0; n * n],
            delta: 1.0,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    #[inline(always)]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.entries[row * self.n + col]
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn row(&self, row: usize) -> &[f64] {
        &self.entries[row * self.n..(row + 1) * self.n]
    }
}

/// Symmetric weight matrix for the undirected (spanning-tree) partition
/// functions. The diagonal is ignored and stored as zero; off-diagonal
/// entries obey the δ bound and `a_ij == a_ji` holds bitwise.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SymmetricWeightMatrix {
    n: usize,
    entries: Vec<f64>,
    delta: f64,
}

impl SymmetricWeightMatrix {
    pub fn new(n: usize, entries: Vec<f64>, delta: f64) -> Result<Self, MatrixError> {
        if !(delta > 0.0 && delta <= 1.0) {
            return Err(MatrixError::BadDelta { delta });
        }
        if n == 0 || entries.len() != n * n {
            return Err(MatrixError::BadShape {
                n,
                len: entries.len(),
            });
        }
        let mut stored = entries;
        for i in 0..n {
            stored[i * n + i] = 0.0;
            for j in (i + 1)..n {
                let a = stored[i * n + j];
                let b = stored[j * n + i];
                if !a.is_finite() {
                    return Err(MatrixError::NotFinite { row: i, col: j });
                }
                if a.to_bits() != b.to_bits() {
                    return Err(MatrixError::NotSymmetric { row: i, col: j });
                }
                if a < delta || a > 1.0 {
                    return Err(MatrixError::EntryOutOfBounds {
                        row: i,
                        col: j,
                        value: a,
                    });
                }
            }
        }
        Ok(SymmetricWeightMatrix {
            n,
            entries: stored,
            delta,
        })
    }

    /// Complete graph with unit edge weights (δ = 1).
    pub fn all_ones(n: usize) -> Self {
        let mut entries = vec![1.0; n * n];
        for i in 0..n {
            entries[i * n + i] = 0.0;
        }
        SymmetricWeightMatrix {
            n,
            entries,
            delta: 1.0,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    #[inline(always)]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.entries[row * self.n + col]
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }
}

/// Finite directed graph without loops, vertices `0..n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DirectedGraph {
    n: usize,
    edges: Vec<(usize, usize)>, // sorted, deduplicated
}

impl DirectedGraph {
    pub fn new(
        n: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, MatrixError> {
        let mut edges: Vec<(usize, usize)> = edges.into_iter().collect();
        for &(u, v) in &edges {
            if u == v || u >= n || v >= n {
                return Err(MatrixError::BadEdge { from: u, to: v });
            }
        }
        edges.sort_unstable();
        for w in edges.windows(2) {
            if w[0] == w[1] {
                return Err(MatrixError::DuplicateEdge {
                    from: w[0].0,
                    to: w[0].1,
                });
            }
        }
        Ok(DirectedGraph { n, edges })
    }

    /// Complete digraph: every ordered pair `(i, j)`, `i ≠ j`.
    pub fn complete(n: usize) -> Self {
        let mut edges = Vec::with_capacity(n * n.saturating_sub(1));
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    edges.push((i, j));
                }
            }
        }
        DirectedGraph { n, edges }
    }

    pub fn empty(n: usize) -> Self {
        DirectedGraph { n, edges: Vec::new() }
    }

    /// The directed cycle `0 → 1 → … → n−1 → 0`.
    pub fn directed_cycle(n: usize) -> Self {
        let edges = (0..n).map(|i| (i, (i + 1) % n)).collect();
        DirectedGraph { n, edges }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, from: usize, to: usize) -> bool {
        self.edges.binary_search(&(from, to)).is_ok()
    }

    /// Row-major 0/1 adjacency matrix.
    pub fn adjacency(&self) -> Vec<f64> {
        let mut a = vec![0.0; self.n * self.n];
        for &(u, v) in &self.edges {
            a[u * self.n + v] = 1.0;
        }
        a
    }
}

/// The perturbation `B` of a graph's adjacency matrix: `b_ij = 1` on edges
/// and `δ` on non-edges. Loops are non-edges, so the diagonal is `δ`.
///
/// Requires `0 < delta < 1`: at `δ = 1` the perturbation no longer
/// distinguishes edges from non-edges.
pub fn perturb(graph: &DirectedGraph, delta: f64) -> Result<WeightMatrix, MatrixError> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(MatrixError::BadDelta { delta });
    }
    let n = graph.n();
    let mut entries = vec![delta; n * n];
    for &(u, v) in graph.edges() {
        entries[u * n + v] = 1.0;
    }
    WeightMatrix::new(n, entries, delta)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_ones_with_delta_one_is_accepted() {
        let m = WeightMatrix::new(2, vec![1.0; 4], 1.0).unwrap();
        assert_eq!(m.delta(), 1.0);
        assert_eq!(m.n(), 2);
    }

    #[test]
    fn entries_equal_to_bounds_are_accepted() {
        let m = WeightMatrix::from_rows(&[vec![1.0, 0.5], vec![0.5, 1.0]], 0.5).unwrap();
        assert_eq!(m.get(0, 1), 0.5);
    }

    #[test]
    fn entry_below_delta_is_rejected_with_location() {
        let err = WeightMatrix::from_rows(&[vec![1.0, 0.4], vec![0.5, 1.0]], 0.5).unwrap_err();
        assert_eq!(
            err,
            MatrixError::EntryOutOfBounds {
                row: 0,
                col: 1,
                value: 0.4
            }
        );
    }

    #[test]
    fn entry_above_one_is_rejected() {
        let err = WeightMatrix::new(1, vec![1.5], 0.5).unwrap_err();
        assert!(matches!(err, MatrixError::EntryOutOfBounds { .. }));
    }

    #[test]
    fn bad_delta_is_rejected() {
        assert!(matches!(
            WeightMatrix::new(1, vec![1.0], 0.0),
            Err(MatrixError::BadDelta { .. })
        ));
        assert!(matches!(
            WeightMatrix::new(1, vec![1.0], 1.5),
            Err(MatrixError::BadDelta { .. })
        ));
    }

    #[test]
    fn stored_delta_is_the_promise_not_the_min_entry() {
        let m = WeightMatrix::new(2, vec![0.9, 0.9, 0.9, 0.9], 0.5).unwrap();
        assert_eq!(m.delta(), 0.5);
    }

    #[test]
    fn perturb_complete_digraph() {
        let g = DirectedGraph::complete(3);
        let b = perturb(&g, 0.1).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { 0.1 } else { 1.0 };
                assert_eq!(b.get(i, j), want);
            }
        }
    }

    #[test]
    fn perturb_empty_graph_is_constant_delta() {
        let b = perturb(&DirectedGraph::empty(3), 0.1).unwrap();
        assert!(b.entries().iter().all(|&v| v == 0.1));
    }

    #[test]
    fn perturb_single_edge() {
        let g = DirectedGraph::new(2, [(0, 1)]).unwrap();
        let b = perturb(&g, 0.5).unwrap();
        assert_eq!(b.entries(), &[0.5, 1.0, 0.5, 0.5]);
    }

    #[test]
    fn perturb_rejects_delta_one() {
        let g = DirectedGraph::empty(2);
        assert!(matches!(
            perturb(&g, 1.0),
            Err(MatrixError::BadDelta { .. })
        ));
    }

    #[test]
    fn graph_rejects_loops_and_duplicates() {
        assert!(matches!(
            DirectedGraph::new(3, [(0, 0)]),
            Err(MatrixError::BadEdge { .. })
        ));
        assert!(matches!(
            DirectedGraph::new(3, [(0, 1), (0, 1)]),
            Err(MatrixError::DuplicateEdge { .. })
        ));
        assert!(matches!(
            DirectedGraph::new(2, [(0, 5)]),
            Err(MatrixError::BadEdge { .. })
        ));
    }

    #[test]
    fn graph_roundtrips_through_its_edge_set() {
        let g = DirectedGraph::new(4, [(1, 3), (0, 2), (2, 0)]).unwrap();
        let g2 = DirectedGraph::new(g.n(), g.edges().iter().copied()).unwrap();
        assert_eq!(g, g2);
        let b1 = perturb(&g, 0.3).unwrap();
        let b2 = perturb(&g2, 0.3).unwrap();
        assert_eq!(b1, b2);
    }

    #[test]
    fn symmetric_requires_bitwise_symmetry() {
        let ok = SymmetricWeightMatrix::new(2, vec![0.0, 0.5, 0.5, 0.0], 0.5);
        assert!(ok.is_ok());
        // One ulp of difference is already asymmetric.
        let off = f64::from_bits(0.5f64.to_bits() + 1);
        let err = SymmetricWeightMatrix::new(2, vec![0.0, 0.5, off, 0.0], 0.5).unwrap_err();
        assert_eq!(err, MatrixError::NotSymmetric { row: 0, col: 1 });
    }

    #[test]
    fn symmetric_zeroes_the_diagonal() {
        let m = SymmetricWeightMatrix::new(2, vec![0.7, 0.5, 0.5, 0.9], 0.5).unwrap();
        assert_eq!(m.get(0, 0), 0.0);
        assert_eq!(m.get(1, 1), 0.0);
        assert_eq!(m.get(0, 1), 0.5);
    }

    #[test]
    fn directed_cycle_has_n_edges() {
        let g = DirectedGraph::directed_cycle(5);
        assert_eq!(g.edge_count(), 5);
        assert!(g.has_edge(4, 0));
        assert!(!g.has_edge(0, 4));
    }
}
