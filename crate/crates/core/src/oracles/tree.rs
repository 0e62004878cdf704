//! Labeled spanning trees via Prüfer sequences.
//!
//! The decode is the bijection between `{0, …, n−1}^{n−2}` and the
//! `n^{n−2}` spanning trees of the complete graph, and the degree of vertex
//! `i` is one plus its multiplicity in the sequence, which gives degree
//! profiles without touching edges.

use alloc::vec;
use alloc::vec::Vec;

use crate::logdomain::LogValue;
use crate::matrix::SymmetricWeightMatrix;
use crate::num::NeumaierSum;
use crate::oracles::{check_cap, OracleError, TREE_CAP};

/// A spanning tree of the complete graph on `{0, …, n−1}`, stored as
/// normalized edges (`u < v`, sorted).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SpanningTree {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl SpanningTree {
    /// Validates that the edges form a spanning tree: `n − 1` edges,
    /// acyclic, covering all vertices.
    pub fn new(
        n: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, OracleError> {
        let mut normalized: Vec<(usize, usize)> = Vec::new();
        for (a, b) in edges {
            if a == b || a >= n || b >= n {
                return Err(OracleError::NotATree);
            }
            normalized.push((a.min(b), a.max(b)));
        }
        if n == 0 || normalized.len() != n - 1 {
            return Err(OracleError::NotATree);
        }
        // union-find cycle check; n−1 acyclic edges on n vertices must span
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut v: usize) -> usize {
            while parent[v] != v {
                parent[v] = parent[parent[v]];
                v = parent[v];
            }
            v
        }
        for &(a, b) in &normalized {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra == rb {
                return Err(OracleError::NotATree);
            }
            parent[ra] = rb;
        }
        normalized.sort_unstable();
        Ok(SpanningTree { n, edges: normalized })
    }

    /// Decodes a Prüfer sequence of length `n − 2`. Classic linear-time
    /// pointer scan over the running leaf set.
    pub fn from_prufer(n: usize, seq: &[usize]) -> Result<Self, OracleError> {
        if n < 2 || seq.len() != n - 2 {
            return Err(OracleError::NotATree);
        }
        for &s in seq {
            if s >= n {
                return Err(OracleError::BadVertex { vertex: s, n });
            }
        }
        let mut degree = vec![1usize; n];
        for &s in seq {
            degree[s] += 1;
        }
        let mut edges = Vec::with_capacity(n - 1);
        let mut ptr = 0;
        while degree[ptr] != 1 {
            ptr += 1;
        }
        let mut leaf = ptr;
        for &s in seq {
            edges.push((leaf.min(s), leaf.max(s)));
            degree[s] -= 1;
            if degree[s] == 1 && s < ptr {
                leaf = s;
            } else {
                ptr += 1;
                while degree[ptr] != 1 {
                    ptr += 1;
                }
                leaf = ptr;
            }
        }
        edges.push((leaf.min(n - 1), leaf.max(n - 1)));
        edges.sort_unstable();
        Ok(SpanningTree { n, edges })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges.binary_search(&(a.min(b), a.max(b))).is_ok()
    }

    pub fn degree_profile(&self) -> Vec<usize> {
        let mut deg = vec![0usize; self.n];
        for &(a, b) in &self.edges {
            deg[a] += 1;
            deg[b] += 1;
        }
        deg
    }

    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        let mut out = Vec::new();
        for &(a, b) in &self.edges {
            if a == v {
                out.push(b);
            } else if b == v {
                out.push(a);
            }
        }
        out
    }

    /// The unique path between two vertices, endpoints included.
    pub fn path(&self, from: usize, to: usize) -> Vec<usize> {
        let mut prev = vec![usize::MAX; self.n];
        let mut stack = vec![from];
        prev[from] = from;
        while let Some(v) = stack.pop() {
            if v == to {
                break;
            }
            for w in self.neighbors(v) {
                if prev[w] == usize::MAX {
                    prev[w] = v;
                    stack.push(w);
                }
            }
        }
        let mut path = vec![to];
        let mut v = to;
        while v != from {
            v = prev[v];
            path.push(v);
        }
        path.reverse();
        path
    }

    /// `Π over edges {i,j} of a_ij`.
    pub fn weight(&self, a: &SymmetricWeightMatrix) -> f64 {
        assert_eq!(a.n(), self.n);
        self.edges.iter().map(|&(u, v)| a.get(u, v)).product()
    }
}

/// Enumerates all `n^{n−2}` trees in lexicographic Prüfer order, calling
/// `visit(multiplicity_profile, weight)`. The multiplicity profile is the
/// degree profile minus one in every coordinate.
pub(crate) fn for_each_tree(
    a: &SymmetricWeightMatrix,
    visit: &mut impl FnMut(&[usize], f64),
) {
    let n = a.n();
    if n < 2 {
        return;
    }
    let mut seq = vec![0usize; n - 2];
    let mut mult = vec![0usize; n];
    fn rec(
        a: &SymmetricWeightMatrix,
        pos: usize,
        seq: &mut Vec<usize>,
        mult: &mut [usize],
        visit: &mut impl FnMut(&[usize], f64),
    ) {
        let n = a.n();
        if pos == n - 2 {
            let tree = SpanningTree::from_prufer(n, seq).expect("valid sequence");
            visit(mult, tree.weight(a));
            return;
        }
        for v in 0..n {
            seq[pos] = v;
            mult[v] += 1;
            rec(a, pos + 1, seq, mult, visit);
            mult[v] -= 1;
        }
    }
    rec(a, 0, &mut seq, &mut mult, visit);
}

/// `Σ over τ ∈ T_n with deg_i(τ) ≤ degmax for all i of weight(τ)`.
/// With `degmax = n − 1` this is the full spanning-tree partition function.
pub fn tree_sum_restricted(
    a: &SymmetricWeightMatrix,
    degmax: usize,
) -> Result<LogValue, OracleError> {
    let n = a.n();
    check_cap(n, TREE_CAP)?;
    if n < 2 {
        return Err(OracleError::TooLarge { n, cap: TREE_CAP });
    }
    if degmax == 0 {
        return Ok(LogValue::ZERO);
    }
    // degree = multiplicity + 1, so prune at multiplicity > degmax − 1
    let mult_cap = degmax - 1;
    let mut seq = vec![0usize; n - 2];
    let mut mult = vec![0usize; n];
    let mut acc = NeumaierSum::new();
    #[allow(clippy::too_many_arguments)]
    fn rec(
        a: &SymmetricWeightMatrix,
        pos: usize,
        mult_cap: usize,
        seq: &mut Vec<usize>,
        mult: &mut [usize],
        acc: &mut NeumaierSum,
    ) {
        let n = a.n();
        if pos == n - 2 {
            let tree = SpanningTree::from_prufer(n, seq).expect("valid sequence");
            acc.add(tree.weight(a));
            return;
        }
        for v in 0..n {
            if mult[v] + 1 > mult_cap {
                continue;
            }
            seq[pos] = v;
            mult[v] += 1;
            rec(a, pos + 1, mult_cap, seq, mult, acc);
            mult[v] -= 1;
        }
    }
    rec(a, 0, mult_cap, &mut seq, &mut mult, &mut acc);
    Ok(LogValue::from_f64(acc.total()))
}
