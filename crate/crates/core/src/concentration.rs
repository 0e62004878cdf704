//! Degree-profile measures on compositions and the concentration machinery
//! built on them: generating polynomials, derivative comparison, the
//! exponential-moment bound and the max-coordinate tail bound, plus the
//! walk-rewiring and tree edge-swap moves that establish the measures'
//! Lipschitz property.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

use crate::matrix::{SymmetricWeightMatrix, WeightMatrix};
use crate::num::{self, NeumaierSum};
use crate::oracles::{
    for_each_tree, for_each_walk, ClosedWalk, SpanningTree, TREE_CAP, WALK_CAP,
};
use crate::tol;

/// A vector of nonnegative integers with a fixed sum: an element of
/// `Δ_{m,n}`. Degree profiles live here.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Composition {
    parts: Vec<usize>,
}

impl Composition {
    pub fn new(parts: Vec<usize>) -> Self {
        Composition { parts }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn n(&self) -> usize {
        self.parts.len()
    }

    /// The sum `m` of the parts.
    pub fn m(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn max_part(&self) -> usize {
        self.parts.iter().copied().max().unwrap_or(0)
    }

    /// The neighbor `a − e_i + e_j`; `None` if `a_i = 0`.
    pub fn shift(&self, i: usize, j: usize) -> Option<Composition> {
        if self.parts[i] == 0 {
            return None;
        }
        let mut parts = self.parts.clone();
        parts[i] -= 1;
        parts[j] += 1;
        Some(Composition { parts })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum MeasureError {
    TooLarge { n: usize, cap: usize },
    /// Probabilities do not sum to 1 within tolerance.
    BadNormalization { sum: f64 },
    /// A support element has the wrong length or part sum.
    BadComposition { index: usize },
    DuplicateComposition { index: usize },
    /// δ outside (0, 1].
    BadDelta { delta: f64 },
    /// The Lipschitz condition `w(α) ≤ δ⁻¹ w(β)` failed for an adjacent
    /// pair. Stored in the factorial-free form
    /// `α_i P(α) ≤ δ⁻¹ (α_j + 1) P(β)`.
    LipschitzViolation {
        lhs: f64,
        rhs: f64,
        i: usize,
        j: usize,
    },
    /// Tail bound requested with `m < δn`.
    HypothesisViolated { m: usize, delta_n: f64 },
    /// Threshold formulas need `ln ln n > 0`, i.e. `n ≥ 3`.
    NotApplicable { n: usize },
}

impl fmt::Display for MeasureError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MeasureError::TooLarge { n, cap } => {
                write!(f, "instance size {n} exceeds enumeration cap {cap}")
            }
            MeasureError::BadNormalization { sum } => {
                write!(f, "probabilities sum to {sum}, expected 1")
            }
            MeasureError::BadComposition { index } => {
                write!(f, "support entry {index} is not in the simplex")
            }
            MeasureError::DuplicateComposition { index } => {
                write!(f, "support entry {index} is a duplicate")
            }
            MeasureError::BadDelta { delta } => write!(f, "invalid delta {delta}"),
            MeasureError::LipschitzViolation { lhs, rhs, i, j } => {
                write!(
                    f,
                    "Lipschitz condition failed at move {i}->{j}: {lhs} > {rhs}"
                )
            }
            MeasureError::HypothesisViolated { m, delta_n } => {
                write!(f, "tail bound needs m >= delta*n, got m = {m} < {delta_n}")
            }
            MeasureError::NotApplicable { n } => {
                write!(f, "threshold formulas are undefined for n = {n} < 3")
            }
        }
    }
}

impl core::error::Error for MeasureError {}

/// A probability measure on `Δ_{m,n}` with a certified Lipschitz constant:
/// writing `w(a) = α_1! ⋯ α_n! · P(a)`, the promise is `w(α) ≤ δ⁻¹ w(β)`
/// for every adjacent pair (`Σ|α_i − β_i| = 2`).
///
/// The promise is checked exhaustively at construction over all ordered
/// adjacent pairs touching the support; compositions off the support carry
/// `P = 0`, so mass next to a hole is itself a violation.
///
/// Immutable once built.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CompositionMeasure {
    n: usize,
    m: usize,
    delta: f64,
    /// Sorted by composition; strictly positive probabilities only.
    support: Vec<(Composition, f64)>,
}

impl CompositionMeasure {
    pub fn new(
        n: usize,
        m: usize,
        delta: f64,
        entries: impl IntoIterator<Item = (Composition, f64)>,
    ) -> Result<Self, MeasureError> {
        if !(delta > 0.0 && delta <= 1.0) {
            return Err(MeasureError::BadDelta { delta });
        }
        let mut support: Vec<(Composition, f64)> =
            entries.into_iter().filter(|&(_, p)| p != 0.0).collect();
        support.sort_by(|a, b| a.0.cmp(&b.0));
        let mut sum = NeumaierSum::new();
        for (index, (comp, p)) in support.iter().enumerate() {
            if comp.n() != n || comp.m() != m || !p.is_finite() || *p < 0.0 {
                return Err(MeasureError::BadComposition { index });
            }
            if index > 0 && support[index - 1].0 == *comp {
                return Err(MeasureError::DuplicateComposition { index });
            }
            sum.add(*p);
        }
        let total = sum.total();
        if num::abs(total - 1.0) > tol::PROB_SUM {
            return Err(MeasureError::BadNormalization { sum: total });
        }
        let measure = CompositionMeasure {
            n,
            m,
            delta,
            support,
        };
        measure.check_lipschitz()?;
        Ok(measure)
    }

    /// The exhaustive hypothesis check, in the factorial-free form
    /// `α_i P(α) ≤ δ⁻¹ (α_j + 1) P(α − e_i + e_j)`.
    fn check_lipschitz(&self) -> Result<(), MeasureError> {
        let inv_delta = 1.0 / self.delta;
        let slack = 1.0 + tol::REL_INEQUALITY;
        for (comp, p) in &self.support {
            for i in 0..self.n {
                if comp.parts()[i] == 0 {
                    continue;
                }
                for j in 0..self.n {
                    if i == j {
                        continue;
                    }
                    let neighbor = comp.shift(i, j).expect("part is positive");
                    let q = self.prob(&neighbor);
                    let lhs = comp.parts()[i] as f64 * p;
                    let rhs = inv_delta * (comp.parts()[j] + 1) as f64 * q;
                    if lhs > rhs * slack {
                        return Err(MeasureError::LipschitzViolation { lhs, rhs, i, j });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// The certified Lipschitz constant (δ² for walk measures, δ for tree
    /// measures).
    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn support(&self) -> &[(Composition, f64)] {
        &self.support
    }

    pub fn prob(&self, a: &Composition) -> f64 {
        match self.support.binary_search_by(|(c, _)| c.cmp(a)) {
            Ok(idx) => self.support[idx].1,
            Err(_) => 0.0,
        }
    }

    /// `w(a) = α_1! ⋯ α_n! · P(a)`.
    pub fn weight(&self, a: &Composition) -> f64 {
        let mut w = self.prob(a);
        for &part in a.parts() {
            for k in 2..=part {
                w *= k as f64;
            }
        }
        w
    }

    /// The generating polynomial
    /// `f(x_1, …, x_n) = Σ_a P(a) x_1^{α_1} ⋯ x_n^{α_n}`,
    /// homogeneous of degree `m` with `f(1, …, 1) = 1`.
    pub fn generating_polynomial(&self, x: &[f64]) -> f64 {
        assert_eq!(x.len(), self.n);
        let mut acc = NeumaierSum::new();
        for (comp, p) in &self.support {
            let mut term = *p;
            for (xi, &part) in x.iter().zip(comp.parts()) {
                term *= num::powu(*xi, part);
            }
            acc.add(term);
        }
        acc.total()
    }

    /// `f_i = ∂f/∂x_i`, evaluated exactly over the support.
    pub fn partial_derivative(&self, i: usize, x: &[f64]) -> f64 {
        assert_eq!(x.len(), self.n);
        assert!(i < self.n);
        let mut acc = NeumaierSum::new();
        for (comp, p) in &self.support {
            let ai = comp.parts()[i];
            if ai == 0 {
                continue;
            }
            let mut term = *p * ai as f64 * num::powu(x[i], ai - 1);
            for (k, (xk, &part)) in x.iter().zip(comp.parts()).enumerate() {
                if k != i {
                    term *= num::powu(*xk, part);
                }
            }
            acc.add(term);
        }
        acc.total()
    }

    /// The exponential-moment comparison: returns
    /// `(F(t), ((e^t + (n−1)δ) / (1 + (n−1)δ))^m)` where
    /// `F(t) = f(e^t, 1, …, 1)`. The bound holds for every `t ≥ 0`.
    pub fn moment_bound(&self, t: f64) -> (f64, f64) {
        assert!(t >= 0.0, "moment bound needs t >= 0");
        let mut lhs = NeumaierSum::new();
        for (comp, p) in &self.support {
            lhs.add(p * num::exp(t * comp.parts()[0] as f64));
        }
        let n1d = (self.n as f64 - 1.0) * self.delta;
        let rhs = num::exp(self.m as f64 * (num::ln(num::exp(t) + n1d) - num::ln(1.0 + n1d)));
        (lhs.total(), rhs)
    }

    /// The max-coordinate tail at the threshold `3m ln n / (δ n ln ln n)`,
    /// against the guaranteed bound `1/n`, plus the per-coordinate tail
    /// `P(α_i > threshold)` against `1/n²`.
    ///
    /// Requires `m ≥ δn` and `n ≥ 3` (below that `ln ln n ≤ 0` and the
    /// threshold formula is meaningless).
    pub fn tail_bound(&self) -> Result<TailReport, MeasureError> {
        if self.n < 3 {
            return Err(MeasureError::NotApplicable { n: self.n });
        }
        let delta_n = self.delta * self.n as f64;
        if (self.m as f64) < delta_n {
            return Err(MeasureError::HypothesisViolated { m: self.m, delta_n });
        }
        let nf = self.n as f64;
        let threshold =
            3.0 * self.m as f64 * num::ln(nf) / (self.delta * nf * num::ln(num::ln(nf)));
        let mut tail = NeumaierSum::new();
        let mut per_coord = vec![NeumaierSum::new(); self.n];
        for (comp, p) in &self.support {
            if comp.max_part() as f64 >= threshold {
                tail.add(*p);
            }
            for (i, &part) in comp.parts().iter().enumerate() {
                if part as f64 > threshold {
                    per_coord[i].add(*p);
                }
            }
        }
        let tail_prob = tail.total();
        let per_coord_tail = per_coord
            .iter()
            .map(NeumaierSum::total)
            .fold(0.0f64, f64::max);
        let bound = 1.0 / nf;
        let per_coord_bound = 1.0 / (nf * nf);
        Ok(TailReport {
            threshold,
            tail_prob,
            bound,
            satisfied: tail_prob <= bound,
            per_coord_tail,
            per_coord_bound,
            per_coord_satisfied: per_coord_tail <= per_coord_bound,
            vacuous: threshold > self.m as f64,
        })
    }
}

/// Outcome of [`CompositionMeasure::tail_bound`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailReport {
    /// `3m ln n / (δ n ln ln n)`, kept as the raw real value.
    pub threshold: f64,
    /// `P(max_i α_i ≥ threshold)`.
    pub tail_prob: f64,
    /// `1/n`.
    pub bound: f64,
    pub satisfied: bool,
    /// `max_i P(α_i > threshold)`.
    pub per_coord_tail: f64,
    /// `1/n²`.
    pub per_coord_bound: f64,
    pub per_coord_satisfied: bool,
    /// True when the threshold exceeds `m`, so no composition can reach it.
    pub vacuous: bool,
}

/// The degree-profile measure of closed walks:
/// `P(a) = (trace Aⁿ)⁻¹ Σ_{π : deg(π) = a} weight(π)` on `Δ_{n,n}`.
/// Its certified Lipschitz constant is δ² (two edges change per rewiring).
pub fn walk_measure(a: &WeightMatrix) -> Result<CompositionMeasure, MeasureError> {
    let n = a.n();
    if n > WALK_CAP {
        return Err(MeasureError::TooLarge { n, cap: WALK_CAP });
    }
    let mut mass: BTreeMap<Vec<usize>, NeumaierSum> = BTreeMap::new();
    let mut total = NeumaierSum::new();
    for_each_walk(a, &mut |profile, weight| {
        mass.entry(profile.to_vec()).or_default().add(weight);
        total.add(weight);
    });
    let z = total.total();
    let entries = mass
        .into_iter()
        .map(|(parts, w)| (Composition::new(parts), w.total() / z));
    CompositionMeasure::new(n, n, a.delta() * a.delta(), entries)
}

/// The degree-profile measure of spanning trees on `Δ_{n−2,n}`, with
/// `α_i = deg_i(τ) − 1`:
/// `P(a) = (spt A)⁻¹ Σ_{τ : deg(τ) = a + 1} weight(τ)`.
/// Its certified Lipschitz constant is δ (one edge changes per swap).
pub fn tree_measure(a: &SymmetricWeightMatrix) -> Result<CompositionMeasure, MeasureError> {
    let n = a.n();
    if !(2..=TREE_CAP).contains(&n) {
        return Err(MeasureError::TooLarge { n, cap: TREE_CAP });
    }
    let mut mass: BTreeMap<Vec<usize>, NeumaierSum> = BTreeMap::new();
    let mut total = NeumaierSum::new();
    for_each_tree(a, &mut |profile, weight| {
        mass.entry(profile.to_vec()).or_default().add(weight);
        total.add(weight);
    });
    let z = total.total();
    let entries = mass
        .into_iter()
        .map(|(parts, w)| (Composition::new(parts), w.total() / z));
    CompositionMeasure::new(n, n - 2, a.delta(), entries)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum MoveError {
    /// The walk does not visit the designated source at the given position.
    WrongVertexAtPosition {
        position: usize,
        found: usize,
        expected: usize,
    },
    /// `{source, leaf}` is not an edge of the tree.
    NotAnEdge { source: usize, leaf: usize },
    /// The moved vertex lies on the source–target path.
    OnPath { leaf: usize },
    BadVertex { vertex: usize, n: usize },
}

impl fmt::Display for MoveError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MoveError::WrongVertexAtPosition {
                position,
                found,
                expected,
            } => write!(
                f,
                "walk has vertex {found} at position {position}, expected {expected}"
            ),
            MoveError::NotAnEdge { source, leaf } => {
                write!(f, "{{{source}, {leaf}}} is not a tree edge")
            }
            MoveError::OnPath { leaf } => {
                write!(f, "vertex {leaf} lies on the source-target path")
            }
            MoveError::BadVertex { vertex, n } => {
                write!(f, "vertex {vertex} out of range for n = {n}")
            }
        }
    }
}

impl core::error::Error for MoveError {}

/// Rewires one visit of a closed walk: the vertex at position `k` (which
/// must equal `source`) is replaced by `target`, moving the walk's degree
/// profile from `a` to `a − e_source + e_target`. Two incident edges
/// change, so the weight moves by at most `δ⁻²` on a δ-bounded matrix, and
/// the reverse rewiring restores the walk.
pub fn walk_rewire(
    pi: &ClosedWalk,
    k: usize,
    source: usize,
    target: usize,
) -> Result<ClosedWalk, MoveError> {
    let n = pi.n();
    if k >= n {
        return Err(MoveError::BadVertex { vertex: k, n });
    }
    if target >= n {
        return Err(MoveError::BadVertex { vertex: target, n });
    }
    let found = pi.vertices()[k];
    if found != source {
        return Err(MoveError::WrongVertexAtPosition {
            position: k,
            found,
            expected: source,
        });
    }
    let mut vertices = pi.vertices().to_vec();
    vertices[k] = target;
    Ok(ClosedWalk::new(vertices).expect("same length and range"))
}

/// Moves one subtree across: removes the edge `{source, leaf}` and adds
/// `{target, leaf}`. Requires `{source, leaf}` to be an edge and `leaf` to
/// avoid the unique source–target path, which keeps the result a spanning
/// tree; the degree of `source` drops by one, `target` gains one, and the
/// weight moves by at most `δ⁻¹`.
pub fn tree_edge_swap(
    tau: &SpanningTree,
    source: usize,
    target: usize,
    leaf: usize,
) -> Result<SpanningTree, MoveError> {
    let n = tau.n();
    for &v in &[source, target, leaf] {
        if v >= n {
            return Err(MoveError::BadVertex { vertex: v, n });
        }
    }
    if !tau.has_edge(source, leaf) {
        return Err(MoveError::NotAnEdge { source, leaf });
    }
    let path = tau.path(source, target);
    if path.contains(&leaf) {
        return Err(MoveError::OnPath { leaf });
    }
    let edges: Vec<(usize, usize)> = tau
        .edges()
        .iter()
        .copied()
        .filter(|&e| e != (source.min(leaf), source.max(leaf)))
        .chain(core::iter::once((target.min(leaf), target.max(leaf))))
        .collect();
    SpanningTree::new(n, edges).map_err(|_| MoveError::OnPath { leaf })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn walk_measure_of_all_ones_n2() {
        let a = WeightMatrix::all_ones(2);
        let mu = walk_measure(&a).unwrap();
        assert_eq!(mu.m(), 2);
        assert_eq!(mu.delta(), 1.0);
        assert_eq!(mu.prob(&Composition::new(vec![1, 1])), 0.5);
        assert_eq!(mu.prob(&Composition::new(vec![2, 0])), 0.25);
        assert_eq!(mu.prob(&Composition::new(vec![0, 2])), 0.25);
    }

    #[test]
    fn walk_measure_normalizes_with_full_support() {
        let a = WeightMatrix::from_rows(
            &[
                vec![0.9, 0.5, 0.7],
                vec![0.6, 1.0, 0.5],
                vec![0.5, 0.8, 0.6],
            ],
            0.5,
        )
        .unwrap();
        let mu = walk_measure(&a).unwrap();
        let total: f64 = mu.support().iter().map(|(_, p)| p).sum();
        assert!((total - 1.0).abs() < tol::PROB_SUM);
        // every composition of 3 into 3 parts is some walk's profile
        assert_eq!(mu.support().len(), 10); // C(5, 2)
    }

    #[test]
    fn tree_measure_of_k3_is_uniform_on_unit_vectors() {
        let a = SymmetricWeightMatrix::all_ones(3);
        let mu = tree_measure(&a).unwrap();
        assert_eq!(mu.m(), 1);
        for i in 0..3 {
            let mut parts = vec![0, 0, 0];
            parts[i] = 1;
            let p = mu.prob(&Composition::new(parts));
            assert!((p - 1.0 / 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn generating_polynomial_normalizes_at_ones() {
        let a = WeightMatrix::all_ones(3);
        let mu = walk_measure(&a).unwrap();
        let f = mu.generating_polynomial(&[1.0, 1.0, 1.0]);
        assert!((f - 1.0).abs() < 1e-12);
    }

    #[test]
    fn generating_polynomial_vanishes_at_zero_when_no_mass_concentrates() {
        // with m > 0 every composition has a positive part somewhere, so
        // every monomial vanishes at the origin
        let a = WeightMatrix::all_ones(3);
        let mu = walk_measure(&a).unwrap();
        assert_eq!(mu.generating_polynomial(&[0.0, 0.0, 0.0]), 0.0);
    }

    #[test]
    fn generating_polynomial_closed_form_n2() {
        // walk measure of all-ones n=2 at x = (e, 1):
        // (1/4)e^2 + (1/2)e + 1/4
        let a = WeightMatrix::all_ones(2);
        let mu = walk_measure(&a).unwrap();
        let e = core::f64::consts::E;
        let got = mu.generating_polynomial(&[e, 1.0]);
        let want = 0.25 * e * e + 0.5 * e + 0.25;
        assert!((got - want).abs() < 1e-12);
    }

    #[test]
    fn euler_identity_holds() {
        let a = WeightMatrix::from_rows(
            &[
                vec![0.9, 0.5, 0.7],
                vec![0.6, 1.0, 0.5],
                vec![0.5, 0.8, 0.6],
            ],
            0.5,
        )
        .unwrap();
        let mu = walk_measure(&a).unwrap();
        let x = [1.3, 0.4, 2.2];
        let f = mu.generating_polynomial(&x);
        let sum: f64 = (0..3).map(|i| x[i] * mu.partial_derivative(i, &x)).sum();
        assert!((sum - mu.m() as f64 * f).abs() <= 1e-11 * sum.abs());
    }

    #[test]
    fn derivatives_sum_to_m_at_ones() {
        let a = WeightMatrix::all_ones(4);
        let mu = walk_measure(&a).unwrap();
        let ones = vec![1.0; 4];
        let sum: f64 = (0..4).map(|i| mu.partial_derivative(i, &ones)).sum();
        assert!((sum - 4.0).abs() < 1e-11);
    }

    #[test]
    fn finite_difference_confirms_derivative() {
        let a = WeightMatrix::from_rows(&[vec![0.8, 0.5], vec![0.6, 1.0]], 0.5).unwrap();
        let mu = walk_measure(&a).unwrap();
        let x = [0.7, 1.9];
        let h = 1e-6;
        for i in 0..2 {
            let mut xh = x;
            xh[i] += h;
            let fd = (mu.generating_polynomial(&xh) - mu.generating_polynomial(&x)) / h;
            let exact = mu.partial_derivative(i, &x);
            assert!((fd - exact).abs() < 1e-4, "i = {i}: {fd} vs {exact}");
        }
    }

    #[test]
    fn derivative_ratio_respects_lipschitz_constant() {
        let a = WeightMatrix::from_rows(
            &[
                vec![0.9, 0.5, 0.7],
                vec![0.6, 1.0, 0.5],
                vec![0.5, 0.8, 0.6],
            ],
            0.5,
        )
        .unwrap();
        let mu = walk_measure(&a).unwrap();
        let points = [[0.1, 1.0, 2.0], [1.0, 1.0, 1.0], [3.0, 0.2, 0.7]];
        let inv_delta = 1.0 / mu.delta();
        for x in &points {
            for i in 0..3 {
                for j in 0..3 {
                    let fi = mu.partial_derivative(i, x);
                    let fj = mu.partial_derivative(j, x);
                    assert!(fi <= inv_delta * fj * (1.0 + tol::REL_INEQUALITY));
                }
            }
        }
    }

    #[test]
    fn moment_bound_is_equality_at_zero() {
        let a = WeightMatrix::all_ones(3);
        let mu = walk_measure(&a).unwrap();
        let (lhs, rhs) = mu.moment_bound(0.0);
        assert!((lhs - 1.0).abs() < 1e-12);
        assert!((rhs - 1.0).abs() < 1e-12);
    }

    #[test]
    fn moment_bound_uniform_case_is_tight() {
        // all-ones n=2, t=1: F(1) = (e+1)^2/4 and the bound coincides.
        let a = WeightMatrix::all_ones(2);
        let mu = walk_measure(&a).unwrap();
        let e = core::f64::consts::E;
        let (lhs, rhs) = mu.moment_bound(1.0);
        let want = (e + 1.0) * (e + 1.0) / 4.0;
        assert!((lhs - want).abs() < 1e-12);
        assert!((rhs - want).abs() < 1e-12);
    }

    #[test]
    fn moment_bound_holds_on_weighted_instances() {
        let a = WeightMatrix::from_rows(
            &[
                vec![0.5, 0.9, 0.4],
                vec![0.8, 0.4, 1.0],
                vec![0.4, 0.7, 0.6],
            ],
            0.4,
        )
        .unwrap();
        let mu = walk_measure(&a).unwrap();
        let mut t = 0.0;
        while t <= 3.0 {
            let (lhs, rhs) = mu.moment_bound(t);
            assert!(lhs <= rhs * (1.0 + tol::REL_INEQUALITY), "t = {t}");
            t += 0.25;
        }
    }

    #[test]
    fn tail_bound_walks_n6() {
        let a = WeightMatrix::all_ones(6);
        let mu = walk_measure(&a).unwrap();
        let report = mu.tail_bound().unwrap();
        assert!(report.satisfied);
        assert!(report.per_coord_satisfied);
        // 3 ln 6 / ln ln 6 > 6 = m at this size: vacuous and flagged
        assert!(report.vacuous);
        assert_eq!(report.tail_prob, 0.0);
    }

    #[test]
    fn tail_bound_rejects_small_n_and_bad_hypothesis() {
        let a = WeightMatrix::all_ones(2);
        let mu = walk_measure(&a).unwrap();
        assert!(matches!(
            mu.tail_bound(),
            Err(MeasureError::NotApplicable { n: 2 })
        ));
        // tree measure at n=4, delta = 0.9: m = 2 < 3.6 = δn
        let mut entries = vec![0.9; 16];
        for i in 0..4 {
            entries[i * 4 + i] = 0.0;
        }
        let sym = SymmetricWeightMatrix::new(4, entries, 0.9).unwrap();
        let mu = tree_measure(&sym).unwrap();
        assert!(matches!(
            mu.tail_bound(),
            Err(MeasureError::HypothesisViolated { .. })
        ));
    }

    #[test]
    fn lipschitz_violation_is_caught() {
        // Two point masses two moves apart in ratio far beyond δ⁻¹.
        let entries = vec![
            (Composition::new(vec![2, 0]), 0.999),
            (Composition::new(vec![0, 2]), 0.001),
        ];
        let err = CompositionMeasure::new(2, 2, 1.0, entries).unwrap_err();
        assert!(matches!(err, MeasureError::LipschitzViolation { .. }));
    }

    #[test]
    fn measure_weight_includes_factorials() {
        let a = WeightMatrix::all_ones(2);
        let mu = walk_measure(&a).unwrap();
        let w = mu.weight(&Composition::new(vec![2, 0]));
        assert!((w - 0.5).abs() < 1e-12); // 2! * 1/4
    }

    #[test]
    fn rewire_forced_case_n2() {
        let pi = ClosedWalk::new(vec![0, 0]).unwrap();
        let rho = walk_rewire(&pi, 1, 0, 1).unwrap();
        assert_eq!(rho.vertices(), &[0, 1]);
    }

    #[test]
    fn rewire_then_reverse_restores() {
        let pi = ClosedWalk::new(vec![2, 0, 1, 0]).unwrap();
        let rho = walk_rewire(&pi, 1, 0, 3).unwrap();
        let back = walk_rewire(&rho, 1, 3, 0).unwrap();
        assert_eq!(back, pi);
    }

    #[test]
    fn rewire_checks_the_source() {
        let pi = ClosedWalk::new(vec![2, 0, 1, 0]).unwrap();
        assert_eq!(
            walk_rewire(&pi, 0, 0, 3).unwrap_err(),
            MoveError::WrongVertexAtPosition {
                position: 0,
                found: 2,
                expected: 0
            }
        );
    }

    #[test]
    fn rewire_weight_ratio_bounded() {
        let a = WeightMatrix::from_rows(
            &[
                vec![0.5, 0.9, 0.6, 1.0],
                vec![0.8, 0.5, 0.7, 0.5],
                vec![0.6, 1.0, 0.5, 0.9],
                vec![0.9, 0.5, 0.8, 0.5],
            ],
            0.5,
        )
        .unwrap();
        let inv_d2 = 1.0 / (a.delta() * a.delta());
        let pi = ClosedWalk::new(vec![0, 2, 0, 3]).unwrap();
        for k in [0usize, 2] {
            let rho = walk_rewire(&pi, k, 0, 1).unwrap();
            assert!(rho.weight(&a) <= inv_d2 * pi.weight(&a) * (1.0 + 1e-12));
        }
    }

    #[test]
    fn edge_swap_star_case() {
        // star centered at 0 in K3: move leaf 2 across to 1 -> path 2-1-0
        let tau = SpanningTree::new(3, [(0, 1), (0, 2)]).unwrap();
        let eta = tree_edge_swap(&tau, 0, 1, 2).unwrap();
        assert_eq!(eta.edges(), &[(0, 1), (1, 2)]);
    }

    #[test]
    fn edge_swap_then_reverse_restores() {
        let tau = SpanningTree::new(5, [(0, 1), (0, 2), (0, 3), (3, 4)]).unwrap();
        let eta = tree_edge_swap(&tau, 0, 1, 2).unwrap();
        let back = tree_edge_swap(&eta, 1, 0, 2).unwrap();
        assert_eq!(back, tau);
    }

    #[test]
    fn edge_swap_rejects_path_vertices_and_non_edges() {
        let tau = SpanningTree::new(4, [(0, 2), (2, 1), (0, 3)]).unwrap();
        // 2 is on the path 0-2-1
        assert_eq!(
            tree_edge_swap(&tau, 0, 1, 2).unwrap_err(),
            MoveError::OnPath { leaf: 2 }
        );
        assert_eq!(
            tree_edge_swap(&tau, 0, 2, 1).unwrap_err(),
            MoveError::NotAnEdge { source: 0, leaf: 1 }
        );
    }

    #[test]
    fn edge_swap_moves_degrees_and_bounds_weight() {
        let entries = {
            let vals = [
                [0.0, 0.7, 0.5, 0.9, 0.6],
                [0.7, 0.0, 0.8, 0.5, 1.0],
                [0.5, 0.8, 0.0, 0.6, 0.7],
                [0.9, 0.5, 0.6, 0.0, 0.8],
                [0.6, 1.0, 0.7, 0.8, 0.0],
            ];
            let mut flat = Vec::new();
            for row in vals {
                flat.extend(row);
            }
            flat
        };
        let a = SymmetricWeightMatrix::new(5, entries, 0.5).unwrap();
        let tau = SpanningTree::new(5, [(0, 2), (0, 3), (0, 1), (1, 4)]).unwrap();
        let eta = tree_edge_swap(&tau, 0, 1, 2).unwrap();
        let d_tau = tau.degree_profile();
        let d_eta = eta.degree_profile();
        assert_eq!(d_eta[0], d_tau[0] - 1);
        assert_eq!(d_eta[1], d_tau[1] + 1);
        assert!(eta.weight(&a) <= tau.weight(&a) / a.delta() * (1.0 + 1e-12));
    }

    #[test]
    fn non_vacuous_tail_from_synthetic_multinomial() {
        // P(a) = C(m; a) / n^m is the walk measure of the all-ones matrix;
        // at n = m = 11 the threshold 3 ln n / ln ln n ≈ 8.2 < m, so the
        // tail is positive and the bound is exercised for real.
        let n = 11usize;
        let ln_n = (n as f64).ln();
        let mut entries: Vec<(Composition, f64)> = Vec::new();
        fn rec(
            parts: &mut Vec<usize>,
            left: usize,
            slot: usize,
            n: usize,
            ln_n: f64,
            out: &mut Vec<(Composition, f64)>,
        ) {
            if slot == n - 1 {
                parts.push(left);
                let mut ln_p = crate::logdomain::ln_factorial(n) - n as f64 * ln_n;
                for &a in parts.iter() {
                    ln_p -= crate::logdomain::ln_factorial(a);
                }
                out.push((Composition::new(parts.clone()), libm::exp(ln_p)));
                parts.pop();
                return;
            }
            for take in 0..=left {
                parts.push(take);
                rec(parts, left - take, slot + 1, n, ln_n, out);
                parts.pop();
            }
        }
        rec(&mut Vec::new(), n, 0, n, ln_n, &mut entries);
        let mu = CompositionMeasure::new(n, n, 1.0, entries).unwrap();
        let report = mu.tail_bound().unwrap();
        assert!(!report.vacuous);
        assert!(report.tail_prob > 0.0);
        assert!(
            report.satisfied,
            "tail {} vs 1/n {}",
            report.tail_prob, report.bound
        );
        assert!(report.per_coord_satisfied);
    }
}
