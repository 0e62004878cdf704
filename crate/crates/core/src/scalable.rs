//! Polynomial-time partition functions: trace powers (closed walks), the
//! weighted matrix-tree determinant (spanning trees), and a certified
//! permanent bracket via doubly-stochastic scaling.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

use crate::logdomain::{ln_factorial, LogValue};
use crate::matrix::{SymmetricWeightMatrix, WeightMatrix};
use crate::num::{self, NeumaierSum};
use crate::tol;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum ScaleError {
    /// Residual still above tolerance after the iteration budget.
    NotConverged { residual: f64, iterations: usize },
}

impl fmt::Display for ScaleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScaleError::NotConverged {
                residual,
                iterations,
            } => write!(
                f,
                "scaling did not converge: residual {residual} after {iterations} iterations"
            ),
        }
    }
}

impl core::error::Error for ScaleError {}

/// Which computation produced a [`PartitionReport`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PfMethod {
    TracePower,
    MatrixTree,
    ScalingBracket,
    ExactOracle,
}

impl PfMethod {
    pub fn name(self) -> &'static str {
        match self {
            PfMethod::TracePower => "trace-power",
            PfMethod::MatrixTree => "matrix-tree",
            PfMethod::ScalingBracket => "scaling-bracket",
            PfMethod::ExactOracle => "exact-oracle",
        }
    }
}

/// A partition-function value together with a certified bracket.
/// Exact methods collapse the bracket: `lower == value == upper`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PartitionReport {
    pub value: LogValue,
    pub lower: LogValue,
    pub upper: LogValue,
    pub method: PfMethod,
    /// Sinkhorn sweeps; `None` for non-scaling methods.
    pub iterations: Option<usize>,
}

impl PartitionReport {
    pub fn exact(value: LogValue, method: PfMethod) -> Self {
        PartitionReport {
            value,
            lower: value,
            upper: value,
            method,
            iterations: None,
        }
    }
}

/// Row/column scaling of a matrix to doubly stochastic form.
///
/// Factors are kept in the log domain: their products reach `n^{−n}` scale
/// and underflow native floats long before the scaled matrix itself
/// misbehaves. The scaled matrix satisfies
/// `scaled[i][j] = exp(log_row_factors[i] + ln a_ij + log_col_factors[j])`
/// up to accumulated rounding.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ScalingResult {
    pub log_row_factors: Vec<f64>,
    pub log_col_factors: Vec<f64>,
    /// Row-major scaled matrix `D`.
    pub scaled: Vec<f64>,
    /// Max deviation of any row or column sum of `D` from 1.
    pub residual: f64,
    /// Full row+column sweeps performed.
    pub iterations: usize,
}

fn max_sum_deviation(d: &[f64], n: usize) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..n {
        let r: f64 = d[i * n..(i + 1) * n].iter().sum();
        worst = worst.max(num::abs(r - 1.0));
    }
    for j in 0..n {
        let mut c = 0.0;
        for i in 0..n {
            c += d[i * n + j];
        }
        worst = worst.max(num::abs(c - 1.0));
    }
    worst
}

/// Alternating row/column normalization (rows first) until every row and
/// column sum of the scaled matrix is within `tol` of 1. Convergence is
/// guaranteed for strictly positive matrices; δ-bounded ones converge
/// linearly. An already doubly stochastic input returns after zero sweeps.
pub fn sinkhorn_scale(
    a: &WeightMatrix,
    tol: f64,
    max_iter: usize,
) -> Result<ScalingResult, ScaleError> {
    assert!(tol > 0.0, "tolerance must be positive");
    let n = a.n();
    let mut d = a.entries().to_vec();
    let mut log_row = vec![0.0f64; n];
    let mut log_col = vec![0.0f64; n];
    let mut residual = max_sum_deviation(&d, n);
    let mut iterations = 0usize;
    while residual > tol {
        if iterations >= max_iter {
            return Err(ScaleError::NotConverged {
                residual,
                iterations,
            });
        }
        for i in 0..n {
            let r: f64 = d[i * n..(i + 1) * n].iter().sum();
            log_row[i] -= num::ln(r);
            for v in &mut d[i * n..(i + 1) * n] {
                *v /= r;
            }
        }
        for j in 0..n {
            let mut c = 0.0;
            for i in 0..n {
                c += d[i * n + j];
            }
            log_col[j] -= num::ln(c);
            for i in 0..n {
                d[i * n + j] /= c;
            }
        }
        iterations += 1;
        residual = max_sum_deviation(&d, n);
    }
    Ok(ScalingResult {
        log_row_factors: log_row,
        log_col_factors: log_col,
        scaled: d,
        residual,
        iterations,
    })
}

/// `n × n` matrix with a shared log scale factor, for powers whose entries
/// outgrow native range.
struct ScaledMatrix {
    n: usize,
    entries: Vec<f64>,
    ln_scale: f64,
}

impl ScaledMatrix {
    fn mul(&self, other: &ScaledMatrix) -> ScaledMatrix {
        let n = self.n;
        let mut out = vec![0.0f64; n * n];
        for i in 0..n {
            for k in 0..n {
                let v = self.entries[i * n + k];
                if v == 0.0 {
                    continue;
                }
                let row = &other.entries[k * n..(k + 1) * n];
                for (j, &w) in row.iter().enumerate() {
                    out[i * n + j] += v * w;
                }
            }
        }
        let max = out.iter().cloned().fold(0.0f64, f64::max);
        let mut ln_scale = self.ln_scale + other.ln_scale;
        if max > 0.0 {
            for v in &mut out {
                *v /= max;
            }
            ln_scale += num::ln(max);
        }
        ScaledMatrix {
            n,
            entries: out,
            ln_scale,
        }
    }
}

/// `trace A^k = Σ over closed walks of length k of their weight`, via
/// repeated squaring with a running log scale. Requires `k ≥ 1`.
pub fn trace_power(a: &WeightMatrix, k: usize) -> LogValue {
    assert!(k >= 1, "trace power requires k >= 1");
    let n = a.n();
    let mut base = ScaledMatrix {
        n,
        entries: a.entries().to_vec(),
        ln_scale: 0.0,
    };
    let mut result: Option<ScaledMatrix> = None;
    let mut exp = k;
    loop {
        if exp & 1 == 1 {
            result = Some(match result {
                None => ScaledMatrix {
                    n,
                    entries: base.entries.clone(),
                    ln_scale: base.ln_scale,
                },
                Some(r) => r.mul(&base),
            });
        }
        exp >>= 1;
        if exp == 0 {
            break;
        }
        base = base.mul(&base);
    }
    let power = result.expect("k >= 1");
    let mut trace = NeumaierSum::new();
    for i in 0..n {
        trace.add(power.entries[i * n + i]);
    }
    LogValue::from_ln(num::ln(trace.total()) + power.ln_scale)
}

/// Log-stabilized determinant by partially pivoted LU. Consumes the
/// row-major matrix.
fn log_det_lu(mut m: Vec<f64>, n: usize) -> LogValue {
    let mut sign = 1i8;
    let mut ln_abs = 0.0f64;
    for col in 0..n {
        let mut pivot = col;
        let mut best = num::abs(m[col * n + col]);
        for row in (col + 1)..n {
            let v = num::abs(m[row * n + col]);
            if v > best {
                best = v;
                pivot = row;
            }
        }
        if best == 0.0 {
            return LogValue::ZERO;
        }
        if pivot != col {
            for j in 0..n {
                m.swap(col * n + j, pivot * n + j);
            }
            sign = -sign;
        }
        let d = m[col * n + col];
        if d < 0.0 {
            sign = -sign;
        }
        ln_abs += num::ln(num::abs(d));
        for row in (col + 1)..n {
            let f = m[row * n + col] / d;
            if f == 0.0 {
                continue;
            }
            for j in (col + 1)..n {
                m[row * n + j] -= f * m[col * n + j];
            }
            m[row * n + col] = 0.0;
        }
    }
    LogValue::from_sign_ln(sign, ln_abs)
}

/// Spanning-tree partition function by the weighted matrix-tree theorem:
/// any cofactor of the Laplacian `L` with `L_ij = −a_ij` (i ≠ j) and
/// `L_ii = Σ_{j≠i} a_ij` equals `Σ_{τ ∈ T_n} Π_{{i,j} ∈ τ} a_ij`.
/// Requires `n ≥ 2`.
pub fn spanning_tree_pf(a: &SymmetricWeightMatrix) -> LogValue {
    spanning_tree_pf_cofactor(a, 0)
}

/// Same, deleting the given row/column; the choice does not affect the
/// value.
pub fn spanning_tree_pf_cofactor(a: &SymmetricWeightMatrix, removed: usize) -> LogValue {
    let n = a.n();
    assert!(n >= 2, "spanning trees need at least two vertices");
    assert!(removed < n);
    let m = n - 1;
    let mut reduced = vec![0.0f64; m * m];
    let keep: Vec<usize> = (0..n).filter(|&v| v != removed).collect();
    for (ri, &i) in keep.iter().enumerate() {
        let mut diag = NeumaierSum::new();
        for j in 0..n {
            if j != i {
                diag.add(a.get(i, j));
            }
        }
        for (rj, &j) in keep.iter().enumerate() {
            reduced[ri * m + rj] = if ri == rj { diag.total() } else { -a.get(i, j) };
        }
    }
    log_det_lu(reduced, m)
}

/// A certified bracket on `per A` from Sinkhorn scaling.
///
/// With `D` the scaled matrix and `x, y` the factors,
/// `per A = per D / (Π x_i Π y_j)` holds exactly, so it suffices to
/// bracket `per D` for a near-doubly-stochastic `D`:
///
/// * upper: `per D ≤ Π_i r_i(D)` for any nonnegative matrix;
/// * lower: with `ρ` the residual and `u = 1/(1+ρ)`, the matrix
///   `P = uD + F` with `F_ij = (1 − u·r_i)(1 − u·c_j) / (n − u·Σ_ij d_ij)`
///   is exactly doubly stochastic and entrywise positive, so the
///   van der Waerden bound gives `per P ≥ n!/nⁿ`; since `P ≤ C·D`
///   entrywise for `C = max_ij P_ij/d_ij`, monotonicity yields
///   `per D ≥ (n!/nⁿ) / Cⁿ`.
///
/// The bracket width is therefore essentially `nⁿ/n! ≤ eⁿ`; the report's
/// `value` is the log-midpoint of the bracket.
pub fn permanent_bracket(a: &WeightMatrix, tol: f64) -> Result<PartitionReport, ScaleError> {
    let scaling = sinkhorn_scale(a, tol, tol::SINKHORN_MAX_ITER)?;
    Ok(bracket_from_scaling(a.n(), &scaling))
}

pub(crate) fn bracket_from_scaling(n: usize, scaling: &ScalingResult) -> PartitionReport {
    let mut d = scaling.scaled.clone();
    let mut log_row = scaling.log_row_factors.clone();
    // one exact row normalization tightens the row-sum side for free
    for i in 0..n {
        let r: f64 = d[i * n..(i + 1) * n].iter().sum();
        log_row[i] -= num::ln(r);
        for v in &mut d[i * n..(i + 1) * n] {
            *v /= r;
        }
    }
    let mut row_sums = vec![0.0f64; n];
    let mut col_sums = vec![0.0f64; n];
    let mut total = NeumaierSum::new();
    for (i, row_sum) in row_sums.iter_mut().enumerate() {
        for (j, col_sum) in col_sums.iter_mut().enumerate() {
            let v = d[i * n + j];
            *row_sum += v;
            *col_sum += v;
            total.add(v);
        }
    }
    let rho = row_sums
        .iter()
        .chain(col_sums.iter())
        .fold(0.0f64, |acc, &s| acc.max(num::abs(s - 1.0)));
    let u = 1.0 / (1.0 + rho);
    let deficit_total = n as f64 - u * total.total();
    let mut big_c = 1.0f64;
    if deficit_total > 0.0 {
        for i in 0..n {
            let rd = (1.0 - u * row_sums[i]).max(0.0);
            for j in 0..n {
                let cd = (1.0 - u * col_sums[j]).max(0.0);
                let p = u + rd * cd / (deficit_total * d[i * n + j]);
                big_c = big_c.max(p);
            }
        }
    }
    big_c *= 1.0 + tol::REL_IDENTITY; // absorb rounding in the C maximum
    let ln_correction: f64 =
        -(log_row.iter().sum::<f64>() + scaling.log_col_factors.iter().sum::<f64>());
    let ln_upper_d: f64 = row_sums.iter().map(|&r| num::ln(r)).sum();
    let nf = n as f64;
    let ln_lower_d = ln_factorial(n) - nf * num::ln(nf) - nf * num::ln(big_c);
    let lower = LogValue::from_ln(ln_lower_d + ln_correction);
    let upper = LogValue::from_ln(ln_upper_d + ln_correction);
    let value = LogValue::from_ln(0.5 * (lower.ln_abs() + upper.ln_abs()));
    PartitionReport {
        value,
        lower,
        upper,
        method: PfMethod::ScalingBracket,
        iterations: Some(scaling.iterations),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles::{permanent_ryser, tree_sum_restricted, walk_sum_restricted};

    fn random_like(n: usize, delta: f64, seed: u64) -> WeightMatrix {
        // small deterministic LCG spread over [delta, 1]
        let mut state = seed
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        let mut next = || {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        let entries = (0..n * n).map(|_| delta + (1.0 - delta) * next()).collect();
        WeightMatrix::new(n, entries, delta).unwrap()
    }

    fn random_symmetric(n: usize, delta: f64, seed: u64) -> SymmetricWeightMatrix {
        let base = random_like(n, delta, seed);
        let mut entries = base.entries().to_vec();
        for i in 0..n {
            entries[i * n + i] = 0.0;
            for j in (i + 1)..n {
                entries[j * n + i] = entries[i * n + j];
            }
        }
        SymmetricWeightMatrix::new(n, entries, delta).unwrap()
    }

    #[test]
    fn trace_of_all_ones_power_is_n_to_the_n() {
        for n in 1..=6usize {
            let a = WeightMatrix::all_ones(n);
            let t = trace_power(&a, n);
            let want = (n as f64).powi(n as i32);
            assert!((t.to_f64() - want).abs() / want < 1e-12, "n = {n}");
        }
    }

    #[test]
    fn scalar_matrix_powers() {
        let a = WeightMatrix::new(1, vec![0.5], 0.5).unwrap();
        let t = trace_power(&a, 7);
        assert!((t.to_f64() - 0.5f64.powi(7)).abs() < 1e-15);
    }

    #[test]
    fn trace_matches_walk_enumeration() {
        let a = random_like(5, 0.5, 42);
        let t = trace_power(&a, 5);
        let w = walk_sum_restricted(&a, 5).unwrap();
        assert!(t.relative_error(w) < tol::REL_ORACLE);
    }

    #[test]
    fn trace_matches_walks_on_near_identity_pattern() {
        // unit diagonal, delta off-diagonal
        let d = 0.3;
        let mut entries = vec![d; 9];
        for i in 0..3 {
            entries[i * 3 + i] = 1.0;
        }
        let a = WeightMatrix::new(3, entries, d).unwrap();
        let t = trace_power(&a, 3);
        let w = walk_sum_restricted(&a, 3).unwrap();
        assert!(t.relative_error(w) < tol::REL_ORACLE);
    }

    #[test]
    fn huge_trace_power_stays_in_log_domain() {
        let a = WeightMatrix::all_ones(50);
        let t = trace_power(&a, 200);
        // trace Jᵏ = n · n^{k−1}, i.e. ln = k ln n
        let want = 200.0 * (50.0f64).ln();
        assert!((t.ln_abs() - want).abs() < 1e-6);
    }

    #[test]
    fn spanning_tree_pf_counts_cayley_trees() {
        for n in 2..=8usize {
            let a = SymmetricWeightMatrix::all_ones(n);
            let s = spanning_tree_pf(&a);
            let want = (n as f64).powi(n as i32 - 2);
            assert!((s.to_f64() - want).abs() / want < 1e-10, "n = {n}");
        }
    }

    #[test]
    fn spanning_tree_pf_single_edge() {
        let a = SymmetricWeightMatrix::new(2, vec![0.0, 0.7, 0.7, 0.0], 0.5).unwrap();
        let s = spanning_tree_pf(&a);
        assert!((s.to_f64() - 0.7).abs() < 1e-14);
    }

    #[test]
    fn spanning_tree_pf_matches_prufer_enumeration() {
        let a = random_symmetric(6, 0.3, 7);
        let det = spanning_tree_pf(&a);
        let brute = tree_sum_restricted(&a, 5).unwrap();
        assert!(det.relative_error(brute) < tol::REL_ORACLE);
    }

    #[test]
    fn cofactor_choice_is_immaterial() {
        let a = random_symmetric(7, 0.4, 99);
        let first = spanning_tree_pf_cofactor(&a, 0);
        for removed in 1..7 {
            let other = spanning_tree_pf_cofactor(&a, removed);
            assert!(first.relative_error(other) < 1e-10);
        }
    }

    #[test]
    fn sinkhorn_on_all_ones_is_immediate() {
        let a = WeightMatrix::all_ones(4);
        let r = sinkhorn_scale(&a, 1e-10, 100).unwrap();
        // One sweep lands exactly on J/n.
        assert!(r.iterations <= 1);
        for v in &r.scaled {
            assert!((v - 0.25).abs() < 1e-12);
        }
    }

    #[test]
    fn sinkhorn_fixed_point_needs_no_iterations() {
        let entries = vec![0.5, 0.25, 0.25, 0.25, 0.5, 0.25, 0.25, 0.25, 0.5];
        let a = WeightMatrix::new(3, entries, 0.2).unwrap();
        let r = sinkhorn_scale(&a, 1e-9, 10).unwrap();
        assert_eq!(r.iterations, 0);
        assert!(r.log_row_factors.iter().all(|&v| v == 0.0));
        assert!(r.log_col_factors.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn sinkhorn_reaches_tight_tolerance() {
        let a = random_like(10, 0.2, 3);
        let r = sinkhorn_scale(&a, 1e-10, tol::SINKHORN_MAX_ITER).unwrap();
        assert!(r.residual <= 1e-10);
        // factor bookkeeping: d_ij == exp(lx_i + ln a_ij + ly_j)
        for i in 0..10 {
            for j in 0..10 {
                let rebuilt =
                    num::exp(r.log_row_factors[i] + num::ln(a.get(i, j)) + r.log_col_factors[j]);
                let stored = r.scaled[i * 10 + j];
                assert!((rebuilt - stored).abs() / stored < 1e-9);
            }
        }
    }

    #[test]
    fn sinkhorn_honors_iteration_budget() {
        let a = random_like(8, 0.2, 11);
        match sinkhorn_scale(&a, 1e-15, 1) {
            Err(ScaleError::NotConverged { iterations, .. }) => assert_eq!(iterations, 1),
            other => panic!("expected NotConverged, got {other:?}"),
        }
    }

    #[test]
    fn bracket_contains_exact_permanent() {
        for (n, seed) in [(3usize, 1u64), (5, 2), (8, 3), (12, 4)] {
            let a = random_like(n, 0.3, seed);
            let report = permanent_bracket(&a, 1e-10).unwrap();
            let exact = permanent_ryser(&a).unwrap();
            assert!(
                report.lower.ln_abs() <= exact.ln_abs() + 1e-9,
                "n = {n}: lower {} vs exact {}",
                report.lower.ln_abs(),
                exact.ln_abs()
            );
            assert!(
                report.upper.ln_abs() >= exact.ln_abs() - 1e-9,
                "n = {n}: upper {} vs exact {}",
                report.upper.ln_abs(),
                exact.ln_abs()
            );
            assert!(report.lower <= report.value && report.value <= report.upper);
        }
    }

    #[test]
    fn bracket_collapses_at_n1() {
        let a = WeightMatrix::new(1, vec![0.6], 0.5).unwrap();
        let report = permanent_bracket(&a, 1e-10).unwrap();
        assert!((report.lower.ln_abs() - (0.6f64).ln()).abs() < 1e-9);
        assert!((report.upper.ln_abs() - (0.6f64).ln()).abs() < 1e-9);
    }

    #[test]
    fn all_ones_bracket_brackets_factorial() {
        let a = WeightMatrix::all_ones(5);
        let report = permanent_bracket(&a, 1e-10).unwrap();
        let exact = (120.0f64).ln();
        assert!(report.lower.ln_abs() <= exact && exact <= report.upper.ln_abs());
    }

    #[test]
    fn partition_functions_are_monotone_in_entries() {
        let a = random_like(5, 0.4, 23);
        let bumped = {
            let mut e = a.entries().to_vec();
            e[7] = (e[7] + 0.05).min(1.0);
            WeightMatrix::new(5, e, 0.4).unwrap()
        };
        assert!(trace_power(&bumped, 5) >= trace_power(&a, 5));
        let per_a = permanent_ryser(&a).unwrap();
        let per_b = permanent_ryser(&bumped).unwrap();
        assert!(per_b >= per_a);
    }

    #[test]
    fn gauge_invariance_of_row_scaling() {
        // Scaling a row of A re-gauges the row factor and leaves D alone.
        let a = random_like(5, 0.3, 17);
        let c = 1.25;
        let mut entries = a.entries().to_vec();
        for v in &mut entries[0..5] {
            *v /= c;
        }
        let a2 = WeightMatrix::new(5, entries, a.delta() / c).unwrap();
        let r1 = sinkhorn_scale(&a, 1e-12, tol::SINKHORN_MAX_ITER).unwrap();
        let r2 = sinkhorn_scale(&a2, 1e-12, tol::SINKHORN_MAX_ITER).unwrap();
        for (v1, v2) in r1.scaled.iter().zip(&r2.scaled) {
            assert!((v1 - v2).abs() < 1e-9);
        }
        // the scaled row's factor moves by ln c relative to the others
        let shift0 = r2.log_row_factors[0] - r1.log_row_factors[0];
        let shift1 = r2.log_row_factors[1] - r1.log_row_factors[1];
        assert!((shift0 - shift1 - c.ln()).abs() < 1e-9);
    }
}
