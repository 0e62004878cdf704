//! Assembled inequality checks, one report per instance.
//!
//! Each check evaluates both sides of one of the concentration
//! inequalities exactly (by enumeration at desk scale) and reports the
//! threshold, the two sides, whether the inequality held, and whether the
//! restriction was vacuous (caught nothing). Reports serialize to the
//! JSON shape `{theorem, n, delta, threshold, lhs, rhs, satisfied,
//! vacuous}`.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

use crate::concentration::{walk_measure, tree_measure, CompositionMeasure, MeasureError};
use crate::logdomain::LogValue;
use crate::matrix::{SymmetricWeightMatrix, WeightMatrix};
use crate::num::{self, NeumaierSum};
use crate::oracles::{
    cycle_count_weights, hamiltonian_permanent, tree_sum_restricted, walk_sum_restricted,
    HamMethod, OracleError, PERMUTATION_CAP,
};
use crate::separator::theorem12_lower_factor;
use crate::tol;

/// One inequality check on one instance.
///
/// `lhs` and `rhs` are the two sides being compared, with `satisfied ⇔ the
/// inequality held` (up to [`tol::REL_INEQUALITY`] slack). Checks whose
/// quantities live at factorial scale (the patching factor) compare in the
/// log domain; the doc of each producer says which.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub theorem: String,
    pub n: usize,
    pub delta: f64,
    /// The restriction threshold, when the check has one; raw real value.
    pub threshold: Option<f64>,
    pub lhs: f64,
    pub rhs: f64,
    pub satisfied: bool,
    /// The restriction caught nothing (threshold at or beyond the maximum
    /// possible value), so the inequality held trivially.
    pub vacuous: bool,
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} n={} delta={}: {} (lhs={:.6e}, rhs={:.6e}{}{})",
            self.theorem,
            self.n,
            self.delta,
            if self.satisfied { "satisfied" } else { "VIOLATED" },
            self.lhs,
            self.rhs,
            match self.threshold {
                Some(t) => alloc::format!(", threshold={t:.4}"),
                None => String::new(),
            },
            if self.vacuous { ", vacuous" } else { "" },
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum VerifyError {
    Oracle(OracleError),
    Measure(MeasureError),
    /// The theorem's hypothesis excludes this instance (reported, not a
    /// violation).
    NotApplicable { reason: String },
}

impl fmt::Display for VerifyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VerifyError::Oracle(e) => write!(f, "{e}"),
            VerifyError::Measure(e) => write!(f, "{e}"),
            VerifyError::NotApplicable { reason } => write!(f, "not applicable: {reason}"),
        }
    }
}

impl core::error::Error for VerifyError {}

impl From<OracleError> for VerifyError {
    fn from(e: OracleError) -> Self {
        VerifyError::Oracle(e)
    }
}

impl From<MeasureError> for VerifyError {
    fn from(e: MeasureError) -> Self {
        VerifyError::Measure(e)
    }
}

fn holds(lhs_ge: f64, rhs: f64) -> bool {
    lhs_ge >= rhs - tol::REL_INEQUALITY * num::abs(rhs)
}

/// Low-cycle mass: the permutation weight with `c(σ) ≤ 4 + 4δ⁻² ln n`
/// captures at least half the permanent. `lhs` is the restricted sum,
/// `rhs` is `per A / 2`; vacuous when the cap reaches `n`.
pub fn check_low_cycle_mass(a: &WeightMatrix) -> Result<CheckReport, VerifyError> {
    let n = a.n();
    let delta = a.delta();
    let cap = 4.0 + 4.0 * num::ln(n as f64) / (delta * delta);
    let cmax = num::floor(cap) as usize;
    let buckets = cycle_count_weights(a)?;
    let mut restricted = NeumaierSum::new();
    let mut total = NeumaierSum::new();
    for (idx, &w) in buckets.iter().enumerate() {
        total.add(w);
        if idx < cmax {
            restricted.add(w);
        }
    }
    let lhs = restricted.total();
    let rhs = 0.5 * total.total();
    Ok(CheckReport {
        theorem: String::from("low-cycle-mass"),
        n,
        delta,
        threshold: Some(cap),
        lhs,
        rhs,
        satisfied: holds(lhs, rhs),
        vacuous: cmax >= n,
    })
}

/// Cycle-length law: `P(l_i = m) ≤ 1 / (δ² (n − m))` for every vertex `i`
/// and every `m < n`. Reports the worst pair: `lhs` is its probability,
/// `rhs` its bound.
pub fn check_cycle_length_law(a: &WeightMatrix) -> Result<CheckReport, VerifyError> {
    let n = a.n();
    let delta = a.delta();
    let mut worst_ratio = 0.0f64;
    let mut worst = (0.0, f64::INFINITY);
    for i in 0..n {
        let dist = crate::oracles::cycle_length_distribution(a, i)?;
        for (idx, &p) in dist.iter().enumerate().take(n.saturating_sub(1)) {
            let m = idx + 1;
            let bound = 1.0 / (delta * delta * (n - m) as f64);
            let ratio = p / bound;
            if ratio > worst_ratio {
                worst_ratio = ratio;
                worst = (p, bound);
            }
        }
    }
    let (lhs, rhs) = worst;
    Ok(CheckReport {
        theorem: String::from("cycle-length-law"),
        n,
        delta,
        threshold: None,
        lhs,
        rhs,
        satisfied: lhs <= rhs * (1.0 + tol::REL_INEQUALITY),
        vacuous: n == 1,
    })
}

/// Expected cycle count: `E c ≤ 2 + 2δ⁻² ln n`. `lhs` is the exact
/// expectation, `rhs` the bound.
pub fn check_expected_cycles(a: &WeightMatrix) -> Result<CheckReport, VerifyError> {
    let n = a.n();
    let delta = a.delta();
    let lhs = crate::oracles::expected_cycle_count(a)?;
    let rhs = 2.0 + 2.0 * num::ln(n as f64) / (delta * delta);
    Ok(CheckReport {
        theorem: String::from("expected-cycles"),
        n,
        delta,
        threshold: None,
        lhs,
        rhs,
        satisfied: lhs <= rhs * (1.0 + tol::REL_INEQUALITY),
        vacuous: false,
    })
}

/// Restricted walk sum: walks whose every vertex degree is at most
/// `⌈3 ln n / (δ² ln ln n)⌉` carry at least `(n−1)/n` of `trace Aⁿ`.
/// The threshold is ceilinged for the integer degree comparison (the raw
/// real value is reported); needs `n ≥ 3` for `ln ln n > 0`.
pub fn check_walk_concentration(a: &WeightMatrix) -> Result<CheckReport, VerifyError> {
    let n = a.n();
    let delta = a.delta();
    if n < 3 {
        return Err(VerifyError::NotApplicable {
            reason: alloc::format!("ln ln n <= 0 for n = {n}"),
        });
    }
    let nf = n as f64;
    let raw = 3.0 * num::ln(nf) / (delta * delta * num::ln(num::ln(nf)));
    let degmax = num::ceil(raw) as usize;
    let restricted = walk_sum_restricted(a, degmax)?;
    let total = walk_sum_restricted(a, n)?;
    let lhs = restricted.to_f64();
    let rhs = (nf - 1.0) / nf * total.to_f64();
    Ok(CheckReport {
        theorem: String::from("walk-concentration"),
        n,
        delta,
        threshold: Some(raw),
        lhs,
        rhs,
        satisfied: holds(lhs, rhs),
        vacuous: degmax >= n,
    })
}

/// Restricted tree sum: trees whose every degree is at most
/// `⌈1 + 3 ln n / (δ ln ln n)⌉` carry at least `(n−1)/n` of `spt A`.
/// Hypotheses: `n ≥ 2/(1−δ)` and `n ≥ 3`.
pub fn check_tree_concentration(
    a: &SymmetricWeightMatrix,
) -> Result<CheckReport, VerifyError> {
    let n = a.n();
    let delta = a.delta();
    if n < 3 {
        return Err(VerifyError::NotApplicable {
            reason: alloc::format!("ln ln n <= 0 for n = {n}"),
        });
    }
    if (n as f64) * (1.0 - delta) < 2.0 {
        return Err(VerifyError::NotApplicable {
            reason: alloc::format!("hypothesis n >= 2/(1-delta) fails for n = {n}, delta = {delta}"),
        });
    }
    let nf = n as f64;
    let raw = 1.0 + 3.0 * num::ln(nf) / (delta * num::ln(num::ln(nf)));
    let degmax = num::ceil(raw) as usize;
    let restricted = tree_sum_restricted(a, degmax)?;
    let total = tree_sum_restricted(a, n - 1)?;
    let lhs = restricted.to_f64();
    let rhs = (nf - 1.0) / nf * total.to_f64();
    Ok(CheckReport {
        theorem: String::from("tree-concentration"),
        n,
        delta,
        threshold: Some(raw),
        lhs,
        rhs,
        satisfied: holds(lhs, rhs),
        vacuous: degmax >= n - 1,
    })
}

/// Max-coordinate tail of a composition measure against `1/n`, combined
/// with the per-coordinate `1/n²` level. `lhs` is the larger violation
/// ratio's tail, `rhs` its bound; `satisfied` requires both levels.
pub fn check_tail_bound(mu: &CompositionMeasure) -> Result<CheckReport, VerifyError> {
    let report = mu.tail_bound()?;
    Ok(CheckReport {
        theorem: String::from("max-degree-tail"),
        n: mu.n(),
        delta: mu.delta(),
        threshold: Some(report.threshold),
        lhs: report.tail_prob,
        rhs: report.bound,
        satisfied: report.satisfied && report.per_coord_satisfied,
        vacuous: report.vacuous,
    })
}

/// Tail check for the walk measure of a matrix.
pub fn check_walk_tail(a: &WeightMatrix) -> Result<CheckReport, VerifyError> {
    let mu = walk_measure(a)?;
    check_tail_bound(&mu)
}

/// Tail check for the tree measure of a symmetric matrix.
pub fn check_tree_tail(a: &SymmetricWeightMatrix) -> Result<CheckReport, VerifyError> {
    let mu = tree_measure(a)?;
    check_tail_bound(&mu)
}

/// Derivative comparison `f_i(x) ≤ δ⁻¹ f_j(x)` over the supplied
/// nonnegative points. Reports the worst ordered pair: `lhs = f_i`,
/// `rhs = δ⁻¹ f_j`.
pub fn check_derivative_ratio(
    mu: &CompositionMeasure,
    points: &[Vec<f64>],
) -> CheckReport {
    let n = mu.n();
    let inv_delta = 1.0 / mu.delta();
    let mut worst_gap = f64::NEG_INFINITY;
    let mut worst = (0.0, 0.0);
    for x in points {
        let derivs: Vec<f64> = (0..n).map(|i| mu.partial_derivative(i, x)).collect();
        for &fi in &derivs {
            for &fj in &derivs {
                let rhs = inv_delta * fj;
                let gap = fi - rhs;
                if gap > worst_gap {
                    worst_gap = gap;
                    worst = (fi, rhs);
                }
            }
        }
    }
    let (lhs, rhs) = worst;
    CheckReport {
        theorem: String::from("derivative-ratio"),
        n,
        delta: mu.delta(),
        threshold: None,
        lhs,
        rhs,
        satisfied: lhs <= rhs + tol::REL_INEQUALITY * num::abs(rhs),
        vacuous: points.is_empty(),
    }
}

/// Exponential-moment bound `F(t) ≤ ((e^t + (n−1)δ)/(1 + (n−1)δ))^m` on
/// the grid `t ∈ {0, 0.25, …, 3} ∪ {ln ln n}` (the latter when `n ≥ 3`).
/// Reports the worst grid point in `threshold`.
pub fn check_moment_bound(mu: &CompositionMeasure) -> CheckReport {
    let mut grid: Vec<f64> = (0..=12).map(|k| 0.25 * k as f64).collect();
    if mu.n() >= 3 {
        grid.push(num::ln(num::ln(mu.n() as f64)));
    }
    let mut worst_ratio = f64::NEG_INFINITY;
    let mut worst = (0.0, 1.0, 0.0);
    for &t in &grid {
        let (lhs, rhs) = mu.moment_bound(t);
        let ratio = lhs / rhs;
        if ratio > worst_ratio {
            worst_ratio = ratio;
            worst = (lhs, rhs, t);
        }
    }
    let (lhs, rhs, t) = worst;
    CheckReport {
        theorem: String::from("moment-bound"),
        n: mu.n(),
        delta: mu.delta(),
        threshold: Some(t),
        lhs,
        rhs,
        satisfied: lhs <= rhs * (1.0 + tol::REL_INEQUALITY),
        vacuous: false,
    }
}

/// The two-sided permanent comparison: `c(n, δ) · per A ≤ ham A ≤ per A`
/// with the explicit patching factor. Compared in the log domain:
/// `lhs = ln ham A`, `rhs = ln per A + ln c(n, δ)`.
pub fn check_patching_factor(a: &WeightMatrix) -> Result<CheckReport, VerifyError> {
    let n = a.n();
    let delta = a.delta();
    if n < 2 {
        return Err(VerifyError::NotApplicable {
            reason: String::from("factor needs n >= 2"),
        });
    }
    let per = if n <= PERMUTATION_CAP {
        crate::oracles::permanent_naive(a)?
    } else {
        crate::oracles::permanent_ryser(a)?
    };
    let method = if n <= PERMUTATION_CAP {
        HamMethod::Naive
    } else {
        HamMethod::Dp
    };
    let ham = hamiltonian_permanent(a, method)?;
    let upper_ok = ham.ln_abs() <= per.ln_abs() + tol::REL_INEQUALITY;
    let (lhs, rhs, satisfied) = if delta < 1.0 {
        let log_c = theorem12_lower_factor(n, delta);
        let lhs = ham.ln_abs();
        let rhs = per.ln_abs() + log_c;
        (lhs, rhs, lhs >= rhs - tol::REL_INEQUALITY && upper_ok)
    } else {
        // δ = 1 has no perturbation room; only ham ≤ per is claimed
        (ham.ln_abs(), per.ln_abs(), upper_ok)
    };
    Ok(CheckReport {
        theorem: String::from("patching-factor"),
        n,
        delta,
        threshold: None,
        lhs,
        rhs,
        satisfied,
        vacuous: false,
    })
}

/// `ham ≤ per` holds for every matrix; convenience wrapper returning the
/// pair as `LogValue`s for callers that want the raw values.
pub fn ham_per_pair(a: &WeightMatrix) -> Result<(LogValue, LogValue), VerifyError> {
    let per = if a.n() <= PERMUTATION_CAP {
        crate::oracles::permanent_naive(a)?
    } else {
        crate::oracles::permanent_ryser(a)?
    };
    let method = if a.n() <= PERMUTATION_CAP {
        HamMethod::Naive
    } else {
        HamMethod::Dp
    };
    let ham = hamiltonian_permanent(a, method)?;
    Ok((ham, per))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(n: usize, delta: f64, seed: u64) -> WeightMatrix {
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

    fn sample_symmetric(n: usize, delta: f64, seed: u64) -> SymmetricWeightMatrix {
        let base = sample(n, delta, seed);
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
    fn low_cycle_mass_on_random_instances() {
        for n in 2..=7 {
            for (k, &delta) in [0.2, 0.5, 1.0].iter().enumerate() {
                let a = sample(n, delta, (n * 10 + k) as u64);
                let r = check_low_cycle_mass(&a).unwrap();
                assert!(r.satisfied, "{r}");
            }
        }
    }

    #[test]
    fn low_cycle_mass_vacuous_flagging() {
        // cap = 4 + 4 ln n >= n up to n = 10 even at delta = 1
        let a = WeightMatrix::all_ones(5);
        let r = check_low_cycle_mass(&a).unwrap();
        assert!(r.vacuous && r.satisfied);
    }

    #[test]
    fn cycle_length_law_and_expected_cycles() {
        for n in 2..=6 {
            let a = sample(n, 0.4, n as u64);
            let r = check_cycle_length_law(&a).unwrap();
            assert!(r.satisfied, "{r}");
            let r = check_expected_cycles(&a).unwrap();
            assert!(r.satisfied, "{r}");
        }
    }

    #[test]
    fn expected_cycles_bound_explicit_instance() {
        let a = sample(6, 0.4, 99);
        let r = check_expected_cycles(&a).unwrap();
        assert!(r.lhs <= 2.0 + 2.0 * (6.0f64).ln() / (0.4 * 0.4));
    }

    #[test]
    fn walk_concentration_reports_vacuous_at_desk_scale() {
        let a = sample(5, 0.8, 3);
        let r = check_walk_concentration(&a).unwrap();
        assert!(r.satisfied);
        assert!(r.vacuous); // threshold 3 ln 5 / (0.64 ln ln 5) > 5
        assert!(r.threshold.unwrap() > 5.0);
    }

    #[test]
    fn walk_concentration_needs_n3() {
        let a = sample(2, 0.5, 1);
        assert!(matches!(
            check_walk_concentration(&a),
            Err(VerifyError::NotApplicable { .. })
        ));
    }

    #[test]
    fn tree_concentration_hypotheses() {
        let a = sample_symmetric(6, 0.5, 4);
        let r = check_tree_concentration(&a).unwrap();
        assert!(r.satisfied);
        // delta = 0.9 needs n >= 20
        let tight = sample_symmetric(6, 0.9, 4);
        assert!(matches!(
            check_tree_concentration(&tight),
            Err(VerifyError::NotApplicable { .. })
        ));
    }

    #[test]
    fn tails_walks_and_trees() {
        let a = sample(6, 1.0, 8);
        let a = WeightMatrix::new(6, a.entries().to_vec(), 1.0).unwrap();
        let r = check_walk_tail(&a).unwrap();
        assert!(r.satisfied);
        let s = sample_symmetric(7, 0.5, 8);
        let r = check_tree_tail(&s).unwrap();
        assert!(r.satisfied);
    }

    #[test]
    fn derivative_ratio_over_random_points() {
        let a = sample(4, 0.5, 12);
        let mu = walk_measure(&a).unwrap();
        let mut state = 7u64;
        let mut next = || {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            2.0 * ((state >> 11) as f64 / (1u64 << 53) as f64)
        };
        let points: Vec<Vec<f64>> = (0..100)
            .map(|_| (0..4).map(|_| next()).collect())
            .collect();
        let r = check_derivative_ratio(&mu, &points);
        assert!(r.satisfied, "{r}");
    }

    #[test]
    fn moment_bound_over_grid() {
        let a = sample(5, 0.4, 31);
        let mu = walk_measure(&a).unwrap();
        let r = check_moment_bound(&mu);
        assert!(r.satisfied, "{r}");
        let s = sample_symmetric(6, 0.3, 31);
        let mu = tree_measure(&s).unwrap();
        let r = check_moment_bound(&mu);
        assert!(r.satisfied, "{r}");
    }

    #[test]
    fn patching_factor_two_sided() {
        for n in 2..=7 {
            let a = sample(n, 0.5, 100 + n as u64);
            let r = check_patching_factor(&a).unwrap();
            assert!(r.satisfied, "{r}");
        }
        // δ = 1: upper side only
        let a = WeightMatrix::all_ones(5);
        let r = check_patching_factor(&a).unwrap();
        assert!(r.satisfied);
    }

    #[test]
    fn reports_serialize_to_the_documented_shape() {
        let a = WeightMatrix::all_ones(4);
        let r = check_low_cycle_mass(&a).unwrap();
        let json = serde_json::to_string(&r).unwrap();
        for key in [
            "theorem",
            "\"n\"",
            "delta",
            "threshold",
            "lhs",
            "rhs",
            "satisfied",
            "vacuous",
        ] {
            assert!(json.contains(key), "missing {key} in {json}");
        }
        let back: CheckReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r);
    }
}
