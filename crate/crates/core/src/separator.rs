//! The Hamiltonicity separation procedure.
//!
//! Given a loopless digraph `G` and constants `0 < ε, γ < 1`, distinguish
//!
//! * (a) `G` has at least `εⁿ (n−1)!` Hamiltonian cycles, from
//! * (b) every Hamiltonian cycle of the complete graph uses at least `γn`
//!   non-edges of `G`,
//!
//! by perturbing the adjacency matrix to `B` (`b_ij = 1` on edges, `δ`
//! otherwise, `δ < ε^{1/γ}`) and comparing certified bounds on `ham B`
//! against the two thresholds `εⁿ (n−1)!` and `δ^{γn} (n−1)!`. A verdict is
//! only emitted when the certified bracket clears a threshold; anything
//! else is `Inconclusive`, never a false certificate.

use alloc::format;
use alloc::string::String;
use core::f64::consts::LN_2;
use core::fmt;

use serde::{Deserialize, Serialize};

use crate::logdomain::{ln_binomial_sum, ln_factorial, LogValue};
use crate::matrix::{perturb, DirectedGraph, MatrixError};
use crate::num;
use crate::oracles::{ham_count_adjacency, ham_dp_entries, permanent_ryser, HAM_DP_CAP, RYSER_CAP};
use crate::scalable::{sinkhorn_scale, ScaleError};
use crate::scalable::bracket_from_scaling;
use crate::tol;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum SeparatorError {
    /// ε or γ outside (0, 1), or δ outside (0, ε^{1/γ}).
    BadParameter { name: &'static str, value: f64 },
    /// Exact verdict requested beyond the DP cap.
    TooLarge { n: usize, cap: usize },
    Matrix(MatrixError),
}

impl fmt::Display for SeparatorError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeparatorError::BadParameter { name, value } => {
                write!(f, "parameter {name} = {value} out of range")
            }
            SeparatorError::TooLarge { n, cap } => {
                write!(f, "exact verdict needs n <= {cap}, got {n}")
            }
            SeparatorError::Matrix(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for SeparatorError {}

impl From<MatrixError> for SeparatorError {
    fn from(e: MatrixError) -> Self {
        SeparatorError::Matrix(e)
    }
}

/// A separation instance: the graph, the two constants, and the chosen
/// perturbation `δ` with `0 < δ < ε^{1/γ}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SeparationInstance {
    pub graph: DirectedGraph,
    pub epsilon: f64,
    pub gamma: f64,
    pub delta: f64,
}

impl SeparationInstance {
    /// Default perturbation `δ = ε^{1/γ} / 2`: half the supremum the
    /// threshold inequality allows, which keeps the certified factor as
    /// large as possible while preserving a strict margin.
    pub fn new(
        graph: DirectedGraph,
        epsilon: f64,
        gamma: f64,
    ) -> Result<Self, SeparatorError> {
        let delta = 0.5 * num::exp(num::ln(epsilon) / gamma);
        Self::with_delta(graph, epsilon, gamma, delta)
    }

    pub fn with_delta(
        graph: DirectedGraph,
        epsilon: f64,
        gamma: f64,
        delta: f64,
    ) -> Result<Self, SeparatorError> {
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(SeparatorError::BadParameter {
                name: "epsilon",
                value: epsilon,
            });
        }
        if !(gamma > 0.0 && gamma < 1.0) {
            return Err(SeparatorError::BadParameter {
                name: "gamma",
                value: gamma,
            });
        }
        let sup = num::exp(num::ln(epsilon) / gamma);
        if !(delta > 0.0 && delta < sup) {
            return Err(SeparatorError::BadParameter {
                name: "delta",
                value: delta,
            });
        }
        Ok(SeparationInstance {
            graph,
            epsilon,
            gamma,
            delta,
        })
    }
}

/// Log-domain bounds justifying a verdict. All fields are finite.
///
/// `log_ham_lower` is the bound assembled from the patching argument:
/// `log_per_lower + patch_loss − patch_multiplicity − ln 2`. When the DP
/// oracle was feasible, `log_ham_exact` carries the exact value and the
/// verdict uses the tighter of the two sides.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertifiedBounds {
    /// Certified bracket on `ln per B` (exact when Ryser was feasible).
    pub log_per_lower: f64,
    pub log_per_upper: f64,
    /// `log_per_lower + patch_loss − patch_multiplicity − ln 2`.
    pub log_ham_lower: f64,
    /// `ln ham B` from the DP oracle, when `n` is within its cap.
    pub log_ham_exact: Option<f64>,
    /// `ln (εⁿ (n−1)!)`, the "many Hamiltonian cycles" threshold.
    pub log_threshold_many: f64,
    /// `ln (δ^{γn} (n−1)!)`, the "far from Hamiltonian" threshold.
    pub log_threshold_far: f64,
    /// `4 + 4δ⁻² ln n`, the cycle-count cap of the patching argument.
    pub cycle_cap: f64,
    /// `cycle_cap · ln δ`: the log of the weight lost patching one
    /// permutation.
    pub patch_loss: f64,
    /// `ln Σ_{r ≤ ⌊cycle_cap⌋} C(n, r)`: the log of the patching
    /// multiplicity.
    pub patch_multiplicity: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    ManyHamiltonian,
    FarFromHamiltonian,
    Inconclusive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VerdictMethod {
    ExactHam,
    CertifiedBracket,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeparationVerdict {
    pub verdict: Verdict,
    pub bounds: CertifiedBounds,
    pub method: VerdictMethod,
    /// Present when the bracket path degraded (e.g. scaling did not
    /// converge and the trivial bracket was used).
    pub diagnostic: Option<String>,
}

/// `ln c(n, δ)` for the explicit factor with `ham A ≥ c(n, δ) · per A` on
/// every δ-bounded matrix:
///
/// `ln c = (4 + 4δ⁻² ln n) ln δ − ln Σ_{r ≤ ⌊4+4δ⁻² ln n⌋} C(n, r) − ln 2`.
///
/// Half the permanent sits on permutations with at most `4 + 4δ⁻² ln n`
/// cycles; patching such a permutation into a Hamiltonian cycle costs at
/// most `δ^{cap}` in weight and each cycle is hit at most `Σ C(n, r)`
/// times.
pub fn theorem12_lower_factor(n: usize, delta: f64) -> f64 {
    assert!(n >= 2, "factor needs n >= 2");
    assert!(delta > 0.0 && delta < 1.0, "factor needs 0 < delta < 1");
    let cap = cycle_cap(n, delta);
    let rmax = num::floor(cap) as usize;
    cap * num::ln(delta) - ln_binomial_sum(n, rmax) - LN_2
}

/// `4 + 4δ⁻² ln n`.
pub fn cycle_cap(n: usize, delta: f64) -> f64 {
    4.0 + 4.0 * num::ln(n as f64) / (delta * delta)
}

struct ThresholdDecision {
    verdict: Verdict,
}

/// Shared decision rule on a certified bracket `[lo, up]` for `ln ham B`.
///
/// * the far threshold is cleared from below (`lo > far`): alternative (b)
///   is impossible, so under the promise the graph is `ManyHamiltonian`;
/// * the many threshold is cleared from above (`up < many`): alternative
///   (a) is impossible, so `FarFromHamiltonian`;
/// * both cleared: the promise itself is violated (the instance satisfies
///   neither alternative), reported as `Inconclusive`;
/// * neither: `Inconclusive`.
///
/// Comparisons use a strict margin; ties are `Inconclusive`.
fn decide(lo: f64, up: f64, far: f64, many: f64) -> ThresholdDecision {
    let not_b = lo > far + tol::SEPARATOR_LOG_MARGIN;
    let not_a = up < many - tol::SEPARATOR_LOG_MARGIN;
    let verdict = match (not_b, not_a) {
        (true, false) => Verdict::ManyHamiltonian,
        (false, true) => Verdict::FarFromHamiltonian,
        _ => Verdict::Inconclusive,
    };
    ThresholdDecision { verdict }
}

fn assemble(
    inst: &SeparationInstance,
    log_per_lower: f64,
    log_per_upper: f64,
    log_ham_exact: Option<f64>,
) -> (CertifiedBounds, ThresholdDecision) {
    let n = inst.graph.n();
    let nf = n as f64;
    let cap = cycle_cap(n, inst.delta);
    let patch_loss = cap * num::ln(inst.delta);
    let patch_multiplicity = ln_binomial_sum(n, num::floor(cap) as usize);
    let log_ham_lower = log_per_lower + patch_loss - patch_multiplicity - LN_2;
    let ln_fact = ln_factorial(n - 1);
    let log_threshold_many = nf * num::ln(inst.epsilon) + ln_fact;
    let log_threshold_far = inst.gamma * nf * num::ln(inst.delta) + ln_fact;
    let lo = match log_ham_exact {
        Some(e) => log_ham_lower.max(e),
        None => log_ham_lower,
    };
    let up = match log_ham_exact {
        Some(e) => log_per_upper.min(e),
        None => log_per_upper,
    };
    let decision = decide(lo, up, log_threshold_far, log_threshold_many);
    (
        CertifiedBounds {
            log_per_lower,
            log_per_upper,
            log_ham_lower,
            log_ham_exact,
            log_threshold_many,
            log_threshold_far,
            cycle_cap: cap,
            patch_loss,
            patch_multiplicity,
        },
        decision,
    )
}

/// Trivial a-priori bracket on `ln per B` for a δ-bounded matrix:
/// `n! δⁿ ≤ per B ≤ n!`.
fn trivial_per_bracket(n: usize, delta: f64) -> (f64, f64) {
    let ln_fact = ln_factorial(n);
    (ln_fact + n as f64 * num::ln(delta), ln_fact)
}

/// The full decision procedure.
///
/// Builds `B`, obtains a certified `per B` bracket (exact Ryser when the
/// cap allows, Sinkhorn bracket otherwise), converts it to a `ham B`
/// bracket through the patching factor and `ham ≤ per`, sharpens it with
/// the exact DP value when `n` is within the DP cap, and compares against
/// the two thresholds. Deterministic; polynomial time on the bracket path.
pub fn separate(inst: &SeparationInstance) -> Result<SeparationVerdict, SeparatorError> {
    let n = inst.graph.n();
    let b = perturb(&inst.graph, inst.delta)?;
    let mut diagnostic = None;
    let (log_per_lower, log_per_upper) = if n <= RYSER_CAP {
        let exact = permanent_ryser(&b).expect("within cap").ln_abs();
        (exact, exact)
    } else {
        match sinkhorn_scale(&b, tol::SINKHORN_TOL, tol::SINKHORN_MAX_ITER) {
            Ok(scaling) => {
                let report = bracket_from_scaling(n, &scaling);
                (report.lower.ln_abs(), report.upper.ln_abs())
            }
            Err(ScaleError::NotConverged {
                residual,
                iterations,
            }) => {
                diagnostic = Some(format!(
                    "scaling did not converge (residual {residual} after {iterations} \
                     iterations); fell back to the trivial bracket"
                ));
                trivial_per_bracket(n, inst.delta)
            }
        }
    };
    let log_ham_exact = if n <= HAM_DP_CAP {
        Some(num::ln(ham_dp_entries(b.entries(), n)))
    } else {
        None
    };
    let method = if log_ham_exact.is_some() {
        VerdictMethod::ExactHam
    } else {
        VerdictMethod::CertifiedBracket
    };
    let (bounds, decision) = assemble(inst, log_per_lower, log_per_upper, log_ham_exact);
    Ok(SeparationVerdict {
        verdict: decision.verdict,
        bounds,
        method,
        diagnostic,
    })
}

/// Ground truth for [`separate`]: the exact DP value of `ham B` drives the
/// same decision rule, and `ham A` on the 0/1 adjacency matrix tests
/// alternative (a) directly. Requires `n ≤ 20`.
pub fn ham_exact_verdict(
    inst: &SeparationInstance,
) -> Result<SeparationVerdict, SeparatorError> {
    let n = inst.graph.n();
    if n > HAM_DP_CAP {
        return Err(SeparatorError::TooLarge { n, cap: HAM_DP_CAP });
    }
    let b = perturb(&inst.graph, inst.delta)?;
    let log_ham = num::ln(ham_dp_entries(b.entries(), n));
    let (log_per_lower, log_per_upper) = if n <= RYSER_CAP {
        let exact = permanent_ryser(&b).expect("within cap").ln_abs();
        (exact, exact)
    } else {
        trivial_per_bracket(n, inst.delta)
    };
    let (bounds, decision) = assemble(inst, log_per_lower, log_per_upper, Some(log_ham));
    Ok(SeparationVerdict {
        verdict: decision.verdict,
        bounds,
        method: VerdictMethod::ExactHam,
        diagnostic: None,
    })
}

/// Does the graph itself satisfy alternative (a), `ham A ≥ εⁿ (n−1)!`?
/// Exact DP count on the 0/1 adjacency matrix; requires `n ≤ 20`.
pub fn alternative_a_holds(graph: &DirectedGraph, epsilon: f64) -> Result<bool, SeparatorError> {
    let n = graph.n();
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(SeparatorError::BadParameter {
            name: "epsilon",
            value: epsilon,
        });
    }
    let count = ham_count_adjacency(&graph.adjacency(), n)
        .map_err(|_| SeparatorError::TooLarge { n, cap: HAM_DP_CAP })?;
    if count == 0.0 {
        return Ok(false);
    }
    let threshold = n as f64 * num::ln(epsilon) + ln_factorial(n - 1);
    Ok(num::ln(count) >= threshold)
}

/// Count of Hamiltonian cycles in the graph (exact while within f64
/// integer range); exposed for tests and reports.
pub fn hamiltonian_cycle_count(graph: &DirectedGraph) -> Result<LogValue, SeparatorError> {
    let n = graph.n();
    let count = ham_count_adjacency(&graph.adjacency(), n)
        .map_err(|_| SeparatorError::TooLarge { n, cap: HAM_DP_CAP })?;
    Ok(LogValue::from_f64(count))
}

/// All separation-relevant quantities for rendering: the thresholds as a
/// pair, in the order (many, far).
pub fn thresholds(bounds: &CertifiedBounds) -> (f64, f64) {
    (bounds.log_threshold_many, bounds.log_threshold_far)
}

/// The vertices of the verdict sandwich, from below and above, for
/// checking `log_ham_lower ≤ ln ham B ≤ log_per_upper`.
pub fn sandwich(bounds: &CertifiedBounds) -> (f64, f64) {
    (bounds.log_ham_lower, bounds.log_per_upper)
}
