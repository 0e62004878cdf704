//! `densepf`: partition functions of δ-bounded weighted complete graphs.
//!
//! Subcommands: `per`, `ham`, `trace`, `spt` compute partition functions
//! of a CSV matrix; `separate` runs the Hamiltonicity separation procedure
//! on a graph file; `verify` runs the exact inequality suites on seeded
//! random instances; `gen` writes reproducible random instances.
//!
//! Exit codes: 0 success, 1 a verified inequality was violated, 2 usage or
//! file-format errors.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Result};
use clap::{Parser, Subcommand, ValueEnum};

use densepf_cli::caps::Caps;
use densepf_cli::formats;
use densepf_cli::gen;
use densepf_cli::report::{
    emit, native_echo, Output, PerReport, SeparateReport, ValueReport, VerifyReport,
};
use densepf_core::oracles::{hamiltonian_permanent, permanent_ryser, HamMethod};
use densepf_core::scalable::{permanent_bracket, spanning_tree_pf, trace_power, PfMethod, ScaleError};
use densepf_core::separator::{separate, SeparationInstance};
use densepf_core::verify::{
    check_cycle_length_law, check_derivative_ratio, check_expected_cycles,
    check_low_cycle_mass, check_moment_bound, check_patching_factor,
    check_tree_concentration, check_tree_tail, check_walk_concentration, check_walk_tail,
    CheckReport, VerifyError,
};
use densepf_core::concentration::{tree_measure, walk_measure};
use densepf_core::tol;
use rand::Rng;

#[derive(Parser)]
#[command(
    name = "densepf",
    version,
    about = "Partition functions of delta-bounded weighted complete graphs"
)]
struct Cli {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value = "text")]
    output: Output,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
#[value(rename_all = "lowercase")]
enum HamMethodArg {
    Naive,
    Dp,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
#[value(rename_all = "lowercase")]
enum VerifyTarget {
    /// Two-sided permanent comparison via the patching factor.
    Thm12,
    /// Low-cycle permutations carry half the permanent.
    Thm13,
    /// Degree-restricted walks carry (n-1)/n of the trace power.
    Thm15,
    /// Degree-restricted trees carry (n-1)/n of the tree sum.
    Thm17,
    /// Max-degree tail bounds for walk and tree measures.
    Thm18,
    /// Cycle-length law P(l_i = m) <= 1/(delta^2 (n-m)).
    Lemma21,
    /// Expected cycle count E c <= 2 + 2 delta^-2 ln n.
    Lemma22,
    /// Derivative comparison f_i <= delta^-1 f_j on random points.
    Lemma31,
    /// Exponential-moment bound on the t-grid.
    Lemma32,
}

impl VerifyTarget {
    fn name(self) -> &'static str {
        match self {
            VerifyTarget::Thm12 => "thm12",
            VerifyTarget::Thm13 => "thm13",
            VerifyTarget::Thm15 => "thm15",
            VerifyTarget::Thm17 => "thm17",
            VerifyTarget::Thm18 => "thm18",
            VerifyTarget::Lemma21 => "lemma21",
            VerifyTarget::Lemma22 => "lemma22",
            VerifyTarget::Lemma31 => "lemma31",
            VerifyTarget::Lemma32 => "lemma32",
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Permanent: certified scaling bracket plus the exact value when the
    /// size allows.
    Per {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        delta: f64,
        /// Sinkhorn tolerance for the bracket.
        #[arg(long, default_value_t = tol::SINKHORN_TOL)]
        tol: f64,
    },
    /// Hamiltonian permanent (exact enumeration or bitmask DP).
    Ham {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        delta: f64,
        #[arg(long, value_enum, default_value = "dp")]
        method: HamMethodArg,
    },
    /// trace A^k, the closed-walk partition function (k defaults to n).
    Trace {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        delta: f64,
        #[arg(long)]
        k: Option<usize>,
    },
    /// Spanning-tree partition function (weighted matrix-tree theorem).
    Spt {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        delta: f64,
    },
    /// Separate graphs with many Hamiltonian cycles from graphs far from
    /// Hamiltonian.
    Separate {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        epsilon: f64,
        #[arg(long)]
        gamma: f64,
        /// Perturbation (default: half of epsilon^(1/gamma)).
        #[arg(long)]
        delta: Option<f64>,
    },
    /// Run an exact verification suite on seeded random instances.
    Verify {
        #[arg(value_enum)]
        target: VerifyTarget,
        /// Single size to test (default: the target's full desk-scale
        /// range).
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 0.5)]
        delta: f64,
        /// Random instances per size.
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, default_value_t = gen::DEFAULT_SEED)]
        seed: u64,
    },
    /// Write reproducible random instances.
    Gen {
        #[command(subcommand)]
        what: GenCmd,
    },
}

#[derive(Subcommand)]
enum GenCmd {
    /// Random delta-bounded matrix, entries uniform on [delta, 1].
    Matrix {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        delta: f64,
        #[arg(long, default_value_t = gen::DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Directed Erdős–Rényi graph with edge probability p.
    Graph {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.5)]
        edge_prob: f64,
        #[arg(long, default_value_t = gen::DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    let caps = Caps::from_env();
    let output = cli.output;
    match cli.command {
        Cmd::Per { matrix, delta, tol } => {
            let a = formats::read_matrix(&matrix, delta)?;
            let n = a.n();
            let exact = if n <= caps.ryser {
                Some(densepf_core::scalable::PartitionReport::exact(
                    permanent_ryser(&a).map_err(|e| anyhow!("{e}"))?,
                    PfMethod::ExactOracle,
                ))
            } else {
                None
            };
            let (bracket, diagnostic) = match permanent_bracket(&a, tol) {
                Ok(b) => (Some(b), None),
                Err(ScaleError::NotConverged {
                    residual,
                    iterations,
                }) => (
                    None,
                    Some(format!(
                        "scaling did not converge: residual {residual} after {iterations} iterations"
                    )),
                ),
            };
            let log_ratio = match (&exact, &bracket) {
                (Some(e), Some(b)) => Some(b.upper.ln_abs() - e.value.ln_abs()),
                _ => None,
            };
            let report = PerReport {
                command: "per".into(),
                n,
                delta,
                exact_native: exact.as_ref().and_then(|e| native_echo(e.value, n)),
                exact,
                bracket,
                log_ratio_upper_over_exact: log_ratio,
                diagnostic,
            };
            let text = report.text();
            emit(output, &report, text);
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Ham {
            matrix,
            delta,
            method,
        } => {
            let a = formats::read_matrix(&matrix, delta)?;
            let n = a.n();
            let (method, cap) = match method {
                HamMethodArg::Naive => (HamMethod::Naive, caps.s_n),
                HamMethodArg::Dp => (HamMethod::Dp, caps.ham_dp),
            };
            if n > cap {
                bail!("n = {n} exceeds the enumeration cap {cap} for this method");
            }
            let value = hamiltonian_permanent(&a, method).map_err(|e| anyhow!("{e}"))?;
            let report = ValueReport {
                command: "ham".into(),
                n,
                delta,
                value,
                native: native_echo(value, n),
                method: "exact-oracle".into(),
            };
            let text = report.text();
            emit(output, &report, text);
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Trace { matrix, delta, k } => {
            let a = formats::read_matrix(&matrix, delta)?;
            let n = a.n();
            let k = k.unwrap_or(n);
            if k == 0 {
                bail!("k must be at least 1");
            }
            let value = trace_power(&a, k);
            let report = ValueReport {
                command: "trace".into(),
                n,
                delta,
                value,
                native: native_echo(value, n.max(k / 2)),
                method: "trace-power".into(),
            };
            let text = report.text();
            emit(output, &report, text);
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Spt { matrix, delta } => {
            let a = formats::read_symmetric_matrix(&matrix, delta)?;
            if a.n() < 2 {
                bail!("spanning trees need at least two vertices");
            }
            let value = spanning_tree_pf(&a);
            let report = ValueReport {
                command: "spt".into(),
                n: a.n(),
                delta,
                value,
                native: native_echo(value, a.n()),
                method: "matrix-tree".into(),
            };
            let text = report.text();
            emit(output, &report, text);
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Separate {
            graph,
            epsilon,
            gamma,
            delta,
        } => {
            let g = formats::read_graph(&graph)?;
            let n = g.n();
            let inst = match delta {
                Some(d) => SeparationInstance::with_delta(g, epsilon, gamma, d),
                None => SeparationInstance::new(g, epsilon, gamma),
            }
            .map_err(|e| anyhow!("{e}"))?;
            let delta_used = inst.delta;
            let verdict = separate(&inst).map_err(|e| anyhow!("{e}"))?;
            let report = SeparateReport::from_verdict(n, delta_used, verdict);
            let text = report.text();
            emit(output, &report, text);
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Verify {
            target,
            n,
            delta,
            trials,
            seed,
        } => {
            if !(delta > 0.0 && delta <= 1.0) {
                bail!("delta must lie in (0, 1]");
            }
            let report = run_verify(target, n, delta, trials, seed, &caps)?;
            let text = report.text();
            emit(output, &report, text);
            if report.all_satisfied() {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(1))
            }
        }
        Cmd::Gen { what } => {
            match what {
                GenCmd::Matrix { n, delta, seed, out } => {
                    if !(delta > 0.0 && delta <= 1.0) {
                        bail!("delta must lie in (0, 1]");
                    }
                    if n == 0 {
                        bail!("n must be at least 1");
                    }
                    let m = gen::matrix(n, delta, seed);
                    formats::write_matrix(&out, n, m.entries())?;
                }
                GenCmd::Graph {
                    n,
                    edge_prob,
                    seed,
                    out,
                } => {
                    if !(0.0..=1.0).contains(&edge_prob) {
                        bail!("edge probability must lie in [0, 1]");
                    }
                    if n == 0 {
                        bail!("n must be at least 1");
                    }
                    let g = gen::graph(n, edge_prob, seed);
                    formats::write_graph(&out, &g)?;
                }
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn sizes(requested: Option<usize>, default_lo: usize, default_hi: usize, cap: usize) -> Result<Vec<usize>> {
    match requested {
        Some(n) => {
            if n > cap {
                bail!("n = {n} exceeds the enumeration cap {cap}");
            }
            Ok(vec![n])
        }
        None => Ok((default_lo..=default_hi.min(cap)).collect()),
    }
}

fn run_verify(
    target: VerifyTarget,
    n: Option<usize>,
    delta: f64,
    trials: usize,
    seed: u64,
    caps: &Caps,
) -> Result<VerifyReport> {
    let mut rng = gen::rng(seed);
    let mut reports: Vec<CheckReport> = Vec::new();
    let mut skipped: Vec<String> = Vec::new();
    let push = |result: Result<CheckReport, VerifyError>,
                    reports: &mut Vec<CheckReport>,
                    skipped: &mut Vec<String>,
                    n: usize|
     -> Result<()> {
        match result {
            Ok(r) => reports.push(r),
            Err(VerifyError::NotApplicable { reason }) => {
                skipped.push(format!("n={n}: {reason}"));
            }
            Err(VerifyError::Measure(
                densepf_core::concentration::MeasureError::HypothesisViolated { m, delta_n },
            )) => {
                skipped.push(format!("n={n}: hypothesis m >= delta*n fails ({m} < {delta_n})"));
            }
            Err(e) => return Err(anyhow!("{e}")),
        }
        Ok(())
    };
    match target {
        VerifyTarget::Thm13 => {
            for n in sizes(n, 2, 8, caps.s_n)? {
                for _ in 0..trials {
                    let a = gen::matrix_with(&mut rng, n, delta);
                    push(check_low_cycle_mass(&a), &mut reports, &mut skipped, n)?;
                }
            }
        }
        VerifyTarget::Thm15 => {
            for n in sizes(n, 3, 7, caps.walks)? {
                for _ in 0..trials {
                    let a = gen::matrix_with(&mut rng, n, delta);
                    push(check_walk_concentration(&a), &mut reports, &mut skipped, n)?;
                }
            }
        }
        VerifyTarget::Thm17 => {
            for n in sizes(n, 3, 9, caps.trees)? {
                for _ in 0..trials {
                    let a = gen::symmetric_matrix_with(&mut rng, n, delta);
                    push(check_tree_concentration(&a), &mut reports, &mut skipped, n)?;
                }
            }
        }
        VerifyTarget::Thm18 => {
            for n in sizes(n, 3, 7, caps.walks)? {
                for _ in 0..trials {
                    let a = gen::matrix_with(&mut rng, n, delta);
                    push(check_walk_tail(&a), &mut reports, &mut skipped, n)?;
                }
            }
            for n in sizes(n, 3, 9, caps.trees)? {
                for _ in 0..trials {
                    let a = gen::symmetric_matrix_with(&mut rng, n, delta);
                    push(check_tree_tail(&a), &mut reports, &mut skipped, n)?;
                }
            }
        }
        VerifyTarget::Lemma21 => {
            for n in sizes(n, 2, 8, caps.s_n)? {
                for _ in 0..trials {
                    let a = gen::matrix_with(&mut rng, n, delta);
                    push(check_cycle_length_law(&a), &mut reports, &mut skipped, n)?;
                }
            }
        }
        VerifyTarget::Lemma22 => {
            for n in sizes(n, 2, 8, caps.s_n)? {
                for _ in 0..trials {
                    let a = gen::matrix_with(&mut rng, n, delta);
                    push(check_expected_cycles(&a), &mut reports, &mut skipped, n)?;
                }
            }
        }
        VerifyTarget::Lemma31 => {
            for n in sizes(n, 3, 6, caps.walks)? {
                for _ in 0..trials {
                    let a = gen::matrix_with(&mut rng, n, delta);
                    let mu = walk_measure(&a).map_err(|e| anyhow!("{e}"))?;
                    let points: Vec<Vec<f64>> = (0..100)
                        .map(|_| (0..n).map(|_| rng.random_range(0.0..2.0)).collect())
                        .collect();
                    reports.push(check_derivative_ratio(&mu, &points));
                }
            }
        }
        VerifyTarget::Lemma32 => {
            for n in sizes(n, 3, 7, caps.walks)? {
                for _ in 0..trials {
                    let a = gen::matrix_with(&mut rng, n, delta);
                    let mu = walk_measure(&a).map_err(|e| anyhow!("{e}"))?;
                    reports.push(check_moment_bound(&mu));
                }
            }
            for n in sizes(n, 3, 8, caps.trees)? {
                for _ in 0..trials {
                    let a = gen::symmetric_matrix_with(&mut rng, n, delta);
                    let mu = tree_measure(&a).map_err(|e| anyhow!("{e}"))?;
                    reports.push(check_moment_bound(&mu));
                }
            }
        }
        VerifyTarget::Thm12 => {
            for n in sizes(n, 2, 9, caps.s_n.max(2))? {
                for _ in 0..trials {
                    let a = gen::matrix_with(&mut rng, n, delta);
                    push(check_patching_factor(&a), &mut reports, &mut skipped, n)?;
                }
            }
        }
    }
    Ok(VerifyReport::new(target.name(), seed, reports, skipped))
}
