//! Typed reports and their text/JSON rendering. JSON uses fixed field
//! order (struct declaration order), so identical runs emit identical
//! bytes and every report parses back into the same type.

use serde::{Deserialize, Serialize};

use densepf_core::logdomain::LogValue;
use densepf_core::scalable::PartitionReport;
use densepf_core::separator::{CertifiedBounds, SeparationVerdict, Verdict, VerdictMethod};
use densepf_core::verify::CheckReport;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Output {
    Text,
    Json,
}

/// Native-float echo of a log-domain value, reported alongside the log
/// form while the magnitude is still representable (n ≤ 20 keeps `n!`
/// within native range).
pub fn native_echo(v: LogValue, n: usize) -> Option<f64> {
    if n <= 20 {
        let x = v.to_f64();
        x.is_finite().then_some(x)
    } else {
        None
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ValueReport {
    pub command: String,
    pub n: usize,
    pub delta: f64,
    pub value: LogValue,
    pub native: Option<f64>,
    pub method: String,
}

impl ValueReport {
    pub fn text(&self) -> String {
        let mut s = format!(
            "{}: n={} delta={}\n  log value: {:.12}\n",
            self.command,
            self.n,
            self.delta,
            self.value.ln_abs()
        );
        if let Some(v) = self.native {
            s.push_str(&format!("  value: {v}\n"));
        }
        s.push_str(&format!("  method: {}\n", self.method));
        s
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PerReport {
    pub command: String,
    pub n: usize,
    pub delta: f64,
    /// Exact inclusion–exclusion value, when the size allows it.
    pub exact: Option<PartitionReport>,
    pub exact_native: Option<f64>,
    /// Scaling bracket (absent only if scaling failed to converge).
    pub bracket: Option<PartitionReport>,
    /// `ln upper − ln exact`, the measured one-sided bracket ratio.
    pub log_ratio_upper_over_exact: Option<f64>,
    pub diagnostic: Option<String>,
}

impl PerReport {
    pub fn text(&self) -> String {
        let mut s = format!("per: n={} delta={}\n", self.n, self.delta);
        if let Some(exact) = &self.exact {
            s.push_str(&format!("  exact (ryser): log {:.12}\n", exact.value.ln_abs()));
            if let Some(v) = self.exact_native {
                s.push_str(&format!("  exact (ryser): {v}\n"));
            }
        }
        if let Some(b) = &self.bracket {
            s.push_str(&format!(
                "  bracket: log [{:.6}, {:.6}]  iterations={}\n",
                b.lower.ln_abs(),
                b.upper.ln_abs(),
                b.iterations.unwrap_or(0)
            ));
        }
        if let Some(r) = self.log_ratio_upper_over_exact {
            s.push_str(&format!("  log ratio upper/exact: {r:.6}\n"));
        }
        if let Some(d) = &self.diagnostic {
            s.push_str(&format!("  note: {d}\n"));
        }
        s
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Thresholds {
    pub many: f64,
    pub far: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SeparateReport {
    pub command: String,
    pub n: usize,
    pub verdict: Verdict,
    pub log_bounds: CertifiedBounds,
    pub thresholds: Thresholds,
    pub delta_used: f64,
    pub method: VerdictMethod,
    pub diagnostic: Option<String>,
}

impl SeparateReport {
    pub fn from_verdict(n: usize, delta: f64, v: SeparationVerdict) -> Self {
        let thresholds = Thresholds {
            many: v.bounds.log_threshold_many,
            far: v.bounds.log_threshold_far,
        };
        SeparateReport {
            command: "separate".into(),
            n,
            verdict: v.verdict,
            log_bounds: v.bounds,
            thresholds,
            delta_used: delta,
            method: v.method,
            diagnostic: v.diagnostic,
        }
    }

    pub fn text(&self) -> String {
        let verdict = match self.verdict {
            Verdict::ManyHamiltonian => "ManyHamiltonian",
            Verdict::FarFromHamiltonian => "FarFromHamiltonian",
            Verdict::Inconclusive => "Inconclusive",
        };
        let mut s = format!("separate: n={} delta={}\n  verdict: {verdict}\n", self.n, self.delta_used);
        s.push_str(&format!(
            "  log ham bracket: [{:.6}, {:.6}]{}\n",
            match self.log_bounds.log_ham_exact {
                Some(e) => self.log_bounds.log_ham_lower.max(e),
                None => self.log_bounds.log_ham_lower,
            },
            match self.log_bounds.log_ham_exact {
                Some(e) => self.log_bounds.log_per_upper.min(e),
                None => self.log_bounds.log_per_upper,
            },
            match self.log_bounds.log_ham_exact {
                Some(_) => " (exact)",
                None => "",
            }
        ));
        s.push_str(&format!(
            "  thresholds: many={:.6} far={:.6}\n",
            self.thresholds.many, self.thresholds.far
        ));
        s.push_str(&format!(
            "  per bracket: [{:.6}, {:.6}]\n",
            self.log_bounds.log_per_lower, self.log_bounds.log_per_upper
        ));
        if let Some(d) = &self.diagnostic {
            s.push_str(&format!("  note: {d}\n"));
        }
        s
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerifyReport {
    pub command: String,
    pub target: String,
    pub seed: u64,
    pub reports: Vec<CheckReport>,
    /// Instances excluded by a theorem hypothesis, with the reason.
    pub skipped: Vec<String>,
    pub satisfied: usize,
    pub total: usize,
}

impl VerifyReport {
    pub fn new(target: &str, seed: u64, reports: Vec<CheckReport>, skipped: Vec<String>) -> Self {
        let satisfied = reports.iter().filter(|r| r.satisfied).count();
        let total = reports.len();
        VerifyReport {
            command: "verify".into(),
            target: target.into(),
            seed,
            reports,
            skipped,
            satisfied,
            total,
        }
    }

    pub fn all_satisfied(&self) -> bool {
        self.satisfied == self.total
    }

    pub fn text(&self) -> String {
        let mut s = String::new();
        for r in &self.reports {
            s.push_str(&format!("{r}\n"));
        }
        for skip in &self.skipped {
            s.push_str(&format!("skipped: {skip}\n"));
        }
        s.push_str(&format!(
            "{}: {}/{} satisfied\n",
            self.target, self.satisfied, self.total
        ));
        s
    }
}

pub fn emit<T: Serialize>(output: Output, report: &T, text: String) {
    match output {
        Output::Text => print!("{text}"),
        Output::Json => {
            println!("{}", serde_json::to_string(report).expect("serializable report"))
        }
    }
}
