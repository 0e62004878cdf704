//! Float helpers routed through `libm` so the crate builds without `std`,
//! plus a compensated accumulator for large enumerated sums.

#[inline(always)]
pub(crate) fn ln(x: f64) -> f64 {
    libm::log(x)
}

#[inline(always)]
pub(crate) fn exp(x: f64) -> f64 {
    libm::exp(x)
}

#[inline(always)]
pub(crate) fn ln_1p(x: f64) -> f64 {
    libm::log1p(x)
}

#[inline(always)]
pub(crate) fn exp_m1(x: f64) -> f64 {
    libm::expm1(x)
}

#[inline(always)]
pub(crate) fn floor(x: f64) -> f64 {
    libm::floor(x)
}

#[inline(always)]
pub(crate) fn ceil(x: f64) -> f64 {
    libm::ceil(x)
}

#[inline(always)]
pub(crate) fn abs(x: f64) -> f64 {
    libm::fabs(x)
}

#[inline(always)]
pub(crate) fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

/// `x^k` by repeated multiplication; exponents here are composition parts,
/// so `k` stays small.
#[inline]
pub(crate) fn powu(x: f64, k: usize) -> f64 {
    let mut acc = 1.0;
    for _ in 0..k {
        acc *= x;
    }
    acc
}

/// Neumaier's compensated summation.
///
/// Ryser's formula cancels terms up to `n^n` against a result of order `n!`;
/// plain accumulation would eat into the 1e-9 oracle-equivalence tolerance
/// at `n = 10`. The positive enumerated sums also run to millions of terms.
#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct NeumaierSum {
    sum: f64,
    compensation: f64,
}

impl NeumaierSum {
    pub(crate) fn new() -> Self {
        Self::default()
    }

    #[inline(always)]
    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if abs(self.sum) >= abs(x) {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline(always)]
    pub(crate) fn total(&self) -> f64 {
        self.sum + self.compensation
    }
}
