//! Sign + log-magnitude scalars for quantities at `n!` scale.
//!
//! Permanents, restricted permutation sums and the separation thresholds
//! reach magnitudes like `(n-1)!` and `ε^n (n-1)!`, which overflow native
//! floats for `n ≳ 170`. Every partition-function value in this crate is
//! therefore carried as a [`LogValue`].

use core::cmp::Ordering;
use core::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::num;

/// A real number stored as a sign and the natural log of its absolute value.
///
/// Zero is canonical: `sign == 0` with `logmag == f64::NEG_INFINITY`.
/// Multiplication adds log-magnitudes; addition of same-sign values uses the
/// log-sum-exp identity; opposite signs go through the analogous `ln_1p`
/// difference form. Comparison is exact on `(sign, logmag)`.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(from = "LogValueRepr", into = "LogValueRepr")]
pub struct LogValue {
    sign: i8,
    logmag: f64,
}

/// Wire form: `logmag` is `None` for zero so reports stay valid JSON
/// (f64 infinities do not serialize).
#[derive(Serialize, Deserialize, Clone, Copy)]
struct LogValueRepr {
    sign: i8,
    logmag: Option<f64>,
}

impl From<LogValue> for LogValueRepr {
    fn from(v: LogValue) -> Self {
        LogValueRepr {
            sign: v.sign,
            logmag: if v.sign == 0 { None } else { Some(v.logmag) },
        }
    }
}

impl From<LogValueRepr> for LogValue {
    fn from(r: LogValueRepr) -> Self {
        match (r.sign, r.logmag) {
            (0, _) | (_, None) => LogValue::ZERO,
            (s, Some(l)) => LogValue {
                sign: if s > 0 { 1 } else { -1 },
                logmag: l,
            },
        }
    }
}

impl LogValue {
    pub const ZERO: LogValue = LogValue {
        sign: 0,
        logmag: f64::NEG_INFINITY,
    };

    pub const ONE: LogValue = LogValue { sign: 1, logmag: 0.0 };

    /// Converts a finite native float. Panics on NaN or infinite input;
    /// values at this crate's scale enter the log domain via [`from_ln`]
    /// instead.
    ///
    /// [`from_ln`]: LogValue::from_ln
    pub fn from_f64(x: f64) -> LogValue {
        assert!(x.is_finite(), "LogValue::from_f64 requires finite input");
        if x == 0.0 {
            LogValue::ZERO
        } else {
            LogValue {
                sign: if x > 0.0 { 1 } else { -1 },
                logmag: num::ln(num::abs(x)),
            }
        }
    }

    /// The positive value `e^logmag`.
    pub fn from_ln(logmag: f64) -> LogValue {
        assert!(!logmag.is_nan());
        if logmag == f64::NEG_INFINITY {
            LogValue::ZERO
        } else {
            LogValue { sign: 1, logmag }
        }
    }

    /// Signed value `sign · e^logmag`. `sign == 0` gives zero.
    pub fn from_sign_ln(sign: i8, logmag: f64) -> LogValue {
        assert!(sign.abs() <= 1);
        assert!(!logmag.is_nan());
        if sign == 0 || logmag == f64::NEG_INFINITY {
            LogValue::ZERO
        } else {
            LogValue { sign, logmag }
        }
    }

    /// Back to a native float. Overflows to `±inf` beyond native range.
    pub fn to_f64(self) -> f64 {
        f64::from(self.sign) * num::exp(self.logmag)
    }

    pub fn sign(self) -> i8 {
        self.sign
    }

    /// `ln |x|`; `-inf` for zero.
    pub fn ln_abs(self) -> f64 {
        self.logmag
    }

    pub fn is_zero(self) -> bool {
        self.sign == 0
    }

    pub fn abs(self) -> LogValue {
        LogValue {
            sign: self.sign.abs(),
            logmag: self.logmag,
        }
    }

    pub fn recip(self) -> LogValue {
        assert!(self.sign != 0, "reciprocal of zero");
        LogValue {
            sign: self.sign,
            logmag: -self.logmag,
        }
    }

    /// `|self / exact − 1|`, the relative error against a reference value.
    /// Returns `inf` when signs differ and 0 when both are zero.
    pub fn relative_error(self, exact: LogValue) -> f64 {
        if self.sign != exact.sign {
            return if self.is_zero() && exact.is_zero() {
                0.0
            } else {
                f64::INFINITY
            };
        }
        if self.is_zero() {
            return 0.0;
        }
        num::abs(num::exp_m1(self.logmag - exact.logmag))
    }
}

/// Free-function form of [`LogValue`] addition.
pub fn log_add(x: LogValue, y: LogValue) -> LogValue {
    x + y
}

/// Free-function form of [`LogValue`] multiplication.
pub fn log_mul(x: LogValue, y: LogValue) -> LogValue {
    x * y
}

impl Mul for LogValue {
    type Output = LogValue;

    fn mul(self, rhs: LogValue) -> LogValue {
        if self.sign == 0 || rhs.sign == 0 {
            LogValue::ZERO
        } else {
            LogValue {
                sign: self.sign * rhs.sign,
                logmag: self.logmag + rhs.logmag,
            }
        }
    }
}

impl Add for LogValue {
    type Output = LogValue;

    fn add(self, rhs: LogValue) -> LogValue {
        if self.sign == 0 {
            return rhs;
        }
        if rhs.sign == 0 {
            return self;
        }
        let (hi, lo) = if self.logmag >= rhs.logmag {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let d = lo.logmag - hi.logmag; // ≤ 0
        if self.sign == rhs.sign {
            LogValue {
                sign: hi.sign,
                logmag: hi.logmag + num::ln_1p(num::exp(d)),
            }
        } else if d == 0.0 {
            LogValue::ZERO
        } else {
            LogValue {
                sign: hi.sign,
                logmag: hi.logmag + num::ln_1p(-num::exp(d)),
            }
        }
    }
}

impl Neg for LogValue {
    type Output = LogValue;

    fn neg(self) -> LogValue {
        LogValue {
            sign: -self.sign,
            logmag: self.logmag,
        }
    }
}

impl Sub for LogValue {
    type Output = LogValue;

    fn sub(self, rhs: LogValue) -> LogValue {
        self + (-rhs)
    }
}

impl PartialEq for LogValue {
    fn eq(&self, other: &Self) -> bool {
        self.sign == other.sign && (self.sign == 0 || self.logmag == other.logmag)
    }
}

impl PartialOrd for LogValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        if self.sign != other.sign {
            return Some(self.sign.cmp(&other.sign));
        }
        match self.sign {
            0 => Some(Ordering::Equal),
            1 => self.logmag.partial_cmp(&other.logmag),
            _ => other.logmag.partial_cmp(&self.logmag),
        }
    }
}

/// `ln k!` via the log-gamma function.
pub fn ln_factorial(k: usize) -> f64 {
    num::ln_gamma(k as f64 + 1.0)
}

/// `ln Σ_{r=0}^{rmax} C(n, r)`, accumulated iteratively in the log domain
/// so it stays finite for any `n`. `rmax` is clamped to `n`.
pub fn ln_binomial_sum(n: usize, rmax: usize) -> f64 {
    let rmax = rmax.min(n);
    let mut ln_binom = 0.0; // ln C(n, 0)
    let mut acc = LogValue::ONE;
    for r in 0..rmax {
        ln_binom += num::ln((n - r) as f64) - num::ln((r + 1) as f64);
        acc = acc + LogValue::from_ln(ln_binom);
    }
    acc.ln_abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mul_adds_logmags() {
        let x = LogValue::from_ln(1.0);
        let y = LogValue::from_ln(2.0);
        assert_eq!((x * y).ln_abs(), 3.0);
    }

    #[test]
    fn add_zero_is_identity() {
        let x = LogValue::from_f64(3.25);
        assert_eq!(log_add(x, LogValue::ZERO), x);
        assert_eq!(log_add(LogValue::ZERO, x), x);
    }

    #[test]
    fn one_plus_one_is_ln_two() {
        let s = log_add(LogValue::ONE, LogValue::ONE);
        assert!((s.ln_abs() - core::f64::consts::LN_2).abs() < 1e-15);
    }

    #[test]
    fn opposite_signs_cancel_exactly() {
        let x = LogValue::from_f64(7.5);
        assert!((x - x).is_zero());
    }

    #[test]
    fn signed_subtraction_matches_native() {
        let x = LogValue::from_f64(10.0);
        let y = LogValue::from_f64(-3.0);
        let z = x + y;
        assert_eq!(z.sign(), 1);
        assert!((z.to_f64() - 7.0).abs() < 1e-12);
    }

    #[test]
    fn huge_magnitudes_survive() {
        // 1000! * 1000! stays representable in the log domain.
        let f = LogValue::from_ln(ln_factorial(1000));
        let sq = f * f;
        assert!((sq.ln_abs() - 2.0 * ln_factorial(1000)).abs() < 1e-9);
        assert_eq!(sq.to_f64(), f64::INFINITY); // native overflow, by design
    }

    #[test]
    fn ordering_respects_sign_and_magnitude() {
        let a = LogValue::from_f64(-5.0);
        let b = LogValue::from_f64(-1.0);
        let c = LogValue::ZERO;
        let d = LogValue::from_f64(2.0);
        assert!(a < b && b < c && c < d);
    }

    #[test]
    fn ln_factorial_small_values() {
        assert!((ln_factorial(0) - 0.0).abs() < 1e-15);
        assert!((ln_factorial(5) - (120.0f64).ln()).abs() < 1e-12);
    }

    #[test]
    fn binomial_sum_full_range_is_two_to_n() {
        for n in [1usize, 5, 10, 30] {
            let got = ln_binomial_sum(n, n);
            let want = n as f64 * core::f64::consts::LN_2;
            assert!((got - want).abs() < 1e-9, "n={n}: {got} vs {want}");
        }
    }

    #[test]
    fn binomial_sum_partial() {
        // Σ_{r≤2} C(5,r) = 1 + 5 + 10 = 16
        let got = ln_binomial_sum(5, 2);
        assert!((got - (16.0f64).ln()).abs() < 1e-12);
    }

    #[test]
    fn relative_error_basics() {
        let x = LogValue::from_f64(100.0);
        let y = LogValue::from_f64(100.0 * (1.0 + 3e-10));
        assert!(x.relative_error(y) < 1e-9);
        assert_eq!(LogValue::ZERO.relative_error(LogValue::ZERO), 0.0);
        assert_eq!(x.relative_error(LogValue::ZERO), f64::INFINITY);
    }
}
