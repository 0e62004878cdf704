//! Inclusion–exclusion permanent in Gray-code order with running row sums.

use alloc::vec;

use crate::logdomain::LogValue;
use crate::matrix::WeightMatrix;
use crate::num::NeumaierSum;
use crate::oracles::{check_cap, OracleError, RYSER_CAP};

/// `per A = Σ_{∅ ≠ S ⊆ cols} (−1)^{n−|S|} Π_i Σ_{j∈S} a_ij`.
///
/// Column subsets are visited in Gray-code order so each step updates the
/// `n` row sums by a single column. The alternating sum cancels terms of
/// order `n^n` down to `n!` scale, hence the compensated accumulator.
pub fn permanent_ryser(a: &WeightMatrix) -> Result<LogValue, OracleError> {
    let n = a.n();
    check_cap(n, RYSER_CAP)?;
    let mut row_sums = vec![0.0f64; n];
    let mut acc = NeumaierSum::new();
    let mut prev_gray: u64 = 0;
    for k in 1u64..(1u64 << n) {
        let gray = k ^ (k >> 1);
        let flipped = gray ^ prev_gray;
        let col = flipped.trailing_zeros() as usize;
        if gray & flipped != 0 {
            for (i, s) in row_sums.iter_mut().enumerate() {
                *s += a.get(i, col);
            }
        } else {
            for (i, s) in row_sums.iter_mut().enumerate() {
                *s -= a.get(i, col);
            }
        }
        prev_gray = gray;
        let product: f64 = row_sums.iter().product();
        let parity = (n as u32).wrapping_sub(gray.count_ones()) & 1;
        acc.add(if parity == 0 { product } else { -product });
    }
    Ok(LogValue::from_f64(acc.total()))
}
