//! Independent brute-force ground truth: dynamic-programming counts and
//! explicit enumeration of semi-magic squares with optional forbidden
//! entries, plus Ehrhart reconstruction by interpolation.
//!
//! This module deliberately shares nothing with the formula path except the
//! exact arithmetic, so agreement between the two is meaningful evidence.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::exactmath::{poly_interpolate, rat_int, Polynomial, Rational};
use crate::mgf::ZeroPattern;

const MAX_N: usize = 5;
const MAX_T: u64 = 12;
const MAX_POINTS: u128 = 100_000;

fn check_budget(n: usize, t: u64) -> Result<()> {
    if n > MAX_N || t > MAX_T {
        return Err(Error::BudgetExceeded(format!(
            "oracle limited to n <= {MAX_N}, t <= {MAX_T} (got n={n}, t={t})"
        )));
    }
    Ok(())
}

/// All fillings of one column: values summing to `t`, bounded by the
/// remaining row sums, zero at forbidden rows.
fn column_fillings(remaining: &[u64], t: u64, forbidden: &[bool]) -> Vec<Vec<u64>> {
    fn rec(
        remaining: &[u64],
        forbidden: &[bool],
        row: usize,
        left: u64,
        current: &mut Vec<u64>,
        out: &mut Vec<Vec<u64>>,
    ) {
        if row == remaining.len() {
            if left == 0 {
                out.push(current.clone());
            }
            return;
        }
        let cap = if forbidden[row] {
            0
        } else {
            remaining[row].min(left)
        };
        for v in 0..=cap {
            current.push(v);
            rec(remaining, forbidden, row + 1, left - v, current, out);
            current.pop();
        }
    }
    let mut out = Vec::new();
    rec(remaining, forbidden, 0, t, &mut Vec::new(), &mut out);
    out
}

/// Counts n x n nonnegative integer matrices with all row and column sums
/// equal to t, skipping the forbidden entries, by a column-by-column DP over
/// residual row-sum vectors.
pub fn count_semimagic(n: usize, t: u64, zeros: &ZeroPattern) -> Result<u128> {
    check_budget(n, t)?;
    let mut states: HashMap<Vec<u64>, u128> = HashMap::new();
    states.insert(vec![t; n], 1);
    for col in 0..n {
        let forbidden: Vec<bool> = (0..n).map(|row| zeros.contains(row, col)).collect();
        let mut next: HashMap<Vec<u64>, u128> = HashMap::new();
        for (remaining, count) in &states {
            for filling in column_fillings(remaining, t, &forbidden) {
                let new_state: Vec<u64> = remaining
                    .iter()
                    .zip(&filling)
                    .map(|(r, f)| r - f)
                    .collect();
                *next.entry(new_state).or_insert(0) += count;
            }
        }
        states = next;
    }
    Ok(states.get(&vec![0; n]).copied().unwrap_or(0))
}

/// Explicitly enumerates the matrices counted by [`count_semimagic`], each
/// returned row-major. Refuses to materialize more than 10^5 points.
pub fn enumerate_points(n: usize, t: u64, zeros: &ZeroPattern) -> Result<Vec<Vec<u64>>> {
    let total = count_semimagic(n, t, zeros)?;
    if total > MAX_POINTS {
        return Err(Error::BudgetExceeded(format!(
            "{total} lattice points exceed the enumeration cap of {MAX_POINTS}"
        )));
    }
    let mut out = Vec::with_capacity(total as usize);
    let mut matrix = vec![0u64; n * n];
    fn rec(
        n: usize,
        t: u64,
        zeros: &ZeroPattern,
        col: usize,
        remaining: Vec<u64>,
        matrix: &mut Vec<u64>,
        out: &mut Vec<Vec<u64>>,
    ) {
        if col == n {
            if remaining.iter().all(|&r| r == 0) {
                out.push(matrix.clone());
            }
            return;
        }
        let forbidden: Vec<bool> = (0..n).map(|row| zeros.contains(row, col)).collect();
        for filling in column_fillings(&remaining, t, &forbidden) {
            let next: Vec<u64> = remaining.iter().zip(&filling).map(|(r, f)| r - f).collect();
            for (row, &v) in filling.iter().enumerate() {
                matrix[row * n + col] = v;
            }
            rec(n, t, zeros, col + 1, next, matrix, out);
            for (row, _) in filling.iter().enumerate() {
                matrix[row * n + col] = 0;
            }
        }
    }
    rec(n, t, zeros, 0, vec![t; n], &mut matrix, &mut out);
    debug_assert_eq!(out.len() as u128, total);
    Ok(out)
}

/// Interpolates DP counts at t = 0..dimension into the exact Ehrhart
/// polynomial of the face.
pub fn oracle_ehrhart(n: usize, zeros: &ZeroPattern, dimension: usize) -> Result<Polynomial> {
    let points: Vec<(i64, Rational)> = (0..=dimension as u64)
        .map(|t| {
            let count = count_semimagic(n, t, zeros)?;
            Ok((t as i64, rat_int(count as i64)))
        })
        .collect::<Result<Vec<_>>>()?;
    poly_interpolate(&points)
}
