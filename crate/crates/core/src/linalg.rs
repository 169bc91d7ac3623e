//! Exact integer linear algebra for desk-scale rank computations.
//!
//! Rational matrices are cleared to integers row by row, then reduced by
//! fraction-free (Bareiss) elimination, so every intermediate value stays an
//! exact integer and ranks are never approximate.

use crate::words::Coeff;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

/// Rank of a rational matrix (rows of equal length; empty matrix has rank 0).
pub(crate) fn rank(rows: &[Vec<Coeff>]) -> usize {
    let cleared: Vec<Vec<BigInt>> = rows.iter().map(|r| clear_row(r)).collect();
    rank_int(cleared)
}

/// True when a square rational matrix is invertible.
pub(crate) fn is_invertible(rows: &[Vec<Coeff>]) -> bool {
    let n = rows.len();
    rows.iter().all(|r| r.len() == n) && rank(rows) == n
}

fn clear_row(row: &[Coeff]) -> Vec<BigInt> {
    let mut lcm = BigInt::one();
    for c in row {
        lcm = lcm.lcm(c.denom());
    }
    row.iter().map(|c| c.numer() * (&lcm / c.denom())).collect()
}

/// Bareiss elimination: the (k+1)-st pivot step divides exactly by the k-th
/// pivot, keeping entries polynomial-sized.
fn rank_int(mut m: Vec<Vec<BigInt>>) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut rank = 0;
    let mut prev = BigInt::one();
    let mut col = 0;
    while rank < rows && col < cols {
        let pivot_row = (rank..rows).find(|&r| !m[r][col].is_zero());
        let Some(pr) = pivot_row else {
            col += 1;
            continue;
        };
        m.swap(rank, pr);
        let pivot = m[rank][col].clone();
        for r in rank + 1..rows {
            for c in col + 1..cols {
                let val = &pivot * &m[r][c] - &m[r][col] * &m[rank][c];
                m[r][c] = &val / &prev;
            }
            m[r][col] = BigInt::zero();
        }
        prev = pivot;
        rank += 1;
        col += 1;
    }
    rank
}
