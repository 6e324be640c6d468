//! Matrix permanents.
//!
//! [`permanent_naive`] sums the `n!` Leibniz terms and serves as the oracle;
//! [`permanent_ryser`] is the inclusion–exclusion engine used in production.
//! Both return `1` for the empty matrix.

use crate::error::{Error, Result};
use crate::matrix::SquareMatrix;
use crate::scalar::{Realization, Scalar};

pub const NAIVE_MAX_DIM: usize = 8;
pub const RYSER_MAX_DIM_FLOAT: usize = 16;
pub const RYSER_MAX_DIM_EXACT: usize = 12;

/// Which engine [`permanent_with`] should run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Engine {
    Naive,
    Ryser,
    #[default]
    Auto,
}

/// Σ over all permutations σ of Π M[i, σ(i)].
///
/// Walks the permutation tree depth-first so partial products are shared
/// between permutations with a common prefix.
pub fn permanent_naive<S: Scalar>(m: &SquareMatrix<S>) -> Result<S> {
    let n = m.n();
    if n > NAIVE_MAX_DIM {
        return Err(Error::DimensionTooLarge {
            engine: "naive",
            n,
            max: NAIVE_MAX_DIM,
        });
    }
    if n == 0 {
        return Ok(S::one());
    }
    fn walk<S: Scalar>(m: &SquareMatrix<S>, row: usize, used: u32, prefix: S, acc: &mut S) {
        let n = m.n();
        for col in 0..n {
            if used & (1 << col) != 0 {
                continue;
            }
            let entry = m.get(row, col);
            if entry.is_zero() {
                continue;
            }
            let p = prefix.clone() * entry.clone();
            if row + 1 == n {
                *acc = acc.clone() + p;
            } else {
                walk(m, row + 1, used | (1 << col), p, acc);
            }
        }
    }
    let mut acc = S::zero();
    walk(m, 0, 0, S::one(), &mut acc);
    Ok(acc)
}

/// Ryser's formula `(−1)ⁿ Σ_S (−1)^|S| Πᵢ Σ_{j∈S} M[i,j]`.
///
/// Column subsets are visited in Gray-code order so every step toggles one
/// column and updates the `n` row sums with a single add or subtract.
pub fn permanent_ryser<S: Scalar>(m: &SquareMatrix<S>) -> Result<S> {
    let n = m.n();
    let max = match S::REALIZATION {
        Realization::Float => RYSER_MAX_DIM_FLOAT,
        Realization::Rational => RYSER_MAX_DIM_EXACT,
    };
    if n > max {
        return Err(Error::DimensionTooLarge {
            engine: "ryser",
            n,
            max,
        });
    }
    if n == 0 {
        return Ok(S::one());
    }
    let mut row_sums = vec![S::zero(); n];
    let mut total = S::zero();
    let mut gray: u32 = 0;
    for k in 1u32..(1u32 << n) {
        let col = k.trailing_zeros() as usize;
        gray ^= 1 << col;
        let adding = gray & (1 << col) != 0;
        for (i, sum) in row_sums.iter_mut().enumerate() {
            let a = m.get(i, col).clone();
            let s = std::mem::replace(sum, S::zero());
            *sum = if adding { s + a } else { s - a };
        }
        let prod = row_sums
            .iter()
            .skip(1)
            .fold(row_sums[0].clone(), |p, s| p * s.clone());
        if gray.count_ones().is_multiple_of(2) {
            total = total + prod;
        } else {
            total = total - prod;
        }
    }
    Ok(if n.is_multiple_of(2) { total } else { -total })
}

/// Exact matrices up to 4×4 go to the naive engine, everything else to Ryser.
pub fn permanent<S: Scalar>(m: &SquareMatrix<S>) -> Result<S> {
    permanent_with(m, Engine::Auto)
}

pub fn permanent_with<S: Scalar>(m: &SquareMatrix<S>, engine: Engine) -> Result<S> {
    match engine {
        Engine::Naive => permanent_naive(m),
        Engine::Ryser => permanent_ryser(m),
        Engine::Auto => {
            if S::REALIZATION == Realization::Rational && m.n() <= 4 {
                permanent_naive(m)
            } else {
                permanent_ryser(m)
            }
        }
    }
}
