//! Integer kernel bases built from the adjugate of a nonsingular column block.
//!
//! For `C` of full row rank `k` with a nonsingular `k×k` column block `C_S`,
//! every remaining column `t` yields the kernel vector
//!
//! ```text
//!   y_S = -adj(C_S) · C_t,   y_T = det(C_S) · e_t
//! ```
//!
//! Each entry of `adj(C_S)·C_t` is the determinant of `C_S` with one column
//! replaced by `C_t` (Cramer), hence a `k×k` minor of `C`. So every basis
//! vector is bounded in ∞-norm by the maximum subdeterminant of `C`.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::det::determinant;
use super::matrix::{inf_norm, IntMatrix};
use super::solve::RowSpace;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelBasis {
    pub vectors: Vec<Vec<BigInt>>,
    /// Column set `S` of the nonsingular block (ascending).
    pub pivot_columns: Vec<usize>,
    /// `det(C_S)`; `1` when `C` has no rows.
    pub delta: BigInt,
    /// `max_i ‖y_i‖∞`.
    pub norm_bound: BigInt,
}

impl KernelBasis {
    /// The basis of the zero space.
    pub fn empty() -> Self {
        KernelBasis {
            vectors: Vec::new(),
            pivot_columns: Vec::new(),
            delta: BigInt::one(),
            norm_bound: BigInt::zero(),
        }
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    /// The basis as the columns of an `n × r` matrix.
    pub fn as_columns(&self, n: usize) -> IntMatrix {
        IntMatrix::from_columns(n, &self.vectors)
    }
}

/// Lexicographically first set of `k` linearly independent columns.
///
/// Greedy selection over a matroid returns the lexicographically smallest
/// basis, which matches scanning `k`-subsets in lexicographic order.
pub fn first_nonsingular_columns(c: &IntMatrix) -> Result<Vec<usize>> {
    let k = c.rows();
    let mut cols = RowSpace::new(k);
    let mut picked = Vec::with_capacity(k);
    for j in 0..c.cols() {
        if picked.len() == k {
            break;
        }
        if cols.insert(&c.column(j)) {
            picked.push(j);
        }
    }
    if picked.len() < k {
        return Err(Error::RankDeficientRows);
    }
    Ok(picked)
}

/// Adjugate kernel basis of `C` (rows assumed linearly independent).
pub fn adjugate_kernel_basis(c: &IntMatrix) -> Result<KernelBasis> {
    let n = c.cols();
    let k = c.rows();
    if k == 0 {
        let vectors: Vec<Vec<BigInt>> = (0..n)
            .map(|i| {
                let mut e = vec![BigInt::zero(); n];
                e[i] = BigInt::one();
                e
            })
            .collect();
        return Ok(KernelBasis {
            norm_bound: if n > 0 { BigInt::one() } else { BigInt::zero() },
            vectors,
            pivot_columns: Vec::new(),
            delta: BigInt::one(),
        });
    }
    let s = first_nonsingular_columns(c)?;
    let all_rows: Vec<usize> = (0..k).collect();
    let block = c.submatrix(&all_rows, &s);
    let delta = determinant(&block);
    debug_assert!(!delta.is_zero());

    let in_s: Vec<bool> = (0..n).map(|j| s.contains(&j)).collect();
    let mut vectors = Vec::with_capacity(n - k);
    for t in (0..n).filter(|&j| !in_s[j]) {
        let mut y = vec![BigInt::zero(); n];
        for (pos, &sj) in s.iter().enumerate() {
            let mut replaced = block.clone();
            for r in 0..k {
                replaced.set(r, pos, c.get(r, t).clone());
            }
            y[sj] = -determinant(&replaced);
        }
        y[t] = delta.clone();
        vectors.push(y);
    }
    let norm_bound = vectors
        .iter()
        .map(|v| inf_norm(v))
        .max()
        .unwrap_or_else(BigInt::zero);
    Ok(KernelBasis {
        vectors,
        pivot_columns: s,
        delta,
        norm_bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::det::{max_subdeterminant, SubdetMode};
    use crate::linalg::matrix::to_big;

    #[test]
    fn single_row_examples() {
        let b = adjugate_kernel_basis(&IntMatrix::from_i64(&[&[1, 1]])).unwrap();
        assert_eq!(b.vectors, vec![to_big(&[-1, 1])]);
        assert_eq!(b.pivot_columns, vec![0]);

        let b = adjugate_kernel_basis(&IntMatrix::from_i64(&[&[2, 1]])).unwrap();
        assert_eq!(b.vectors, vec![to_big(&[-1, 2])]);
        assert_eq!(b.delta, BigInt::from(2));

        let b = adjugate_kernel_basis(&IntMatrix::from_i64(&[&[1, 0, 0]])).unwrap();
        assert_eq!(b.vectors, vec![to_big(&[0, 1, 0]), to_big(&[0, 0, 1])]);
    }

    #[test]
    fn empty_rows_give_standard_basis() {
        let b = adjugate_kernel_basis(&IntMatrix::empty(3)).unwrap();
        assert_eq!(b.vectors.len(), 3);
        assert_eq!(b.vectors[1], to_big(&[0, 1, 0]));
    }

    #[test]
    fn dependent_rows_rejected() {
        let c = IntMatrix::from_i64(&[&[1, 2, 3], &[2, 4, 6]]);
        assert_eq!(adjugate_kernel_basis(&c), Err(Error::RankDeficientRows));
    }

    #[test]
    fn pivot_block_skips_dependent_leading_column() {
        // Column 0 is zero, so S must start at column 1.
        let c = IntMatrix::from_i64(&[&[0, 2, 1, 1], &[0, 1, 1, 3]]);
        let b = adjugate_kernel_basis(&c).unwrap();
        assert_eq!(b.pivot_columns, vec![1, 2]);
        assert_eq!(b.delta, BigInt::from(1));
        for y in &b.vectors {
            assert!(c.mul_vec(y).iter().all(|v| v.is_zero()));
        }
        let delta = max_subdeterminant(&c, SubdetMode::Exact, 1000).unwrap();
        assert!(b.norm_bound <= delta);
    }

    #[test]
    fn full_rank_square_has_empty_kernel() {
        let b = adjugate_kernel_basis(&IntMatrix::from_i64(&[&[1, 2], &[3, 4]])).unwrap();
        assert!(b.vectors.is_empty());
        assert_eq!(b.delta, BigInt::from(-2));
    }
}
