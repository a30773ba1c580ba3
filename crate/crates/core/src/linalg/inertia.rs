//! Inertia of symmetric forms by exact congruence diagonalization.

use std::fmt;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use super::matrix::IntMatrix;
use crate::error::{Error, Result};

/// Counts of positive, negative and zero eigenvalues.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
pub struct Inertia {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

impl Inertia {
    pub fn new(positive: usize, negative: usize, zero: usize) -> Self {
        Inertia {
            positive,
            negative,
            zero,
        }
    }

    pub fn dim(&self) -> usize {
        self.positive + self.negative + self.zero
    }
}

impl fmt::Display for Inertia {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.positive, self.negative, self.zero)
    }
}

/// Inertia of a symmetric integer matrix.
pub fn inertia(m: &IntMatrix) -> Result<Inertia> {
    if !m.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    Ok(congruence_inertia(m.to_rational()))
}

/// Inertia of `Bᵀ Q B`, the form `Q` restricted to the column span of `B`.
pub fn inertia_of_restricted_form(q: &IntMatrix, b: &IntMatrix) -> Result<Inertia> {
    if !q.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    if b.rows() != q.rows() {
        return Err(Error::DimensionMismatch(format!(
            "basis has {} rows, form has dimension {}",
            b.rows(),
            q.rows()
        )));
    }
    let restricted = b.transpose().mul(q).mul(b);
    Ok(congruence_inertia(restricted.to_rational()))
}

/// Symmetric Gaussian elimination. A nonzero diagonal entry is used as a
/// pivot directly. When the whole active diagonal vanishes but some
/// `a_ij ≠ 0`, adding row/column `j` to row/column `i` produces the diagonal
/// entry `2·a_ij` without leaving the congruence class.
fn congruence_inertia(mut a: Vec<Vec<BigRational>>) -> Inertia {
    let mut active: Vec<usize> = (0..a.len()).collect();
    let mut out = Inertia::default();
    while !active.is_empty() {
        if let Some(pos) = active.iter().position(|&i| !a[i][i].is_zero()) {
            let p = active.swap_remove(pos);
            let piv = a[p][p].clone();
            if piv.is_positive() {
                out.positive += 1;
            } else {
                out.negative += 1;
            }
            for &i in &active {
                if a[i][p].is_zero() {
                    continue;
                }
                let f = &a[i][p] / &piv;
                for &j in &active {
                    if !a[p][j].is_zero() {
                        let delta = &f * &a[p][j];
                        a[i][j] -= delta;
                    }
                }
            }
            continue;
        }
        let pair = active.iter().enumerate().find_map(|(ii, &i)| {
            active[ii + 1..]
                .iter()
                .find(|&&j| !a[i][j].is_zero())
                .map(|&j| (i, j))
        });
        let Some((i, j)) = pair else {
            out.zero += active.len();
            break;
        };
        for &l in &active {
            let v = a[j][l].clone();
            a[i][l] += v;
        }
        for &l in &active {
            let v = a[l][j].clone();
            a[l][i] += v;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inert(rows: &[&[i64]]) -> Inertia {
        inertia(&IntMatrix::from_i64(rows)).unwrap()
    }

    #[test]
    fn documented_examples() {
        let id = IntMatrix::identity(2);
        assert_eq!(
            inertia_of_restricted_form(&id, &id).unwrap(),
            Inertia::new(2, 0, 0)
        );
        // eigenvalues 3 and -1
        assert_eq!(inert(&[&[1, 2], &[2, 1]]), Inertia::new(1, 1, 0));
        // eigenvalues ±1
        assert_eq!(inert(&[&[0, 1], &[1, 0]]), Inertia::new(1, 1, 0));
    }

    #[test]
    fn zero_and_degenerate_blocks() {
        assert_eq!(inert(&[&[0, 0], &[0, 0]]), Inertia::new(0, 0, 2));
        assert_eq!(inert(&[&[1, 1], &[1, 1]]), Inertia::new(1, 0, 1));
        assert_eq!(
            inert(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, -3]]),
            Inertia::new(1, 2, 0)
        );
    }

    #[test]
    fn restriction_to_subspace() {
        // Q = diag(1, -1) restricted to span{(1, 1)} is the zero form.
        let q = IntMatrix::from_i64(&[&[1, 0], &[0, -1]]);
        let b = IntMatrix::from_i64(&[&[1], &[1]]);
        assert_eq!(inertia_of_restricted_form(&q, &b).unwrap(), Inertia::new(0, 0, 1));
    }

    #[test]
    fn asymmetric_rejected() {
        let q = IntMatrix::from_i64(&[&[1, 2], &[0, 1]]);
        assert_eq!(inertia(&q), Err(Error::NotSymmetric));
        assert_eq!(
            inertia_of_restricted_form(&q, &IntMatrix::identity(2)),
            Err(Error::NotSymmetric)
        );
    }
}
