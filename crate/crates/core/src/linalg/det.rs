//! Determinants and maximum subdeterminants.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::matrix::IntMatrix;
use crate::error::{Error, Result};

/// Default cap on the number of square submatrices evaluated by
/// [`max_subdeterminant`] in exact mode.
pub const DEFAULT_MINOR_BUDGET: u64 = 1_000_000;

/// Bareiss elimination on a row-major `n × n` buffer with checked `i64`
/// arithmetic; `None` on overflow.
fn small_determinant(a: &mut [i64], n: usize) -> Option<i64> {
    if n == 0 {
        return Some(1);
    }
    let mut sign = 1i64;
    let mut prev = 1i64;
    for k in 0..n - 1 {
        if a[k * n + k] == 0 {
            let Some(p) = (k + 1..n).find(|&i| a[i * n + k] != 0) else {
                return Some(0);
            };
            for j in 0..n {
                a.swap(k * n + j, p * n + j);
            }
            sign = -sign;
        }
        let pivot = a[k * n + k];
        for i in k + 1..n {
            let f = a[i * n + k];
            for j in k + 1..n {
                let v = a[i * n + j]
                    .checked_mul(pivot)?
                    .checked_sub(f.checked_mul(a[k * n + j])?)?;
                a[i * n + j] = v / prev;
            }
        }
        prev = pivot;
    }
    a[n * n - 1].checked_mul(sign)
}

fn small_entries(m: &IntMatrix) -> Option<Vec<i64>> {
    m.row_iter().flatten().map(|x| x.to_i64()).collect()
}

/// Fraction-free (Bareiss) determinant of a square integer matrix.
pub fn determinant(m: &IntMatrix) -> BigInt {
    assert!(m.is_square(), "determinant of a non-square matrix");
    if let Some(mut a) = small_entries(m) {
        if let Some(d) = small_determinant(&mut a, m.rows()) {
            return BigInt::from(d);
        }
    }
    big_determinant(m)
}

fn big_determinant(m: &IntMatrix) -> BigInt {
    let n = m.rows();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.to_rows();
    let mut sign = 1;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if sign < 0 {
        -d
    } else {
        d
    }
}

/// Lexicographic k-subsets of `0..n`.
#[derive(Clone, Debug)]
pub struct Combinations {
    n: usize,
    idx: Vec<usize>,
    done: bool,
}

impl Combinations {
    pub fn new(n: usize, k: usize) -> Self {
        Combinations {
            n,
            idx: (0..k).collect(),
            done: k > n,
        }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.idx.clone();
        let k = self.idx.len();
        let mut i = k;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.idx[i] < self.n - k + i {
                self.idx[i] += 1;
                for j in i + 1..k {
                    self.idx[j] = self.idx[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    acc
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SubdetMode {
    Exact,
    Hadamard,
}

/// Δ(M): the largest |det| over all square submatrices of `m`.
///
/// `Exact` enumerates every square submatrix and fails with
/// [`Error::BudgetExceeded`] when there are more than `budget` of them.
/// `Hadamard` returns the ceiling of the product of the largest row norms,
/// an upper bound on the exact value.
pub fn max_subdeterminant(m: &IntMatrix, mode: SubdetMode, budget: u64) -> Result<BigInt> {
    let p = m.rows().min(m.cols());
    match mode {
        SubdetMode::Exact => {
            let count: u128 = (1..=p)
                .map(|k| binomial(m.rows(), k).saturating_mul(binomial(m.cols(), k)))
                .fold(0u128, |a, b| a.saturating_add(b));
            if count > budget as u128 {
                return Err(Error::BudgetExceeded(format!(
                    "{count} square submatrices exceed the minor budget {budget}"
                )));
            }
            let mut best = BigInt::zero();
            for k in 1..=p {
                best = best.max(max_minor_unchecked(m, k));
            }
            Ok(best)
        }
        SubdetMode::Hadamard => {
            let mut norms: Vec<BigInt> = m
                .row_iter()
                .map(|r| r.iter().map(|x| x * x).sum::<BigInt>())
                .filter(|s| !s.is_zero())
                .collect();
            if norms.is_empty() {
                return Ok(BigInt::zero());
            }
            norms.sort_by(|a, b| b.cmp(a));
            let prod: BigInt = norms.into_iter().take(p).product();
            Ok(ceil_sqrt(&prod))
        }
    }
}

/// Largest |det| over all k×k submatrices, with a budget on their number.
pub fn max_minor_of_order(m: &IntMatrix, k: usize, budget: u64) -> Result<BigInt> {
    let count = binomial(m.rows(), k).saturating_mul(binomial(m.cols(), k));
    if count > budget as u128 {
        return Err(Error::BudgetExceeded(format!(
            "{count} minors of order {k} exceed the minor budget {budget}"
        )));
    }
    Ok(max_minor_unchecked(m, k))
}

fn max_minor_unchecked(m: &IntMatrix, k: usize) -> BigInt {
    let mut best = BigInt::zero();
    if k == 0 || k > m.rows() || k > m.cols() {
        return best;
    }
    let small = small_entries(m);
    let width = m.cols();
    let mut buf = vec![0i64; k * k];
    for rows in Combinations::new(m.rows(), k) {
        for cols in Combinations::new(m.cols(), k) {
            let fast = small.as_ref().and_then(|e| {
                for (a, &i) in rows.iter().enumerate() {
                    for (b, &j) in cols.iter().enumerate() {
                        buf[a * k + b] = e[i * width + j];
                    }
                }
                small_determinant(&mut buf, k)
            });
            let d = match fast {
                Some(d) => BigInt::from(d.unsigned_abs()),
                None => big_determinant(&m.submatrix(&rows, &cols)).abs(),
            };
            if d > best {
                best = d;
            }
        }
    }
    best
}

fn ceil_sqrt(x: &BigInt) -> BigInt {
    let s = x.sqrt();
    if &(&s * &s) == x {
        s
    } else {
        s + 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bareiss_matches_cofactor_values() {
        assert_eq!(determinant(&IntMatrix::from_i64(&[&[2, 1], &[1, 3]])), BigInt::from(5));
        assert_eq!(
            determinant(&IntMatrix::from_i64(&[&[0, 1, 2], &[1, 0, 3], &[4, -3, 8]])),
            BigInt::from(-2)
        );
        assert_eq!(determinant(&IntMatrix::from_i64(&[&[1, 2], &[2, 4]])), BigInt::zero());
        assert_eq!(determinant(&IntMatrix::zeros(0, 0)), BigInt::one());
    }

    #[test]
    fn combinations_are_lexicographic() {
        let all: Vec<_> = Combinations::new(4, 2).collect();
        assert_eq!(
            all,
            vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]
        );
        assert_eq!(Combinations::new(3, 0).count(), 1);
        assert_eq!(Combinations::new(2, 3).count(), 0);
        assert_eq!(binomial(11, 4), 330);
    }

    #[test]
    fn subdeterminant_examples() {
        let exact = |m: &IntMatrix| max_subdeterminant(m, SubdetMode::Exact, 1000).unwrap();
        assert_eq!(exact(&IntMatrix::identity(2)), BigInt::from(1));
        assert_eq!(exact(&IntMatrix::from_i64(&[&[1, 1], &[-1, 1]])), BigInt::from(2));
        // Incidence matrix of a directed path: totally unimodular.
        let tu = IntMatrix::from_i64(&[&[1, 0, 0], &[-1, 1, 0], &[0, -1, 1], &[0, 0, -1]]);
        assert_eq!(exact(&tu), BigInt::from(1));
    }

    #[test]
    fn exact_mode_respects_budget() {
        let m = IntMatrix::identity(4);
        // 16 + 36 + 16 + 1 square submatrices
        assert!(max_subdeterminant(&m, SubdetMode::Exact, 69).is_ok());
        assert!(matches!(
            max_subdeterminant(&m, SubdetMode::Exact, 68),
            Err(Error::BudgetExceeded(_))
        ));
    }

    #[test]
    fn hadamard_bounds_exact() {
        let m = IntMatrix::from_i64(&[&[1, 1], &[-1, 1]]);
        let h = max_subdeterminant(&m, SubdetMode::Hadamard, 0).unwrap();
        // sqrt(2) * sqrt(2) = 2
        assert_eq!(h, BigInt::from(2));
        let m = IntMatrix::from_i64(&[&[3, 1, 0], &[1, 2, 2]]);
        let h = max_subdeterminant(&m, SubdetMode::Hadamard, 0).unwrap();
        let e = max_subdeterminant(&m, SubdetMode::Exact, 1000).unwrap();
        assert!(h >= e);
        assert_eq!(h, BigInt::from(10)); // ceil(sqrt(10 * 9))
    }
}
