//! Rational elimination: particular solutions, rank and row-space membership.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::matrix::{content, IntMatrix};

/// Incrementally maintained row space of a set of integer vectors, kept as
/// primitive integer rows in echelon form: each stored row vanishes at the
/// pivots of the rows stored before it.
#[derive(Clone, Debug, Default)]
pub struct RowSpace {
    cols: usize,
    // (pivot column, primitive row that is nonzero at the pivot)
    rows: Vec<(usize, Vec<BigInt>)>,
}

impl RowSpace {
    pub fn new(cols: usize) -> Self {
        RowSpace {
            cols,
            rows: Vec::new(),
        }
    }

    pub fn of(m: &IntMatrix) -> Self {
        let mut rs = RowSpace::new(m.cols());
        for row in m.row_iter() {
            rs.insert(row);
        }
        rs
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// An integer multiple of `v` minus a combination of the stored rows,
    /// vanishing at every pivot.
    fn reduce(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        let mut w = v.to_vec();
        for (p, row) in &self.rows {
            if w[*p].is_zero() {
                continue;
            }
            let f = w[*p].clone();
            let g = &row[*p];
            for (x, r) in w.iter_mut().zip(row) {
                *x = &*x * g - &f * r;
            }
            let c = content(&w);
            if !c.is_zero() && !c.is_one() {
                for x in w.iter_mut() {
                    *x /= &c;
                }
            }
        }
        w
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.reduce(v).iter().all(Zero::is_zero)
    }

    /// Adds `v` to the spanning set. Returns `false` (and leaves the space
    /// unchanged) when `v` already lies in it.
    pub fn insert(&mut self, v: &[BigInt]) -> bool {
        let w = self.reduce(v);
        let Some(p) = w.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        self.rows.push((p, w));
        true
    }
}

pub fn rank(m: &IntMatrix) -> usize {
    RowSpace::of(m).dim()
}

pub fn has_full_row_rank(m: &IntMatrix) -> bool {
    rank(m) == m.rows()
}

/// Solves `C x = d` over the rationals. Free variables are set to zero.
/// Returns `None` when the system is inconsistent.
pub fn solve_rational_system(c: &IntMatrix, d: &[BigInt]) -> Option<Vec<BigRational>> {
    assert_eq!(c.rows(), d.len(), "right-hand side length mismatch");
    let n = c.cols();
    // integer Gauss-Jordan; rows are kept primitive
    let mut a: Vec<Vec<BigInt>> = c
        .row_iter()
        .zip(d)
        .map(|(row, rhs)| row.iter().chain(std::iter::once(rhs)).cloned().collect())
        .collect();

    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..n {
        if r == a.len() {
            break;
        }
        let Some(p) = (r..a.len()).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let pivot_row = a[r].clone();
        let g = &pivot_row[col];
        for (i, row) in a.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                *x = &*x * g - &f * y;
            }
            let k = content(row);
            if !k.is_zero() && !k.is_one() {
                for x in row.iter_mut() {
                    *x /= &k;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    // Remaining rows are zero on the left; a nonzero rhs there is a contradiction.
    if a[r..].iter().any(|row| !row[n].is_zero()) {
        return None;
    }
    let mut x = vec![BigRational::zero(); n];
    for (i, &col) in pivots.iter().enumerate() {
        x[col] = BigRational::new(a[i][n].clone(), a[i][col].clone());
    }
    Some(x)
}

/// Decides whether `v = λᵀ C` for some rational `λ`; returns `λ` when it is.
///
/// `C` is expected to have full row rank, which makes `λ` unique. With no
/// rows, only the zero vector is a member.
pub fn rowspace_member(c: &IntMatrix, v: &[BigInt]) -> Option<Vec<BigRational>> {
    assert_eq!(c.cols(), v.len(), "vector length mismatch");
    if c.rows() == 0 {
        return v.iter().all(Zero::is_zero).then(Vec::new);
    }
    solve_rational_system(&c.transpose(), v)
}

/// Least common multiple of the denominators.
pub fn common_denominator(v: &[BigRational]) -> BigInt {
    use num_integer::Integer;
    v.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::to_big;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn membership_examples() {
        let c = IntMatrix::from_i64(&[&[1, 0]]);
        assert_eq!(rowspace_member(&c, &to_big(&[3, 0])), Some(vec![rat(3, 1)]));
        assert_eq!(rowspace_member(&c, &to_big(&[0, 1])), None);

        let c = IntMatrix::from_i64(&[&[1, 1], &[1, -1]]);
        assert_eq!(
            rowspace_member(&c, &to_big(&[2, 0])),
            Some(vec![rat(1, 1), rat(1, 1)])
        );
    }

    #[test]
    fn empty_rowspace_holds_only_zero() {
        let c = IntMatrix::empty(3);
        assert_eq!(rowspace_member(&c, &to_big(&[0, 0, 0])), Some(vec![]));
        assert_eq!(rowspace_member(&c, &to_big(&[0, 1, 0])), None);
        assert!(!RowSpace::new(3).contains(&to_big(&[0, 1, 0])));
    }

    #[test]
    fn solve_examples() {
        let c = IntMatrix::from_i64(&[&[1, 1]]);
        let x = solve_rational_system(&c, &to_big(&[2])).unwrap();
        assert_eq!(c.mul_rat_vec(&x), vec![rat(2, 1)]);

        let c = IntMatrix::from_i64(&[&[1], &[1]]);
        assert_eq!(solve_rational_system(&c, &to_big(&[1, 2])), None);

        let c = IntMatrix::from_i64(&[&[2, 0], &[0, 3]]);
        assert_eq!(
            solve_rational_system(&c, &to_big(&[1, 1])),
            Some(vec![rat(1, 2), rat(1, 3)])
        );
    }

    #[test]
    fn rowspace_tracks_rank() {
        let mut rs = RowSpace::new(3);
        assert!(rs.insert(&to_big(&[1, 2, 3])));
        assert!(!rs.insert(&to_big(&[2, 4, 6])));
        assert!(rs.insert(&to_big(&[0, 1, 1])));
        assert!(rs.contains(&to_big(&[1, 3, 4])));
        assert!(!rs.contains(&to_big(&[0, 0, 1])));
        assert_eq!(rank(&IntMatrix::from_i64(&[&[1, 2], &[2, 4], &[0, 0]])), 1);
    }
}
