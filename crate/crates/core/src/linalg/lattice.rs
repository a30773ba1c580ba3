//! Integer solvability of linear equality systems.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use super::matrix::IntMatrix;

/// Unimodular column reduction `H = C U` of an equality system, with the
/// integer solution fixed on the pivot columns.
///
/// The pivot columns of `H` are `0..rank`; every row vanishes beyond them.
/// `C x = d` is solvable over `ℤ` iff `H y = d` is, which forward
/// substitution decides, and then `x = U y` for any integers on the free
/// columns.
#[derive(Clone, Debug)]
pub struct LatticeFrame {
    u: Vec<Vec<BigInt>>,
    y: Vec<BigInt>,
    rank: usize,
}

impl LatticeFrame {
    /// Returns `None` when `C x = d` has no integer solution.
    pub fn new(c: &IntMatrix, d: &[BigInt]) -> Option<Self> {
        assert_eq!(c.rows(), d.len(), "right-hand side length mismatch");
        let n = c.cols();
        let mut h = c.to_rows();
        let mut u: Vec<Vec<BigInt>> = (0..n)
            .map(|i| (0..n).map(|j| BigInt::from(u8::from(i == j))).collect())
            .collect();
        // pivot column of each row, or None when the row vanishes beyond the
        // previous pivots
        let mut pivots: Vec<Option<usize>> = Vec::with_capacity(h.len());
        let mut next = 0;
        for i in 0..h.len() {
            if next == n {
                pivots.push(None);
                continue;
            }
            for j in next + 1..n {
                if h[i][j].is_zero() {
                    continue;
                }
                let a = h[i][next].clone();
                let b = h[i][j].clone();
                let e = a.extended_gcd(&b);
                let (u1, v1) = (&a / &e.gcd, &b / &e.gcd);
                // [col_next, col_j] ← [s·col_next + t·col_j, −v·col_next + u·col_j]
                let combine = |row: &mut Vec<BigInt>| {
                    let p = row[next].clone();
                    let q = row[j].clone();
                    row[next] = &e.x * &p + &e.y * &q;
                    row[j] = &u1 * &q - &v1 * &p;
                };
                h.iter_mut().for_each(combine);
                u.iter_mut().for_each(combine);
            }
            if h[i][next].is_zero() {
                pivots.push(None);
            } else {
                pivots.push(Some(next));
                next += 1;
            }
        }
        let mut y = vec![BigInt::zero(); next];
        for (i, p) in pivots.iter().enumerate() {
            let rest: BigInt = h[i].iter().zip(&y).map(|(a, b)| a * b).sum();
            let r = &d[i] - rest;
            match p {
                None if !r.is_zero() => return None,
                None => {}
                Some(col) => {
                    let piv = &h[i][*col];
                    if !(&r % piv).is_zero() {
                        return None;
                    }
                    y[*col] = r / piv;
                }
            }
        }
        Some(LatticeFrame { u, y, rank: next })
    }

    /// Precomputes the test for appending `aᵀx = β` with varying `β`.
    pub fn prepare(&self, a: &[BigInt]) -> RowTest {
        assert_eq!(a.len(), self.u.len(), "row length mismatch");
        let au = self.times_u(a);
        let fixed = au[..self.rank].iter().zip(&self.y).map(|(x, y)| x * y).sum();
        let step = au[self.rank..].iter().fold(BigInt::zero(), |g, x| g.gcd(x));
        RowTest { fixed, step }
    }

    fn times_u(&self, a: &[BigInt]) -> Vec<BigInt> {
        (0..a.len())
            .map(|j| a.iter().zip(&self.u).map(|(x, urow)| x * &urow[j]).sum())
            .collect()
    }

    /// Whether the system extended by `rows` (each `(a, β)` meaning
    /// `aᵀx = β`) still has an integer solution.
    pub fn admits(&self, rows: &[(Vec<BigInt>, BigInt)]) -> bool {
        let n = self.u.len();
        let free = n - self.rank;
        let mut reduced = IntMatrix::zeros(rows.len(), free);
        let mut rhs = Vec::with_capacity(rows.len());
        for (i, (a, beta)) in rows.iter().enumerate() {
            assert_eq!(a.len(), n, "row length mismatch");
            // a U, split into pivot and free parts
            let au = self.times_u(a);
            let fixed: BigInt = au[..self.rank].iter().zip(&self.y).map(|(x, y)| x * y).sum();
            rhs.push(beta - fixed);
            for (j, v) in au[self.rank..].iter().enumerate() {
                reduced.set(i, j, v.clone());
            }
        }
        if rows.len() == 1 {
            let g = reduced.row(0).iter().fold(BigInt::zero(), |g, x| g.gcd(x));
            return if g.is_zero() { rhs[0].is_zero() } else { (&rhs[0] % &g).is_zero() };
        }
        LatticeFrame::new(&reduced, &rhs).is_some()
    }
}

/// Integer solvability of one appended row `aᵀx = β` as a function of `β`:
/// solvable iff `β − fixed` is a multiple of `step`.
#[derive(Clone, Debug)]
pub struct RowTest {
    fixed: BigInt,
    step: BigInt,
}

impl RowTest {
    pub fn admits(&self, beta: &BigInt) -> bool {
        let r = beta - &self.fixed;
        if self.step.is_zero() {
            r.is_zero()
        } else {
            (r % &self.step).is_zero()
        }
    }

    /// The admitted values in `[lo, hi]`, ascending.
    pub fn admitted_in(&self, lo: &BigInt, hi: &BigInt) -> impl Iterator<Item = BigInt> {
        let hi = hi.clone();
        let (first, step) = if self.step.is_zero() {
            let inside = lo <= &self.fixed && self.fixed <= hi;
            (inside.then(|| self.fixed.clone()), None)
        } else {
            (Some(lo + (&self.fixed - lo).mod_floor(&self.step)), Some(self.step.clone()))
        };
        std::iter::successors(first, move |v| step.as_ref().map(|s| v + s))
            .take_while(move |v| *v <= hi)
    }
}

/// Whether `C x = d` has an integer solution.
pub fn integer_solvable(c: &IntMatrix, d: &[BigInt]) -> bool {
    assert_eq!(c.rows(), d.len(), "right-hand side length mismatch");
    let small = || -> Option<(Vec<Vec<i64>>, Vec<i64>)> {
        let h = c
            .row_iter()
            .map(|r| r.iter().map(ToPrimitive::to_i64).collect::<Option<Vec<_>>>())
            .collect::<Option<Vec<_>>>()?;
        let d = d.iter().map(ToPrimitive::to_i64).collect::<Option<Vec<_>>>()?;
        Some((h, d))
    };
    if let Some(found) = small().and_then(|(h, d)| small_solvable(h, &d, c.cols())) {
        return found;
    }
    LatticeFrame::new(c, d).is_some()
}

fn small_solvable(h: Vec<Vec<i64>>, d: &[i64], n: usize) -> Option<bool> {
    let mut flat: Vec<i64> = h.into_iter().flatten().collect();
    let mut y = vec![0i64; n];
    solvable_flat(&mut flat, n, d, &mut y)
}

/// The column reduction of [`LatticeFrame::new`] in checked `i64`
/// arithmetic, without tracking `U`, on a row-major buffer `h` with `n`
/// columns. `y` is scratch space of length `n`; `h` is overwritten. `None`
/// on overflow.
pub fn solvable_flat(h: &mut [i64], n: usize, d: &[i64], y: &mut [i64]) -> Option<bool> {
    let rows = d.len();
    debug_assert_eq!(h.len(), rows * n);
    let mut next = 0;
    for i in 0..rows {
        let mut r = d[i];
        if next < n {
            for j in next + 1..n {
                if h[i * n + j] == 0 {
                    continue;
                }
                let (g, x, yy) = ext_gcd(h[i * n + next], h[i * n + j]);
                let (u1, v1) = (h[i * n + next] / g, h[i * n + j] / g);
                for row in h[i * n..].chunks_exact_mut(n) {
                    let (p, q) = (row[next], row[j]);
                    row[next] = x.checked_mul(p)?.checked_add(yy.checked_mul(q)?)?;
                    row[j] = u1.checked_mul(q)?.checked_sub(v1.checked_mul(p)?)?;
                }
            }
        }
        // the row is now zero beyond `next`, so earlier pivots fix the rest
        for (a, b) in h[i * n..i * n + next].iter().zip(&y[..next]) {
            r = r.checked_sub(a.checked_mul(*b)?)?;
        }
        let piv = if next < n { h[i * n + next] } else { 0 };
        if piv == 0 {
            if r != 0 {
                return Some(false);
            }
        } else {
            if r % piv != 0 {
                return Some(false);
            }
            y[next] = r / piv;
            next += 1;
        }
    }
    Some(true)
}

/// `(g, x, y)` with `g = gcd(a, b) > 0` and `ax + by = g`; `b ≠ 0`.
fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i64, 0i64);
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::to_big;

    fn solvable(c: &[&[i64]], d: &[i64]) -> bool {
        integer_solvable(&IntMatrix::from_i64(c), &to_big(d))
    }

    #[test]
    fn single_rows() {
        assert!(solvable(&[&[2, 4]], &[6]));
        assert!(!solvable(&[&[2, 4]], &[3]));
        assert!(solvable(&[&[3, 5]], &[1]));
    }

    #[test]
    fn coupled_rows() {
        // x + y = 1, x − y = 0 has only the rational solution (1/2, 1/2)
        assert!(!solvable(&[&[1, 1], &[1, -1]], &[1, 0]));
        assert!(solvable(&[&[1, 1], &[1, -1]], &[2, 0]));
        // 2x + 4y = 2 and 4x + 2y = 2 → x = y = 1/3
        assert!(!solvable(&[&[2, 4], &[4, 2]], &[2, 2]));
        assert!(solvable(&[&[2, 4], &[4, 2]], &[6, 6]));
    }

    #[test]
    fn frame_matches_full_test() {
        let base = IntMatrix::from_i64(&[&[2, 4, 1]]);
        let d = to_big(&[3]);
        let frame = LatticeFrame::new(&base, &d).unwrap();
        let extra: [&[i64]; 4] = [&[4, 2, 0], &[0, 2, 2], &[1, 1, 1], &[2, 4, 1]];
        for a in extra {
            for beta in -4..=4 {
                let mut c = base.clone();
                c.push_row(&to_big(a));
                let mut dd = d.clone();
                dd.push(BigInt::from(beta));
                let one = vec![(to_big(a), BigInt::from(beta))];
                assert_eq!(frame.admits(&one), integer_solvable(&c, &dd), "{a:?} {beta}");
                assert_eq!(frame.prepare(&to_big(a)).admits(&BigInt::from(beta)), integer_solvable(&c, &dd));
            }
        }
        let two = vec![(to_big(&[4, 2, 0]), BigInt::from(2)), (to_big(&[0, 2, 2]), BigInt::from(2))];
        let c = IntMatrix::from_i64(&[&[2, 4, 1], &[4, 2, 0], &[0, 2, 2]]);
        assert_eq!(frame.admits(&two), integer_solvable(&c, &to_big(&[3, 2, 2])));
    }

    #[test]
    fn small_path_matches_frame() {
        let c = IntMatrix::from_i64(&[&[6, 10, 15], &[4, -2, 7]]);
        for a in -6..=6 {
            for b in -6..=6 {
                let d = to_big(&[a, b]);
                let small = small_solvable(vec![vec![6, 10, 15], vec![4, -2, 7]], &[a, b], 3);
                assert_eq!(small, Some(LatticeFrame::new(&c, &d).is_some()), "{a} {b}");
            }
        }
        assert_eq!(ext_gcd(-4, 6), (2, 1, 1));
    }

    #[test]
    fn admitted_values_are_the_admitted_range() {
        let frame = LatticeFrame::new(&IntMatrix::from_i64(&[&[2, 4, 1]]), &to_big(&[3])).unwrap();
        for a in [[4, 2, 0], [0, 6, 3], [2, 4, 1], [0, 0, 0], [6, 0, 0]] {
            let test = frame.prepare(&to_big(&a));
            for (lo, hi) in [(-9, 9), (5, 5), (-3, -4), (-20, -11)] {
                let (lo, hi) = (BigInt::from(lo), BigInt::from(hi));
                let listed: Vec<BigInt> = test.admitted_in(&lo, &hi).collect();
                let mut scanned = Vec::new();
                let mut v = lo.clone();
                while v <= hi {
                    if test.admits(&v) {
                        scanned.push(v.clone());
                    }
                    v += 1;
                }
                assert_eq!(listed, scanned, "{a:?} [{lo}, {hi}]");
            }
        }
    }

    #[test]
    fn dependent_rows() {
        assert!(solvable(&[&[1, 2], &[2, 4]], &[1, 2]));
        assert!(!solvable(&[&[1, 2], &[2, 4]], &[1, 3]));
        assert!(integer_solvable(&IntMatrix::empty(2), &[]));
    }
}
