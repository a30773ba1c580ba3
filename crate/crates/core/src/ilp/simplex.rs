//! Two-phase primal simplex over the integers.
//!
//! The tableau is stored fraction-free: every entry is an integer and the
//! true rational tableau is `T / D`, where `D > 0` is the absolute value of
//! the current basis determinant. A pivot on `(r, s)` with `p = T[r][s]`
//! updates the other rows as `T'[i][j] = (T[i][j]·p − T[i][s]·T[r][j]) / D`,
//! a division that is always exact (Bareiss/Edmonds), and sets `D' = |p|`.
//! Pivot selection follows Bland's smallest-index rule in both phases.
//!
//! Tableaux are first tried with checked `i64` entries; any overflow
//! restarts the computation with `BigInt`.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StandardOutcome {
    Optimal {
        x: Vec<BigRational>,
        value: BigRational,
    },
    Infeasible,
    Unbounded,
}

#[derive(Debug)]
struct Overflow;

type Step<T> = Result<T, Overflow>;

trait Scalar: Clone + Ord + std::fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_big(b: &BigInt) -> Step<Self>;
    fn to_big(&self) -> BigInt;
    fn mul(&self, o: &Self) -> Step<Self>;
    fn sub(&self, o: &Self) -> Step<Self>;
    fn neg(&self) -> Step<Self>;
    fn div_exact(&self, o: &Self) -> Self;
    /// `(self·p − f·y) / d`, exact by the fraction-free invariant.
    fn cross(&self, p: &Self, f: &Self, y: &Self, d: &Self) -> Step<Self> {
        Ok(self.mul(p)?.sub(&f.mul(y)?)?.div_exact(d))
    }
    fn is_zero(&self) -> bool;
    fn is_neg(&self) -> bool;
    fn is_pos(&self) -> bool;
}

impl Scalar for i64 {
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn from_big(b: &BigInt) -> Step<Self> {
        b.to_i64().ok_or(Overflow)
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn mul(&self, o: &Self) -> Step<Self> {
        self.checked_mul(*o).ok_or(Overflow)
    }
    fn sub(&self, o: &Self) -> Step<Self> {
        self.checked_sub(*o).ok_or(Overflow)
    }
    fn neg(&self) -> Step<Self> {
        self.checked_neg().ok_or(Overflow)
    }
    fn div_exact(&self, o: &Self) -> Self {
        debug_assert_eq!(self % o, 0, "inexact fraction-free division");
        self / o
    }
    fn cross(&self, p: &Self, f: &Self, y: &Self, d: &Self) -> Step<Self> {
        let v = self.mul(p)?.sub(&f.mul(y)?)?;
        Ok(if *d == 1 { v } else { Scalar::div_exact(&v, d) })
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn is_neg(&self) -> bool {
        *self < 0
    }
    fn is_pos(&self) -> bool {
        *self > 0
    }
}

impl Scalar for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_big(b: &BigInt) -> Step<Self> {
        Ok(b.clone())
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
    fn mul(&self, o: &Self) -> Step<Self> {
        Ok(self * o)
    }
    fn sub(&self, o: &Self) -> Step<Self> {
        Ok(self - o)
    }
    fn neg(&self) -> Step<Self> {
        Ok(-self)
    }
    fn div_exact(&self, o: &Self) -> Self {
        debug_assert!(Zero::is_zero(&(self % o)), "inexact fraction-free division");
        self / o
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_neg(&self) -> bool {
        Signed::is_negative(self)
    }
    fn is_pos(&self) -> bool {
        Signed::is_positive(self)
    }
}

#[derive(Clone, Debug)]
struct Tableau<T> {
    rows: Vec<Vec<T>>,
    obj: Vec<T>,
    basis: Vec<usize>,
    denom: T,
    /// Number of structural columns (the rhs is stored after them).
    width: usize,
}

enum Run {
    Optimal,
    Unbounded,
}

impl<T: Scalar> Tableau<T> {
    fn pivot(&mut self, r: usize, s: usize) -> Step<()> {
        let p = self.rows[r][s].clone();
        debug_assert!(!p.is_zero());
        let d = self.denom.clone();
        let pivot_row = std::mem::take(&mut self.rows[r]);
        let update = |row: &mut Vec<T>| -> Step<()> {
            let f = row[s].clone();
            if f.is_zero() {
                for x in row.iter_mut() {
                    if !x.is_zero() {
                        *x = x.mul(&p)?.div_exact(&d);
                    }
                }
                return Ok(());
            }
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                *x = if y.is_zero() { x.mul(&p)?.div_exact(&d) } else { x.cross(&p, &f, y, &d)? };
            }
            Ok(())
        };
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r {
                update(row)?;
            }
        }
        update(&mut self.obj)?;
        self.rows[r] = pivot_row;
        if p.is_neg() {
            for row in self.rows.iter_mut().chain(std::iter::once(&mut self.obj)) {
                for x in row.iter_mut() {
                    *x = x.neg()?;
                }
            }
            self.denom = p.neg()?;
        } else {
            self.denom = p;
        }
        self.basis[r] = s;
        Ok(())
    }

    /// Bland-rule iterations until optimality or an unbounded ray.
    fn run(&mut self) -> Step<Run> {
        let rhs = self.width;
        loop {
            let Some(s) = (0..self.width).find(|&j| self.obj[j].is_neg()) else {
                return Ok(Run::Optimal);
            };
            let mut leave: Option<usize> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][s];
                if !a.is_pos() {
                    continue;
                }
                leave = Some(match leave {
                    None => i,
                    Some(l) => {
                        // rhs_i / a_i against rhs_l / a_l, denominators positive
                        let lhs = self.rows[i][rhs].mul(&self.rows[l][s])?;
                        let rhs_v = self.rows[l][rhs].mul(a)?;
                        match lhs.cmp(&rhs_v) {
                            Ordering::Less => i,
                            Ordering::Greater => l,
                            Ordering::Equal => {
                                if self.basis[i] < self.basis[l] {
                                    i
                                } else {
                                    l
                                }
                            }
                        }
                    }
                });
            }
            match leave {
                Some(r) => self.pivot(r, s)?,
                None => return Ok(Run::Unbounded),
            }
        }
    }

    /// Phase one for `A x = b, x ≥ 0`. Returns `None` when infeasible.
    /// The returned tableau has a feasible basis over the original columns.
    fn phase_one(a: &[Vec<BigInt>], b: &[BigInt], n: usize) -> Step<Option<Self>> {
        let m = a.len();
        let mut rows: Vec<Vec<T>> = Vec::with_capacity(m);
        for (row, bi) in a.iter().zip(b) {
            assert_eq!(row.len(), n, "row length mismatch");
            let flip = bi.is_negative();
            let mut r = Vec::with_capacity(n + 1);
            for x in row.iter().chain(std::iter::once(bi)) {
                let v = T::from_big(x)?;
                r.push(if flip { v.neg()? } else { v });
            }
            rows.push(r);
        }

        // Reuse unit columns (typically slacks) as the starting basis.
        let mut basis: Vec<Option<usize>> = vec![None; m];
        for j in 0..n {
            let mut hit = None;
            let mut unit = true;
            for (i, row) in rows.iter().enumerate() {
                let v = &row[j];
                if v.is_zero() {
                    continue;
                }
                if *v == T::one() && hit.is_none() {
                    hit = Some(i);
                } else {
                    unit = false;
                    break;
                }
            }
            if let (true, Some(i)) = (unit, hit) {
                if basis[i].is_none() {
                    basis[i] = Some(j);
                }
            }
        }
        let art_rows: Vec<usize> = (0..m).filter(|&i| basis[i].is_none()).collect();
        let n_art = art_rows.len();
        let width = n + n_art;
        for (i, row) in rows.iter_mut().enumerate() {
            let rhs = row.pop().expect("rhs");
            row.resize(width, T::zero());
            if let Some(k) = art_rows.iter().position(|&r| r == i) {
                row[n + k] = T::one();
                basis[i] = Some(n + k);
            }
            row.push(rhs);
        }
        let mut tab = Tableau {
            rows,
            obj: vec![T::zero(); width + 1],
            basis: basis.into_iter().map(|b| b.expect("basis column")).collect(),
            denom: T::one(),
            width,
        };
        if n_art == 0 {
            return Ok(Some(tab));
        }
        // minimize the sum of artificials
        for &i in &art_rows {
            for j in (0..n).chain(std::iter::once(width)) {
                let v = tab.obj[j].sub(&tab.rows[i][j])?;
                tab.obj[j] = v;
            }
        }
        tab.run()?;
        if !tab.obj[width].is_zero() {
            return Ok(None);
        }
        // drive artificials out of the basis; drop redundant rows
        let mut r = 0;
        while r < tab.rows.len() {
            if tab.basis[r] < n {
                r += 1;
                continue;
            }
            if let Some(j) = (0..n).find(|&j| !tab.rows[r][j].is_zero()) {
                tab.pivot(r, j)?;
                r += 1;
            } else {
                tab.rows.remove(r);
                tab.basis.remove(r);
            }
        }
        for row in tab.rows.iter_mut() {
            row.drain(n..width);
        }
        tab.width = n;
        tab.obj = vec![T::zero(); n + 1];
        Ok(Some(tab))
    }

    /// Minimizes `cᵀx` from the current feasible basis, leaving the tableau
    /// at the final basis.
    fn optimize(&mut self, c: &[BigInt], want_point: bool) -> Step<StandardOutcome> {
        let n = self.width;
        assert_eq!(c.len(), n, "cost length mismatch");
        let cs: Vec<T> = c.iter().map(T::from_big).collect::<Step<_>>()?;
        // objective row: D·c_j − Σ c_B(i) T_ij, rhs = −Σ c_B(i) T_i,rhs
        let mut obj = Vec::with_capacity(n + 1);
        for cj in &cs {
            obj.push(self.denom.mul(cj)?);
        }
        obj.push(T::zero());
        for (i, &bj) in self.basis.iter().enumerate() {
            let cb = &cs[bj];
            if cb.is_zero() {
                continue;
            }
            for (o, t) in obj.iter_mut().zip(&self.rows[i]) {
                if !t.is_zero() {
                    *o = o.sub(&cb.mul(t)?)?;
                }
            }
        }
        self.obj = obj;
        if let Run::Unbounded = self.run()? {
            return Ok(StandardOutcome::Unbounded);
        }
        let den = self.denom.to_big();
        let mut x = Vec::new();
        if want_point {
            x = vec![BigRational::zero(); n];
            for (i, &bj) in self.basis.iter().enumerate() {
                x[bj] = BigRational::new(self.rows[i][n].to_big(), den.clone());
            }
        }
        // obj rhs holds −value·D
        let value = BigRational::new(-self.obj[n].to_big(), den);
        Ok(StandardOutcome::Optimal { x, value })
    }
}

#[derive(Clone, Debug)]
enum Inner {
    Small(Tableau<i64>),
    Big(Tableau<BigInt>),
}

/// A feasible tableau for `A x = b, x ≥ 0` that can be optimized for several
/// objectives in turn, each run starting from the previous optimal basis.
#[derive(Clone, Debug)]
pub struct StandardSession {
    a: Vec<Vec<BigInt>>,
    b: Vec<BigInt>,
    inner: Inner,
}

impl StandardSession {
    /// Returns `None` when the system is infeasible.
    pub fn new(a: Vec<Vec<BigInt>>, b: Vec<BigInt>, n: usize) -> Option<Self> {
        assert_eq!(a.len(), b.len(), "rhs length mismatch");
        let inner = match Tableau::<i64>::phase_one(&a, &b, n) {
            Ok(t) => Inner::Small(t?),
            Err(Overflow) => Inner::Big(Tableau::<BigInt>::phase_one(&a, &b, n).expect("bigint")?),
        };
        Some(StandardSession { a, b, inner })
    }

    pub fn minimize(&mut self, c: &[BigInt]) -> StandardOutcome {
        self.run(c, true)
    }

    /// Like [`StandardSession::minimize`], but an optimal outcome carries an
    /// empty point.
    pub fn minimize_value(&mut self, c: &[BigInt]) -> StandardOutcome {
        self.run(c, false)
    }

    fn run(&mut self, c: &[BigInt], want_point: bool) -> StandardOutcome {
        if let Inner::Small(t) = &mut self.inner {
            // an overflow leaves the tableau unusable; it is rebuilt below
            match t.optimize(c, want_point) {
                Ok(out) => return out,
                Err(Overflow) => {
                    let n = t.width;
                    let big = Tableau::<BigInt>::phase_one(&self.a, &self.b, n)
                        .expect("bigint")
                        .expect("feasible system stays feasible");
                    self.inner = Inner::Big(big);
                }
            }
        }
        match &mut self.inner {
            Inner::Big(t) => t.optimize(c, want_point).expect("bigint"),
            Inner::Small(_) => unreachable!(),
        }
    }
}

/// Solves `min cᵀx  s.t.  A x = b,  x ≥ 0` exactly.
///
/// `a` is given as rows; all rows must have `c.len()` entries.
pub fn solve_standard(a: &[Vec<BigInt>], b: &[BigInt], c: &[BigInt]) -> StandardOutcome {
    match StandardSession::new(a.to_vec(), b.to_vec(), c.len()) {
        None => StandardOutcome::Infeasible,
        Some(mut s) => s.minimize(c),
    }
}
