//! Exact linear programs over free variables.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::simplex::{StandardOutcome, StandardSession};
use crate::error::{Error, Result};
use crate::linalg::matrix::{dot, rat_dot_int};
use crate::linalg::IntMatrix;

/// `min objectiveᵀx  s.t.  A_ineq x ≤ b_ineq,  A_eq x = b_eq`, with `x` free.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpProblem {
    pub objective: Vec<BigInt>,
    pub a_ineq: IntMatrix,
    pub b_ineq: Vec<BigInt>,
    pub a_eq: IntMatrix,
    pub b_eq: Vec<BigInt>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpOutcome {
    pub status: LpStatus,
    pub value: Option<BigRational>,
    pub point: Option<Vec<BigRational>>,
}

impl LpOutcome {
    fn without_point(status: LpStatus) -> Self {
        LpOutcome {
            status,
            value: None,
            point: None,
        }
    }
}

impl LpProblem {
    /// Inequality-only problem.
    pub fn new(objective: Vec<BigInt>, a_ineq: IntMatrix, b_ineq: Vec<BigInt>) -> Result<Self> {
        let n = objective.len();
        let p = LpProblem {
            objective,
            a_ineq,
            b_ineq,
            a_eq: IntMatrix::empty(n),
            b_eq: Vec::new(),
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_equalities(mut self, a_eq: IntMatrix, b_eq: Vec<BigInt>) -> Result<Self> {
        self.a_eq = a_eq;
        self.b_eq = b_eq;
        self.validate()?;
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.objective.len()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.dim();
        if self.a_ineq.cols() != n || self.a_eq.cols() != n {
            return Err(Error::DimensionMismatch(format!(
                "constraint matrices have {} and {} columns, objective has {n}",
                self.a_ineq.cols(),
                self.a_eq.cols()
            )));
        }
        if self.a_ineq.rows() != self.b_ineq.len() || self.a_eq.rows() != self.b_eq.len() {
            return Err(Error::DimensionMismatch(
                "right-hand side length differs from row count".into(),
            ));
        }
        Ok(())
    }

    /// Same feasible region, different objective.
    pub fn with_objective(&self, objective: Vec<BigInt>) -> Self {
        assert_eq!(objective.len(), self.dim(), "objective length mismatch");
        LpProblem {
            objective,
            ..self.clone()
        }
    }

    pub fn push_ineq(&mut self, row: &[BigInt], rhs: BigInt) {
        self.a_ineq.push_row(row);
        self.b_ineq.push(rhs);
    }

    pub fn push_eq(&mut self, row: &[BigInt], rhs: BigInt) {
        self.a_eq.push_row(row);
        self.b_eq.push(rhs);
    }

    pub fn contains_integer_point(&self, x: &[BigInt]) -> bool {
        self.a_ineq
            .row_iter()
            .zip(&self.b_ineq)
            .all(|(a, b)| &dot(a, x) <= b)
            && self.a_eq.row_iter().zip(&self.b_eq).all(|(a, b)| &dot(a, x) == b)
    }

    pub fn contains_point(&self, x: &[BigRational]) -> bool {
        let rb = |b: &BigInt| BigRational::from_integer(b.clone());
        self.a_ineq
            .row_iter()
            .zip(&self.b_ineq)
            .all(|(a, b)| rat_dot_int(a, x) <= rb(b))
            && self
                .a_eq
                .row_iter()
                .zip(&self.b_eq)
                .all(|(a, b)| rat_dot_int(a, x) == rb(b))
    }
}

/// Standard form of the region: each free variable is split as `x = u − w`
/// with `u, w ≥ 0`, and every inequality row receives a slack column;
/// equalities enter as they are.
fn standard_rows(p: &LpProblem) -> (Vec<Vec<BigInt>>, Vec<BigInt>, usize) {
    let n = p.dim();
    let mi = p.a_ineq.rows();
    let width = 2 * n + mi;
    let mut rows = Vec::with_capacity(mi + p.a_eq.rows());
    let mut rhs = Vec::with_capacity(mi + p.a_eq.rows());
    for (k, (a, b)) in p.a_ineq.row_iter().zip(&p.b_ineq).enumerate() {
        let mut row = Vec::with_capacity(width);
        row.extend(a.iter().cloned());
        row.extend(a.iter().map(|x| -x));
        row.extend((0..mi).map(|j| if j == k { BigInt::one() } else { BigInt::zero() }));
        rows.push(row);
        rhs.push(b.clone());
    }
    for (a, b) in p.a_eq.row_iter().zip(&p.b_eq) {
        let mut row = Vec::with_capacity(width);
        row.extend(a.iter().cloned());
        row.extend(a.iter().map(|x| -x));
        row.resize(width, BigInt::zero());
        rows.push(row);
        rhs.push(b.clone());
    }
    (rows, rhs, width)
}

/// A feasible region prepared once and optimized over repeatedly; each
/// objective starts from the previous optimal basis.
#[derive(Clone, Debug)]
pub struct LpSession {
    n: usize,
    width: usize,
    inner: StandardSession,
}

impl LpSession {
    /// Returns `None` when the region is empty.
    pub fn new(p: &LpProblem) -> Option<Self> {
        let (rows, rhs, width) = standard_rows(p);
        let inner = StandardSession::new(rows, rhs, width)?;
        Some(LpSession {
            n: p.dim(),
            width,
            inner,
        })
    }

    fn cost(&self, objective: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(objective.len(), self.n, "objective length mismatch");
        let mut cost = Vec::with_capacity(self.width);
        cost.extend(objective.iter().cloned());
        cost.extend(objective.iter().map(|x| -x));
        cost.resize(self.width, BigInt::zero());
        cost
    }

    /// Optimal value only; `None` when unbounded below.
    pub fn min_value(&mut self, objective: &[BigInt]) -> Option<BigRational> {
        match self.inner.minimize_value(&self.cost(objective)) {
            StandardOutcome::Optimal { value, .. } => Some(value),
            _ => None,
        }
    }

    pub fn minimize(&mut self, objective: &[BigInt]) -> LpOutcome {
        let n = self.n;
        match self.inner.minimize(&self.cost(objective)) {
            StandardOutcome::Infeasible => LpOutcome::without_point(LpStatus::Infeasible),
            StandardOutcome::Unbounded => LpOutcome::without_point(LpStatus::Unbounded),
            StandardOutcome::Optimal { x, value } => {
                let point: Vec<BigRational> = (0..n).map(|i| &x[i] - &x[n + i]).collect();
                LpOutcome {
                    status: LpStatus::Optimal,
                    value: Some(value),
                    point: Some(point),
                }
            }
        }
    }

    /// `(min, max)` of `objectiveᵀx`, each `None` when unbounded.
    pub fn range(&mut self, objective: &[BigInt]) -> (Option<BigRational>, Option<BigRational>) {
        let lo = self.min_value(objective);
        let neg: Vec<BigInt> = objective.iter().map(|x| -x).collect();
        let hi = self.min_value(&neg).map(|v| -v);
        (lo, hi)
    }
}

/// Solves the LP exactly.
pub fn lp_solve(p: &LpProblem) -> LpOutcome {
    match LpSession::new(p) {
        None => LpOutcome::without_point(LpStatus::Infeasible),
        Some(mut s) => {
            let out = s.minimize(&p.objective);
            debug_assert!(out.point.as_ref().is_none_or(|x| p.contains_point(x)));
            out
        }
    }
}

/// Feasibility of the relaxation only.
pub fn lp_feasible(p: &LpProblem) -> bool {
    LpSession::new(p).is_some()
}

/// Range of `objectiveᵀx` over the region: `(min, max)`, each `None` when
/// unbounded in that direction. Returns `None` when the region is empty.
pub fn lp_range(p: &LpProblem, objective: &[BigInt]) -> Option<(Option<BigRational>, Option<BigRational>)> {
    Some(LpSession::new(p)?.range(objective))
}

pub fn floor_rat(x: &BigRational) -> BigInt {
    x.floor().to_integer()
}

pub fn ceil_rat(x: &BigRational) -> BigInt {
    x.ceil().to_integer()
}
