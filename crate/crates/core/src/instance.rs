//! The IQP instance model: `min xᵀQx + cᵀx  s.t.  Ax ≤ b,  C₀x = d₀,  x ∈ ℤⁿ`.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::ilp::LpProblem;
use crate::linalg::matrix::{dot, quad_form};
use crate::linalg::solve::has_full_row_rank;
use crate::linalg::IntMatrix;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IqpInstance {
    pub n: usize,
    pub q: IntMatrix,
    pub c: Vec<BigInt>,
    pub a: IntMatrix,
    pub b: Vec<BigInt>,
    /// Optional initial equality system `(C₀, d₀)`.
    pub equalities: Option<(IntMatrix, Vec<BigInt>)>,
}

impl IqpInstance {
    pub fn new(q: IntMatrix, c: Vec<BigInt>, a: IntMatrix, b: Vec<BigInt>) -> Result<Self> {
        let inst = IqpInstance {
            n: c.len(),
            q,
            c,
            a,
            b,
            equalities: None,
        };
        inst.validate()?;
        Ok(inst)
    }

    pub fn with_equalities(mut self, c0: IntMatrix, d0: Vec<BigInt>) -> Result<Self> {
        self.equalities = Some((c0, d0));
        self.validate()?;
        Ok(self)
    }

    /// Convenience constructor from small integers.
    pub fn from_i64(q: &[&[i64]], c: &[i64], a: &[&[i64]], b: &[i64]) -> Result<Self> {
        let n = c.len();
        let a = if a.is_empty() {
            IntMatrix::empty(n)
        } else {
            IntMatrix::from_i64(a)
        };
        let q = if q.is_empty() {
            IntMatrix::zeros(0, 0)
        } else {
            IntMatrix::from_i64(q)
        };
        Self::new(q, crate::linalg::matrix::to_big(c), a, crate::linalg::matrix::to_big(b))
    }

    /// `[−w, w]ⁿ` as the rows `x_i ≤ w` and `−x_i ≤ w`.
    pub fn box_rows(n: usize, w: i64) -> (IntMatrix, Vec<BigInt>) {
        let mut a = IntMatrix::empty(n);
        let mut b = Vec::with_capacity(2 * n);
        for i in 0..n {
            for s in [1i64, -1] {
                let mut row = vec![BigInt::from(0); n];
                row[i] = BigInt::from(s);
                a.push_row(&row);
                b.push(BigInt::from(w));
            }
        }
        (a, b)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n;
        if self.q.rows() != n || self.q.cols() != n {
            return Err(Error::DimensionMismatch(format!(
                "Q is {}x{}, expected {n}x{n}",
                self.q.rows(),
                self.q.cols()
            )));
        }
        if !self.q.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        if self.c.len() != n {
            return Err(Error::DimensionMismatch(format!("c has {} entries, expected {n}", self.c.len())));
        }
        if self.a.cols() != n {
            return Err(Error::DimensionMismatch(format!("A has {} columns, expected {n}", self.a.cols())));
        }
        if self.a.rows() != self.b.len() {
            return Err(Error::DimensionMismatch(format!(
                "A has {} rows but b has {} entries",
                self.a.rows(),
                self.b.len()
            )));
        }
        if let Some((c0, d0)) = &self.equalities {
            if c0.cols() != n || c0.rows() != d0.len() {
                return Err(Error::DimensionMismatch("equality system shape".into()));
            }
            if !has_full_row_rank(c0) {
                return Err(Error::RankDeficientRows);
            }
        }
        Ok(())
    }

    pub fn m(&self) -> usize {
        self.a.rows()
    }

    /// `xᵀQx + cᵀx`.
    pub fn objective(&self, x: &[BigInt]) -> BigInt {
        quad_form(&self.q, x) + dot(&self.c, x)
    }

    pub fn is_feasible(&self, x: &[BigInt]) -> bool {
        x.len() == self.n && self.relaxation().contains_integer_point(x)
    }

    /// The continuous feasible region with a zero objective.
    pub fn relaxation(&self) -> LpProblem {
        let mut p = LpProblem {
            objective: vec![BigInt::from(0); self.n],
            a_ineq: self.a.clone(),
            b_ineq: self.b.clone(),
            a_eq: IntMatrix::empty(self.n),
            b_eq: Vec::new(),
        };
        if let Some((c0, d0)) = &self.equalities {
            p.a_eq = c0.clone();
            p.b_eq = d0.clone();
        }
        p
    }

    pub fn equality_rows(&self) -> (IntMatrix, Vec<BigInt>) {
        match &self.equalities {
            Some((c0, d0)) => (c0.clone(), d0.clone()),
            None => (IntMatrix::empty(self.n), Vec::new()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::to_big;

    #[test]
    fn rejects_asymmetric_objective() {
        let r = IqpInstance::from_i64(&[&[0, 1], &[0, 0]], &[0, 0], &[&[1, 0]], &[1]);
        assert_eq!(r, Err(Error::NotSymmetric));
    }

    #[test]
    fn rejects_dependent_equalities() {
        let inst = IqpInstance::from_i64(&[&[1]], &[0], &[&[1]], &[1]).unwrap();
        let r = inst.with_equalities(IntMatrix::from_i64(&[&[1], &[2]]), to_big(&[0, 0]));
        assert_eq!(r, Err(Error::RankDeficientRows));
    }

    #[test]
    fn objective_and_feasibility() {
        let (a, b) = IqpInstance::box_rows(2, 2);
        let inst = IqpInstance::new(IntMatrix::from_i64(&[&[1, 2], &[2, 1]]), to_big(&[1, 0]), a, b).unwrap();
        // (−2, 2): 4 − 16 + 4 − 2
        assert_eq!(inst.objective(&to_big(&[-2, 2])), BigInt::from(-10));
        assert!(inst.is_feasible(&to_big(&[2, -2])));
        assert!(!inst.is_feasible(&to_big(&[3, 0])));
    }
}
