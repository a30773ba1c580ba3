//! Polyhedra `{x : Ax ≤ b}` with integer data.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::ilp::{lp_box_bounds, BoxOutcome, LpProblem};
use crate::linalg::matrix::{dot, to_big};
use crate::linalg::IntMatrix;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polytope {
    pub a: IntMatrix,
    pub b: Vec<BigInt>,
}

impl Polytope {
    pub fn new(a: IntMatrix, b: Vec<BigInt>) -> Result<Self> {
        if a.rows() != b.len() {
            return Err(Error::DimensionMismatch(format!(
                "A has {} rows but b has {} entries",
                a.rows(),
                b.len()
            )));
        }
        Ok(Polytope { a, b })
    }

    pub fn from_i64(a: &[&[i64]], b: &[i64]) -> Self {
        Polytope::new(IntMatrix::from_i64(a), to_big(b)).expect("consistent shapes")
    }

    pub fn dim(&self) -> usize {
        self.a.cols()
    }

    pub fn m(&self) -> usize {
        self.a.rows()
    }

    pub fn contains(&self, x: &[BigInt]) -> bool {
        self.a.row_iter().zip(&self.b).all(|(r, bi)| &dot(r, x) <= bi)
    }

    /// The region as an LP with a zero objective.
    pub fn relaxation(&self) -> LpProblem {
        LpProblem {
            objective: vec![BigInt::from(0); self.dim()],
            a_ineq: self.a.clone(),
            b_ineq: self.b.clone(),
            a_eq: IntMatrix::empty(self.dim()),
            b_eq: Vec::new(),
        }
    }

    pub fn box_bounds(&self) -> BoxOutcome {
        lp_box_bounds(&self.relaxation())
    }

    pub fn is_bounded(&self) -> bool {
        self.box_bounds() != BoxOutcome::Unbounded
    }
}
