//! Integer bounding boxes of polyhedra from per-coordinate LP extrema.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use super::lp::{ceil_rat, floor_rat, LpProblem, LpSession, LpStatus};

/// Componentwise integer bounds `lower ≤ x ≤ upper`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct BoxBounds {
    pub lower: Vec<BigInt>,
    pub upper: Vec<BigInt>,
}

impl BoxBounds {
    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    /// `max_i (upper_i − lower_i)`; zero in dimension zero.
    pub fn max_width(&self) -> BigInt {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(l, u)| u - l)
            .max()
            .unwrap_or_else(BigInt::zero)
    }

    /// Number of integer points in the box.
    pub fn volume(&self) -> BigInt {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(l, u)| u - l + BigInt::one())
            .product()
    }

    pub fn contains(&self, x: &[BigInt]) -> bool {
        x.iter()
            .zip(self.lower.iter().zip(&self.upper))
            .all(|(v, (l, u))| l <= v && v <= u)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BoxOutcome {
    Bounded(BoxBounds),
    /// The region has no integer point: the relaxation is empty or some
    /// coordinate range contains no integer.
    Empty,
    Unbounded,
}

/// Tightest integer box around the region of `p`; the objective is ignored.
pub fn lp_box_bounds(p: &LpProblem) -> BoxOutcome {
    match LpSession::new(p) {
        None => BoxOutcome::Empty,
        Some(mut s) => session_box_bounds(&mut s, p.dim()),
    }
}

/// [`lp_box_bounds`] over an already prepared region.
pub fn session_box_bounds(s: &mut LpSession, n: usize) -> BoxOutcome {
    let mut lower = Vec::with_capacity(n);
    let mut upper = Vec::with_capacity(n);
    let mut unbounded = false;
    for i in 0..n {
        let mut e = vec![BigInt::zero(); n];
        e[i] = BigInt::one();
        let lo = s.minimize(&e);
        match lo.status {
            LpStatus::Infeasible => return BoxOutcome::Empty,
            LpStatus::Unbounded => {
                unbounded = true;
                continue;
            }
            LpStatus::Optimal => {}
        }
        e[i] = -BigInt::one();
        let hi = s.minimize(&e);
        if hi.status != LpStatus::Optimal {
            unbounded = true;
            continue;
        }
        let l = ceil_rat(lo.value.as_ref().expect("optimal value"));
        let u = floor_rat(&-hi.value.expect("optimal value"));
        lower.push(l);
        upper.push(u);
    }
    if unbounded {
        return BoxOutcome::Unbounded;
    }
    if lower.iter().zip(&upper).any(|(l, u)| l > u) {
        return BoxOutcome::Empty;
    }
    BoxOutcome::Bounded(BoxBounds { lower, upper })
}
