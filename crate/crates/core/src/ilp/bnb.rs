//! Branch-and-bound over exact LP relaxations.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};

use super::bounds::{lp_box_bounds, BoxBounds, BoxOutcome};
use super::lp::{ceil_rat, floor_rat, lp_solve, LpProblem, LpStatus};
use crate::error::{Error, Result};
use crate::linalg::matrix::{dot, integral_vector};

pub const DEFAULT_ILP_NODES: u64 = 1_000_000;

#[derive(Clone, Debug)]
pub struct IlpOptions {
    /// Relaxations solved before giving up with `BudgetExceeded`.
    pub max_nodes: u64,
    /// Return the lexicographically smallest optimum rather than any optimum.
    pub lexicographic: bool,
    /// Skip subtrees whose relaxation cannot beat the incumbent.
    pub prune: bool,
    /// Integer box containing the region; computed by LP when absent and
    /// needed for the lexicographic objective.
    pub bounds: Option<BoxBounds>,
}

impl Default for IlpOptions {
    fn default() -> Self {
        IlpOptions {
            max_nodes: DEFAULT_ILP_NODES,
            lexicographic: true,
            prune: true,
            bounds: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum IlpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IlpOutcome {
    pub status: IlpStatus,
    pub value: Option<BigInt>,
    pub point: Option<Vec<BigInt>>,
    /// Relaxations solved.
    pub nodes: u64,
}

impl IlpOutcome {
    fn empty(status: IlpStatus, nodes: u64) -> Self {
        IlpOutcome {
            status,
            value: None,
            point: None,
            nodes,
        }
    }
}

/// Exact integer minimum of `p` by depth-first branch-and-bound.
///
/// In lexicographic mode the objective `g` is replaced by
/// `g·Wⁿ + Σ x_i·W^{n−1−i}` with `W` one more than the widest box side, so
/// that distinct integer points of the box get distinct values ordered first
/// by `gᵀx` and then lexicographically.
pub fn ilp_solve(p: &LpProblem, opts: &IlpOptions) -> Result<IlpOutcome> {
    p.validate()?;
    let n = p.dim();
    let objective = if opts.lexicographic {
        let bounds = match &opts.bounds {
            Some(b) => b.clone(),
            None => match lp_box_bounds(p) {
                BoxOutcome::Bounded(b) => b,
                BoxOutcome::Empty => return Ok(IlpOutcome::empty(IlpStatus::Infeasible, 0)),
                BoxOutcome::Unbounded => return Ok(IlpOutcome::empty(IlpStatus::Unbounded, 0)),
            },
        };
        if bounds.dim() != n {
            return Err(Error::DimensionMismatch("box bounds dimension".into()));
        }
        lexicographic_objective(&p.objective, &bounds)
    } else {
        p.objective.clone()
    };

    let mut nodes = 0u64;
    let mut best: Option<(BigInt, Vec<BigInt>)> = None;
    // Each entry is a set of extra rows (x_i ≤ v or −x_i ≤ −v).
    let mut stack: Vec<Vec<(usize, bool, BigInt)>> = vec![Vec::new()];
    while let Some(extra) = stack.pop() {
        nodes += 1;
        if nodes > opts.max_nodes {
            return Err(Error::BudgetExceeded(format!(
                "branch-and-bound exceeded {} nodes",
                opts.max_nodes
            )));
        }
        let mut sub = p.with_objective(objective.clone());
        for (i, upper, v) in &extra {
            let mut row = vec![BigInt::zero(); n];
            if *upper {
                row[*i] = BigInt::one();
                sub.push_ineq(&row, v.clone());
            } else {
                row[*i] = -BigInt::one();
                sub.push_ineq(&row, -v);
            }
        }
        let out = lp_solve(&sub);
        let (value, point) = match out.status {
            LpStatus::Infeasible => continue,
            LpStatus::Unbounded => {
                if extra.is_empty() {
                    return Ok(IlpOutcome::empty(IlpStatus::Unbounded, nodes));
                }
                return Err(Error::Internal(
                    "relaxation became unbounded below a bounded root".into(),
                ));
            }
            LpStatus::Optimal => (
                out.value.expect("optimal value"),
                out.point.expect("optimal point"),
            ),
        };
        if opts.prune {
            if let Some((inc, _)) = &best {
                if value >= BigRational::from_integer(inc.clone()) {
                    continue;
                }
            }
        }
        match point.iter().position(|v| !v.is_integer()) {
            None => {
                let x = integral_vector(&point).expect("integral point");
                let h = dot(&objective, &x);
                let better = match &best {
                    None => true,
                    Some((inc, xb)) => h < *inc || (h == *inc && x < *xb),
                };
                if better {
                    best = Some((h, x));
                }
            }
            Some(i) => {
                let v = &point[i];
                let mut up = extra.clone();
                up.push((i, false, ceil_rat(v)));
                let mut down = extra;
                down.push((i, true, floor_rat(v)));
                stack.push(up);
                stack.push(down);
            }
        }
    }
    Ok(match best {
        None => IlpOutcome::empty(IlpStatus::Infeasible, nodes),
        Some((_, x)) => IlpOutcome {
            status: IlpStatus::Optimal,
            value: Some(dot(&p.objective, &x)),
            point: Some(x),
            nodes,
        },
    })
}

fn lexicographic_objective(g: &[BigInt], bounds: &BoxBounds) -> Vec<BigInt> {
    let n = g.len();
    let w = bounds.max_width() + BigInt::one();
    let top: BigInt = Pow::pow(&w, n);
    (0..n)
        .map(|i| &g[i] * &top + Pow::pow(&w, n - 1 - i))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::to_big;
    use crate::linalg::IntMatrix;

    fn problem(obj: &[i64], a: &[&[i64]], b: &[i64]) -> LpProblem {
        LpProblem::new(to_big(obj), IntMatrix::from_i64(a), to_big(b)).unwrap()
    }

    #[test]
    fn lexicographically_smallest_optimum() {
        // min x₁ + x₂ s.t. 2x₁ + 2x₂ ≥ 3, 0 ≤ x ≤ 2
        let p = problem(
            &[1, 1],
            &[&[-2, -2], &[1, 0], &[-1, 0], &[0, 1], &[0, -1]],
            &[-3, 2, 0, 2, 0],
        );
        let out = ilp_solve(&p, &IlpOptions::default()).unwrap();
        assert_eq!(out.status, IlpStatus::Optimal);
        assert_eq!(out.value, Some(BigInt::from(2)));
        assert_eq!(out.point, Some(to_big(&[0, 2])));
    }

    #[test]
    fn integral_relaxation_needs_one_node() {
        let p = problem(&[1, 0], &[&[-1, 0], &[0, -1], &[1, 1]], &[-1, 0, 3]);
        let opts = IlpOptions {
            lexicographic: false,
            ..IlpOptions::default()
        };
        let out = ilp_solve(&p, &opts).unwrap();
        assert_eq!(out.nodes, 1);
        assert_eq!(out.value, Some(BigInt::from(1)));
    }

    #[test]
    fn no_integer_in_thin_interval() {
        let p = problem(&[1], &[&[-3], &[3]], &[-1, 2]);
        let out = ilp_solve(&p, &IlpOptions::default()).unwrap();
        assert_eq!(out.status, IlpStatus::Infeasible);
        let plain = IlpOptions {
            lexicographic: false,
            ..IlpOptions::default()
        };
        assert_eq!(ilp_solve(&p, &plain).unwrap().status, IlpStatus::Infeasible);
    }

    #[test]
    fn unbounded_relaxation() {
        let p = problem(&[-1], &[&[-1]], &[0]);
        let plain = IlpOptions {
            lexicographic: false,
            ..IlpOptions::default()
        };
        assert_eq!(ilp_solve(&p, &plain).unwrap().status, IlpStatus::Unbounded);
        assert_eq!(
            ilp_solve(&p, &IlpOptions::default()).unwrap().status,
            IlpStatus::Unbounded
        );
    }

    #[test]
    fn node_budget_is_enforced() {
        // max x + y in a thin rotated strip forces branching
        let p = problem(
            &[-1, -1],
            &[&[3, -3], &[-3, 3], &[2, 2], &[-1, 0], &[0, -1]],
            &[1, 1, 11, 0, 0],
        );
        let opts = IlpOptions {
            max_nodes: 1,
            ..IlpOptions::default()
        };
        assert!(matches!(ilp_solve(&p, &opts), Err(Error::BudgetExceeded(_))));
        let full = ilp_solve(&p, &IlpOptions::default()).unwrap();
        assert_eq!(full.value, Some(BigInt::from(-4)));
        assert_eq!(full.point, Some(to_big(&[2, 2])));
    }
}
