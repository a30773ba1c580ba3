//! Flat leaves: the objective is affine on the node's subspace, so the
//! remaining problem is an ILP.

use num_bigint::BigInt;
use num_rational::BigRational;

use super::node::Node;
use crate::error::{Error, Result};
use crate::ilp::{ilp_solve, BoxBounds, IlpOptions, IlpStatus};
use crate::instance::IqpInstance;
use crate::linalg::matrix::integral_vector;
use crate::linalg::solve::common_denominator;
use crate::linalg::solve_rational_system;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LeafOutcome {
    /// Best value and its lexicographically smallest witness.
    pub best: Option<(BigInt, Vec<BigInt>)>,
    pub ilp_nodes: u64,
}

/// Solves a node whose form vanishes on `ker C`.
///
/// With a particular solution `x₀` of `Cx = d` and `g = 2Qx₀ + c`, every
/// `x` in the affine subspace satisfies `f(x) = gᵀx − x₀ᵀQx₀`. The ILP
/// minimizes `gᵀx` (scaled to integers); the value reported is `f` evaluated
/// directly, checked against the identity.
pub fn flat_leaf(node: &Node, inst: &IqpInstance, bounds: &BoxBounds, max_ilp_nodes: u64) -> Result<LeafOutcome> {
    let Some(x0) = solve_rational_system(&node.c, &node.d) else {
        return Ok(LeafOutcome::default());
    };
    if node.r() == 0 {
        let best = integral_vector(&x0)
            .filter(|x| inst.is_feasible(x))
            .map(|x| (inst.objective(&x), x));
        return Ok(LeafOutcome { best, ilp_nodes: 0 });
    }

    let qx0 = inst.q.mul_rat_vec(&x0);
    let g: Vec<BigRational> = qx0
        .iter()
        .zip(&inst.c)
        .map(|(v, ci)| v * BigRational::from_integer(BigInt::from(2)) + BigRational::from_integer(ci.clone()))
        .collect();
    let den = common_denominator(&g);
    let g_int: Vec<BigInt> = g.iter().map(|v| (v * BigRational::from_integer(den.clone())).to_integer()).collect();

    let mut lp = node.region(inst);
    lp.objective = g_int;
    let opts = IlpOptions {
        max_nodes: max_ilp_nodes,
        lexicographic: true,
        prune: true,
        bounds: Some(bounds.clone()),
    };
    let out = ilp_solve(&lp, &opts)?;
    match out.status {
        IlpStatus::Infeasible => Ok(LeafOutcome {
            best: None,
            ilp_nodes: out.nodes,
        }),
        IlpStatus::Unbounded => Err(Error::Internal("leaf ILP unbounded inside a bounded region".into())),
        IlpStatus::Optimal => {
            let x = out.point.expect("optimal point");
            let value = inst.objective(&x);
            let xr: Vec<BigRational> = x.iter().cloned().map(BigRational::from_integer).collect();
            let x0qx0: BigRational = x0.iter().zip(&qx0).map(|(a, b)| a * b).sum();
            let gx: BigRational = g.iter().zip(&xr).map(|(a, b)| a * b).sum();
            if BigRational::from_integer(value.clone()) != gx - x0qx0 {
                return Err(Error::Internal(format!(
                    "affine objective identity fails at leaf (f = {value})"
                )));
            }
            Ok(LeafOutcome {
                best: Some((value, x)),
                ilp_nodes: out.nodes,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ilp::{lp_box_bounds, BoxOutcome};
    use crate::linalg::matrix::to_big;
    use crate::linalg::IntMatrix;

    fn bounds_of(inst: &IqpInstance) -> BoxBounds {
        match lp_box_bounds(&inst.relaxation()) {
            BoxOutcome::Bounded(b) => b,
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn linear_objective_on_interval() {
        // Q = 0, c = 1, x ∈ [2, 5]
        let inst = IqpInstance::from_i64(&[&[0]], &[1], &[&[1], &[-1]], &[5, -2]).unwrap();
        let node = Node::new(&inst, Vec::new(), 100).unwrap();
        let out = flat_leaf(&node, &inst, &bounds_of(&inst), 1000).unwrap();
        assert_eq!(out.best, Some((BigInt::from(2), to_big(&[2]))));
    }

    #[test]
    fn point_leaf_requires_integrality() {
        let bounds = BoxBounds {
            lower: to_big(&[-3]),
            upper: to_big(&[3]),
        };
        let base = IqpInstance::from_i64(&[&[1]], &[0], &[&[1], &[-1]], &[3, 3]).unwrap();
        let inst = base.clone().with_equalities(IntMatrix::from_i64(&[&[2]]), to_big(&[1])).unwrap();
        let node = Node::new(&inst, Vec::new(), 100).unwrap();
        assert_eq!(flat_leaf(&node, &inst, &bounds, 1000).unwrap().best, None);

        let inst = base.with_equalities(IntMatrix::from_i64(&[&[2]]), to_big(&[4])).unwrap();
        let node = Node::new(&inst, Vec::new(), 100).unwrap();
        let out = flat_leaf(&node, &inst, &bounds, 1000).unwrap();
        assert_eq!(out.best, Some((BigInt::from(4), to_big(&[2]))));
    }

    #[test]
    fn affine_identity_on_a_line() {
        // Q = [[0,1],[1,0]] restricted to x₁ = 1 is flat: f = 2x₂ + c·x
        let (a, b) = IqpInstance::box_rows(2, 3);
        let inst = IqpInstance::new(IntMatrix::from_i64(&[&[0, 1], &[1, 0]]), to_big(&[1, -1]), a, b)
            .unwrap()
            .with_equalities(IntMatrix::from_i64(&[&[1, 0]]), to_big(&[1]))
            .unwrap();
        let node = Node::new(&inst, Vec::new(), 100).unwrap();
        assert!(node.classes.is_flat());
        let out = flat_leaf(&node, &inst, &bounds_of(&inst), 1000).unwrap();
        // f(1, x₂) = 2x₂ + 1 − x₂ = x₂ + 1, minimized at x₂ = −3
        assert_eq!(out.best, Some((BigInt::from(-2), to_big(&[1, -3]))));
    }
}
