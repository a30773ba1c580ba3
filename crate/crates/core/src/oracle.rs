//! Brute-force ground truth by enumerating every integer point of a bounded
//! region.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::ilp::simplex::{solve_standard, StandardOutcome};
use crate::ilp::{lp_box_bounds, BoxOutcome, LpProblem};
use crate::instance::IqpInstance;
use crate::linalg::IntMatrix;
use crate::polytope::Polytope;
use crate::solver::{SolveResult, SolveStats, SolveStatus};

pub use crate::ilp::BoxBounds;

/// Default cap on the number of box points examined.
pub const DEFAULT_BOX_BUDGET: u64 = 10_000_000;

/// Integer points of a region in lexicographic order.
pub struct FeasiblePoints {
    region: LpProblem,
    bounds: Option<BoxBounds>,
    cursor: Option<Vec<BigInt>>,
}

impl FeasiblePoints {
    fn advance(&mut self) -> Option<Vec<BigInt>> {
        let bounds = self.bounds.as_ref()?;
        let cur = self.cursor.as_mut()?;
        let out = cur.clone();
        let mut i = cur.len();
        loop {
            if i == 0 {
                self.cursor = None;
                break;
            }
            i -= 1;
            if cur[i] < bounds.upper[i] {
                cur[i] += 1;
                break;
            }
            cur[i] = bounds.lower[i].clone();
        }
        Some(out)
    }

    pub fn bounds(&self) -> Option<&BoxBounds> {
        self.bounds.as_ref()
    }
}

impl Iterator for FeasiblePoints {
    type Item = Vec<BigInt>;

    fn next(&mut self) -> Option<Vec<BigInt>> {
        loop {
            let x = self.advance()?;
            if self.region.contains_integer_point(&x) {
                return Some(x);
            }
        }
    }
}

fn enumerate_region(region: LpProblem, budget: u64) -> Result<FeasiblePoints> {
    let bounds = match lp_box_bounds(&region) {
        BoxOutcome::Bounded(b) => b,
        BoxOutcome::Empty => {
            return Ok(FeasiblePoints {
                region,
                bounds: None,
                cursor: None,
            })
        }
        BoxOutcome::Unbounded => {
            return Err(Error::InvalidInstance("region is unbounded".into()));
        }
    };
    let volume = bounds.volume();
    if volume > BigInt::from(budget) {
        return Err(Error::BudgetExceeded(format!(
            "box of {volume} points exceeds the oracle budget {budget}"
        )));
    }
    Ok(FeasiblePoints {
        region,
        cursor: Some(bounds.lower.clone()),
        bounds: Some(bounds),
    })
}

/// Every integer point of `p` (and of `Cx = d` when given), lexicographically.
pub fn enumerate_feasible(p: &Polytope, eq: Option<(&IntMatrix, &[BigInt])>, budget: u64) -> Result<FeasiblePoints> {
    let mut region = p.relaxation();
    if let Some((c, d)) = eq {
        if c.cols() != p.dim() || c.rows() != d.len() {
            return Err(Error::DimensionMismatch("equality system shape".into()));
        }
        region.a_eq = c.clone();
        region.b_eq = d.to_vec();
    }
    enumerate_region(region, budget)
}

/// Exact minimum of the objective over all feasible points.
pub fn oracle_min(inst: &IqpInstance, budget: u64) -> Result<SolveResult> {
    inst.validate()?;
    let points = match enumerate_region(inst.relaxation(), budget) {
        Ok(p) => p,
        Err(Error::InvalidInstance(msg)) => {
            return Ok(SolveResult::without_solution(
                SolveStatus::UnboundedRegion,
                SolveStats::default(),
                Some(msg),
            ))
        }
        Err(Error::BudgetExceeded(msg)) => {
            return Ok(SolveResult::without_solution(
                SolveStatus::BudgetExceeded,
                SolveStats::default(),
                Some(msg),
            ))
        }
        Err(e) => return Err(e),
    };
    let mut best: Option<(BigInt, Vec<BigInt>)> = None;
    let mut count = 0u64;
    for x in points {
        count += 1;
        let v = inst.objective(&x);
        // lexicographic order means the first point with the minimum value wins
        if best.as_ref().is_none_or(|(bv, _)| v < *bv) {
            best = Some((v, x));
        }
    }
    let stats = SolveStats {
        leaves: count,
        ..SolveStats::default()
    };
    Ok(SolveResult::from_best(best, stats))
}

/// Vertices of the integer hull `conv(P ∩ ℤⁿ)`.
///
/// A feasible point is a vertex iff it is not a convex combination of the
/// other feasible points, decided by an exact LP. Points that are midpoints
/// of two others are discarded first.
pub fn brute_integer_hull_vertices(p: &Polytope, budget: u64) -> Result<Vec<Vec<BigInt>>> {
    let points: Vec<Vec<BigInt>> = enumerate_feasible(p, None, budget)?.collect();
    let set: HashSet<&Vec<BigInt>> = points.iter().collect();
    let mut out = Vec::new();
    for (k, v) in points.iter().enumerate() {
        let is_midpoint = points.iter().enumerate().any(|(j, u)| {
            j != k && {
                let w: Vec<BigInt> = v.iter().zip(u).map(|(a, b)| a * 2 - b).collect();
                set.contains(&w)
            }
        });
        if is_midpoint {
            continue;
        }
        if !in_convex_hull(v, points.iter().enumerate().filter(|(j, _)| *j != k).map(|(_, u)| u)) {
            out.push(v.clone());
        }
    }
    Ok(out)
}

/// Whether `v` is a convex combination of `others`.
pub fn in_convex_hull<'a>(v: &[BigInt], others: impl Iterator<Item = &'a Vec<BigInt>>) -> bool {
    let others: Vec<&Vec<BigInt>> = others.collect();
    if others.is_empty() {
        return false;
    }
    let n = v.len();
    // rows: Σ λ_u u_i = v_i for each i, Σ λ_u = 1; λ ≥ 0
    let mut rows: Vec<Vec<BigInt>> = (0..n)
        .map(|i| others.iter().map(|u| u[i].clone()).collect())
        .collect();
    rows.push(vec![BigInt::one(); others.len()]);
    let mut rhs = v.to_vec();
    rhs.push(BigInt::one());
    let cost = vec![BigInt::zero(); others.len()];
    matches!(solve_standard(&rows, &rhs, &cost), StandardOutcome::Optimal { .. })
}

/// Number of integer points in the region's LP box, if bounded.
pub fn box_volume(p: &Polytope) -> Option<u64> {
    match p.box_bounds() {
        BoxOutcome::Bounded(b) => b.volume().to_u64(),
        BoxOutcome::Empty => Some(0),
        BoxOutcome::Unbounded => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::to_big;

    fn pts(v: &[&[i64]]) -> Vec<Vec<BigInt>> {
        v.iter().map(|x| to_big(x)).collect()
    }

    fn square(w: i64) -> Polytope {
        Polytope::from_i64(&[&[1, 0], &[-1, 0], &[0, 1], &[0, -1]], &[w, 0, w, 0])
    }

    #[test]
    fn unit_square_in_lexicographic_order() {
        let got: Vec<_> = enumerate_feasible(&square(1), None, 100).unwrap().collect();
        assert_eq!(got, pts(&[&[0, 0], &[0, 1], &[1, 0], &[1, 1]]));
    }

    #[test]
    fn corner_only() {
        let p = Polytope::from_i64(&[&[1, 1], &[-1, 0], &[0, -1]], &[0, 0, 0]);
        let got: Vec<_> = enumerate_feasible(&p, None, 100).unwrap().collect();
        assert_eq!(got, pts(&[&[0, 0]]));
    }

    #[test]
    fn with_equality() {
        let c = IntMatrix::from_i64(&[&[1, -1]]);
        let d = to_big(&[0]);
        let got: Vec<_> = enumerate_feasible(&square(2), Some((&c, &d)), 100).unwrap().collect();
        assert_eq!(got, pts(&[&[0, 0], &[1, 1], &[2, 2]]));
    }

    #[test]
    fn budget_and_unbounded() {
        assert!(matches!(
            enumerate_feasible(&square(9), None, 99),
            Err(Error::BudgetExceeded(_))
        ));
        let half = Polytope::from_i64(&[&[1, 0]], &[0]);
        assert!(enumerate_feasible(&half, None, 100).is_err());
    }

    #[test]
    fn oracle_examples() {
        let (a, b) = IqpInstance::box_rows(2, 2);
        let inst = IqpInstance::new(IntMatrix::from_i64(&[&[1, 2], &[2, 1]]), to_big(&[0, 0]), a.clone(), b.clone()).unwrap();
        let r = oracle_min(&inst, 1000).unwrap();
        assert_eq!(r.value, Some(BigInt::from(-8)));
        assert_eq!(r.witness, Some(to_big(&[-2, 2])));

        let inst = IqpInstance::new(IntMatrix::from_i64(&[&[1, 0], &[0, -1]]), to_big(&[0, 0]), a, b).unwrap();
        let r = oracle_min(&inst, 1000).unwrap();
        assert_eq!(r.value, Some(BigInt::from(-4)));
        assert_eq!(r.witness, Some(to_big(&[0, -2])));

        let empty = IqpInstance::from_i64(&[&[1]], &[0], &[&[1], &[-1]], &[0, -1]).unwrap();
        assert_eq!(oracle_min(&empty, 1000).unwrap().status, SolveStatus::Infeasible);
    }

    #[test]
    fn hull_vertices() {
        assert_eq!(
            brute_integer_hull_vertices(&square(3), 1000).unwrap(),
            pts(&[&[0, 0], &[0, 3], &[3, 0], &[3, 3]])
        );
        let tri = Polytope::from_i64(&[&[2, 2], &[-1, 0], &[0, -1]], &[3, 0, 0]);
        assert_eq!(
            brute_integer_hull_vertices(&tri, 1000).unwrap(),
            pts(&[&[0, 0], &[0, 1], &[1, 0]])
        );
        let single = Polytope::from_i64(&[&[1], &[-1]], &[2, -2]);
        assert_eq!(brute_integer_hull_vertices(&single, 1000).unwrap(), pts(&[&[2]]));
    }

    #[test]
    fn hull_of_segment_interior_excluded() {
        // points (0,0),(1,1),(2,2): the middle is not a vertex
        let c = IntMatrix::from_i64(&[&[1, -1]]);
        let d = to_big(&[0]);
        let line: Vec<_> = enumerate_feasible(&square(2), Some((&c, &d)), 100).unwrap().collect();
        assert!(in_convex_hull(&line[1], [&line[0], &line[2]].into_iter()));
        assert!(!in_convex_hull(&line[0], [&line[1], &line[2]].into_iter()));
    }
}
