//! Integer hulls of polytopes: vertex enumeration, corner relaxations and the
//! slab cells that isolate each vertex of `P_I = conv(P ∩ ℤⁿ)`.
//!
//! Around every vertex `x̄` of `P` the corner relaxation
//! `P_x̄ = P ∩ {‖x − x̄‖∞ ≤ nΔ}` keeps the rows whose slack at `x̄` is at most
//! `n²L_AΔ`, plus the box rows. A cell fixes, for each of those rows, a slab
//! index `j ∈ {0, …, M}`: `j = 0` means zero slack and `j ≥ 1` means slack in
//! `[2^{j−1}, 2^j]`. Slacks of integer points are integers, so the slabs cover
//! every slack below `2^M`. A cell containing a vertex of the integer hull
//! contains no other integer point, so one integer feasibility problem per
//! cell recovers a superset of the hull's vertices.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::ilp::bnb::{ilp_solve, IlpOptions, IlpStatus, DEFAULT_ILP_NODES};
use crate::ilp::lp::{ceil_rat, floor_rat};
use crate::ilp::{LpProblem, LpSession};
use crate::linalg::det::Combinations;
use crate::linalg::matrix::{dot, quad_form, rat_dot_int};
use crate::linalg::{inertia, max_minor_of_order, solve_rational_system, IntMatrix, DEFAULT_MINOR_BUDGET};
use crate::polytope::Polytope;
use crate::solver::{SolveResult, SolveStats, SolveStatus};

/// Default cap on the number of partial and complete cells visited.
pub const DEFAULT_MAX_CELLS: u64 = 10_000_000;

#[derive(Clone, Debug)]
pub struct HullOptions {
    pub max_cells: u64,
    pub max_ilp_nodes: u64,
    /// Cap on the `n × n` minors enumerated for Δ(A).
    pub minor_budget: u64,
}

impl Default for HullOptions {
    fn default() -> Self {
        HullOptions {
            max_cells: DEFAULT_MAX_CELLS,
            max_ilp_nodes: DEFAULT_ILP_NODES,
            minor_budget: DEFAULT_MINOR_BUDGET,
        }
    }
}

fn rat(v: &BigInt) -> BigRational {
    BigRational::from_integer(v.clone())
}

/// All vertices of `P`, sorted and without repetitions. Every `n`-subset of
/// rows with a nonsingular submatrix is solved and kept when feasible.
pub fn polytope_vertices(p: &Polytope) -> Vec<Vec<BigRational>> {
    let n = p.dim();
    let mut out = BTreeSet::new();
    if n == 0 || p.m() < n {
        return Vec::new();
    }
    for rows in Combinations::new(p.m(), n) {
        let sub = IntMatrix::from_rows(n, rows.iter().map(|&i| p.a.row(i).to_vec()).collect())
            .expect("rows of equal length");
        if crate::linalg::rank(&sub) < n {
            continue;
        }
        let rhs: Vec<BigInt> = rows.iter().map(|&i| p.b[i].clone()).collect();
        let x = solve_rational_system(&sub, &rhs).expect("nonsingular system");
        if contains_rational(p, &x) {
            out.insert(x);
        }
    }
    out.into_iter().collect()
}

fn contains_rational(p: &Polytope, x: &[BigRational]) -> bool {
    p.a.row_iter().zip(&p.b).all(|(r, bi)| rat_dot_int(r, x) <= rat(bi))
}

/// `L_A = max |a_ij|` and `Δ(A)`, the largest `|det|` over `n × n` submatrices.
pub fn row_parameters(a: &IntMatrix, budget: u64) -> Result<(BigInt, BigInt)> {
    let delta = max_minor_of_order(a, a.cols(), budget)?;
    Ok((a.max_abs(), delta))
}

fn smallest_exponent_above(v: &BigInt) -> u32 {
    // smallest M with v < 2^M
    if v.is_negative() {
        return 0;
    }
    v.bits() as u32
}

/// The smallest `M` with `2n²·L_A·Δ(A) < 2^M`.
pub fn b_independent_m(a: &IntMatrix, budget: u64) -> Result<u32> {
    let n = a.cols();
    let (l, delta) = row_parameters(a, budget)?;
    let lhs = BigInt::from(2 * n * n) * l * delta;
    Ok(smallest_exponent_above(&lhs))
}

/// `2·mⁿ·(6n²M)^{n−1}`, the bound on `|vert(P_I)|`.
pub fn vertex_count_bound(m: usize, n: usize, big_m: u32) -> BigInt {
    if n == 0 {
        return BigInt::from(2);
    }
    let base = BigInt::from(6 * n * n) * big_m;
    BigInt::from(2) * num_traits::pow(BigInt::from(m), n) * num_traits::pow(base, n - 1)
}

/// `P_x̄` for one vertex `x̄` of `P`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CornerRelaxation {
    pub center: Vec<BigRational>,
    /// Indices of the rows of `P` that are kept.
    pub kept_rows: Vec<usize>,
    /// The kept rows followed by the box rows `x_i ≤ u_i`, `−x_i ≤ −l_i`.
    pub polytope: Polytope,
}

impl CornerRelaxation {
    /// Box bounds are rounded inward to integers, which keeps every integer
    /// point of the real box.
    pub fn new(p: &Polytope, center: Vec<BigRational>, l: &BigInt, delta: &BigInt) -> Self {
        let n = p.dim();
        let radius = rat(&(BigInt::from(n) * delta));
        let limit = rat(&(BigInt::from(n * n) * l * delta));
        let mut a = IntMatrix::empty(n);
        let mut b = Vec::new();
        let mut kept_rows = Vec::new();
        for (i, (row, bi)) in p.a.row_iter().zip(&p.b).enumerate() {
            if rat(bi) - rat_dot_int(row, &center) <= limit {
                kept_rows.push(i);
                a.push_row(row);
                b.push(bi.clone());
            }
        }
        for (i, xi) in center.iter().enumerate() {
            let mut e = vec![BigInt::zero(); n];
            e[i] = BigInt::one();
            a.push_row(&e);
            b.push(floor_rat(&(xi + &radius)));
            e[i] = -BigInt::one();
            a.push_row(&e);
            b.push(-ceil_rat(&(xi - &radius)));
        }
        let polytope = Polytope::new(a, b).expect("consistent shapes");
        CornerRelaxation {
            center,
            kept_rows,
            polytope,
        }
    }
}

/// A cell of one corner relaxation: slab index `j[i]` for its row `i`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cell {
    pub corner: usize,
    pub j: Vec<u32>,
}

/// Slack interval `[lo, hi]` of slab `j`.
fn slab(j: u32) -> (BigInt, BigInt) {
    if j == 0 {
        (BigInt::zero(), BigInt::zero())
    } else {
        (BigInt::one() << (j - 1), BigInt::one() << j)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HullCandidate {
    pub point: Vec<BigInt>,
    /// Every cell whose integer feasibility problem returned this point.
    pub cells: Vec<Cell>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HullCandidateSet {
    pub big_m: u32,
    pub l: BigInt,
    pub delta: BigInt,
    pub corners: Vec<CornerRelaxation>,
    /// Sorted by point.
    pub candidates: Vec<HullCandidate>,
    /// Partial and complete cells visited.
    pub cells_visited: u64,
    /// Complete cells whose integer feasibility problem was solved.
    pub cells_solved: u64,
}

impl HullCandidateSet {
    pub fn points(&self) -> impl Iterator<Item = &Vec<BigInt>> + '_ {
        self.candidates.iter().map(|c| &c.point)
    }

    pub fn contains(&self, x: &[BigInt]) -> bool {
        self.candidates.binary_search_by(|c| c.point.as_slice().cmp(x)).is_ok()
    }

    fn slacks(&self, corner: usize, x: &[BigInt]) -> Option<Vec<BigInt>> {
        let p = &self.corners.get(corner)?.polytope;
        let s: Vec<BigInt> = p.a.row_iter().zip(&p.b).map(|(r, bi)| bi - dot(r, x)).collect();
        s.iter().all(|v| !v.is_negative()).then_some(s)
    }

    pub fn cell_contains(&self, cell: &Cell, x: &[BigInt]) -> bool {
        let Some(s) = self.slacks(cell.corner, x) else {
            return false;
        };
        s.len() == cell.j.len()
            && s.iter().zip(&cell.j).all(|(v, &j)| {
                let (lo, hi) = slab(j);
                lo <= *v && *v <= hi
            })
    }

    /// Every cell, over all corner relaxations, that contains `x`.
    pub fn cells_containing(&self, x: &[BigInt]) -> Vec<Cell> {
        let mut out = Vec::new();
        for corner in 0..self.corners.len() {
            let Some(s) = self.slacks(corner, x) else {
                continue;
            };
            let options: Vec<Vec<u32>> = s
                .iter()
                .map(|v| {
                    (0..=self.big_m)
                        .filter(|&j| {
                            let (lo, hi) = slab(j);
                            lo <= *v && *v <= hi
                        })
                        .collect()
                })
                .collect();
            if options.iter().any(Vec::is_empty) {
                continue;
            }
            let mut idx = vec![0usize; options.len()];
            'product: loop {
                out.push(Cell {
                    corner,
                    j: idx.iter().zip(&options).map(|(&k, o)| o[k]).collect(),
                });
                let mut p = idx.len();
                loop {
                    if p == 0 {
                        break 'product;
                    }
                    p -= 1;
                    idx[p] += 1;
                    if idx[p] < options[p].len() {
                        break;
                    }
                    idx[p] = 0;
                }
            }
        }
        out
    }
}

struct CellSearch<'a> {
    opts: &'a HullOptions,
    big_m: u32,
    visited: u64,
    solved: u64,
    found: BTreeMap<Vec<BigInt>, Vec<Cell>>,
}

impl CellSearch<'_> {
    fn descend(&mut self, corner: usize, rows: &Polytope, region: &mut LpProblem, j: &mut Vec<u32>) -> Result<()> {
        self.visited += 1;
        if self.visited > self.opts.max_cells {
            return Err(Error::BudgetExceeded(format!(
                "cell enumeration exceeded {} cells",
                self.opts.max_cells
            )));
        }
        let level = j.len();
        if level == rows.m() {
            self.solved += 1;
            let ilp = IlpOptions {
                max_nodes: self.opts.max_ilp_nodes,
                lexicographic: false,
                ..IlpOptions::default()
            };
            let out = ilp_solve(region, &ilp)?;
            if out.status == IlpStatus::Optimal {
                let x = out.point.expect("optimal point");
                self.found.entry(x).or_default().push(Cell {
                    corner,
                    j: j.clone(),
                });
            }
            return Ok(());
        }
        let Some(mut lp) = LpSession::new(region) else {
            return Ok(());
        };
        let a = rows.a.row(level).to_vec();
        let b = &rows.b[level];
        let (lo, hi) = lp.range(&a);
        let (lo, hi) = (lo.expect("bounded cell"), hi.expect("bounded cell"));
        // slack range over the partial cell
        let (smin, smax) = (rat(b) - hi, rat(b) - lo);
        for k in 0..=self.big_m {
            let (slo, shi) = slab(k);
            if rat(&slo) > smax || rat(&shi) < smin {
                continue;
            }
            let (ineq, eq) = (region.a_ineq.rows(), region.a_eq.rows());
            if k == 0 {
                region.push_eq(&a, b.clone());
            } else {
                let neg: Vec<BigInt> = a.iter().map(|v| -v).collect();
                region.push_ineq(&a, b - &slo);
                region.push_ineq(&neg, &shi - b);
            }
            j.push(k);
            let res = self.descend(corner, rows, region, j);
            j.pop();
            truncate(region, ineq, eq);
            res?;
        }
        Ok(())
    }
}

fn truncate(p: &mut LpProblem, ineq: usize, eq: usize) {
    let n = p.dim();
    let keep = |m: &IntMatrix, k: usize| {
        IntMatrix::from_rows(n, m.row_iter().take(k).map(<[BigInt]>::to_vec).collect()).expect("same width")
    };
    p.a_ineq = keep(&p.a_ineq, ineq);
    p.b_ineq.truncate(ineq);
    p.a_eq = keep(&p.a_eq, eq);
    p.b_eq.truncate(eq);
}

/// A set of feasible integer points containing every vertex of `P_I`.
///
/// Corner relaxations that coincide are searched once.
pub fn integer_hull_vertex_superset(p: &Polytope, opts: &HullOptions) -> Result<HullCandidateSet> {
    if !p.is_bounded() {
        return Err(Error::InvalidInstance("polytope is unbounded".into()));
    }
    let n = p.dim();
    let (l, delta) = row_parameters(&p.a, opts.minor_budget)?;
    let big_m = smallest_exponent_above(&(BigInt::from(2 * n * n) * &l * &delta));
    let mut corners: Vec<CornerRelaxation> = Vec::new();
    for v in polytope_vertices(p) {
        let c = CornerRelaxation::new(p, v, &l, &delta);
        if !corners.iter().any(|o| o.polytope == c.polytope) {
            corners.push(c);
        }
    }
    let mut search = CellSearch {
        opts,
        big_m,
        visited: 0,
        solved: 0,
        found: BTreeMap::new(),
    };
    for (k, corner) in corners.iter().enumerate() {
        let mut region = corner.polytope.relaxation();
        search.descend(k, &corner.polytope, &mut region, &mut Vec::new())?;
    }
    let candidates = std::mem::take(&mut search.found)
        .into_iter()
        .map(|(point, cells)| HullCandidate { point, cells })
        .collect();
    Ok(HullCandidateSet {
        big_m,
        l,
        delta,
        corners,
        candidates,
        cells_visited: search.visited,
        cells_solved: search.solved,
    })
}

/// Minimizes concave quadratics over the integer points of one polytope,
/// reusing its hull candidates.
pub struct ConcaveMinimizer {
    polytope: Polytope,
    candidates: HullCandidateSet,
}

impl ConcaveMinimizer {
    pub fn new(p: &Polytope, opts: &HullOptions) -> Result<Self> {
        Ok(ConcaveMinimizer {
            polytope: p.clone(),
            candidates: integer_hull_vertex_superset(p, opts)?,
        })
    }

    /// Reuses a candidate set computed earlier for `p`.
    pub fn with_candidates(p: &Polytope, candidates: HullCandidateSet) -> Self {
        ConcaveMinimizer {
            polytope: p.clone(),
            candidates,
        }
    }

    pub fn candidates(&self) -> &HullCandidateSet {
        &self.candidates
    }

    /// Minimum of `xᵀQx + cᵀx` with the lexicographically smallest
    /// minimizer. The minimizers of a concave function over `P_I` form a
    /// union of faces, and the lexicographically smallest integer point of a
    /// face is one of its vertices, so it is always among the candidates.
    pub fn minimize(&self, q: &IntMatrix, c: &[BigInt]) -> Result<SolveResult> {
        let n = self.polytope.dim();
        if q.rows() != n || q.cols() != n || c.len() != n {
            return Err(Error::DimensionMismatch("objective does not match the polytope".into()));
        }
        if !q.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        let positive = inertia(q)?.positive;
        if positive > 0 {
            return Err(Error::NotConcave(positive));
        }
        let stats = SolveStats {
            leaves: self.candidates.candidates.len() as u64,
            ..SolveStats::default()
        };
        let mut best: Option<(BigInt, Vec<BigInt>)> = None;
        // candidates are sorted, so the first minimizer is the smallest
        for x in self.candidates.points() {
            let v = quad_form(q, x) + dot(c, x);
            if best.as_ref().is_none_or(|(bv, _)| v < *bv) {
                best = Some((v, x.clone()));
            }
        }
        if best.is_none() {
            let ilp = ilp_solve(&self.polytope.relaxation(), &IlpOptions::default())?;
            if ilp.status == IlpStatus::Optimal {
                return Err(Error::Internal("no hull candidates but the polytope has integer points".into()));
            }
        }
        Ok(SolveResult::from_best(best, stats))
    }
}

/// Exact minimum of a concave quadratic over `P ∩ ℤⁿ`.
pub fn concave_minimize(p: &Polytope, q: &IntMatrix, c: &[BigInt], opts: &HullOptions) -> Result<SolveResult> {
    if !p.is_bounded() {
        return Ok(SolveResult::without_solution(
            SolveStatus::UnboundedRegion,
            SolveStats::default(),
            Some("polytope is unbounded".into()),
        ));
    }
    let positive = inertia(q)?.positive;
    if positive > 0 {
        return Err(Error::NotConcave(positive));
    }
    ConcaveMinimizer::new(p, opts)?.minimize(q, c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::to_big;
    use crate::oracle::brute_integer_hull_vertices;

    fn rv(v: &[i64]) -> Vec<BigRational> {
        v.iter().map(|&x| BigRational::from_integer(x.into())).collect()
    }

    fn square(w: i64) -> Polytope {
        Polytope::from_i64(&[&[1, 0], &[-1, 0], &[0, 1], &[0, -1]], &[w, 0, w, 0])
    }

    #[test]
    fn vertices_of_small_polytopes() {
        assert_eq!(polytope_vertices(&square(1)), vec![rv(&[0, 0]), rv(&[0, 1]), rv(&[1, 0]), rv(&[1, 1])]);
        let tri = Polytope::from_i64(&[&[-1, 0], &[0, -1], &[1, 1]], &[0, 0, 1]);
        assert_eq!(polytope_vertices(&tri), vec![rv(&[0, 0]), rv(&[0, 1]), rv(&[1, 0])]);
        let empty = Polytope::from_i64(&[&[1], &[-1]], &[0, -1]);
        assert!(polytope_vertices(&empty).is_empty());
        let half = Polytope::from_i64(&[&[2, 2], &[-1, 0], &[0, -1]], &[3, 0, 0]);
        let h = BigRational::new(3.into(), 2.into());
        assert!(polytope_vertices(&half).contains(&vec![h, BigRational::zero()]));
    }

    #[test]
    fn m_parameter() {
        // 2n²·L·Δ: 16 → 5, 2 → 2, 8 → 4
        assert_eq!(b_independent_m(&IntMatrix::from_i64(&[&[1, 1], &[1, -1]]), 100).unwrap(), 5);
        assert_eq!(b_independent_m(&IntMatrix::from_i64(&[&[1], &[-1]]), 100).unwrap(), 2);
        let tu = IntMatrix::from_i64(&[&[1, 0], &[-1, 0], &[0, 1], &[0, -1]]);
        assert_eq!(b_independent_m(&tu, 100).unwrap(), 4);
        assert_eq!(smallest_exponent_above(&BigInt::from(16)), 5);
        assert_eq!(smallest_exponent_above(&BigInt::from(15)), 4);
    }

    #[test]
    fn superset_examples() {
        let opts = HullOptions::default();
        for p in [
            square(3),
            Polytope::from_i64(&[&[2, 2], &[-1, 0], &[0, -1]], &[3, 0, 0]),
            Polytope::from_i64(&[&[1, 3], &[-2, 1], &[1, -2], &[0, -1]], &[7, 2, 3, 1]),
        ] {
            let set = integer_hull_vertex_superset(&p, &opts).unwrap();
            for v in brute_integer_hull_vertices(&p, 10_000).unwrap() {
                assert!(set.contains(&v), "{v:?} missing");
                for cell in set.cells_containing(&v) {
                    let count = crate::oracle::enumerate_feasible(&p, None, 10_000)
                        .unwrap()
                        .filter(|x| set.cell_contains(&cell, x))
                        .count();
                    assert_eq!(count, 1, "{cell:?}");
                }
            }
            assert!(set.points().all(|x| p.contains(x)));
        }
        let hollow = Polytope::from_i64(&[&[3], &[-3]], &[2, -1]);
        assert!(integer_hull_vertex_superset(&hollow, &opts).unwrap().candidates.is_empty());
    }

    #[test]
    fn concave_examples() {
        let opts = HullOptions::default();
        let q = IntMatrix::from_i64(&[&[-1, 0], &[0, -1]]);
        let r = concave_minimize(&square(3), &q, &to_big(&[0, 0]), &opts).unwrap();
        assert_eq!((r.value, r.witness), (Some(BigInt::from(-18)), Some(to_big(&[3, 3]))));

        let zero = IntMatrix::zeros(2, 2);
        let r = concave_minimize(&square(2), &zero, &to_big(&[0, 0]), &opts).unwrap();
        assert_eq!((r.value, r.witness), (Some(BigInt::zero()), Some(to_big(&[0, 0]))));

        let line = Polytope::from_i64(&[&[2], &[-1]], &[3, 1]);
        let r = concave_minimize(&line, &IntMatrix::from_i64(&[&[-1]]), &to_big(&[0]), &opts).unwrap();
        assert_eq!((r.value, r.witness), (Some(BigInt::from(-1)), Some(to_big(&[-1]))));

        let hollow = Polytope::from_i64(&[&[3], &[-3]], &[2, -1]);
        let r = concave_minimize(&hollow, &IntMatrix::from_i64(&[&[-1]]), &to_big(&[0]), &opts).unwrap();
        assert_eq!(r.status, SolveStatus::Infeasible);

        let convex = IntMatrix::from_i64(&[&[1, 0], &[0, -1]]);
        assert_eq!(
            concave_minimize(&square(1), &convex, &to_big(&[0, 0]), &opts),
            Err(Error::NotConcave(1))
        );
    }

    #[test]
    fn count_bound_formula() {
        // 2·4²·(6·4·5)¹ = 3840
        assert_eq!(vertex_count_bound(4, 2, 5), BigInt::from(3840));
        assert_eq!(vertex_count_bound(2, 1, 2), BigInt::from(4));
    }
}
