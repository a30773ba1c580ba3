//! Live subproblems: an equality system, its kernel basis and the curvature
//! classes of the basis directions.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::Result;
use crate::ilp::LpProblem;
use crate::instance::IqpInstance;
use crate::linalg::det::{binomial, max_subdeterminant, SubdetMode};
use crate::linalg::matrix::{content, quad_form};
use crate::linalg::{adjugate_kernel_basis, integer_solvable, IntMatrix, KernelBasis, RowSpace};

/// How a row entered the equality system.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RowKind {
    Constraint,
    Gradient,
    Batch,
}

/// An appended equality `rowᵀx = rhs` in canonical form: `row` is primitive
/// with a positive leading entry and `rhs` is scaled to match.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AppendedRow {
    pub kind: RowKind,
    pub row: Vec<BigInt>,
    pub rhs: BigRational,
}

impl AppendedRow {
    /// Canonicalizes `row·x = rhs`. `row` must be nonzero.
    pub fn canonical(kind: RowKind, row: &[BigInt], rhs: &BigInt) -> Self {
        let (prim, g) = primitive_part(row);
        AppendedRow::scaled(kind, prim, &g, rhs)
    }

    /// Builds the canonical row from `primitive_part(row) = (prim, g)`.
    pub fn scaled(kind: RowKind, prim: Vec<BigInt>, g: &BigInt, rhs: &BigInt) -> Self {
        let rhs = if g.is_one() {
            BigRational::from_integer(rhs.clone())
        } else {
            BigRational::new(rhs.clone(), g.clone())
        };
        AppendedRow { kind, row: prim, rhs }
    }

    /// Whether the equality admits integer solutions at all (primitive row).
    pub fn lattice_consistent(&self) -> bool {
        self.rhs.is_integer()
    }

    /// The integer row and right-hand side used to build `C`.
    pub fn integer_form(&self) -> (Vec<BigInt>, BigInt) {
        let den = self.rhs.denom();
        if den.is_one() {
            (self.row.clone(), self.rhs.numer().clone())
        } else {
            (self.row.iter().map(|x| x * den).collect(), self.rhs.numer().clone())
        }
    }
}

/// `(row / g, g)` where `g` is the content of `row`, signed so that the
/// leading entry of `row / g` is positive. `row` must be nonzero.
pub fn primitive_part(row: &[BigInt]) -> (Vec<BigInt>, BigInt) {
    let mut g = content(row);
    debug_assert!(!g.is_zero(), "zero row");
    if row.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
        g = -g;
    }
    let prim = if g.is_one() { row.to_vec() } else { row.iter().map(|x| x / &g).collect() };
    (prim, g)
}

/// Sorted list of appended rows identifying a subproblem.
pub type NodeKey = Vec<AppendedRow>;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CurvatureClasses {
    pub negative: Vec<usize>,
    pub nonnegative: Vec<usize>,
    pub flat: Vec<usize>,
}

impl CurvatureClasses {
    pub fn is_flat(&self) -> bool {
        self.negative.is_empty() && self.nonnegative.is_empty()
    }
}

/// Statistics of the root-to-node path. All counts are determined by the
/// node's appended rows, so they do not depend on the route taken.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PathStats {
    pub constraint_steps: usize,
    pub gradient_steps: usize,
    pub batch_performed: bool,
    /// Δ(C) of this node's system: exact when the minor count fits the
    /// budget, otherwise the Hadamard bound. Δ is monotone under adding rows,
    /// so this is also the maximum along the path.
    pub max_delta_seen: BigInt,
    pub delta_exact: bool,
    /// Candidate children generated at this node.
    pub children_generated: usize,
}

impl PathStats {
    pub fn depth(&self) -> usize {
        self.constraint_steps + self.gradient_steps + usize::from(self.batch_performed)
    }
}

#[derive(Clone, Debug)]
pub struct Node {
    pub key: NodeKey,
    pub c: IntMatrix,
    pub d: Vec<BigInt>,
    pub basis: KernelBasis,
    pub classes: CurvatureClasses,
    pub depth: usize,
    pub path_stats: PathStats,
    /// Whether `Cx = d` has an integer solution. Nodes without one carry an
    /// empty basis and no Δ(C) statistic.
    pub integral: bool,
}

impl Node {
    /// Builds the node for `key`: `C` is `C₀` followed by the appended rows
    /// in key order.
    pub fn new(inst: &IqpInstance, key: NodeKey, minor_budget: u64) -> Result<Node> {
        let (mut c, mut d) = inst.equality_rows();
        let mut ps = PathStats::default();
        for e in &key {
            let (row, rhs) = e.integer_form();
            c.push_row(&row);
            d.push(rhs);
            match e.kind {
                RowKind::Constraint => ps.constraint_steps += 1,
                RowKind::Gradient => ps.gradient_steps += 1,
                RowKind::Batch => ps.batch_performed = true,
            }
        }
        let integral = integer_solvable(&c, &d);
        let (basis, classes) = if integral {
            let basis = adjugate_kernel_basis(&c)?;
            let classes = classify_curvature(&c, &basis, &inst.q);
            let (delta, exact) = subdeterminant_stat(&c, minor_budget);
            ps.max_delta_seen = delta;
            ps.delta_exact = exact;
            (basis, classes)
        } else {
            ps.delta_exact = true;
            (KernelBasis::empty(), CurvatureClasses::default())
        };
        Ok(Node {
            integral,
            depth: ps.depth(),
            key,
            c,
            d,
            basis,
            classes,
            path_stats: ps,
        })
    }

    pub fn r(&self) -> usize {
        self.basis.dim()
    }

    /// `{Ax ≤ b, Cx = d}` with a zero objective.
    pub fn region(&self, inst: &IqpInstance) -> LpProblem {
        LpProblem {
            objective: vec![BigInt::zero(); inst.n],
            a_ineq: inst.a.clone(),
            b_ineq: inst.b.clone(),
            a_eq: self.c.clone(),
            b_eq: self.d.clone(),
        }
    }

    /// `y_iᵀQ` for every basis vector.
    pub fn gradient_rows(&self, q: &IntMatrix) -> Vec<Vec<BigInt>> {
        self.basis.vectors.iter().map(|y| q.left_mul_vec(y)).collect()
    }
}

/// Exact Δ(C) when at most `budget` minors are involved, else the Hadamard
/// bound. The flag reports which one was returned.
pub fn subdeterminant_stat(c: &IntMatrix, budget: u64) -> (BigInt, bool) {
    let p = c.rows().min(c.cols());
    let count: u128 = (1..=p)
        .map(|k| binomial(c.rows(), k).saturating_mul(binomial(c.cols(), k)))
        .sum();
    if count <= budget as u128 {
        let d = max_subdeterminant(c, SubdetMode::Exact, budget).expect("within budget");
        (d, true)
    } else {
        let d = max_subdeterminant(c, SubdetMode::Hadamard, budget).expect("hadamard");
        (d, false)
    }
}

/// Partitions the basis indices into negative, nonnegative and flat classes.
///
/// `i` is flat when `y_iᵀQ` lies in the row space of `C`; otherwise its class
/// is the sign of the curvature `y_iᵀQy_i`.
pub fn classify_curvature(c: &IntMatrix, basis: &KernelBasis, q: &IntMatrix) -> CurvatureClasses {
    let rs = RowSpace::of(c);
    let mut out = CurvatureClasses::default();
    for (i, y) in basis.vectors.iter().enumerate() {
        let g = q.left_mul_vec(y);
        if rs.contains(&g) {
            out.flat.push(i);
        } else if quad_form(q, y).is_negative() {
            out.negative.push(i);
        } else {
            out.nonnegative.push(i);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::to_big;

    fn classes_at_root(q: &[&[i64]]) -> CurvatureClasses {
        let q = IntMatrix::from_i64(q);
        let c = IntMatrix::empty(q.rows());
        let basis = adjugate_kernel_basis(&c).unwrap();
        classify_curvature(&c, &basis, &q)
    }

    #[test]
    fn diagonal_signs() {
        let cl = classes_at_root(&[&[1, 0], &[0, -1]]);
        assert_eq!(cl.nonnegative, vec![0]);
        assert_eq!(cl.negative, vec![1]);
        assert!(cl.flat.is_empty());
    }

    #[test]
    fn zero_form_is_flat() {
        let cl = classes_at_root(&[&[0, 0], &[0, 0]]);
        assert_eq!(cl.flat, vec![0, 1]);
        assert!(cl.is_flat());
    }

    #[test]
    fn indefinite_form_with_positive_diagonal() {
        // eigenvalues 3 and −1, yet both coordinate curvatures are 1
        let cl = classes_at_root(&[&[1, 2], &[2, 1]]);
        assert!(cl.negative.is_empty());
        assert_eq!(cl.nonnegative, vec![0, 1]);
    }

    #[test]
    fn flat_relative_to_equalities() {
        // Q = diag(1, 0) with C = [1 0]: the only kernel direction is e₂,
        // and e₂ᵀQ = 0 lies in every row space.
        let q = IntMatrix::from_i64(&[&[1, 0], &[0, 0]]);
        let c = IntMatrix::from_i64(&[&[1, 0]]);
        let basis = adjugate_kernel_basis(&c).unwrap();
        assert_eq!(classify_curvature(&c, &basis, &q).flat, vec![0]);
        // Q = [[0,1],[1,0]] with C = [1 0]: e₂ᵀQ = (1, 0) ∈ rowspace(C)
        let q = IntMatrix::from_i64(&[&[0, 1], &[1, 0]]);
        assert_eq!(classify_curvature(&c, &basis, &q).flat, vec![0]);
    }

    #[test]
    fn canonical_rows() {
        let a = AppendedRow::canonical(RowKind::Constraint, &to_big(&[-2, 4]), &BigInt::from(-6));
        assert_eq!(a.row, to_big(&[1, -2]));
        assert_eq!(a.rhs, BigRational::from_integer(3.into()));
        let b = AppendedRow::canonical(RowKind::Gradient, &to_big(&[2, 0]), &BigInt::from(1));
        assert!(!b.lattice_consistent());
        assert_eq!(b.integer_form(), (to_big(&[2, 0]), BigInt::from(1)));
    }
}
