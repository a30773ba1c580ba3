use num_bigint::BigInt;

/// Outcome of a solve.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SolveStatus {
    Optimal,
    Infeasible,
    UnboundedRegion,
    BudgetExceeded,
}

impl SolveStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            SolveStatus::Optimal => "optimal",
            SolveStatus::Infeasible => "infeasible",
            SolveStatus::UnboundedRegion => "unbounded_region",
            SolveStatus::BudgetExceeded => "budget_exceeded",
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DepthStats {
    pub nodes: u64,
    pub children: u64,
}

/// Statistics aggregated over the distinct subproblems visited.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SolveStats {
    pub nodes: u64,
    pub leaves: u64,
    /// Subproblems closed on entry: no integer solution of the equality
    /// system, or an empty LP relaxation.
    pub pruned_nodes: u64,
    pub constraint_children: u64,
    pub gradient_children: u64,
    pub batch_children: u64,
    /// Candidates enumerated before filtering and deduplication.
    pub candidates: u64,
    /// Generated children closed by their parent for lack of integer
    /// solutions; nonzero only without the integrality filter.
    pub closed_children: u64,
    /// Nodes at which a batch branch was taken.
    pub batches: u64,
    pub max_depth: usize,
    pub max_constraint_steps: usize,
    pub max_gradient_steps: usize,
    pub max_delta_seen: BigInt,
    pub max_delta_exact: bool,
    pub per_depth: Vec<DepthStats>,
    pub ilp_nodes: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveResult {
    pub status: SolveStatus,
    pub value: Option<BigInt>,
    pub witness: Option<Vec<BigInt>>,
    pub stats: SolveStats,
    pub message: Option<String>,
}

impl SolveResult {
    pub fn from_best(best: Best, stats: SolveStats) -> Self {
        match best {
            Some((v, x)) => SolveResult {
                status: SolveStatus::Optimal,
                value: Some(v),
                witness: Some(x),
                stats,
                message: None,
            },
            None => SolveResult::without_solution(SolveStatus::Infeasible, stats, None),
        }
    }

    pub fn without_solution(status: SolveStatus, stats: SolveStats, message: Option<String>) -> Self {
        SolveResult {
            status,
            value: None,
            witness: None,
            stats,
            message,
        }
    }

    pub fn is_optimal(&self) -> bool {
        self.status == SolveStatus::Optimal
    }
}

/// Best value with its witness, if any.
pub type Best = Option<(BigInt, Vec<BigInt>)>;

/// Smaller value wins; equal values go to the lexicographically smaller
/// witness. Associative and commutative.
pub fn merge_best(a: Best, b: Best) -> Best {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some(a), Some(b)) => {
            if (&b.0, &b.1) < (&a.0, &a.1) {
                Some(b)
            } else {
                Some(a)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::to_big;

    #[test]
    fn merge_prefers_value_then_lexicographic() {
        let p = |v: i64, x: &[i64]| Some((BigInt::from(v), to_big(x)));
        assert_eq!(merge_best(p(-4, &[0, 2]), p(-4, &[0, -2])), p(-4, &[0, -2]));
        assert_eq!(merge_best(p(-3, &[-5, 0]), p(-4, &[0, 2])), p(-4, &[0, 2]));
        assert_eq!(merge_best(None, p(1, &[1])), p(1, &[1]));
        assert_eq!(merge_best(None, None), None);
    }
}
