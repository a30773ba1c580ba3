//! The branching engine and the two solvers built on it.
//!
//! Both solvers maintain an equality system `Cx = d` of full row rank and an
//! integer basis `y₁..y_r` of `ker C`. At a node whose form does not vanish
//! on the kernel, an optimum `x*` is either near some inequality (constraint
//! branch: fix `a_jᵀx` to one of the values within `W_j` of `b_j`), or deep,
//! in which case no direction has negative curvature and each nonnegative
//! direction pins `2y_iᵀQx* + cᵀy_i` to `[−y_iᵀQy_i, y_iᵀQy_i]`.
//!
//! The sequential solver branches on one gradient row at a time, for every
//! nonnegative direction. The batch solver appends a maximal independent set
//! of gradient rows at once, and only when no direction has negative
//! curvature; the form then vanishes on the new kernel and every batch child
//! is a leaf.

pub mod audit;
pub mod branch;
mod engine;
pub mod leaf;
pub mod node;
pub mod observer;
pub mod result;

use std::fmt;
use std::str::FromStr;

pub use branch::{batch_children, batch_selection, constraint_children, gradient_children, BranchConfig, Child, Children};
pub use leaf::{flat_leaf, LeafOutcome};
pub use node::{classify_curvature, AppendedRow, CurvatureClasses, Node, NodeKey, PathStats, RowKind};
pub use observer::{NoObserver, SolveObserver};
pub use result::{merge_best, Best, DepthStats, SolveResult, SolveStats, SolveStatus};

use crate::error::{Error, Result};
use crate::ilp::{lp_box_bounds, BoxOutcome, DEFAULT_ILP_NODES};
use crate::instance::IqpInstance;
use engine::Engine;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Sequential,
    Batch,
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algorithm::Sequential => "sequential",
            Algorithm::Batch => "batch",
        })
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sequential" => Ok(Algorithm::Sequential),
            "batch" => Ok(Algorithm::Batch),
            other => Err(Error::Parse(format!("unknown algorithm {other:?}"))),
        }
    }
}

pub const DEFAULT_MAX_NODES: u64 = 1_000_000;
pub const DEFAULT_MAX_CHILDREN: u64 = 100_000;

#[derive(Clone, Debug)]
pub struct SolveOptions {
    pub algorithm: Algorithm,
    /// Distinct subproblems allowed before `BudgetExceeded`.
    pub max_nodes: u64,
    /// Children allowed at a single node.
    pub max_children: u64,
    pub parity_filter: bool,
    /// Worker threads; `1` runs on the calling thread, `0` uses all cores.
    pub threads: usize,
    pub max_ilp_nodes: u64,
    /// Minor count up to which Δ(C) statistics are exact.
    pub minor_budget: u64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            algorithm: Algorithm::Batch,
            max_nodes: DEFAULT_MAX_NODES,
            max_children: DEFAULT_MAX_CHILDREN,
            parity_filter: true,
            threads: 1,
            max_ilp_nodes: DEFAULT_ILP_NODES,
            minor_budget: 10_000,
        }
    }
}

impl SolveOptions {
    pub fn with_algorithm(&self, algorithm: Algorithm) -> Self {
        SolveOptions {
            algorithm,
            ..self.clone()
        }
    }
}

/// True iff the continuous feasible region is bounded (an empty region counts
/// as bounded).
pub fn check_bounded(inst: &IqpInstance) -> bool {
    lp_box_bounds(&inst.relaxation()) != BoxOutcome::Unbounded
}

pub fn solve(inst: &IqpInstance, opts: &SolveOptions) -> Result<SolveResult> {
    solve_observed(inst, opts, &NoObserver)
}

pub fn solve_sequential(inst: &IqpInstance, opts: &SolveOptions) -> Result<SolveResult> {
    solve(inst, &opts.with_algorithm(Algorithm::Sequential))
}

pub fn solve_batch(inst: &IqpInstance, opts: &SolveOptions) -> Result<SolveResult> {
    solve(inst, &opts.with_algorithm(Algorithm::Batch))
}

/// Runs the selected solver, reporting every distinct subproblem to
/// `observer`. Budget overruns are returned as a `BudgetExceeded` status;
/// other failures are errors.
pub fn solve_observed(inst: &IqpInstance, opts: &SolveOptions, observer: &dyn SolveObserver) -> Result<SolveResult> {
    inst.validate()?;
    let bounds = match lp_box_bounds(&inst.relaxation()) {
        BoxOutcome::Bounded(b) => b,
        BoxOutcome::Empty => return Ok(SolveResult::from_best(None, SolveStats::default())),
        BoxOutcome::Unbounded => {
            return Ok(SolveResult::without_solution(
                SolveStatus::UnboundedRegion,
                SolveStats::default(),
                Some("feasible region is unbounded".into()),
            ))
        }
    };
    let engine = Engine::new(inst, opts, bounds, observer);
    let outcome = if opts.threads == 1 {
        engine.run()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(opts.threads)
            .build()
            .map_err(|e| Error::Internal(format!("thread pool: {e}")))?;
        pool.install(|| engine.run())
    };
    match outcome {
        Ok(best) => Ok(SolveResult::from_best(best, engine.stats())),
        Err(Error::BudgetExceeded(msg)) => Ok(SolveResult::without_solution(
            SolveStatus::BudgetExceeded,
            engine.stats(),
            Some(msg),
        )),
        Err(e) => Err(e),
    }
}
