//! Exact LP and ILP: fraction-free simplex and branch-and-bound.

pub mod bnb;
pub mod bounds;
pub mod lp;
pub mod simplex;

pub use bnb::{ilp_solve, IlpOptions, IlpOutcome, IlpStatus, DEFAULT_ILP_NODES};
pub use bounds::{lp_box_bounds, session_box_bounds, BoxBounds, BoxOutcome};
pub use lp::{lp_feasible, lp_range, lp_solve, LpOutcome, LpProblem, LpSession, LpStatus};
