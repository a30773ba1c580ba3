//! An observer that re-derives structural invariants of the search:
//!
//! * every gradient child lowers `ν₊(Q|ker C)` by exactly one;
//! * every batch child has `B_WᵀQB_W = 0` for its kernel basis `B_W`;
//! * nothing is branched on below a batch;
//! * no path takes more than `ν₊(Q)` gradient steps;
//! * while only rows of `A` have been appended, `Δ(C) ≤ Δ(A)` (small `n`).

use std::sync::Mutex;

use num_bigint::BigInt;

use super::branch::Child;
use super::leaf::LeafOutcome;
use super::node::{Node, RowKind};
use super::observer::SolveObserver;
use crate::error::Result;
use crate::instance::IqpInstance;
use crate::linalg::{adjugate_kernel_basis, inertia, inertia_of_restricted_form, max_subdeterminant, IntMatrix, SubdetMode};

/// Largest `n` for which the Δ confinement check runs.
pub const DELTA_CHECK_MAX_DIM: usize = 3;

/// The invariant a violation breaks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AuditCheck {
    InertiaDecrement,
    GradientCap,
    BatchVanishing,
    DeltaConfinement,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Violation {
    pub check: AuditCheck,
    pub message: String,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AuditCounts {
    pub gradient_children: u64,
    pub batch_children: u64,
    pub leaves: u64,
    pub delta_checks: u64,
}

pub struct AuditObserver {
    nu_plus: usize,
    delta_a: Option<BigInt>,
    violations: Mutex<Vec<Violation>>,
    counts: Mutex<AuditCounts>,
}

impl AuditObserver {
    pub fn new(inst: &IqpInstance) -> Result<Self> {
        let nu_plus = inertia(&inst.q)?.positive;
        let delta_a = if inst.n <= DELTA_CHECK_MAX_DIM && inst.equalities.is_none() {
            max_subdeterminant(&inst.a, SubdetMode::Exact, crate::linalg::DEFAULT_MINOR_BUDGET).ok()
        } else {
            None
        };
        Ok(AuditObserver {
            nu_plus,
            delta_a,
            violations: Mutex::new(Vec::new()),
            counts: Mutex::new(AuditCounts::default()),
        })
    }

    pub fn violations(&self) -> Vec<Violation> {
        let mut v = self.violations.lock().expect("violations").clone();
        v.sort();
        v
    }

    pub fn counts(&self) -> AuditCounts {
        self.counts.lock().expect("counts").clone()
    }

    fn violation(&self, check: AuditCheck, message: String) {
        self.violations.lock().expect("violations").push(Violation { check, message });
    }

    fn kernel_columns(c: &IntMatrix) -> Option<IntMatrix> {
        adjugate_kernel_basis(c).ok().map(|b| b.as_columns(c.cols()))
    }
}

impl SolveObserver for AuditObserver {
    fn on_node(&self, _inst: &IqpInstance, node: &Node) {
        let Some(delta_a) = &self.delta_a else {
            return;
        };
        if node.key.iter().any(|e| e.kind != RowKind::Constraint) {
            return;
        }
        let delta_c = max_subdeterminant(&node.c, SubdetMode::Exact, crate::linalg::DEFAULT_MINOR_BUDGET)
            .expect("small system");
        self.counts.lock().expect("counts").delta_checks += 1;
        if &delta_c > delta_a {
            self.violation(AuditCheck::DeltaConfinement, format!("constraint-phase Δ(C) = {delta_c} exceeds Δ(A) = {delta_a}"));
        }
    }

    fn on_children(&self, inst: &IqpInstance, parent: &Node, kind: RowKind, children: &[Child]) {
        if parent.path_stats.batch_performed && !children.is_empty() {
            self.violation(AuditCheck::BatchVanishing, format!("node at depth {} branches below a batch", parent.depth));
        }
        match kind {
            RowKind::Constraint => {}
            RowKind::Gradient => {
                let b = parent.basis.as_columns(inst.n);
                let before = inertia_of_restricted_form(&inst.q, &b).expect("symmetric").positive;
                for child in children {
                    let (c, _) = child.system(parent);
                    let Some(bw) = Self::kernel_columns(&c) else {
                        self.violation(AuditCheck::InertiaDecrement, "gradient child has dependent rows".into());
                        continue;
                    };
                    let after = inertia_of_restricted_form(&inst.q, &bw).expect("symmetric").positive;
                    if after + 1 != before {
                        self.violation(AuditCheck::InertiaDecrement, format!("gradient child: ν₊ went from {before} to {after}"));
                    }
                }
                self.counts.lock().expect("counts").gradient_children += children.len() as u64;
            }
            RowKind::Batch => {
                for child in children {
                    let (c, _) = child.system(parent);
                    let Some(bw) = Self::kernel_columns(&c) else {
                        self.violation(AuditCheck::BatchVanishing, "batch child has dependent rows".into());
                        continue;
                    };
                    if !bw.transpose().mul(&inst.q).mul(&bw).is_zero() {
                        self.violation(AuditCheck::BatchVanishing, "form does not vanish on a batch child's kernel".into());
                    }
                }
                self.counts.lock().expect("counts").batch_children += children.len() as u64;
            }
        }
    }

    fn on_leaf(&self, _inst: &IqpInstance, node: &Node, _outcome: Option<&LeafOutcome>) {
        self.counts.lock().expect("counts").leaves += 1;
        if node.path_stats.gradient_steps > self.nu_plus {
            self.violation(
                AuditCheck::GradientCap,
                format!(
                    "path with {} gradient steps exceeds ν₊(Q) = {}",
                    node.path_stats.gradient_steps, self.nu_plus
                ),
            );
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::to_big;
    use crate::solver::{solve_observed, Algorithm, SolveOptions};

    #[test]
    fn clean_runs_on_small_instances() {
        let (a, b) = IqpInstance::box_rows(2, 2);
        for q in [[[1, 2], [2, 1]], [[1, 0], [0, -1]], [[2, -1], [-1, 0]]] {
            let rows: Vec<&[i64]> = q.iter().map(|r| &r[..]).collect();
            let inst = IqpInstance::new(IntMatrix::from_i64(&rows), to_big(&[1, 0]), a.clone(), b.clone()).unwrap();
            for alg in [Algorithm::Sequential, Algorithm::Batch] {
                let audit = AuditObserver::new(&inst).unwrap();
                let opts = SolveOptions::default().with_algorithm(alg);
                solve_observed(&inst, &opts, &audit).unwrap();
                assert_eq!(audit.violations(), Vec::<Violation>::new(), "{alg} on {q:?}");
                assert!(audit.counts().leaves > 0);
            }
        }
    }
}
