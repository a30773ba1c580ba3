//! Cross-checks of both solvers against the brute-force oracle, with the
//! structural audit of the search attached.

use serde_json::{json, Value};

use crate::error::Result;
use crate::format::result_to_json;
use crate::instance::IqpInstance;
use crate::oracle::oracle_min;
use crate::solver::audit::AuditObserver;
use crate::solver::{solve_observed, Algorithm, SolveOptions, SolveResult, SolveStatus};

#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub batch: SolveResult,
    pub sequential: SolveResult,
    pub oracle: SolveResult,
    /// Set when the oracle could not run; nothing was compared.
    pub skipped: Option<String>,
    pub mismatches: Vec<String>,
    pub violations: Vec<String>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty() && self.violations.is_empty()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "passed": self.passed(),
            "skipped": self.skipped,
            "mismatches": self.mismatches,
            "violations": self.violations,
            "batch": result_to_json(&self.batch),
            "sequential": result_to_json(&self.sequential),
            "oracle": result_to_json(&self.oracle),
        })
    }
}

/// Disagreements between a solver result and the oracle: status, value, and
/// a witness that is feasible and attains the value.
pub fn compare_with_oracle(inst: &IqpInstance, name: &str, r: &SolveResult, oracle: &SolveResult) -> Vec<String> {
    let mut out = Vec::new();
    if r.status != oracle.status {
        out.push(format!(
            "{name}: status {} but the oracle says {}",
            r.status.as_str(),
            oracle.status.as_str()
        ));
        return out;
    }
    if r.value != oracle.value {
        out.push(format!("{name}: value {:?} but the oracle says {:?}", r.value, oracle.value));
    }
    if let (Some(x), Some(v)) = (&r.witness, &r.value) {
        if !inst.is_feasible(x) {
            out.push(format!("{name}: witness {x:?} is infeasible"));
        } else if &inst.objective(x) != v {
            out.push(format!("{name}: witness value {} differs from reported {v}", inst.objective(x)));
        }
    }
    out
}

/// Runs both solvers under the audit observer and the oracle. When the
/// oracle exceeds `oracle_budget` the report is marked as skipped.
pub fn verify_instance(inst: &IqpInstance, opts: &SolveOptions, oracle_budget: u64) -> Result<VerifyReport> {
    let mut violations = Vec::new();
    let mut run = |alg: Algorithm| -> Result<SolveResult> {
        let audit = AuditObserver::new(inst)?;
        let r = solve_observed(inst, &opts.with_algorithm(alg), &audit)?;
        violations.extend(audit.violations().into_iter().map(|v| format!("{alg}: {v}")));
        Ok(r)
    };
    let batch = run(Algorithm::Batch)?;
    let sequential = run(Algorithm::Sequential)?;
    let oracle = oracle_min(inst, oracle_budget)?;
    let mut mismatches = Vec::new();
    let skipped = match oracle.status {
        SolveStatus::BudgetExceeded => Some(oracle.message.clone().unwrap_or_else(|| "oracle budget exceeded".into())),
        _ => {
            mismatches.extend(compare_with_oracle(inst, "batch", &batch, &oracle));
            mismatches.extend(compare_with_oracle(inst, "sequential", &sequential, &oracle));
            None
        }
    };
    Ok(VerifyReport {
        batch,
        sequential,
        oracle,
        skipped,
        mismatches,
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn saddle() -> IqpInstance {
        let (a, b) = IqpInstance::box_rows(2, 2);
        IqpInstance::new(crate::linalg::IntMatrix::from_i64(&[&[1, 2], &[2, 1]]), vec![BigInt::from(0); 2], a, b).unwrap()
    }

    #[test]
    fn agreeing_run() {
        let r = verify_instance(&saddle(), &SolveOptions::default(), 1000).unwrap();
        assert!(r.passed(), "{:?} {:?}", r.mismatches, r.violations);
        assert_eq!(r.oracle.value, Some(BigInt::from(-8)));
    }

    #[test]
    fn injected_fault_is_caught() {
        let inst = saddle();
        let r = verify_instance(&inst, &SolveOptions::default(), 1000).unwrap();
        let mut bad = r.batch.clone();
        bad.value = Some(BigInt::from(-7));
        assert!(!compare_with_oracle(&inst, "batch", &bad, &r.oracle).is_empty());
        let mut bad = r.batch.clone();
        bad.witness = Some(vec![BigInt::from(3), BigInt::from(0)]);
        assert!(!compare_with_oracle(&inst, "batch", &bad, &r.oracle).is_empty());
    }

    #[test]
    fn oracle_budget_skip() {
        let r = verify_instance(&saddle(), &SolveOptions::default(), 3).unwrap();
        assert!(r.skipped.is_some());
        assert!(r.passed());
    }
}
