//! JSON instance files and solve reports.
//!
//! Instance files hold `n`, `Q`, `c`, `A`, `b` and optionally `C`, `d`. Every
//! matrix and vector entry is a decimal string so that values of any size
//! survive generic JSON tooling; plain JSON integers are accepted on input.
//! Reports use fixed key names, sorted, and contain nothing that depends on
//! timing or scheduling.

use std::str::FromStr;

use num_bigint::BigInt;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::instance::IqpInstance;
use crate::linalg::IntMatrix;
use crate::polytope::Polytope;
use crate::solver::{SolveResult, SolveStats};

const INSTANCE_KEYS: [&str; 7] = ["n", "Q", "c", "A", "b", "C", "d"];

fn int_value(v: &BigInt) -> Value {
    Value::String(v.to_string())
}

fn vector_value(v: &[BigInt]) -> Value {
    Value::Array(v.iter().map(int_value).collect())
}

fn matrix_value(m: &IntMatrix) -> Value {
    Value::Array(m.row_iter().map(vector_value).collect())
}

pub fn instance_to_json(inst: &IqpInstance) -> Value {
    let mut obj = Map::new();
    obj.insert("n".into(), json!(inst.n));
    obj.insert("Q".into(), matrix_value(&inst.q));
    obj.insert("c".into(), vector_value(&inst.c));
    obj.insert("A".into(), matrix_value(&inst.a));
    obj.insert("b".into(), vector_value(&inst.b));
    if let Some((c0, d0)) = &inst.equalities {
        obj.insert("C".into(), matrix_value(c0));
        obj.insert("d".into(), vector_value(d0));
    }
    Value::Object(obj)
}

pub fn emit_instance(inst: &IqpInstance) -> String {
    render(&instance_to_json(inst))
}

pub fn polytope_to_json(p: &Polytope) -> Value {
    json!({ "n": p.dim(), "A": matrix_value(&p.a), "b": vector_value(&p.b) })
}

/// Pretty-printed with a trailing newline.
pub fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn parse_int(v: &Value, what: &str) -> Result<BigInt> {
    match v {
        Value::String(s) => BigInt::from_str(s.trim()).map_err(|_| parse_err(format!("{what}: {s:?} is not an integer"))),
        Value::Number(n) if n.is_i64() || n.is_u64() => Ok(BigInt::from_str(&n.to_string()).expect("integer literal")),
        other => Err(parse_err(format!("{what}: expected an integer, got {other}"))),
    }
}

fn parse_vector(v: &Value, what: &str, len: Option<usize>) -> Result<Vec<BigInt>> {
    let items = v.as_array().ok_or_else(|| parse_err(format!("{what}: expected an array")))?;
    if let Some(len) = len {
        if items.len() != len {
            return Err(parse_err(format!("{what}: expected {len} entries, got {}", items.len())));
        }
    }
    items
        .iter()
        .enumerate()
        .map(|(i, x)| parse_int(x, &format!("{what}[{i}]")))
        .collect()
}

fn parse_matrix(v: &Value, what: &str, cols: usize) -> Result<IntMatrix> {
    let rows = v.as_array().ok_or_else(|| parse_err(format!("{what}: expected an array of rows")))?;
    let rows = rows
        .iter()
        .enumerate()
        .map(|(i, r)| parse_vector(r, &format!("{what}[{i}]"), Some(cols)))
        .collect::<Result<Vec<_>>>()?;
    IntMatrix::from_rows(cols, rows).map_err(|e| parse_err(format!("{what}: {e}")))
}

fn parse_object(text: &str) -> Result<Map<String, Value>> {
    match serde_json::from_str::<Value>(text) {
        Ok(Value::Object(m)) => Ok(m),
        Ok(_) => Err(parse_err("expected a JSON object")),
        Err(e) => Err(parse_err(format!("invalid JSON: {e}"))),
    }
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| parse_err(format!("missing field {key:?}")))
}

fn parse_dim(obj: &Map<String, Value>) -> Result<usize> {
    field(obj, "n")?
        .as_u64()
        .and_then(|n| usize::try_from(n).ok())
        .filter(|&n| n > 0)
        .ok_or_else(|| parse_err("n must be a positive integer"))
}

fn parse_region(obj: &Map<String, Value>, n: usize) -> Result<(IntMatrix, Vec<BigInt>)> {
    let a = parse_matrix(field(obj, "A")?, "A", n)?;
    let b = parse_vector(field(obj, "b")?, "b", Some(a.rows()))?;
    Ok((a, b))
}

/// Parses an instance file. `Q` must already be symmetric; it is never
/// symmetrized.
pub fn parse_instance(text: &str) -> Result<IqpInstance> {
    let obj = parse_object(text)?;
    if let Some(k) = obj.keys().find(|k| !INSTANCE_KEYS.contains(&k.as_str())) {
        return Err(parse_err(format!("unknown field {k:?}")));
    }
    let n = parse_dim(&obj)?;
    let q = parse_matrix(field(&obj, "Q")?, "Q", n)?;
    if q.rows() != n {
        return Err(parse_err(format!("Q: expected {n} rows, got {}", q.rows())));
    }
    if !q.is_symmetric() {
        return Err(parse_err("Q is not symmetric"));
    }
    let c = parse_vector(field(&obj, "c")?, "c", Some(n))?;
    let (a, b) = parse_region(&obj, n)?;
    let inst = IqpInstance::new(q, c, a, b).map_err(|e| parse_err(e.to_string()))?;
    match (obj.get("C"), obj.get("d")) {
        (None, None) => Ok(inst),
        (Some(cv), Some(dv)) => {
            let c0 = parse_matrix(cv, "C", n)?;
            let d0 = parse_vector(dv, "d", Some(c0.rows()))?;
            inst.with_equalities(c0, d0).map_err(|e| parse_err(e.to_string()))
        }
        _ => Err(parse_err("C and d must be given together")),
    }
}

/// Reads `n`, `A` and `b` from a polytope or instance file.
pub fn parse_polytope(text: &str) -> Result<Polytope> {
    let obj = parse_object(text)?;
    if let Some(k) = obj.keys().find(|k| !INSTANCE_KEYS.contains(&k.as_str())) {
        return Err(parse_err(format!("unknown field {k:?}")));
    }
    if obj.contains_key("C") {
        return Err(parse_err("equality systems are not supported for polytopes"));
    }
    let n = parse_dim(&obj)?;
    let (a, b) = parse_region(&obj, n)?;
    Polytope::new(a, b).map_err(|e| parse_err(e.to_string()))
}

fn ratio(num: u64, den: u64) -> String {
    let g = num_integer::gcd(num, den).max(1);
    format!("{}/{}", num / g, den / g)
}

pub fn stats_to_json(s: &SolveStats) -> Value {
    let per_depth: Vec<Value> = s
        .per_depth
        .iter()
        .enumerate()
        .map(|(depth, d)| {
            json!({
                "depth": depth,
                "nodes": d.nodes,
                "children": d.children,
                "branching_factor": if d.nodes == 0 { Value::Null } else { Value::String(ratio(d.children, d.nodes)) },
            })
        })
        .collect();
    json!({
        "nodes": s.nodes,
        "leaves": s.leaves,
        "pruned_nodes": s.pruned_nodes,
        "constraint_children": s.constraint_children,
        "gradient_children": s.gradient_children,
        "batch_children": s.batch_children,
        "candidates": s.candidates,
        "closed_children": s.closed_children,
        "batches": s.batches,
        "max_depth": s.max_depth,
        "max_constraint_steps": s.max_constraint_steps,
        "max_gradient_steps": s.max_gradient_steps,
        "max_delta_seen": int_value(&s.max_delta_seen),
        "max_delta_exact": s.max_delta_exact,
        "ilp_nodes": s.ilp_nodes,
        "per_depth": per_depth,
    })
}

pub fn result_to_json(r: &SolveResult) -> Value {
    json!({
        "status": r.status.as_str(),
        "value": r.value.as_ref().map(int_value),
        "witness": r.witness.as_deref().map(vector_value),
        "message": r.message,
        "stats": stats_to_json(&r.stats),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{generate_instance, GenParams};
    use crate::linalg::matrix::to_big;

    #[test]
    fn round_trip() {
        let p = GenParams {
            n: 3,
            l: 3,
            m: 2,
            box_width: 3,
        };
        for seed in 0..10 {
            let inst = generate_instance(seed, &p).unwrap();
            assert_eq!(parse_instance(&emit_instance(&inst)).unwrap(), inst);
        }
        let inst = generate_instance(0, &p)
            .unwrap()
            .with_equalities(IntMatrix::from_i64(&[&[1, 1, 1]]), to_big(&[0]))
            .unwrap();
        assert_eq!(parse_instance(&emit_instance(&inst)).unwrap(), inst);
    }

    #[test]
    fn big_entries_survive() {
        let big = BigInt::from(7).pow(60);
        let inst = IqpInstance::new(IntMatrix::zeros(1, 1), vec![big.clone()], IntMatrix::from_i64(&[&[1], &[-1]]), vec![big.clone(), big])
            .unwrap();
        assert_eq!(parse_instance(&emit_instance(&inst)).unwrap(), inst);
    }

    #[test]
    fn rejects_bad_files() {
        let ok = r#"{"n": 1, "Q": [["1"]], "c": ["0"], "A": [["1"], ["-1"]], "b": ["2", "2"]}"#;
        assert!(parse_instance(ok).is_ok());
        for bad in [
            "not json",
            r#"{"n": 2, "Q": [["1","2"],["3","1"]], "c": ["0","0"], "A": [], "b": []}"#,
            r#"{"n": 1, "Q": [["1"]], "c": ["0"], "A": [["1"]], "b": ["2", "2"]}"#,
            r#"{"n": 1, "Q": [["1.5"]], "c": ["0"], "A": [], "b": []}"#,
            r#"{"n": 1, "Q": [["1"]], "c": ["0"], "A": [], "b": [], "extra": 1}"#,
            r#"{"n": 1, "Q": [["1"]], "c": ["0"], "A": [], "b": [], "C": [["1"]]}"#,
        ] {
            assert!(matches!(parse_instance(bad), Err(Error::Parse(_))), "{bad}");
        }
    }

    #[test]
    fn polytopes() {
        let p = Polytope::from_i64(&[&[1, 0], &[0, 1]], &[3, 4]);
        assert_eq!(parse_polytope(&render(&polytope_to_json(&p))).unwrap(), p);
    }
}
