use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use iqp_core::error::Error;
use iqp_core::format::{emit_instance, parse_instance, parse_polytope, render, result_to_json};
use iqp_core::generate::{generate_instance, GenParams};
use iqp_core::hull::{concave_minimize, integer_hull_vertex_superset, vertex_count_bound, HullOptions};
use iqp_core::instance::IqpInstance;
use iqp_core::oracle::{brute_integer_hull_vertices, oracle_min};
use iqp_core::reductions::{decode_subgraph, densest_k_subgraph_to_iqp, edges_from_value, minimum_vertex_cover, Graph};
use iqp_core::solver::{self, Algorithm, SolveOptions, SolveResult, SolveStatus};
use iqp_core::verify::verify_instance;
use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::{AlgorithmArg, Budget, GenArgs, HullMode};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] Error),

    #[error("cannot read {0}: {1}")]
    Read(String, std::io::Error),

    #[error("cannot write {0}: {1}")]
    Write(String, std::io::Error),

    #[error("feasible region is unbounded")]
    Unbounded,
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(Error::Parse(_)) | CliError::Read(..) => 2,
            CliError::Core(Error::NotConcave(_)) => 3,
            CliError::Core(Error::NotAVertexCover(..) | Error::KappaOutOfRange { .. }) => 4,
            CliError::Unbounded => 5,
            CliError::Core(Error::BudgetExceeded(_)) => 6,
            _ => 1,
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn read(path: &str) -> Result<String> {
    fs::read_to_string(path).map_err(|e| CliError::Read(path.to_string(), e))
}

fn write(path: &str, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| CliError::Write(path.to_string(), e))
}

fn print(v: &Value) {
    print!("{}", render(v));
}

fn options(b: &Budget) -> SolveOptions {
    SolveOptions {
        max_nodes: b.max_nodes,
        max_children: b.max_children,
        threads: b.threads,
        parity_filter: !b.no_parity_filter,
        ..SolveOptions::default()
    }
}

fn params(g: &GenArgs) -> GenParams {
    GenParams {
        n: g.n,
        l: g.l,
        m: g.m,
        box_width: g.box_width,
    }
}

fn status_code(r: &SolveResult) -> u8 {
    match r.status {
        SolveStatus::Optimal | SolveStatus::Infeasible => 0,
        SolveStatus::UnboundedRegion => 5,
        SolveStatus::BudgetExceeded => 6,
    }
}

fn run(inst: &IqpInstance, alg: AlgorithmArg, b: &Budget) -> Result<SolveResult> {
    Ok(match alg {
        AlgorithmArg::Batch => solver::solve(inst, &options(b).with_algorithm(Algorithm::Batch))?,
        AlgorithmArg::Sequential => solver::solve(inst, &options(b).with_algorithm(Algorithm::Sequential))?,
        AlgorithmArg::Oracle => oracle_min(inst, b.oracle_budget)?,
    })
}

fn algorithm_name(alg: AlgorithmArg) -> &'static str {
    match alg {
        AlgorithmArg::Batch => "batch",
        AlgorithmArg::Sequential => "sequential",
        AlgorithmArg::Oracle => "oracle",
    }
}

pub fn solve(path: &str, alg: AlgorithmArg, b: &Budget, time: bool) -> Result<u8> {
    let inst = parse_instance(&read(path)?)?;
    let start = Instant::now();
    let r = run(&inst, alg, b)?;
    let mut report = result_to_json(&r);
    report["algorithm"] = json!(algorithm_name(alg));
    if time {
        report["wall_time_ms"] = json!(start.elapsed().as_millis() as u64);
    }
    print(&report);
    Ok(status_code(&r))
}

fn instance_files(paths: &[String]) -> Result<Vec<PathBuf>> {
    let mut out = Vec::new();
    for p in paths {
        let path = Path::new(p);
        if path.is_dir() {
            let entries = fs::read_dir(path).map_err(|e| CliError::Read(p.clone(), e))?;
            let mut files: Vec<PathBuf> = entries
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|f| f.extension().is_some_and(|x| x == "json"))
                .collect();
            files.sort();
            out.extend(files);
        } else {
            out.push(path.to_path_buf());
        }
    }
    Ok(out)
}

pub fn verify(paths: &[String], trials: u64, g: &GenArgs, b: &Budget) -> Result<u8> {
    let mut cases: Vec<(String, IqpInstance)> = Vec::new();
    for f in instance_files(paths)? {
        let name = f.display().to_string();
        cases.push((name.clone(), parse_instance(&read(&name)?)?));
    }
    for seed in g.seed..g.seed + trials {
        cases.push((format!("seed {seed}"), generate_instance(seed, &params(g))?));
    }
    let opts = options(b);
    let (mut failed, mut skipped) = (0, 0);
    let mut reports = Vec::new();
    for (name, inst) in &cases {
        let r = verify_instance(inst, &opts, b.oracle_budget)?;
        failed += usize::from(!r.passed());
        skipped += usize::from(r.skipped.is_some());
        let mut v = r.to_json();
        v["source"] = json!(name);
        reports.push(v);
    }
    print(&json!({
        "passed": failed == 0,
        "checked": cases.len(),
        "failed": failed,
        "skipped": skipped,
        "instances": reports,
    }));
    Ok(if failed == 0 { 0 } else { 7 })
}

pub fn gen(g: &GenArgs, output: Option<&str>) -> Result<u8> {
    let text = emit_instance(&generate_instance(g.seed, &params(g))?);
    match output {
        Some(p) => write(p, &text)?,
        None => print!("{text}"),
    }
    Ok(0)
}

fn points(v: &[Vec<BigInt>]) -> Value {
    Value::Array(v.iter().map(|x| json!(x.iter().map(ToString::to_string).collect::<Vec<_>>())).collect())
}

pub fn hull(path: &str, mode: HullMode, max_cells: u64, oracle_budget: u64) -> Result<u8> {
    let text = read(path)?;
    let p = parse_polytope(&text)?;
    if !p.is_bounded() {
        return Err(CliError::Unbounded);
    }
    let opts = HullOptions {
        max_cells,
        ..HullOptions::default()
    };
    let report = match mode {
        HullMode::Brute => {
            let v = brute_integer_hull_vertices(&p, oracle_budget)?;
            json!({ "mode": "brute", "count": v.len(), "vertices": points(&v) })
        }
        HullMode::Superset => {
            let set = integer_hull_vertex_superset(&p, &opts)?;
            let candidates: Vec<Value> = set
                .candidates
                .iter()
                .map(|c| {
                    let cells: Vec<Value> = c.cells.iter().map(|cell| json!({ "corner": cell.corner, "j": cell.j })).collect();
                    json!({ "point": points(std::slice::from_ref(&c.point))[0], "cells": cells })
                })
                .collect();
            json!({
                "mode": "superset",
                "M": set.big_m,
                "L_A": set.l.to_string(),
                "delta": set.delta.to_string(),
                "count_bound": vertex_count_bound(p.m(), p.dim(), set.big_m).to_string(),
                "corners": set.corners.len(),
                "cells_visited": set.cells_visited,
                "cells_solved": set.cells_solved,
                "count": set.candidates.len(),
                "candidates": candidates,
            })
        }
        HullMode::Concave => {
            let inst = parse_instance(&text)?;
            let r = concave_minimize(&p, &inst.q, &inst.c, &opts)?;
            let mut v = result_to_json(&r);
            v["mode"] = json!("concave");
            v
        }
    };
    print(&report);
    Ok(0)
}

pub fn reduce(path: &str, cover: Option<Vec<usize>>, kappa: usize, emit: Option<&str>, b: &Budget) -> Result<u8> {
    let g = Graph::parse(&read(path)?)?;
    let cover = match cover {
        Some(c) => c,
        None => minimum_vertex_cover(&g)?,
    };
    let (inst, part) = densest_k_subgraph_to_iqp(&g, &cover, kappa)?;
    if let Some(p) = emit {
        write(p, &emit_instance(&inst))?;
    }
    let r = solver::solve(&inst, &options(b).with_algorithm(Algorithm::Batch))?;
    let mut report = json!({
        "vertices": g.vertices(),
        "edge_count": g.edges().len(),
        "cover": part.cover,
        "kappa": kappa,
        "types": part.types.iter().map(|t| json!({ "signature": t.signature, "members": t.members })).collect::<Vec<_>>(),
        "result": result_to_json(&r),
        "subgraph": Value::Null,
        "edges": Value::Null,
    });
    if let (Some(w), Some(v)) = (&r.witness, &r.value) {
        report["subgraph"] = json!(decode_subgraph(w, &part)?);
        report["edges"] = json!(edges_from_value(v).to_string());
    }
    print(&report);
    Ok(status_code(&r))
}

pub fn bench(count: u64, g: &GenArgs, b: &Budget) -> Result<u8> {
    let opts = options(b);
    let mut rows = Vec::new();
    let mut code = 0;
    for seed in g.seed..g.seed + count {
        let inst = generate_instance(seed, &params(g))?;
        let mut row = json!({ "seed": seed });
        for alg in [Algorithm::Batch, Algorithm::Sequential] {
            let start = Instant::now();
            let r = solver::solve(&inst, &opts.with_algorithm(alg))?;
            code = code.max(status_code(&r));
            row[alg.to_string()] = json!({
                "status": r.status.as_str(),
                "value": r.value.map(|v| v.to_string()),
                "nodes": r.stats.nodes,
                "wall_time_ms": start.elapsed().as_millis() as u64,
            });
        }
        rows.push(row);
    }
    print(&json!({ "instances": rows }));
    Ok(code)
}
