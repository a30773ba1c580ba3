//! The search itself: a memoized fold over the branching DAG.
//!
//! A subproblem is identified by its sorted list of appended rows, and the
//! node built from a key depends on nothing else, so results can be shared
//! between parents. The first worker to claim a key counts it against the
//! node budget and reports it to the observer; a worker that finds the key
//! claimed but unfinished recomputes it silently instead of blocking. The
//! set of distinct keys, and therefore every statistic, is independent of the
//! schedule.
//!
//! A node whose equality system has no integer solution, or whose region is
//! empty, is closed on entry without branching. Without the integrality
//! filter, a generated child whose system has no integer solution is counted
//! and closed by its parent instead of being visited.

use rustc_hash::{FxHashMap, FxHashSet};
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::Mutex;

use num_bigint::BigInt;
use rayon::prelude::*;

use super::branch::{batch_children, constraint_children, gradient_children, BranchConfig, Children};
use super::leaf::flat_leaf;
use super::node::{Node, NodeKey, PathStats, RowKind};
use super::observer::SolveObserver;
use super::result::{merge_best, Best, DepthStats, SolveStats};
use super::{Algorithm, SolveOptions};
use crate::error::{Error, Result};
use crate::ilp::{BoxBounds, LpSession};
use crate::instance::IqpInstance;

enum Slot {
    Claimed,
    Done(Best),
}

#[derive(Default)]
struct NodeRecord {
    path: PathStats,
    leaf: bool,
    pruned: bool,
    batched: bool,
    children: [u64; 3],
    candidates: u64,
    closed: u64,
    ilp_nodes: u64,
}

pub(crate) struct Engine<'a> {
    inst: &'a IqpInstance,
    opts: &'a SolveOptions,
    bounds: BoxBounds,
    observer: &'a dyn SolveObserver,
    memo: Mutex<FxHashMap<NodeKey, Slot>>,
    records: Mutex<Vec<NodeRecord>>,
    claimed: AtomicU64,
    abort: AtomicBool,
    first_error: Mutex<Option<Error>>,
    parallel: bool,
}

impl<'a> Engine<'a> {
    pub(crate) fn new(inst: &'a IqpInstance, opts: &'a SolveOptions, bounds: BoxBounds, observer: &'a dyn SolveObserver) -> Self {
        Engine {
            inst,
            opts,
            bounds,
            observer,
            memo: Mutex::new(FxHashMap::default()),
            records: Mutex::new(Vec::new()),
            claimed: AtomicU64::new(0),
            abort: AtomicBool::new(false),
            first_error: Mutex::new(None),
            parallel: opts.threads != 1,
        }
    }

    pub(crate) fn run(&self) -> Result<Best> {
        self.visit(Vec::new())
    }

    fn fail(&self, e: Error) -> Error {
        self.abort.store(true, Ordering::SeqCst);
        let mut slot = self.first_error.lock().expect("error slot");
        slot.get_or_insert(e).clone()
    }

    fn visit(&self, key: NodeKey) -> Result<Best> {
        if self.abort.load(Ordering::SeqCst) {
            let e = self.first_error.lock().expect("error slot").clone();
            return Err(e.unwrap_or_else(|| Error::Internal("search aborted".into())));
        }
        let claimer = {
            let mut memo = self.memo.lock().expect("memo");
            match memo.get(&key) {
                Some(Slot::Done(b)) => return Ok(b.clone()),
                Some(Slot::Claimed) => false,
                None => {
                    memo.insert(key.clone(), Slot::Claimed);
                    true
                }
            }
        };
        if claimer {
            let count = self.claimed.fetch_add(1, Ordering::SeqCst) + 1;
            if count > self.opts.max_nodes {
                return Err(self.fail(Error::BudgetExceeded(format!(
                    "search exceeded {} nodes",
                    self.opts.max_nodes
                ))));
            }
        }
        match self.expand(key.clone(), claimer) {
            Ok(best) => {
                self.memo.lock().expect("memo").insert(key, Slot::Done(best.clone()));
                Ok(best)
            }
            Err(e) => Err(self.fail(e)),
        }
    }

    fn expand(&self, key: NodeKey, report: bool) -> Result<Best> {
        let inst = self.inst;
        let node = Node::new(inst, key, self.opts.minor_budget)?;
        let mut rec = NodeRecord {
            path: node.path_stats.clone(),
            ..NodeRecord::default()
        };
        if report {
            self.observer.on_node(inst, &node);
        }
        let lp = if node.integral {
            LpSession::new(&node.region(inst))
        } else {
            None
        };
        let Some(mut lp) = lp else {
            rec.pruned = true;
            if report {
                self.observer.on_leaf(inst, &node, None);
                self.records.lock().expect("records").push(rec);
            }
            return Ok(None);
        };

        let flat = node.r() == 0 || node.classes.is_flat();
        if node.path_stats.batch_performed && !flat {
            return Err(Error::Internal("form does not vanish after a batch branch".into()));
        }
        if flat {
            let leaf = flat_leaf(&node, inst, &self.bounds, self.opts.max_ilp_nodes)?;
            rec.leaf = true;
            rec.ilp_nodes = leaf.ilp_nodes;
            if report {
                self.observer.on_leaf(inst, &node, Some(&leaf));
                self.records.lock().expect("records").push(rec);
            }
            return Ok(leaf.best);
        }

        let cfg = BranchConfig {
            parity_filter: self.opts.parity_filter,
            max_children: self.opts.max_children,
        };
        let mut groups: Vec<(RowKind, Children)> = Vec::new();
        groups.push((RowKind::Constraint, constraint_children(&node, inst, &mut lp, &cfg)?));
        match self.opts.algorithm {
            Algorithm::Sequential => {
                for &i in &node.classes.nonnegative {
                    groups.push((RowKind::Gradient, gradient_children(&node, i, inst, &mut lp, &cfg)?));
                }
            }
            Algorithm::Batch => {
                if node.classes.negative.is_empty() && !node.classes.nonnegative.is_empty() {
                    rec.batched = true;
                    groups.push((RowKind::Batch, batch_children(&node, inst, &mut lp, &cfg)?));
                }
            }
        }

        let mut keys = Vec::new();
        let mut seen = FxHashSet::default();
        for (kind, ch) in &groups {
            let slot = match kind {
                RowKind::Constraint => 0,
                RowKind::Gradient => 1,
                RowKind::Batch => 2,
            };
            rec.children[slot] += ch.children.len() as u64;
            rec.candidates += ch.candidates as u64;
            rec.closed += ch.closed;
            if report {
                self.observer.on_children(inst, &node, *kind, &ch.children);
            }
            for child in &ch.children {
                let k = child.key(&node.key);
                if seen.insert(k.clone()) {
                    keys.push(k);
                }
            }
        }
        if keys.len() as u64 + rec.closed > self.opts.max_children {
            return Err(Error::BudgetExceeded(format!(
                "{} children exceed the per-node limit {}",
                keys.len() as u64 + rec.closed,
                self.opts.max_children
            )));
        }
        rec.path.children_generated = rec.candidates as usize;
        if report {
            if keys.is_empty() {
                self.observer.on_leaf(inst, &node, None);
            }
            self.records.lock().expect("records").push(rec);
        }
        drop(groups);

        if self.parallel {
            keys.into_par_iter()
                .map(|k| self.visit(k))
                .try_reduce(|| None, |a, b| Ok(merge_best(a, b)))
        } else {
            let mut best = None;
            for k in keys {
                best = merge_best(best, self.visit(k)?);
            }
            Ok(best)
        }
    }

    pub(crate) fn stats(&self) -> SolveStats {
        let records = self.records.lock().expect("records");
        let mut s = SolveStats {
            max_delta_seen: BigInt::from(0),
            max_delta_exact: true,
            ..SolveStats::default()
        };
        for r in records.iter() {
            s.nodes += 1;
            s.leaves += u64::from(r.leaf);
            s.pruned_nodes += u64::from(r.pruned);
            s.batches += u64::from(r.batched);
            s.constraint_children += r.children[0];
            s.gradient_children += r.children[1];
            s.batch_children += r.children[2];
            s.candidates += r.candidates;
            s.closed_children += r.closed;
            s.ilp_nodes += r.ilp_nodes;
            let depth = r.path.depth();
            s.max_depth = s.max_depth.max(depth);
            s.max_constraint_steps = s.max_constraint_steps.max(r.path.constraint_steps);
            s.max_gradient_steps = s.max_gradient_steps.max(r.path.gradient_steps);
            if r.path.max_delta_seen > s.max_delta_seen {
                s.max_delta_seen = r.path.max_delta_seen.clone();
                s.max_delta_exact = r.path.delta_exact;
            } else if r.path.max_delta_seen == s.max_delta_seen {
                s.max_delta_exact &= r.path.delta_exact;
            }
            if s.per_depth.len() <= depth {
                s.per_depth.resize(depth + 1, DepthStats::default());
            }
            s.per_depth[depth].nodes += 1;
            s.per_depth[depth].children += r.children.iter().sum::<u64>();
        }
        s
    }
}
