use super::branch::Child;
use super::leaf::LeafOutcome;
use super::node::{Node, RowKind};
use crate::instance::IqpInstance;

/// Hooks into the search. Each distinct subproblem is reported once, from
/// whichever worker first reaches it, so implementations must be `Sync`.
pub trait SolveObserver: Sync {
    fn on_node(&self, _inst: &IqpInstance, _node: &Node) {}

    /// Children of one branching rule at `parent`, after deduplication.
    fn on_children(&self, _inst: &IqpInstance, _parent: &Node, _kind: RowKind, _children: &[Child]) {}

    /// A terminal node: a flat leaf, an LP-empty subproblem (`outcome` is
    /// `None`), or a node all of whose candidate children were empty.
    fn on_leaf(&self, _inst: &IqpInstance, _node: &Node, _outcome: Option<&LeafOutcome>) {}
}

pub struct NoObserver;

impl SolveObserver for NoObserver {}
