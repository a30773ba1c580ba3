//! Child generation for constraint, gradient and batch branching.
//!
//! Every range below is the one the shallowness argument gives, intersected
//! with the exact LP range of the same functional over the parent's region.
//! Values outside the LP range leave the child without feasible points, so
//! the intersection only removes empty subproblems.

use rustc_hash::FxHashSet;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use super::node::{primitive_part, AppendedRow, Node, NodeKey, RowKind};
use crate::error::{Error, Result};
use crate::ilp::lp::{ceil_rat, floor_rat};
use crate::ilp::LpSession;
use crate::instance::IqpInstance;
use crate::linalg::matrix::{dot, quad_form};
use crate::linalg::{integer_solvable, solvable_flat, IntMatrix, LatticeFrame, RowSpace, RowTest};

#[derive(Clone, Copy, Debug)]
pub struct BranchConfig {
    /// Drop children whose equality system has no integer solution. For a
    /// single gradient row this is the parity rule `z ≡ cᵀy (mod 2)`.
    pub parity_filter: bool,
    pub max_children: u64,
}

impl Default for BranchConfig {
    fn default() -> Self {
        BranchConfig {
            parity_filter: true,
            max_children: 100_000,
        }
    }
}

/// A child subproblem: the parent's system plus `rows`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Child {
    pub kind: RowKind,
    /// Appended rows and right-hand sides as generated.
    pub rows: Vec<(Vec<BigInt>, BigInt)>,
    /// The same rows in canonical form.
    pub entries: Vec<AppendedRow>,
}

impl Child {
    fn new(kind: RowKind, rows: Vec<(Vec<BigInt>, BigInt)>) -> Self {
        let mut entries: Vec<AppendedRow> = rows
            .iter()
            .map(|(r, b)| AppendedRow::canonical(kind, r, b))
            .collect();
        entries.sort();
        Child {
            kind,
            rows,
            entries,
        }
    }

    pub fn key(&self, parent: &NodeKey) -> NodeKey {
        let mut k = parent.clone();
        k.extend(self.entries.iter().cloned());
        k.sort();
        k
    }

    /// The child's full equality system with the new rows last.
    pub fn system(&self, parent: &Node) -> (IntMatrix, Vec<BigInt>) {
        let mut c = parent.c.clone();
        let mut d = parent.d.clone();
        for (r, b) in &self.rows {
            c.push_row(r);
            d.push(b.clone());
        }
        (c, d)
    }
}

/// One appended row with varying right-hand side, canonicalized once.
struct RowFamily {
    kind: RowKind,
    row: Vec<BigInt>,
    prim: Vec<BigInt>,
    scale: BigInt,
    test: Option<RowTest>,
}

impl RowFamily {
    fn child(&self, rhs: BigInt) -> Child {
        let entry = AppendedRow::scaled(self.kind, self.prim.clone(), &self.scale, &rhs);
        Child {
            kind: self.kind,
            rows: vec![(self.row.clone(), rhs)],
            entries: vec![entry],
        }
    }

    /// Right-hand sides in `[lo, hi]` that can yield a child. With the
    /// filter these are the admitted residues only.
    fn values(&self, filter: bool, lo: &BigInt, hi: &BigInt) -> Box<dyn Iterator<Item = BigInt>> {
        match (&self.test, filter) {
            (Some(t), true) => Box::new(t.admitted_in(lo, hi)),
            (None, true) => Box::new(std::iter::empty()),
            (_, false) => {
                let hi = hi.clone();
                Box::new(std::iter::successors(Some(lo.clone()), |v| Some(v + 1u32)).take_while(move |v| *v <= hi))
            }
        }
    }
}

/// Generated children plus the number of candidate values in the ranges.
/// Without the filter, `closed` counts children whose system has no integer
/// solution; they are dropped here instead of being visited.
#[derive(Clone, Debug, Default)]
pub struct Children {
    pub children: Vec<Child>,
    pub candidates: usize,
    pub closed: u64,
}

/// The parent's system in `i64`, row-major, with scratch space for one
/// stacked check.
struct SmallSystem {
    c: Vec<i64>,
    d: Vec<i64>,
    h: Vec<i64>,
    rhs: Vec<i64>,
    y: Vec<i64>,
}

impl SmallSystem {
    fn of(parent: &Node) -> Option<Self> {
        let c = parent
            .c
            .row_iter()
            .flatten()
            .map(ToPrimitive::to_i64)
            .collect::<Option<Vec<_>>>()?;
        let d = parent.d.iter().map(ToPrimitive::to_i64).collect::<Option<Vec<_>>>()?;
        Some(SmallSystem {
            c,
            d,
            h: Vec::new(),
            rhs: Vec::new(),
            y: vec![0; parent.c.cols()],
        })
    }

    /// `None` when an entry or an intermediate value leaves `i64`.
    fn solvable(&mut self, rows: &[(&[BigInt], &BigInt)]) -> Option<bool> {
        self.h.clear();
        self.rhs.clear();
        self.h.extend_from_slice(&self.c);
        self.rhs.extend_from_slice(&self.d);
        for (r, b) in rows {
            for v in r.iter() {
                self.h.push(v.to_i64()?);
            }
            self.rhs.push(b.to_i64()?);
        }
        solvable_flat(&mut self.h, self.y.len(), &self.rhs, &mut self.y)
    }

    fn solvable_row(&mut self, row: &[i64], rhs: i64) -> Option<bool> {
        self.h.clear();
        self.rhs.clear();
        self.h.extend_from_slice(&self.c);
        self.h.extend_from_slice(row);
        self.rhs.extend_from_slice(&self.d);
        self.rhs.push(rhs);
        solvable_flat(&mut self.h, self.y.len(), &self.rhs, &mut self.y)
    }
}

struct Collector<'a> {
    seen: FxHashSet<Vec<AppendedRow>>,
    out: Children,
    filter: bool,
    parent: &'a Node,
    what: &'static str,
    limit: u64,
    generated: u64,
    // built on first use; the inner None marks a parent without integer points
    frame: Option<Option<LatticeFrame>>,
    small: Option<Option<SmallSystem>>,
}

impl<'a> Collector<'a> {
    fn new(cfg: &BranchConfig, parent: &'a Node, what: &'static str) -> Self {
        Collector {
            seen: FxHashSet::default(),
            out: Children::default(),
            filter: cfg.parity_filter,
            parent,
            what,
            limit: cfg.max_children,
            generated: 0,
            frame: None,
            small: None,
        }
    }

    fn frame(&mut self) -> Option<&LatticeFrame> {
        let parent = self.parent;
        self.frame
            .get_or_insert_with(|| LatticeFrame::new(&parent.c, &parent.d))
            .as_ref()
    }

    fn family(&mut self, kind: RowKind, row: Vec<BigInt>) -> RowFamily {
        let (prim, scale) = primitive_part(&row);
        let test = if self.filter { self.frame().map(|f| f.prepare(&row)) } else { None };
        RowFamily {
            kind,
            row,
            prim,
            scale,
            test,
        }
    }

    fn add_candidates(&mut self, lo: &BigInt, hi: &BigInt) {
        let width = (hi - lo + 1u32).to_usize().unwrap_or(usize::MAX);
        self.out.candidates = self.out.candidates.saturating_add(width);
    }

    /// Counts one generated child against the per-node limit.
    fn generate(&mut self) -> Result<()> {
        self.generated += 1;
        if self.generated > self.limit {
            return check_budget(&BigInt::from(self.generated), self.limit, self.what);
        }
        Ok(())
    }

    /// Integer solvability of the parent's system plus `rows`, computed from
    /// scratch without the parent's frame.
    fn solvable(&mut self, rows: &[(&[BigInt], &BigInt)]) -> bool {
        let parent = self.parent;
        let small = self.small.get_or_insert_with(|| SmallSystem::of(parent));
        if let Some(found) = small.as_mut().and_then(|s| s.solvable(rows)) {
            return found;
        }
        let mut c = parent.c.clone();
        let mut d = parent.d.clone();
        for (r, b) in rows {
            c.push_row(r);
            d.push((*b).clone());
        }
        integer_solvable(&c, &d)
    }

    /// Offers every right-hand side in `[lo, hi]` the filter lets through.
    fn offer_range(&mut self, fam: &RowFamily, lo: &BigInt, hi: &BigInt) -> Result<()> {
        if !self.filter {
            let parent = self.parent;
            self.small.get_or_insert_with(|| SmallSystem::of(parent));
            let row: Option<Vec<i64>> = fam.row.iter().map(ToPrimitive::to_i64).collect();
            if let (Some(l), Some(h), Some(row), Some(Some(_))) = (lo.to_i64(), hi.to_i64(), row, &self.small) {
                for v in l..=h {
                    let small = self.small.as_mut().and_then(Option::as_mut).expect("built above");
                    match small.solvable_row(&row, v) {
                        Some(false) => {
                            self.out.closed += 1;
                            self.generate()?;
                        }
                        Some(true) => self.push(fam.child(BigInt::from(v)))?,
                        None => self.offer_rhs(fam, BigInt::from(v))?,
                    }
                }
                return Ok(());
            }
        }
        for v in fam.values(self.filter, lo, hi) {
            self.offer_rhs(fam, v)?;
        }
        Ok(())
    }

    fn push(&mut self, child: Child) -> Result<()> {
        if self.seen.insert(child.entries.clone()) {
            self.out.children.push(child);
            self.generate()?;
        }
        Ok(())
    }

    fn offer_rhs(&mut self, fam: &RowFamily, rhs: BigInt) -> Result<()> {
        if !self.filter && !self.solvable(&[(&fam.row, &rhs)]) {
            self.out.closed += 1;
            return self.generate();
        }
        self.push(fam.child(rhs))
    }

    /// Offers a batch child whose rows were already checked jointly when the
    /// filter is on.
    fn offer(&mut self, child: Child) -> Result<()> {
        if !self.filter {
            let rows: Vec<(&[BigInt], &BigInt)> = child.rows.iter().map(|(r, b)| (r.as_slice(), b)).collect();
            if !self.solvable(&rows) {
                self.out.closed += 1;
                return self.generate();
            }
        }
        self.push(child)
    }
}

fn check_budget(count: &BigInt, limit: u64, what: &str) -> Result<()> {
    if *count > BigInt::from(limit) {
        return Err(Error::BudgetExceeded(format!(
            "{count} {what} children exceed the per-node limit {limit}"
        )));
    }
    Ok(())
}

/// Integer range `[lo, hi]` of `rowᵀx + offset` over the region.
fn integer_range(lp: &mut LpSession, row: &[BigInt], offset: &BigInt) -> (Option<BigInt>, Option<BigInt>) {
    let (lo, hi) = lp.range(row);
    (
        lo.map(|v| ceil_rat(&v) + offset),
        hi.map(|v| floor_rat(&v) + offset),
    )
}

fn clamp(lo: BigInt, hi: BigInt, range: (Option<BigInt>, Option<BigInt>)) -> (BigInt, BigInt) {
    let lo = match range.0 {
        Some(l) if l > lo => l,
        _ => lo,
    };
    let hi = match range.1 {
        Some(h) if h < hi => h,
        _ => hi,
    };
    (lo, hi)
}

/// One child per row `a_j ∉ rowspace(C)` and per `b′ ∈ [b_j − W_j, b_j]`,
/// where `W_j = max_i |a_jᵀy_i|`.
pub fn constraint_children(node: &Node, inst: &IqpInstance, lp: &mut LpSession, cfg: &BranchConfig) -> Result<Children> {
    let rs = RowSpace::of(&node.c);
    let mut col = Collector::new(cfg, node, "constraint");
    for (a, b) in inst.a.row_iter().zip(&inst.b) {
        if rs.contains(a) {
            continue;
        }
        let w = node
            .basis
            .vectors
            .iter()
            .map(|y| dot(a, y).abs())
            .max()
            .unwrap_or_else(BigInt::zero);
        let range = integer_range(lp, a, &BigInt::zero());
        let (lo, hi) = clamp(b - &w, b.clone(), range);
        if lo > hi {
            continue;
        }
        col.add_candidates(&lo, &hi);
        let fam = col.family(RowKind::Constraint, a.to_vec());
        col.offer_range(&fam, &lo, &hi)?;
    }
    Ok(col.out)
}

/// Gradient row `2y_iᵀQ`, offset `cᵀy_i` and the range of `z` for direction
/// `i`, clamped to `|z| ≤ y_iᵀQy_i`.
fn gradient_range(node: &Node, i: usize, inst: &IqpInstance, lp: &mut LpSession) -> (Vec<BigInt>, BigInt, BigInt, BigInt) {
    let y = &node.basis.vectors[i];
    let row: Vec<BigInt> = inst.q.left_mul_vec(y).into_iter().map(|v| v * 2).collect();
    let curv = quad_form(&inst.q, y);
    let cy = dot(&inst.c, y);
    let range = integer_range(lp, &row, &cy);
    let (lo, hi) = clamp(-&curv, curv, range);
    (row, cy, lo, hi)
}

/// Children for one direction `i ∈ 𝒢`: append `2y_iᵀQ x = z − cᵀy_i` for
/// every `|z| ≤ y_iᵀQy_i`. The filter keeps `z ≡ cᵀy_i (mod 2)` and any
/// further residue condition the parent's lattice imposes.
pub fn gradient_children(node: &Node, i: usize, inst: &IqpInstance, lp: &mut LpSession, cfg: &BranchConfig) -> Result<Children> {
    let mut col = Collector::new(cfg, node, "gradient");
    let (row, cy, lo, hi) = gradient_range(node, i, inst, lp);
    if lo > hi {
        return Ok(col.out);
    }
    col.add_candidates(&lo, &hi);
    let fam = col.family(RowKind::Gradient, row);
    col.offer_range(&fam, &(&lo - &cy), &(&hi - &cy))?;
    Ok(col.out)
}

/// Indices of `𝒢′`: directions of `𝒢` whose gradient rows extend the rank of
/// `rowspace(C)`, taken greedily in ascending order.
pub fn batch_selection(node: &Node, q: &IntMatrix) -> Vec<usize> {
    let mut rs = RowSpace::of(&node.c);
    node.classes
        .nonnegative
        .iter()
        .copied()
        .filter(|&i| rs.insert(&q.left_mul_vec(&node.basis.vectors[i])))
        .collect()
}

/// One child per tuple `(z_i)_{i∈𝒢′}`, appending all gradient rows at once.
/// With the filter, tuples are built axis by axis and a prefix whose rows
/// already have no integer solution is not extended.
pub fn batch_children(node: &Node, inst: &IqpInstance, lp: &mut LpSession, cfg: &BranchConfig) -> Result<Children> {
    let sel = batch_selection(node, &inst.q);
    let mut col = Collector::new(cfg, node, "batch");
    let mut axes: Vec<(Vec<BigInt>, Vec<BigInt>)> = Vec::with_capacity(sel.len());
    let mut candidates = BigInt::from(1);
    for &i in &sel {
        let (row, cy, lo, hi) = gradient_range(node, i, inst, lp);
        if lo > hi {
            return Ok(col.out);
        }
        candidates *= &hi - &lo + 1u32;
        let fam = col.family(RowKind::Batch, row);
        let rhs: Vec<BigInt> = fam.values(cfg.parity_filter, &(&lo - &cy), &(&hi - &cy)).collect();
        axes.push((fam.row, rhs));
    }
    col.out.candidates = candidates.to_usize().unwrap_or(usize::MAX);
    if !cfg.parity_filter {
        // every tuple is generated, so the count is known up front
        let product = axes.iter().fold(BigInt::from(1), |p, (_, v)| p * v.len());
        check_budget(&product, cfg.max_children, "batch")?;
    }
    let mut prefix = Vec::with_capacity(axes.len());
    extend_tuple(&mut col, &axes, &mut prefix)?;
    Ok(col.out)
}

fn extend_tuple(col: &mut Collector, axes: &[(Vec<BigInt>, Vec<BigInt>)], prefix: &mut Vec<(Vec<BigInt>, BigInt)>) -> Result<()> {
    let Some((row, values)) = axes.get(prefix.len()) else {
        return col.offer(Child::new(RowKind::Batch, prefix.clone()));
    };
    for v in values {
        prefix.push((row.clone(), v.clone()));
        // single rows were filtered per axis already
        let consistent = !col.filter || prefix.len() < 2 || col.frame().is_some_and(|f| f.admits(prefix));
        if consistent {
            extend_tuple(col, axes, prefix)?;
        }
        prefix.pop();
    }
    Ok(())
}
