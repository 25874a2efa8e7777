//! Frontier-based search: a dynamic program over an edge ordering.
//!
//! Edges are processed one at a time in an order chosen to keep the frontier
//! (vertices incident to both processed and unprocessed edges) small. Each DP
//! state summarizes a set of partial subgraphs by the mate configuration of
//! the frontier — which vertices are untouched, saturated (degree 2), or the
//! end of a path fragment and if so where the fragment's other end sits — plus
//! how many endpoints have permanently left with degree 1 and whether a
//! finished path exists. States with the same configuration are merged by
//! adding their per-length count vectors, which is what lets this engine count
//! astronomically many paths without visiting them.

use std::collections::HashMap;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use smallvec::SmallVec;

use crate::btcount::{bfs_distances, DistanceMap};
use crate::cancel::CancelToken;
use crate::count::Count;
use crate::instance::{Graph, Instance, ProblemKind, Vertex};
use crate::SolverError;

/// Default number of randomized restarts when searching for an edge order.
pub const DEFAULT_ORDER_EFFORT: u32 = 4;

/// Default cap on live DP states before giving up.
pub const DEFAULT_STATE_CAP: usize = 2_000_000;

const ORDER_SEED: u64 = 0x9E37_79B9_7F4A_7C15;

/// An edge processing order together with the exact maximum frontier size it
/// induces. The width is this artifact's computable stand-in for pathwidth.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeOrder {
    perm: Vec<usize>,
    width: usize,
}

impl EdgeOrder {
    /// Builds an order from an explicit permutation of edge indices,
    /// computing its width. Mostly useful for tests and experiments;
    /// [`compute_edge_order`] is the usual entry point.
    pub fn from_permutation(g: &Graph, perm: Vec<usize>) -> Result<Self, SolverError> {
        let width = simulate_width(g, &perm)?;
        Ok(Self { perm, width })
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn width(&self) -> usize {
        self.width
    }
}

/// One step of a frontier walk: the processed edge, which endpoints enter the
/// frontier at this step, which vertices leave after it, and the frontier once
/// the step is done.
#[derive(Debug, Clone)]
pub struct FrontierStep {
    pub edge: (Vertex, Vertex),
    pub enter: Vec<Vertex>,
    pub leave: Vec<Vertex>,
    pub frontier_after: Vec<Vertex>,
}

/// The full per-step frontier evolution induced by an edge order.
#[derive(Debug, Clone)]
pub struct FrontierSequence {
    pub steps: Vec<FrontierStep>,
    /// `max |frontier_after|`, floored at 1 for any graph with an edge.
    pub width: usize,
}

/// Picks an edge order greedily: at each step take the edge minimizing the
/// next frontier size, breaking ties by smallest edge index. `effort`
/// additional restarts re-run the greedy sweep with seeded random
/// tie-breaking and the narrowest order found wins. Deterministic for fixed
/// `(g, effort)`.
pub fn compute_edge_order(g: &Graph, effort: u32) -> EdgeOrder {
    if g.edge_count() == 0 {
        return EdgeOrder { perm: Vec::new(), width: 0 };
    }
    let mut best = greedy_order(g, None);
    for restart in 0..effort {
        let mut rng = ChaCha8Rng::seed_from_u64(ORDER_SEED ^ restart as u64);
        let candidate = greedy_order(g, Some(&mut rng));
        if candidate.width < best.width {
            best = candidate;
        }
    }
    best
}

fn greedy_order(g: &Graph, mut rng: Option<&mut ChaCha8Rng>) -> EdgeOrder {
    let edges = g.edges();
    let m = edges.len();
    let n = g.vertex_count() as usize;
    let mut remaining = vec![0u32; n + 1];
    for &(u, v) in edges {
        remaining[u as usize] += 1;
        remaining[v as usize] += 1;
    }
    let mut touched = vec![false; n + 1];
    let mut in_frontier = vec![false; n + 1];
    let mut frontier_size = 0usize;
    let mut used = vec![false; m];
    let mut perm = Vec::with_capacity(m);
    let mut width = 0usize;

    for _ in 0..m {
        let mut best_size = usize::MAX;
        let mut candidates: Vec<usize> = Vec::new();
        for (e, &(u, v)) in edges.iter().enumerate() {
            if used[e] {
                continue;
            }
            let mut size = frontier_size;
            for x in [u, v] {
                let x = x as usize;
                if !touched[x] {
                    if remaining[x] > 1 {
                        size += 1;
                    }
                } else if remaining[x] == 1 {
                    size -= 1;
                }
            }
            if size < best_size {
                best_size = size;
                candidates.clear();
            }
            if size == best_size {
                candidates.push(e);
            }
        }
        let pick = match rng.as_deref_mut() {
            Some(r) => candidates[r.gen_range(0..candidates.len())],
            None => candidates[0],
        };
        used[pick] = true;
        perm.push(pick);
        let (u, v) = edges[pick];
        for x in [u, v] {
            let x = x as usize;
            let first = !touched[x];
            touched[x] = true;
            remaining[x] -= 1;
            if first && remaining[x] > 0 {
                in_frontier[x] = true;
                frontier_size += 1;
            } else if !first && in_frontier[x] && remaining[x] == 0 {
                in_frontier[x] = false;
                frontier_size -= 1;
            }
        }
        width = width.max(frontier_size);
    }
    EdgeOrder { perm, width: width.max(1) }
}

/// Replays an order and reports the per-step frontier with enter/leave events.
pub fn frontier_sequence(g: &Graph, order: &EdgeOrder) -> Result<FrontierSequence, SolverError> {
    let plans = step_plans(g, order)?;
    let steps = plans
        .iter()
        .map(|p| FrontierStep {
            edge: p.edge,
            enter: p.enter.clone(),
            leave: p.leave_pos.iter().map(|&i| p.working[i]).collect(),
            frontier_after: p.frontier_after.clone(),
        })
        .collect();
    let width = plans.iter().map(|p| p.frontier_after.len()).max().unwrap_or(0);
    let width = if g.edge_count() > 0 { width.max(1) } else { width };
    Ok(FrontierSequence { steps, width })
}

fn simulate_width(g: &Graph, perm: &[usize]) -> Result<usize, SolverError> {
    let order = EdgeOrder { perm: perm.to_vec(), width: 0 };
    frontier_sequence(g, &order).map(|seq| seq.width)
}

/// Precomputed geometry for one DP step.
struct StepPlan {
    edge: (Vertex, Vertex),
    /// Sorted working frontier: previous frontier plus entering endpoints.
    working: Vec<Vertex>,
    /// Position of each previous-frontier vertex inside `working`.
    carry: Vec<usize>,
    enter: Vec<Vertex>,
    upos: usize,
    vpos: usize,
    /// Positions in `working` (ascending) that leave after this step.
    leave_pos: Vec<usize>,
    frontier_after: Vec<Vertex>,
}

fn step_plans(g: &Graph, order: &EdgeOrder) -> Result<Vec<StepPlan>, SolverError> {
    let edges = g.edges();
    let m = edges.len();
    if order.perm.len() != m {
        return Err(SolverError::OrderMismatch { expected: m, found: order.perm.len() });
    }
    let mut seen = vec![false; m];
    for &e in &order.perm {
        if e >= m || seen[e] {
            return Err(SolverError::OrderMismatch { expected: m, found: order.perm.len() });
        }
        seen[e] = true;
    }

    let n = g.vertex_count() as usize;
    let mut remaining = vec![0u32; n + 1];
    for &(u, v) in edges {
        remaining[u as usize] += 1;
        remaining[v as usize] += 1;
    }
    let mut touched = vec![false; n + 1];
    let mut frontier: Vec<Vertex> = Vec::new();
    let mut plans = Vec::with_capacity(m);

    for &e in &order.perm {
        let (u, v) = edges[e];
        let mut enter: Vec<Vertex> = [u, v].iter().copied().filter(|&x| !touched[x as usize]).collect();
        enter.sort_unstable();
        let mut working = frontier.clone();
        for &x in &enter {
            let pos = working.binary_search(&x).unwrap_err();
            working.insert(pos, x);
        }
        let carry = frontier
            .iter()
            .map(|x| working.binary_search(x).unwrap())
            .collect();
        let upos = working.binary_search(&u).unwrap();
        let vpos = working.binary_search(&v).unwrap();

        for x in [u, v] {
            touched[x as usize] = true;
            remaining[x as usize] -= 1;
        }
        let mut leave_pos: Vec<usize> = [u, v]
            .iter()
            .filter(|&&x| remaining[x as usize] == 0)
            .map(|&x| working.binary_search(&x).unwrap())
            .collect();
        leave_pos.sort_unstable();
        leave_pos.dedup();
        let frontier_after: Vec<Vertex> = working
            .iter()
            .enumerate()
            .filter(|(i, _)| !leave_pos.contains(i))
            .map(|(_, &x)| x)
            .collect();
        frontier = frontier_after.clone();
        plans.push(StepPlan { edge: (u, v), working, carry, enter, upos, vpos, leave_pos, frontier_after });
    }
    Ok(plans)
}

/// Knobs for one DP run.
#[derive(Debug, Clone)]
pub struct FbsOptions {
    pub cancel: CancelToken,
    /// Abort with [`SolverError::MemoryBudgetExceeded`] once more than this
    /// many states are live at once.
    pub state_cap: usize,
    /// Merge states with identical configurations by adding their count
    /// vectors. Disabling this turns the DP into a plain branch enumeration;
    /// only useful to cross-check merging on tiny instances.
    pub merge_states: bool,
    /// Discard states that provably cannot finish a single-pair path within
    /// the length bound. Sound; skipped for all-pairs instances where the
    /// bound is too weak to matter.
    pub length_prune: bool,
}

impl Default for FbsOptions {
    fn default() -> Self {
        Self {
            cancel: CancelToken::new(),
            state_cap: DEFAULT_STATE_CAP,
            merge_states: true,
            length_prune: true,
        }
    }
}

impl FbsOptions {
    pub fn new() -> Self {
        Self::default()
    }
}

// Mate slot encoding. Anything below FIXED_END is a mate vertex id.
const UNTOUCHED: u32 = u32::MAX;
const SATURATED: u32 = u32::MAX - 1;
const FIXED_END: u32 = u32::MAX - 2;

type Mates = SmallVec<[u32; 8]>;

#[derive(Clone, PartialEq, Eq, Hash)]
struct StateKey {
    mates: Mates,
    endpoints_fixed: u8,
    complete: bool,
}

/// State table for one DP level. With merging enabled, an index maps keys to
/// entry slots and colliding states add their vectors; without it every
/// branch stays separate.
struct Table<C> {
    entries: Vec<(StateKey, Vec<C>)>,
    index: Option<HashMap<StateKey, usize>>,
}

impl<C: Count> Table<C> {
    fn new(merge: bool) -> Self {
        Self {
            entries: Vec::new(),
            index: merge.then(HashMap::new),
        }
    }

    fn insert(&mut self, key: StateKey, counts: Vec<C>) {
        match &mut self.index {
            Some(index) => match index.get(&key) {
                Some(&slot) => {
                    let dst = &mut self.entries[slot].1;
                    for (d, s) in dst.iter_mut().zip(&counts) {
                        *d += s;
                    }
                }
                None => {
                    index.insert(key.clone(), self.entries.len());
                    self.entries.push((key, counts));
                }
            },
            None => self.entries.push((key, counts)),
        }
    }

    fn len(&self) -> usize {
        self.entries.len()
    }
}

/// Counts qualifying paths, returning exactly what the backtracking engine
/// would. Works for both problem kinds.
pub fn count_paths_fbs<C: Count>(
    inst: &Instance,
    order: &EdgeOrder,
    opts: &FbsOptions,
) -> Result<C, SolverError> {
    let by_len = run_dp::<C>(inst, order, opts)?;
    let mut total = C::zero();
    for c in &by_len {
        total += c;
    }
    Ok(total)
}

/// Per-length breakdown: entry `k` counts qualifying paths with exactly `k`
/// edges, indexed `0..=max_len`. Entry 0 is always zero and the entries sum
/// to [`count_paths_fbs`].
pub fn count_by_length<C: Count>(
    inst: &Instance,
    order: &EdgeOrder,
    opts: &FbsOptions,
) -> Result<Vec<C>, SolverError> {
    let mut by_len = run_dp::<C>(inst, order, opts)?;
    by_len.resize(inst.max_len as usize + 1, C::zero());
    Ok(by_len)
}

struct PairPrune {
    s: Vertex,
    t: Vertex,
    dist_s: DistanceMap,
    dist_t: DistanceMap,
}

/// Per-step context shared by every state at that step.
struct StepCtx<'a> {
    plan: &'a StepPlan,
    terminals: Option<(Vertex, Vertex)>,
    prune: Option<&'a PairPrune>,
    limit: usize,
    /// Terminals that have permanently left the frontier by the end of this
    /// step. Structural: a vertex departs when its last incident edge is
    /// processed, identically in every state.
    s_gone: bool,
    t_gone: bool,
}

fn run_dp<C: Count>(
    inst: &Instance,
    order: &EdgeOrder,
    opts: &FbsOptions,
) -> Result<Vec<C>, SolverError> {
    let g = &inst.graph;
    let plans = step_plans(g, order)?;
    let limit = inst.max_len.min(g.vertex_count().saturating_sub(1)) as usize;
    let terminals = inst.terminals;
    let prune = match (inst.kind(), opts.length_prune) {
        (ProblemKind::SinglePair, true) => {
            let (s, t) = terminals.unwrap();
            Some(PairPrune {
                s,
                t,
                dist_s: bfs_distances(g, s).expect("terminal in range"),
                dist_t: bfs_distances(g, t).expect("terminal in range"),
            })
        }
        _ => None,
    };

    let mut zero_vec = Vec::with_capacity(limit + 1);
    zero_vec.resize(limit + 1, C::zero());
    let mut initial = zero_vec.clone();
    initial[0] = C::one();

    let mut cur: Table<C> = Table::new(opts.merge_states);
    cur.insert(
        StateKey { mates: Mates::new(), endpoints_fixed: 0, complete: false },
        initial,
    );

    let mut s_gone = false;
    let mut t_gone = false;
    for plan in &plans {
        if opts.cancel.is_cancelled() {
            return Err(SolverError::Cancelled);
        }
        if let Some((s, t)) = terminals {
            for &pos in &plan.leave_pos {
                s_gone |= plan.working[pos] == s;
                t_gone |= plan.working[pos] == t;
            }
        }
        let ctx = StepCtx { plan, terminals, prune: prune.as_ref(), limit, s_gone, t_gone };
        let mut next: Table<C> = Table::new(opts.merge_states);
        for (key, counts) in std::mem::take(&mut cur.entries) {
            // Lift the state onto the working frontier: entering vertices
            // start untouched.
            let mut working: Mates = SmallVec::new();
            working.resize(plan.working.len(), UNTOUCHED);
            for (old, &new_pos) in plan.carry.iter().enumerate() {
                working[new_pos] = key.mates[old];
            }

            // Take branch first so the skip branch can move `counts`.
            if !key.complete {
                if let Some(mut taken) = apply_take(&working, plan, terminals) {
                    let mut shifted = counts.clone();
                    shifted.rotate_right(1);
                    shifted[0] = C::zero();
                    finalize(
                        &mut next,
                        &ctx,
                        std::mem::take(&mut taken.mates),
                        key.endpoints_fixed,
                        taken.complete,
                        shifted,
                    );
                }
            }
            finalize(&mut next, &ctx, working, key.endpoints_fixed, key.complete, counts);
            if next.len() > opts.state_cap {
                return Err(SolverError::MemoryBudgetExceeded { cap: opts.state_cap });
            }
        }
        cur = next;
    }

    let mut by_len = zero_vec;
    for (key, counts) in &cur.entries {
        if key.complete {
            for (d, s) in by_len.iter_mut().zip(counts) {
                *d += s;
            }
        }
    }
    Ok(by_len)
}

struct Taken {
    mates: Mates,
    complete: bool,
}

/// Where a fragment's far end sits, seen from one endpoint of the new edge.
enum FarEnd {
    InFrontier(usize),
    Fixed,
}

/// Applies the degree/mate transition for taking the current edge, or rejects.
fn apply_take(working: &Mates, plan: &StepPlan, terminals: Option<(Vertex, Vertex)>) -> Option<Taken> {
    let (u, v) = plan.edge;
    let (upos, vpos) = (plan.upos, plan.vpos);
    let su = working[upos];
    let sv = working[vpos];
    if su == SATURATED || sv == SATURATED {
        return None; // degree would exceed 2
    }
    if let Some((s, t)) = terminals {
        // terminals are path endpoints: degree at most 1
        if (u == s || u == t) && su != UNTOUCHED {
            return None;
        }
        if (v == s || v == t) && sv != UNTOUCHED {
            return None;
        }
    }
    if su == v {
        return None; // u and v are the two ends of one fragment: a cycle
    }

    let far = |slot: u32, own: usize| -> FarEnd {
        match slot {
            UNTOUCHED => FarEnd::InFrontier(own),
            FIXED_END => FarEnd::Fixed,
            mate => FarEnd::InFrontier(
                plan.working.binary_search(&mate).expect("mate stays in frontier"),
            ),
        }
    };
    let eu = far(su, upos);
    let ev = far(sv, vpos);

    let mut mates = working.clone();
    let mut complete = false;
    match (eu, ev) {
        (FarEnd::InFrontier(a), FarEnd::InFrontier(b)) => {
            mates[a] = plan.working[b];
            mates[b] = plan.working[a];
            if a != upos {
                mates[upos] = SATURATED;
            }
            if b != vpos {
                mates[vpos] = SATURATED;
            }
        }
        (FarEnd::InFrontier(a), FarEnd::Fixed) => {
            mates[a] = FIXED_END;
            if a != upos {
                mates[upos] = SATURATED;
            }
            mates[vpos] = SATURATED;
        }
        (FarEnd::Fixed, FarEnd::InFrontier(b)) => {
            mates[b] = FIXED_END;
            if b != vpos {
                mates[vpos] = SATURATED;
            }
            mates[upos] = SATURATED;
        }
        (FarEnd::Fixed, FarEnd::Fixed) => {
            // both fragments already lost an endpoint off-frontier; joining
            // them finishes the path
            mates[upos] = SATURATED;
            mates[vpos] = SATURATED;
            complete = true;
        }
    }
    Some(Taken { mates, complete })
}

/// Retires this step's leaving vertices (checking their final degrees),
/// applies the length-feasibility prune, and stores the surviving state.
fn finalize<C: Count>(
    table: &mut Table<C>,
    ctx: &StepCtx<'_>,
    mut mates: Mates,
    mut endpoints_fixed: u8,
    mut complete: bool,
    mut counts: Vec<C>,
) {
    let plan = ctx.plan;
    for &pos in &plan.leave_pos {
        let vertex = plan.working[pos];
        let is_terminal = ctx.terminals.is_some_and(|(s, t)| vertex == s || vertex == t);
        match mates[pos] {
            UNTOUCHED => {
                if is_terminal {
                    return; // a terminal must end with degree exactly 1
                }
            }
            SATURATED => {}
            slot => {
                // leaving with degree 1: a permanent path endpoint
                if ctx.terminals.is_some() && !is_terminal {
                    return;
                }
                endpoints_fixed += 1;
                if endpoints_fixed > 2 {
                    return;
                }
                if slot == FIXED_END {
                    if complete {
                        return; // would finish a second path
                    }
                    complete = true;
                } else {
                    let partner = plan.working.binary_search(&slot).expect("mate in frontier");
                    mates[partner] = FIXED_END;
                }
            }
        }
    }

    let final_mates: Mates = mates
        .iter()
        .enumerate()
        .filter(|(i, _)| !plan.leave_pos.contains(i))
        .map(|(_, &m)| m)
        .collect();

    if let Some(pair) = ctx.prune {
        if !complete {
            let bound = remaining_lower_bound(&final_mates, &plan.frontier_after, pair, ctx);
            let mut live = false;
            for (k, c) in counts.iter_mut().enumerate() {
                if !c.is_zero() {
                    if bound.is_none_or(|b| k + b > ctx.limit) {
                        *c = C::zero();
                    } else {
                        live = true;
                    }
                }
            }
            if !live {
                return;
            }
        }
    } else if counts.iter().all(|c| c.is_zero()) {
        return;
    }

    table.insert(
        StateKey { mates: final_mates, endpoints_fixed, complete },
        counts,
    );
}

/// Sound lower bound on the edges still needed to finish a single-pair path:
/// joining `f` fragments takes at least `f - 1` edges, and a terminal without
/// an edge yet must still reach some open fragment end (at least its BFS
/// distance to the nearest one). `None` means provably infeasible.
fn remaining_lower_bound(
    mates: &Mates,
    frontier: &[Vertex],
    pair: &PairPrune,
    ctx: &StepCtx<'_>,
) -> Option<usize> {
    let mut fragments = 0usize;
    let mut open_ends: SmallVec<[Vertex; 8]> = SmallVec::new();
    for (i, &slot) in mates.iter().enumerate() {
        match slot {
            UNTOUCHED | SATURATED => {}
            FIXED_END => {
                fragments += 1;
                open_ends.push(frontier[i]);
            }
            mate => {
                open_ends.push(frontier[i]);
                if frontier[i] < mate {
                    fragments += 1;
                }
            }
        }
    }

    if fragments == 0 {
        // nothing started yet: the whole s-t distance lies ahead
        return pair.dist_t.get(pair.s).map(|d| d as usize);
    }

    let gap = |terminal: Vertex, departed: bool, dist: &DistanceMap| -> Option<usize> {
        // degree 1 already, either as an open end or fixed off-frontier
        if departed || open_ends.contains(&terminal) {
            return Some(0);
        }
        // still untouched: must reach an open end through unprocessed edges
        open_ends.iter().filter_map(|&e| dist.get(e)).min().map(|d| d as usize)
    };
    let gap_s = gap(pair.s, ctx.s_gone, &pair.dist_s)?;
    let gap_t = gap(pair.t, ctx.t_gone, &pair.dist_t)?;
    Some(fragments - 1 + gap_s + gap_t)
}
