//! Backtracking path counter: depth-first search over unvisited vertices with
//! a shortest-path-distance prune against the length bound.
//!
//! This engine visits every qualifying path once, so its cost is proportional
//! to the answer — great when paths are scarce, hopeless when they number in
//! the trillions. It doubles as the oracle the frontier DP is checked against.

use std::collections::VecDeque;
use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;

use crate::cancel::CancelToken;
use crate::count::Count;
use crate::instance::{Graph, Instance, InstanceError, ProblemKind, Vertex};
use crate::SolverError;

/// How often the DFS loops poll the cancellation token.
const CANCEL_POLL_MASK: u64 = 0xFFF;

/// Unweighted shortest-path distances (in edges) from every vertex to a fixed
/// target. `None` marks unreachable vertices.
#[derive(Debug, Clone)]
pub struct DistanceMap {
    dist: Vec<Option<u32>>,
}

impl DistanceMap {
    pub fn get(&self, v: Vertex) -> Option<u32> {
        self.dist[v as usize]
    }
}

/// BFS from `target` over the whole graph.
pub fn bfs_distances(g: &Graph, target: Vertex) -> Result<DistanceMap, InstanceError> {
    let n = g.vertex_count();
    if target == 0 || target > n {
        return Err(InstanceError::VertexOutOfRange { v: target, n });
    }
    let adj = g.adjacency();
    let mut dist = vec![None; n as usize + 1];
    dist[target as usize] = Some(0);
    let mut queue = VecDeque::from([target]);
    while let Some(v) = queue.pop_front() {
        let d = dist[v as usize].unwrap();
        for &w in &adj[v as usize] {
            if dist[w as usize].is_none() {
                dist[w as usize] = Some(d + 1);
                queue.push_back(w);
            }
        }
    }
    Ok(DistanceMap { dist })
}

/// Knobs for a backtracking run.
#[derive(Debug, Clone, Default)]
pub struct BtOptions {
    pub cancel: CancelToken,
    /// Abort with [`SolverError::BudgetExceeded`] once more than this many
    /// paths have been counted. Used by the dispatcher when backtracking is
    /// clearly losing a race.
    pub path_budget: Option<u64>,
    /// Prune branches where `depth + dist(v, t) > max_len`. Disabling this
    /// never changes the count, only the work done.
    pub distance_prune: bool,
}

impl BtOptions {
    pub fn new() -> Self {
        Self { cancel: CancelToken::new(), path_budget: None, distance_prune: true }
    }
}

/// Counts simple paths between the instance's terminals with at most
/// `max_len` edges.
///
/// # Panics
/// Panics if the instance has no terminals.
pub fn count_paths_bt<C: Count>(inst: &Instance, opts: &BtOptions) -> Result<C, SolverError> {
    let (s, t) = inst.terminals.expect("single-pair instance required");
    let g = &inst.graph;
    let limit = inst.max_len.min(g.vertex_count().saturating_sub(1));
    let adj = g.adjacency();
    let dist = bfs_distances(g, t).expect("terminal in range");
    let budget = SharedBudget::new(opts.path_budget);

    if opts.distance_prune {
        match dist.get(s) {
            Some(d) if d <= limit => {}
            _ => return Ok(C::zero()),
        }
    }
    dfs_to_target(&adj, s, t, limit, &dist, opts, &budget)
}

/// Counts simple paths of length `1..=max_len` over all unordered vertex
/// pairs. Each path is counted exactly once: a search rooted at `v` only
/// counts paths ending at a vertex `w > v`. Roots run in parallel; addition
/// is commutative so the result matches the sequential sum.
///
/// # Panics
/// Panics if the instance has terminals.
pub fn count_paths_bt_all<C: Count>(inst: &Instance, opts: &BtOptions) -> Result<C, SolverError> {
    assert!(
        inst.kind() == ProblemKind::AllPairs,
        "all-pairs instance required"
    );
    let g = &inst.graph;
    let limit = inst.max_len.min(g.vertex_count().saturating_sub(1));
    if limit == 0 || g.edge_count() == 0 {
        return Ok(C::zero());
    }
    let adj = g.adjacency();
    let budget = SharedBudget::new(opts.path_budget);

    (1..=g.vertex_count())
        .into_par_iter()
        .map(|root| dfs_all_from_root(&adj, root, limit, opts, &budget))
        .try_reduce(C::zero, |mut a, b| {
            a += &b;
            Ok(a)
        })
}

/// Shared path-counting budget; one counter across all parallel roots.
struct SharedBudget {
    found: AtomicU64,
    cap: Option<u64>,
}

impl SharedBudget {
    fn new(cap: Option<u64>) -> Self {
        Self { found: AtomicU64::new(0), cap }
    }

    /// Registers one found path; errors once the cap is crossed.
    fn tally(&self) -> Result<(), SolverError> {
        let visited = self.found.fetch_add(1, Ordering::Relaxed) + 1;
        match self.cap {
            Some(cap) if visited > cap => Err(SolverError::BudgetExceeded { visited }),
            _ => Ok(()),
        }
    }
}

fn dfs_to_target<C: Count>(
    adj: &[Vec<Vertex>],
    s: Vertex,
    t: Vertex,
    limit: u32,
    dist: &DistanceMap,
    opts: &BtOptions,
    budget: &SharedBudget,
) -> Result<C, SolverError> {
    let mut count = C::zero();
    let one = C::one();
    let mut visited = vec![false; adj.len()];
    // (vertex, index of the next neighbor to try)
    let mut stack: Vec<(Vertex, usize)> = vec![(s, 0)];
    visited[s as usize] = true;
    let mut ticks: u64 = 0;

    while let Some(&mut (v, ref mut next)) = stack.last_mut() {
        let Some(&w) = adj[v as usize].get(*next) else {
            stack.pop();
            visited[v as usize] = false;
            continue;
        };
        *next += 1;
        ticks += 1;
        if ticks & CANCEL_POLL_MASK == 0 && opts.cancel.is_cancelled() {
            return Err(SolverError::Cancelled);
        }
        if visited[w as usize] {
            continue;
        }
        let depth = stack.len() as u32; // edges on the path if we step to w
        if depth > limit {
            continue;
        }
        if w == t {
            budget.tally()?;
            count += &one;
            continue; // an s-t path ends at t; nothing beyond it qualifies
        }
        if opts.distance_prune {
            match dist.get(w) {
                Some(d) if depth + d <= limit => {}
                _ => continue,
            }
        }
        if depth == limit {
            continue; // cannot reach t without another edge
        }
        visited[w as usize] = true;
        stack.push((w, 0));
    }
    Ok(count)
}

fn dfs_all_from_root<C: Count>(
    adj: &[Vec<Vertex>],
    root: Vertex,
    limit: u32,
    opts: &BtOptions,
    budget: &SharedBudget,
) -> Result<C, SolverError> {
    let mut count = C::zero();
    let one = C::one();
    let mut visited = vec![false; adj.len()];
    let mut stack: Vec<(Vertex, usize)> = vec![(root, 0)];
    visited[root as usize] = true;
    let mut ticks: u64 = 0;

    while let Some(&mut (v, ref mut next)) = stack.last_mut() {
        let Some(&w) = adj[v as usize].get(*next) else {
            stack.pop();
            visited[v as usize] = false;
            continue;
        };
        *next += 1;
        ticks += 1;
        if ticks & CANCEL_POLL_MASK == 0 && opts.cancel.is_cancelled() {
            return Err(SolverError::Cancelled);
        }
        if visited[w as usize] {
            continue;
        }
        let depth = stack.len() as u32;
        if depth > limit {
            continue;
        }
        if w > root {
            budget.tally()?;
            count += &one;
        }
        if depth < limit {
            visited[w as usize] = true;
            stack.push((w, 0));
        }
    }
    Ok(count)
}
