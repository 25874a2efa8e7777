//! Feature extraction, algorithm selection, and the top-level solve call.
//!
//! The two engines fail for different reasons: backtracking drowns when the
//! length bound admits too many paths, the frontier DP drowns when the graph
//! is far from path-shaped. A two-threshold rule picks an engine from the
//! estimated frontier width and the length bound, and races both workers when
//! neither clearly applies.

use std::sync::mpsc;
use std::thread;
use std::time::{Duration, Instant};

use crate::btcount::{count_paths_bt, count_paths_bt_all, BtOptions};
use crate::cancel::CancelToken;
use crate::fbs::{compute_edge_order, count_paths_fbs, EdgeOrder, FbsOptions, DEFAULT_ORDER_EFFORT, DEFAULT_STATE_CAP};
use crate::instance::{Instance, ProblemKind};
use crate::{PathCount, SolverError};

/// Default wallclock budget: ten minutes per instance.
pub const DEFAULT_TIMEOUT: Duration = Duration::from_secs(600);

/// Hardness features of an instance.
#[derive(Debug, Clone, PartialEq)]
pub struct Features {
    pub n: u32,
    pub m: usize,
    pub max_len: u32,
    /// `2m / n`.
    pub mean_degree: f64,
    /// Max frontier size of a computed edge order; pathwidth proxy.
    pub est_width: usize,
}

/// Which engine(s) a plan commits to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    BtOnly,
    FbsOnly,
    RaceBoth,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolvePlan {
    pub strategy: Strategy,
    pub rationale: &'static str,
}

/// Dispatch rule thresholds: the frontier width below which the DP is always
/// trusted, and the length bound below which backtracking is trusted on wide
/// graphs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Thresholds {
    pub width_dp: usize,
    pub len_bt: u32,
}

impl Default for Thresholds {
    fn default() -> Self {
        Self { width_dp: 14, len_bt: 12 }
    }
}

/// Forced engine choice, or the rule-based default.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AlgoChoice {
    #[default]
    Auto,
    Bt,
    Fbs,
}

#[derive(Debug, Clone)]
pub struct SolveOptions {
    pub algo: AlgoChoice,
    pub timeout: Option<Duration>,
    pub order_effort: u32,
    pub state_cap: usize,
    pub bt_path_budget: Option<u64>,
    pub thresholds: Thresholds,
    /// Run both engines to completion under a race plan and assert they
    /// agree. On by default in debug builds.
    pub cross_check: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            algo: AlgoChoice::Auto,
            timeout: Some(DEFAULT_TIMEOUT),
            order_effort: DEFAULT_ORDER_EFFORT,
            state_cap: DEFAULT_STATE_CAP,
            bt_path_budget: None,
            thresholds: Thresholds::default(),
            cross_check: cfg!(debug_assertions),
        }
    }
}

impl SolveOptions {
    pub fn new() -> Self {
        Self::default()
    }
}

/// Computes the five dispatch features, estimating width with default effort.
pub fn extract_features(inst: &Instance) -> Features {
    let order = compute_edge_order(&inst.graph, DEFAULT_ORDER_EFFORT);
    features_with_order(inst, &order)
}

fn features_with_order(inst: &Instance, order: &EdgeOrder) -> Features {
    Features {
        n: inst.graph.vertex_count(),
        m: inst.graph.edge_count(),
        max_len: inst.max_len,
        mean_degree: inst.graph.mean_degree(),
        est_width: order.width(),
    }
}

/// The dispatch rule: narrow frontiers always go to the DP, wide graphs with
/// short bounds to backtracking, everything else races both.
pub fn select_algorithm(f: &Features, thresholds: &Thresholds) -> SolvePlan {
    if f.est_width <= thresholds.width_dp {
        SolvePlan { strategy: Strategy::FbsOnly, rationale: "narrow frontier" }
    } else if f.max_len <= thresholds.len_bt {
        SolvePlan { strategy: Strategy::BtOnly, rationale: "wide but short length bound" }
    } else {
        SolvePlan { strategy: Strategy::RaceBoth, rationale: "wide frontier and long length bound" }
    }
}

/// Solves an instance exactly. The returned value is deterministic no matter
/// which engine wins a race.
pub fn solve(inst: &Instance, opts: &SolveOptions) -> Result<PathCount, SolverError> {
    let deadline = opts.timeout.map(|t| Instant::now() + t);
    let strategy = match opts.algo {
        AlgoChoice::Bt => Strategy::BtOnly,
        AlgoChoice::Fbs => Strategy::FbsOnly,
        AlgoChoice::Auto => {
            let order = compute_edge_order(&inst.graph, opts.order_effort);
            let features = features_with_order(inst, &order);
            let plan = select_algorithm(&features, &opts.thresholds);
            return solve_with_plan(inst, Some(order), plan.strategy, opts, deadline);
        }
    };
    solve_with_plan(inst, None, strategy, opts, deadline)
}

fn solve_with_plan(
    inst: &Instance,
    order: Option<EdgeOrder>,
    strategy: Strategy,
    opts: &SolveOptions,
    deadline: Option<Instant>,
) -> Result<PathCount, SolverError> {
    let order = match strategy {
        Strategy::BtOnly => order,
        _ => Some(order.unwrap_or_else(|| compute_edge_order(&inst.graph, opts.order_effort))),
    };

    match strategy {
        Strategy::BtOnly => run_deadlined(deadline, |cancel| run_bt(inst, opts, cancel)),
        Strategy::FbsOnly => {
            let order = order.as_ref().unwrap();
            run_deadlined(deadline, |cancel| run_fbs(inst, order, opts, cancel))
        }
        Strategy::RaceBoth => {
            let order = order.as_ref().unwrap();
            if opts.cross_check {
                let fbs = run_deadlined(deadline, |cancel| run_fbs(inst, order, opts, cancel))?;
                let bt = run_deadlined(deadline, |cancel| run_bt(inst, opts, cancel))?;
                assert_eq!(fbs, bt, "engines disagree on a race plan");
                return Ok(fbs);
            }
            race(inst, order, opts, deadline)
        }
    }
}

fn run_bt(inst: &Instance, opts: &SolveOptions, cancel: CancelToken) -> Result<PathCount, SolverError> {
    let bt = BtOptions { cancel, path_budget: opts.bt_path_budget, distance_prune: true };
    match inst.kind() {
        ProblemKind::SinglePair => count_paths_bt(inst, &bt),
        ProblemKind::AllPairs => count_paths_bt_all(inst, &bt),
    }
}

fn run_fbs(
    inst: &Instance,
    order: &EdgeOrder,
    opts: &SolveOptions,
    cancel: CancelToken,
) -> Result<PathCount, SolverError> {
    let fbs = FbsOptions { cancel, state_cap: opts.state_cap, ..FbsOptions::default() };
    count_paths_fbs(inst, order, &fbs)
}

/// Runs one worker, enforcing the deadline from the calling thread.
fn run_deadlined<F>(deadline: Option<Instant>, work: F) -> Result<PathCount, SolverError>
where
    F: FnOnce(CancelToken) -> Result<PathCount, SolverError> + Send,
{
    let cancel = CancelToken::new();
    let Some(deadline) = deadline else {
        return work(cancel);
    };
    thread::scope(|scope| {
        let (tx, rx) = mpsc::channel();
        let token = cancel.clone();
        scope.spawn(move || {
            let _ = tx.send(work(token));
        });
        match rx.recv_timeout(deadline.saturating_duration_since(Instant::now())) {
            Ok(result) => result,
            Err(_) => {
                cancel.cancel();
                Err(SolverError::Timeout)
            }
        }
    })
}

/// Races both engines with two workers; first success wins and cancels the
/// other. If both fail, the DP's verdict is reported.
fn race(
    inst: &Instance,
    order: &EdgeOrder,
    opts: &SolveOptions,
    deadline: Option<Instant>,
) -> Result<PathCount, SolverError> {
    let bt_cancel = CancelToken::new();
    let fbs_cancel = CancelToken::new();
    let cancel_all = || {
        bt_cancel.cancel();
        fbs_cancel.cancel();
    };

    thread::scope(|scope| {
        let (tx, rx) = mpsc::channel();
        let bt_tx = tx.clone();
        let bt_token = bt_cancel.clone();
        scope.spawn(move || {
            let _ = bt_tx.send((Strategy::BtOnly, run_bt(inst, opts, bt_token)));
        });
        let fbs_token = fbs_cancel.clone();
        scope.spawn(move || {
            let _ = tx.send((Strategy::FbsOnly, run_fbs(inst, order, opts, fbs_token)));
        });

        let mut failures: Vec<(Strategy, SolverError)> = Vec::new();
        loop {
            let wait = match deadline {
                Some(d) => d.saturating_duration_since(Instant::now()),
                None => Duration::from_secs(u64::MAX / 2),
            };
            match rx.recv_timeout(wait) {
                Ok((_, Ok(count))) => {
                    cancel_all();
                    return Ok(count);
                }
                Ok((which, Err(err))) => {
                    failures.push((which, err));
                    if failures.len() == 2 {
                        let fbs_err = failures
                            .iter()
                            .find(|(s, _)| *s == Strategy::FbsOnly)
                            .map(|(_, e)| e.clone());
                        return Err(fbs_err.unwrap_or_else(|| failures[0].1.clone()));
                    }
                }
                Err(_) => {
                    cancel_all();
                    return Err(SolverError::Timeout);
                }
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{complete_graph, grid_graph, path_graph};
    use crate::instance::parse_instance;

    const FIG1_PCS: &str = "p edge 4 5\ne 1 2\ne 2 3\ne 3 4\ne 1 4\ne 2 4\nl 2\nt 1 3\n";

    #[test]
    fn features_of_worked_example() {
        let inst = parse_instance(FIG1_PCS).unwrap();
        let f = extract_features(&inst);
        assert_eq!((f.n, f.m, f.max_len), (4, 5, 2));
        assert!((f.mean_degree - 2.5).abs() < 1e-12);
        assert!(f.est_width <= f.n as usize);
    }

    #[test]
    fn features_of_simple_graphs() {
        let single = Instance::new(complete_graph(2), 1, None).unwrap();
        let f = extract_features(&single);
        assert_eq!((f.n, f.m, f.est_width), (2, 1, 1));
        assert!((f.mean_degree - 1.0).abs() < 1e-12);

        let path = Instance::new(path_graph(10), 5, None).unwrap();
        assert_eq!(extract_features(&path).est_width, 1);
    }

    #[test]
    fn selection_rule() {
        let thr = Thresholds::default();
        let base = Features { n: 40, m: 100, max_len: 4, mean_degree: 5.0, est_width: 1 };
        assert_eq!(select_algorithm(&base, &thr).strategy, Strategy::FbsOnly);

        let wide_short = Features { est_width: 30, max_len: 4, ..base };
        assert_eq!(select_algorithm(&wide_short, &thr).strategy, Strategy::BtOnly);

        let wide_long = Features { est_width: 30, max_len: 40, ..base };
        assert_eq!(select_algorithm(&wide_long, &thr).strategy, Strategy::RaceBoth);
    }

    #[test]
    fn solves_worked_examples() {
        let pcs = parse_instance(FIG1_PCS).unwrap();
        assert_eq!(solve(&pcs, &SolveOptions::new()).unwrap(), PathCount::from(2u32));

        let mut pca = pcs.clone();
        pca.terminals = None;
        assert_eq!(solve(&pca, &SolveOptions::new()).unwrap(), PathCount::from(13u32));
    }

    #[test]
    fn solves_a_grid_corner_instance() {
        let inst = Instance::new(grid_graph(6, 6), 35, Some((1, 36))).unwrap();
        assert_eq!(
            solve(&inst, &SolveOptions::new()).unwrap(),
            PathCount::from(1_262_816u32)
        );
    }

    #[test]
    fn forced_engines_agree() {
        let inst = Instance::new(grid_graph(3, 3), 8, Some((1, 9))).unwrap();
        let mut opts = SolveOptions::new();
        opts.algo = AlgoChoice::Bt;
        let bt = solve(&inst, &opts).unwrap();
        opts.algo = AlgoChoice::Fbs;
        let fbs = solve(&inst, &opts).unwrap();
        assert_eq!(bt, fbs);
    }

    #[test]
    fn race_returns_the_agreed_value() {
        let inst = parse_instance(FIG1_PCS).unwrap();
        // force a race on the worked example
        let mut opts = SolveOptions::new();
        opts.thresholds = Thresholds { width_dp: 0, len_bt: 0 };
        opts.cross_check = false;
        assert_eq!(solve(&inst, &opts).unwrap(), PathCount::from(2u32));
        opts.cross_check = true;
        assert_eq!(solve(&inst, &opts).unwrap(), PathCount::from(2u32));
    }

    #[test]
    fn memory_verdict_when_both_racers_fail() {
        let inst = Instance::new(complete_graph(16), 15, Some((1, 2))).unwrap();
        let mut opts = SolveOptions::new();
        opts.thresholds = Thresholds { width_dp: 0, len_bt: 0 };
        opts.cross_check = false;
        opts.state_cap = 100;
        opts.bt_path_budget = Some(50);
        assert_eq!(
            solve(&inst, &opts),
            Err(SolverError::MemoryBudgetExceeded { cap: 100 })
        );
    }

    #[test]
    fn hopeless_instances_time_out() {
        let inst = Instance::new(complete_graph(20), 19, Some((1, 2))).unwrap();
        let mut opts = SolveOptions::new();
        opts.timeout = Some(Duration::from_millis(150));
        opts.state_cap = 5_000; // make the DP fail fast so the race outlives it
        opts.cross_check = false;
        let start = Instant::now();
        assert_eq!(solve(&inst, &opts), Err(SolverError::Timeout));
        assert!(start.elapsed() < Duration::from_secs(30));
    }

    #[test]
    fn cancellation_latency_is_bounded() {
        let inst = Instance::new(complete_graph(24), 23, Some((1, 2))).unwrap();
        let mut opts = SolveOptions::new();
        opts.algo = AlgoChoice::Bt;
        opts.timeout = Some(Duration::from_millis(100));
        let start = Instant::now();
        assert_eq!(solve(&inst, &opts), Err(SolverError::Timeout));
        // worker must notice the token within one bounded DFS interval
        assert!(start.elapsed() < Duration::from_secs(10));
    }
}
