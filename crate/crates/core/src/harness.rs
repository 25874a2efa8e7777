//! Competition-style evaluation: run solver commands over a benchmark
//! directory under a wallclock budget, then score the outcomes.
//!
//! Answers for counting problems cannot be checked independently, so scoring
//! follows the matched-answer convention: an answer counts as "correct" when
//! at least two solvers produced it, and "tentatively correct" otherwise,
//! giving each solver a `[low, high]` score range. PAR-2, three
//! virtual-best-solver attributions, a time-profile similarity matrix, and
//! parameter/time correlations round out the analysis.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::thread;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::dispatch::Features;
use crate::PathCount;

const CHILD_POLL: Duration = Duration::from_millis(2);

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("bad record: {0}")]
    BadRecord(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunStatus {
    Solved,
    Timeout,
    Error,
}

impl RunStatus {
    fn as_str(self) -> &'static str {
        match self {
            RunStatus::Solved => "solved",
            RunStatus::Timeout => "timeout",
            RunStatus::Error => "error",
        }
    }
}

/// Outcome of one solver on one benchmark. `answer` is present iff the run
/// solved.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunRecord {
    pub solver: String,
    pub benchmark: String,
    pub status: RunStatus,
    pub answer: Option<PathCount>,
    pub wall_time_ms: u64,
}

/// An external solver: program plus fixed arguments; the instance path is
/// appended per run. The command must print a decimal count to stdout.
#[derive(Debug, Clone)]
pub struct SolverSpec {
    pub id: String,
    pub command: Vec<String>,
}

/// Runs every solver on every instance file in `dir` (sorted by file name),
/// killing processes that outlive the budget. Wallclock is measured around
/// the process lifetime. `parallelism` of 1 keeps timings honest.
pub fn run_benchmarks(
    dir: &Path,
    solvers: &[SolverSpec],
    budget: Duration,
    parallelism: usize,
) -> Result<Vec<RunRecord>, HarnessError> {
    let mut benchmarks: Vec<PathBuf> = std::fs::read_dir(dir)?
        .filter_map(|entry| entry.ok())
        .map(|entry| entry.path())
        .filter(|p| p.is_file())
        .collect();
    benchmarks.sort();

    let jobs: Vec<(usize, &SolverSpec, &PathBuf)> = solvers
        .iter()
        .flat_map(|s| benchmarks.iter().map(move |b| (s, b)))
        .enumerate()
        .map(|(i, (s, b))| (i, s, b))
        .collect();

    let results: Mutex<Vec<Option<RunRecord>>> = Mutex::new(vec![None; jobs.len()]);
    let cursor = AtomicUsize::new(0);
    let workers = parallelism.max(1).min(jobs.len().max(1));
    thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = cursor.fetch_add(1, Ordering::Relaxed);
                let Some(&(slot, spec, bench)) = jobs.get(i) else { break };
                let record = run_one(spec, bench, budget);
                results.lock().unwrap()[slot] = Some(record);
            });
        }
    });

    Ok(results
        .into_inner()
        .unwrap()
        .into_iter()
        .map(|r| r.expect("every job ran"))
        .collect())
}

fn benchmark_id(path: &Path) -> String {
    path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default()
}

fn run_one(spec: &SolverSpec, bench: &Path, budget: Duration) -> RunRecord {
    let id = benchmark_id(bench);
    let make = |status, answer, wall_time_ms| RunRecord {
        solver: spec.id.clone(),
        benchmark: id.clone(),
        status,
        answer,
        wall_time_ms,
    };
    let Some((program, args)) = spec.command.split_first() else {
        return make(RunStatus::Error, None, 0);
    };

    let start = Instant::now();
    let spawned = Command::new(program)
        .args(args)
        .arg(bench)
        .stdin(Stdio::null())
        .stdout(Stdio::piped())
        .stderr(Stdio::null())
        .spawn();
    let mut child = match spawned {
        Ok(c) => c,
        Err(_) => return make(RunStatus::Error, None, 0),
    };

    let mut stdout = child.stdout.take().expect("stdout piped");
    let reader = thread::spawn(move || {
        let mut out = String::new();
        let _ = stdout.read_to_string(&mut out);
        out
    });

    loop {
        match child.try_wait() {
            Ok(Some(_)) => {
                let wall = start.elapsed();
                let out = reader.join().unwrap_or_default();
                let wall_ms = wall.as_millis() as u64;
                if wall > budget {
                    return make(RunStatus::Timeout, None, wall_ms);
                }
                return match out.trim().parse::<PathCount>() {
                    Ok(answer) => make(RunStatus::Solved, Some(answer), wall_ms),
                    Err(_) => make(RunStatus::Error, None, wall_ms),
                };
            }
            Ok(None) => {
                if start.elapsed() >= budget {
                    let wall_ms = start.elapsed().as_millis() as u64;
                    let _ = child.kill();
                    let _ = child.wait();
                    // grandchildren may keep the pipe open; let the reader
                    // thread drain on its own rather than blocking here
                    drop(reader);
                    return make(RunStatus::Timeout, None, wall_ms);
                }
                thread::sleep(CHILD_POLL);
            }
            Err(_) => {
                let wall_ms = start.elapsed().as_millis() as u64;
                let _ = child.kill();
                drop(reader);
                return make(RunStatus::Error, None, wall_ms);
            }
        }
    }
}

fn solver_ids(records: &[RunRecord]) -> BTreeSet<String> {
    records.iter().map(|r| r.solver.clone()).collect()
}

fn by_benchmark(records: &[RunRecord]) -> BTreeMap<&str, Vec<&RunRecord>> {
    let mut map: BTreeMap<&str, Vec<&RunRecord>> = BTreeMap::new();
    for r in records {
        map.entry(&r.benchmark).or_default().push(r);
    }
    map
}

/// Ranged scores: `low` counts benchmarks whose answer matched another
/// solver's; `high` adds the tentatively-correct ones (unique or conflicting
/// answers). Nobody is penalized for mismatches.
pub fn score(records: &[RunRecord]) -> BTreeMap<String, (u64, u64)> {
    let mut out: BTreeMap<String, (u64, u64)> =
        solver_ids(records).into_iter().map(|s| (s, (0, 0))).collect();
    for (_, runs) in by_benchmark(records) {
        let mut tally: HashMap<&PathCount, usize> = HashMap::new();
        for r in &runs {
            if let Some(answer) = &r.answer {
                *tally.entry(answer).or_default() += 1;
            }
        }
        for r in &runs {
            let Some(answer) = &r.answer else { continue };
            let entry = out.get_mut(&r.solver).expect("solver listed");
            if tally[answer] >= 2 {
                entry.0 += 1;
            }
            entry.1 += 1;
        }
    }
    out
}

/// PAR-2 totals in seconds: solved runs contribute their wall time, anything
/// else twice the budget.
pub fn par2(records: &[RunRecord], budget: Duration) -> BTreeMap<String, f64> {
    let mut out: BTreeMap<String, f64> =
        solver_ids(records).into_iter().map(|s| (s, 0.0)).collect();
    for r in records {
        let points = match r.status {
            RunStatus::Solved => r.wall_time_ms as f64 / 1000.0,
            _ => 2.0 * budget.as_secs_f64(),
        };
        *out.get_mut(&r.solver).expect("solver listed") += points;
    }
    out
}

/// Virtual-best-solver attributions per solver.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VbsPoints {
    /// "The fastest takes it all" — benchmark count where this solver was
    /// strictly fastest; ties split equally.
    pub vbs1: f64,
    /// "Time aware, but proportional" — sum of `T_vbs / T_solver`.
    pub vbs2: f64,
    /// "Split the point for solving" — sum of `1 / |solvers that solved|`.
    pub vbs3: f64,
}

/// Computes the three VBS metrics; benchmarks no solver solved contribute
/// nothing.
pub fn vbs_metrics(records: &[RunRecord]) -> BTreeMap<String, VbsPoints> {
    let mut out: BTreeMap<String, VbsPoints> = solver_ids(records)
        .into_iter()
        .map(|s| (s, VbsPoints { vbs1: 0.0, vbs2: 0.0, vbs3: 0.0 }))
        .collect();
    for (_, runs) in by_benchmark(records) {
        let solved: Vec<&&RunRecord> =
            runs.iter().filter(|r| r.status == RunStatus::Solved).collect();
        if solved.is_empty() {
            continue;
        }
        let t_vbs = solved.iter().map(|r| r.wall_time_ms).min().unwrap();
        let fastest = solved.iter().filter(|r| r.wall_time_ms == t_vbs).count() as f64;
        for r in &solved {
            let entry = out.get_mut(&r.solver).expect("solver listed");
            if r.wall_time_ms == t_vbs {
                entry.vbs1 += 1.0 / fastest;
                entry.vbs2 += 1.0;
            } else {
                entry.vbs2 += t_vbs as f64 / r.wall_time_ms as f64;
            }
            entry.vbs3 += 1.0 / solved.len() as f64;
        }
    }
    out
}

/// Per-benchmark VBS times in seconds: the fastest solve, or twice the budget
/// where nobody solved.
pub fn vbs_times(records: &[RunRecord], budget: Duration) -> BTreeMap<String, f64> {
    let mut out = BTreeMap::new();
    for (bench, runs) in by_benchmark(records) {
        let best = runs
            .iter()
            .filter(|r| r.status == RunStatus::Solved)
            .map(|r| r.wall_time_ms)
            .min();
        let secs = match best {
            Some(ms) => ms as f64 / 1000.0,
            None => 2.0 * budget.as_secs_f64(),
        };
        out.insert(bench.to_string(), secs);
    }
    out
}

/// Pairwise similarity of per-benchmark PAR-2 profiles, normalized to
/// `[0, 1]`: `1 - sum |S_i - S'_i| / (N * 2 * budget)`. Benchmarks unsolved
/// by every solver are removed first.
pub fn similarity_matrix(
    records: &[RunRecord],
    budget: Duration,
) -> (Vec<String>, Vec<Vec<f64>>) {
    let solvers: Vec<String> = solver_ids(records).into_iter().collect();
    let groups = by_benchmark(records);
    let kept: Vec<&str> = groups
        .iter()
        .filter(|(_, runs)| runs.iter().any(|r| r.status == RunStatus::Solved))
        .map(|(b, _)| *b)
        .collect();

    // per-solver PAR-2 profile over kept benchmarks
    let mut profile: HashMap<(&str, &str), f64> = HashMap::new();
    for r in records {
        let points = match r.status {
            RunStatus::Solved => r.wall_time_ms as f64 / 1000.0,
            _ => 2.0 * budget.as_secs_f64(),
        };
        profile.insert((r.solver.as_str(), r.benchmark.as_str()), points);
    }
    let unsolved = 2.0 * budget.as_secs_f64();
    let score_of = |s: &str, b: &str| profile.get(&(s, b)).copied().unwrap_or(unsolved);

    let denom = kept.len() as f64 * 2.0 * budget.as_secs_f64();
    let mut matrix = vec![vec![1.0; solvers.len()]; solvers.len()];
    for i in 0..solvers.len() {
        for j in i + 1..solvers.len() {
            let gap: f64 = kept
                .iter()
                .map(|b| (score_of(&solvers[i], b) - score_of(&solvers[j], b)).abs())
                .sum();
            let sim = if denom > 0.0 { 1.0 - gap / denom } else { 1.0 };
            matrix[i][j] = sim;
            matrix[j][i] = sim;
        }
    }
    (solvers, matrix)
}

/// Hardness parameters of one benchmark, as used for correlation analysis.
#[derive(Debug, Clone)]
pub struct BenchmarkParams {
    pub benchmark: String,
    pub features: Features,
}

/// Pearson coefficients of each parameter against VBS time. `None` marks an
/// undefined coefficient (zero variance on either side).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Correlations {
    pub n: Option<f64>,
    pub m: Option<f64>,
    pub est_width: Option<f64>,
    pub max_len: Option<f64>,
}

pub fn param_time_correlation(
    params: &[BenchmarkParams],
    vbs_times: &BTreeMap<String, f64>,
) -> Correlations {
    let paired: Vec<(&Features, f64)> = params
        .iter()
        .filter_map(|p| vbs_times.get(&p.benchmark).map(|&t| (&p.features, t)))
        .collect();
    let times: Vec<f64> = paired.iter().map(|(_, t)| *t).collect();
    let against = |xs: Vec<f64>| pearson(&xs, &times);
    Correlations {
        n: against(paired.iter().map(|(f, _)| f.n as f64).collect()),
        m: against(paired.iter().map(|(f, _)| f.m as f64).collect()),
        est_width: against(paired.iter().map(|(f, _)| f.est_width as f64).collect()),
        max_len: against(paired.iter().map(|(f, _)| f.max_len as f64).collect()),
    }
}

fn pearson(xs: &[f64], ys: &[f64]) -> Option<f64> {
    let n = xs.len();
    if n == 0 || n != ys.len() {
        return None;
    }
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    let (mx, my) = (mean(xs), mean(ys));
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
        syy += (y - my) * (y - my);
    }
    if sxx == 0.0 || syy == 0.0 {
        return None;
    }
    Some(sxy / (sxx * syy).sqrt())
}

/// Everything `bench report` emits.
#[derive(Debug, Serialize)]
pub struct ScoreReport {
    pub scores: BTreeMap<String, (u64, u64)>,
    pub par2: BTreeMap<String, f64>,
    pub vbs: BTreeMap<String, VbsPoints>,
    pub similarity: SimilarityReport,
    pub correlations: Option<Correlations>,
}

#[derive(Debug, Serialize)]
pub struct SimilarityReport {
    pub solvers: Vec<String>,
    pub matrix: Vec<Vec<f64>>,
}

pub fn build_report(
    records: &[RunRecord],
    budget: Duration,
    params: Option<&[BenchmarkParams]>,
) -> ScoreReport {
    let (solvers, matrix) = similarity_matrix(records, budget);
    ScoreReport {
        scores: score(records),
        par2: par2(records, budget),
        vbs: vbs_metrics(records),
        similarity: SimilarityReport { solvers, matrix },
        correlations: params.map(|p| param_time_correlation(p, &vbs_times(records, budget))),
    }
}

/// Writes records as CSV with columns
/// `solver,benchmark,status,answer,wall_time_ms`.
pub fn write_records_csv(path: &Path, records: &[RunRecord]) -> Result<(), HarnessError> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["solver", "benchmark", "status", "answer", "wall_time_ms"])?;
    for r in records {
        let answer = r.answer.as_ref().map(|a| a.to_string()).unwrap_or_default();
        w.write_record([
            r.solver.as_str(),
            r.benchmark.as_str(),
            r.status.as_str(),
            answer.as_str(),
            &r.wall_time_ms.to_string(),
        ])?;
    }
    w.flush().map_err(HarnessError::from)?;
    Ok(())
}

pub fn read_records_csv(path: &Path) -> Result<Vec<RunRecord>, HarnessError> {
    let mut reader = csv::Reader::from_path(path)?;
    let mut out = Vec::new();
    for row in reader.records() {
        let row = row?;
        let field = |i: usize| row.get(i).unwrap_or("").to_string();
        let status = match field(2).as_str() {
            "solved" => RunStatus::Solved,
            "timeout" => RunStatus::Timeout,
            "error" => RunStatus::Error,
            other => return Err(HarnessError::BadRecord(format!("unknown status {other:?}"))),
        };
        let answer = match (status, field(3).as_str()) {
            (RunStatus::Solved, text) => Some(
                text.parse::<PathCount>()
                    .map_err(|_| HarnessError::BadRecord(format!("bad answer {text:?}")))?,
            ),
            _ => None,
        };
        let wall_time_ms = field(4)
            .parse::<u64>()
            .map_err(|_| HarnessError::BadRecord(format!("bad wall time {:?}", field(4))))?;
        out.push(RunRecord { solver: field(0), benchmark: field(1), status, answer, wall_time_ms });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(solver: &str, bench: &str, status: RunStatus, answer: Option<u64>, ms: u64) -> RunRecord {
        RunRecord {
            solver: solver.to_string(),
            benchmark: bench.to_string(),
            status,
            answer: answer.map(PathCount::from),
            wall_time_ms: ms,
        }
    }

    fn solved(solver: &str, bench: &str, answer: u64, ms: u64) -> RunRecord {
        rec(solver, bench, RunStatus::Solved, Some(answer), ms)
    }

    fn timeout(solver: &str, bench: &str) -> RunRecord {
        rec(solver, bench, RunStatus::Timeout, None, 600_000)
    }

    #[test]
    fn matched_answers_are_correct() {
        let records = vec![
            solved("a", "b1", 42, 10),
            solved("b", "b1", 42, 20),
            solved("c", "b1", 42, 30),
        ];
        let s = score(&records);
        for solver in ["a", "b", "c"] {
            assert_eq!(s[solver], (1, 1));
        }
    }

    #[test]
    fn singleton_answers_are_tentative() {
        let records = vec![solved("a", "b1", 7, 10), timeout("b", "b1")];
        let s = score(&records);
        assert_eq!(s["a"], (0, 1));
        assert_eq!(s["b"], (0, 0));
    }

    #[test]
    fn conflicting_answers_are_tentative() {
        let records = vec![solved("a", "b1", 7, 10), solved("b", "b1", 8, 10)];
        let s = score(&records);
        assert_eq!(s["a"], (0, 1));
        assert_eq!(s["b"], (0, 1));
    }

    #[test]
    fn par2_charges_double_budget_for_failures() {
        let budget = Duration::from_secs(600);
        let records = vec![solved("a", "b1", 1, 10_000)];
        assert_eq!(par2(&records, budget)["a"], 10.0);

        let records = vec![timeout("a", "b1")];
        assert_eq!(par2(&records, budget)["a"], 1200.0);

        let records = vec![solved("a", "b1", 1, 5_000), timeout("a", "b2")];
        assert_eq!(par2(&records, budget)["a"], 1205.0);
    }

    #[test]
    fn par2_is_monotone_in_timeouts() {
        let budget = Duration::from_secs(600);
        let mut records = vec![solved("a", "b1", 1, 5_000)];
        let before = par2(&records, budget)["a"];
        records.push(timeout("a", "b2"));
        assert!(par2(&records, budget)["a"] >= before);
    }

    #[test]
    fn vbs_examples() {
        let records = vec![solved("a", "b1", 5, 8_000)];
        let v = vbs_metrics(&records);
        assert_eq!((v["a"].vbs1, v["a"].vbs2, v["a"].vbs3), (1.0, 1.0, 1.0));

        let records = vec![solved("a", "b1", 5, 10_000), solved("b", "b1", 5, 20_000)];
        let v = vbs_metrics(&records);
        assert_eq!(v["a"].vbs2, 1.0);
        assert_eq!(v["b"].vbs2, 0.5);
        assert_eq!(v["a"].vbs3, 0.5);
        assert_eq!(v["b"].vbs3, 0.5);

        let records = vec![
            solved("a", "b1", 5, 10),
            solved("b", "b1", 5, 20),
            solved("c", "b1", 5, 30),
        ];
        let v = vbs_metrics(&records);
        for solver in ["a", "b", "c"] {
            assert!((v[solver].vbs3 - 1.0 / 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn vbs_ties_split_equally() {
        let records = vec![solved("a", "b1", 5, 10), solved("b", "b1", 5, 10)];
        let v = vbs_metrics(&records);
        assert_eq!(v["a"].vbs1, 0.5);
        assert_eq!(v["b"].vbs1, 0.5);
    }

    #[test]
    fn similarity_extremes_and_midpoint() {
        let budget = Duration::from_secs(600);
        let records = vec![
            solved("a", "b1", 5, 10_000),
            solved("b", "b1", 5, 10_000),
        ];
        let (solvers, m) = similarity_matrix(&records, budget);
        assert_eq!(solvers, vec!["a".to_string(), "b".to_string()]);
        assert_eq!(m[0][1], 1.0);
        assert_eq!(m[0][0], 1.0);

        // one solves instantly, the other always times out
        let records = vec![
            solved("a", "b1", 5, 0),
            solved("a", "b2", 5, 0),
            timeout("b", "b1"),
            timeout("b", "b2"),
        ];
        let (_, m) = similarity_matrix(&records, budget);
        assert_eq!(m[0][1], 0.0);

        // differences of 600 and 0 seconds over two benchmarks
        let records = vec![
            solved("a", "b1", 5, 0),
            solved("b", "b1", 5, 600_000),
            solved("a", "b2", 5, 30_000),
            solved("b", "b2", 5, 30_000),
        ];
        let (_, m) = similarity_matrix(&records, budget);
        assert!((m[0][1] - 0.75).abs() < 1e-12);
    }

    #[test]
    fn similarity_drops_universally_unsolved_benchmarks() {
        let budget = Duration::from_secs(600);
        let records = vec![
            solved("a", "b1", 5, 10_000),
            solved("b", "b1", 5, 10_000),
            timeout("a", "b2"),
            timeout("b", "b2"),
        ];
        let (_, m) = similarity_matrix(&records, budget);
        assert_eq!(m[0][1], 1.0);
    }

    #[test]
    fn correlation_examples() {
        let feats = |n: u32, len: u32| Features {
            n,
            m: 10,
            max_len: len,
            mean_degree: 2.0,
            est_width: 3,
        };
        let params: Vec<BenchmarkParams> = (1..=5)
            .map(|i| BenchmarkParams {
                benchmark: format!("b{i}"),
                features: feats(10 - i, i),
            })
            .collect();
        let times: BTreeMap<String, f64> =
            (1..=5).map(|i| (format!("b{i}"), i as f64 * 3.0)).collect();
        let corr = param_time_correlation(&params, &times);
        assert!((corr.max_len.unwrap() - 1.0).abs() < 1e-12);
        assert!((corr.n.unwrap() + 1.0).abs() < 1e-12);
        assert_eq!(corr.m, None); // constant parameter: zero variance
        assert_eq!(corr.est_width, None);

        let flat: BTreeMap<String, f64> =
            (1..=5).map(|i| (format!("b{i}"), 7.0)).collect();
        let corr = param_time_correlation(&params, &flat);
        assert_eq!(corr.max_len, None); // constant times
    }

    #[test]
    fn csv_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("runs.csv");
        let records = vec![
            solved("a", "b1", u64::MAX, 10),
            timeout("b", "b1"),
            rec("c", "b1", RunStatus::Error, None, 5),
        ];
        write_records_csv(&path, &records).unwrap();
        assert_eq!(read_records_csv(&path).unwrap(), records);
    }

    #[test]
    fn runs_real_processes_with_budget() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(dir.path().join("i1.col"), "p edge 2 1\ne 1 2\nl 1\n").unwrap();
        std::fs::write(dir.path().join("i2.col"), "p edge 2 1\ne 1 2\nl 1\n").unwrap();
        let solvers = vec![
            SolverSpec {
                id: "echoer".into(),
                command: vec!["sh".into(), "-c".into(), "echo 42 # $0".into()],
            },
            SolverSpec {
                id: "sleeper".into(),
                command: vec!["sh".into(), "-c".into(), "sleep 5; echo 1 # $0".into()],
            },
            SolverSpec {
                id: "gibberish".into(),
                command: vec!["sh".into(), "-c".into(), "echo abc # $0".into()],
            },
            SolverSpec { id: "missing".into(), command: vec!["/nonexistent-solver".into()] },
        ];
        let records =
            run_benchmarks(dir.path(), &solvers, Duration::from_millis(400), 1).unwrap();
        assert_eq!(records.len(), 8);
        for r in &records {
            match r.solver.as_str() {
                "echoer" => {
                    assert_eq!(r.status, RunStatus::Solved);
                    assert_eq!(r.answer, Some(PathCount::from(42u32)));
                    assert!(r.wall_time_ms <= 400);
                }
                "sleeper" => {
                    assert_eq!(r.status, RunStatus::Timeout);
                    assert_eq!(r.answer, None);
                }
                "gibberish" | "missing" => assert_eq!(r.status, RunStatus::Error),
                other => panic!("unexpected solver {other}"),
            }
        }
    }
}
