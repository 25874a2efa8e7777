//! Exact counting of length-bounded simple paths on undirected graphs.
//!
//! Two problem variants are supported: counting the simple paths between a
//! fixed terminal pair (`s`, `t`) with at most `l` edges, and counting the
//! simple paths of length `1..=l` over *all* vertex pairs. Both are solved
//! exactly by two independent engines — a pruned depth-first backtracking
//! counter ([`btcount`]) and a frontier-based dynamic program ([`fbs`]) — with
//! a feature-driven portfolio on top ([`dispatch`]). The crate also ships a
//! synthetic instance generator ([`gen`]) and a competition-style benchmark
//! harness ([`harness`]).
//!
//! Counts routinely exceed 64-bit range, so the public entry points accumulate
//! into [`PathCount`] (arbitrary precision). The counting engines themselves
//! are generic over any [`Count`] scalar, which lets tests and callers with
//! known-small counts use plain machine integers.

pub mod btcount;
pub mod cancel;
pub mod count;
pub mod dispatch;
pub mod fbs;
pub mod gen;
pub mod harness;
pub mod instance;

pub use cancel::CancelToken;
pub use count::Count;
pub use instance::{Graph, Instance, InstanceError, ProblemKind, Vertex};

/// Exact path count. Counts on competition-scale instances reach ~10^41,
/// far beyond any machine integer.
pub type PathCount = num_bigint::BigUint;

/// Errors shared by the counting engines and the dispatcher.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SolverError {
    /// The run was stopped cooperatively (portfolio race or timeout).
    #[error("cancelled")]
    Cancelled,
    /// Backtracking visited more paths than the caller's budget allows.
    #[error("path budget exceeded after {visited} paths")]
    BudgetExceeded { visited: u64 },
    /// The frontier DP state table outgrew its configured cap.
    #[error("state table exceeded cap of {cap} states")]
    MemoryBudgetExceeded { cap: usize },
    /// An edge order does not match the instance it is applied to.
    #[error("edge order mismatch: expected {expected} edges, order has {found}")]
    OrderMismatch { expected: usize, found: usize },
    /// The wallclock budget ran out before any strategy finished.
    #[error("timed out")]
    Timeout,
}
