//! Exact solvers.
//!
//! * [`max_weight_assignment`] — maximum-weight `c`-`d`-valid assignment via
//!   an integral min-cost max-flow (source → agents → papers → sink); network
//!   integrality makes the optimum exact in integer arithmetic, with no
//!   external solver.
//! * [`max_weight_zcycle_free`] — maximum-weight `z`-cycle-free assignment by
//!   best-first branch and bound over the flow relaxation, generating cycle
//!   constraints lazily from incumbent violations and branching on an edge of
//!   the shortest violated cycle.
//! * [`brute_force_oracle`] / [`exhaustive_search`] — independent references
//!   for tests: subset enumeration over at most 20 qualification edges, and a
//!   complete backtracking search for the structured instances whose edge
//!   count is beyond subset enumeration.

mod branch;
mod flow;
mod oracle;

pub use branch::{max_weight_zcycle_free, SearchLimits};
pub use flow::{max_weight_assignment, FlowNetwork};
pub use oracle::{brute_force_oracle, exhaustive_search, OracleError, OracleOutcome};

use serde::Serialize;

use crate::instance::{AgentId, Assignment, PaperId};

/// The edge set of one review cycle; a constraint forbids assigning all of
/// its edges simultaneously.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct CycleConstraint {
    pub edges: Vec<(AgentId, PaperId)>,
}

/// How the solve ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Optimality {
    /// The returned assignment is provably optimal.
    Proven,
    /// Budget ran out; the returned assignment is valid but possibly
    /// suboptimal.
    FeasibleOnly,
    /// No valid assignment exists.
    Infeasible,
    /// Budget ran out before any valid assignment was found.
    NoIncumbent,
}

/// Solver accounting.
#[derive(Debug, Clone, Serialize)]
pub struct SolveStats {
    pub objective: Option<i64>,
    /// Branch-and-bound nodes processed (1 for the plain flow solve).
    pub nodes: u64,
    /// Cycle constraints generated lazily.
    pub constraints_generated: u64,
    pub wall_time_s: f64,
    pub optimality: Optimality,
}

/// Result of an exact solve: the assignment is present exactly when the
/// outcome is `Proven` or `FeasibleOnly`.
#[derive(Debug, Clone)]
pub struct SolveOutcome {
    pub assignment: Option<Assignment>,
    pub stats: SolveStats,
    /// The lazily generated constraints, in generation order (replayable).
    pub constraints: Vec<CycleConstraint>,
}
