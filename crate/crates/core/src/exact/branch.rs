//! Branch and bound for maximum-weight `z`-cycle-free assignments.
//!
//! Nodes carry edges forced into and out of the assignment; the bound comes
//! from the flow relaxation, which ignores cycle constraints except those
//! resolved by the forcing. When a node's relaxation optimum contains a
//! review cycle of length at most `z`, the shortest violated cycle is
//! recorded as a lazy constraint and the search branches on its first
//! unforced edge: one child excludes the edge, the other pins it. A node
//! whose violated cycle is entirely pinned cannot produce a cycle-free
//! assignment and is pruned. Best-first order by relaxation bound; ties by
//! node creation order.

use std::cmp::Ordering;
use std::collections::{BTreeSet, BinaryHeap, HashSet};
use std::time::Instant;

use crate::cycles::find_review_cycles;
use crate::instance::{AgentId, Assignment, CycleBound, PaperId, ReviewInstance, SolveParams};

use super::flow::solve_transport;
use super::{CycleConstraint, Optimality, SolveOutcome, SolveStats};

/// Search budget. Exceeding it returns the best incumbent flagged
/// feasible-only rather than failing.
#[derive(Debug, Clone, Copy)]
pub struct SearchLimits {
    pub max_nodes: u64,
    pub max_seconds: f64,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits {
            max_nodes: 1_000_000,
            max_seconds: 300.0,
        }
    }
}

struct Node {
    bound: i64,
    seq: u64,
    forced_in: Vec<(AgentId, PaperId)>,
    forced_out: Vec<(AgentId, PaperId)>,
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.bound == other.bound && self.seq == other.seq
    }
}
impl Eq for Node {}
impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Node {
    fn cmp(&self, other: &Self) -> Ordering {
        // Max-heap: larger bound first, then older node.
        self.bound
            .cmp(&other.bound)
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

/// Shortest violated cycles in `assignment`: all review cycles of the
/// smallest length `<= z` that occurs, or none.
fn shortest_violated_cycles(
    instance: &ReviewInstance,
    assignment: &Assignment,
    z: u32,
) -> Vec<CycleConstraint> {
    for len in 1..=z {
        let report = find_review_cycles(instance, assignment, CycleBound::Bounded(len));
        if !report.cycles.is_empty() {
            return report
                .cycles
                .into_iter()
                .map(|c| CycleConstraint {
                    edges: c.review_edges(),
                })
                .collect();
        }
    }
    Vec::new()
}

/// Maximum-weight `c`-`d`-valid `z`-cycle-free assignment.
///
/// Completing the search proves optimality or infeasibility; hitting the
/// budget returns the incumbent (feasible-only) or reports that no solution
/// was found within limits.
pub fn max_weight_zcycle_free(
    instance: &ReviewInstance,
    params: &SolveParams,
    limits: &SearchLimits,
) -> SolveOutcome {
    let start = Instant::now();
    let z = params
        .cycle_bound
        .finite()
        .expect("z-cycle-free search requires a finite cycle bound");

    let mut constraint_pool: BTreeSet<CycleConstraint> = BTreeSet::new();
    let mut constraint_order: Vec<CycleConstraint> = Vec::new();
    let mut incumbent: Option<(i64, Assignment)> = None;
    let mut nodes_processed: u64 = 0;
    let mut next_seq: u64 = 1;
    let mut exhausted_budget = false;

    let mut queue: BinaryHeap<Node> = BinaryHeap::new();
    queue.push(Node {
        bound: i64::MAX,
        seq: 0,
        forced_in: Vec::new(),
        forced_out: Vec::new(),
    });

    while let Some(node) = queue.pop() {
        if nodes_processed >= limits.max_nodes || start.elapsed().as_secs_f64() > limits.max_seconds
        {
            exhausted_budget = true;
            break;
        }
        if let Some((best, _)) = &incumbent {
            if node.bound <= *best {
                continue;
            }
        }
        nodes_processed += 1;

        let forced_out: HashSet<(AgentId, PaperId)> = node.forced_out.iter().copied().collect();
        let relaxed = match solve_transport(instance, params, &node.forced_in, &forced_out) {
            Some(r) => r,
            None => continue,
        };
        if let Some((best, _)) = &incumbent {
            if relaxed.weight <= *best {
                continue;
            }
        }
        let candidate = Assignment::from_edges(relaxed.edges.iter().copied());
        let violated = shortest_violated_cycles(instance, &candidate, z);
        if violated.is_empty() {
            // The relaxation optimum of this node is feasible, so the node is
            // fully solved.
            incumbent = Some((relaxed.weight, candidate));
            continue;
        }
        for c in &violated {
            if constraint_pool.insert(c.clone()) {
                constraint_order.push(c.clone());
            }
        }
        let cycle = &violated[0];
        let branch_edge = cycle
            .edges
            .iter()
            .copied()
            .find(|e| !node.forced_in.contains(e));
        let Some(edge) = branch_edge else {
            // Every edge of the cycle is pinned: no completion of this node
            // can be cycle-free.
            continue;
        };
        let mut out_child = Node {
            bound: relaxed.weight,
            seq: next_seq,
            forced_in: node.forced_in.clone(),
            forced_out: node.forced_out.clone(),
        };
        next_seq += 1;
        out_child.forced_out.push(edge);
        let mut in_child = Node {
            bound: relaxed.weight,
            seq: next_seq,
            forced_in: node.forced_in,
            forced_out: node.forced_out,
        };
        next_seq += 1;
        in_child.forced_in.push(edge);
        queue.push(out_child);
        queue.push(in_child);
    }

    let wall_time_s = start.elapsed().as_secs_f64();
    let optimality = match (&incumbent, exhausted_budget) {
        (Some(_), false) => Optimality::Proven,
        (Some(_), true) => Optimality::FeasibleOnly,
        (None, false) => Optimality::Infeasible,
        (None, true) => Optimality::NoIncumbent,
    };
    let (objective, assignment) = match incumbent {
        Some((w, a)) => (Some(w), Some(a)),
        None => (None, None),
    };
    SolveOutcome {
        assignment,
        stats: SolveStats {
            objective,
            nodes: nodes_processed,
            constraints_generated: constraint_order.len() as u64,
            wall_time_s,
            optimality,
        },
        constraints: constraint_order,
    }
}
