//! Greedy solvers.
//!
//! [`greedy_dag`] builds a `d`-`d`-valid assignment along an implicit
//! topological order of the review graph, so the result is completely
//! cycle-free. It assumes the single-author regime checked by
//! [`crate::guarantees::check_topological_guarantee`]; outside it, the run
//! either faults or still returns a verified valid output, never an invalid
//! one.
//!
//! [`greedy_swap`] grows a maximal `z`-cycle-free assignment one edge at a
//! time and, when stuck on a paper, replaces one existing review by two new
//! ones. Under the degree conditions of
//! [`crate::guarantees::check_swap_guarantee`] the replacement step provably
//! never runs dry; on inputs where no replacement exists the solver faults
//! ("swap exhausted") rather than spin, so it terminates on every input.

use std::collections::HashSet;

use thiserror::Error;

use crate::cycles::{collect_reachable_agents, is_acyclic, reaches_within, ReviewAdjacency};
use crate::instance::{
    is_valid_assignment, AgentId, Assignment, CycleBound, PaperId, ReviewInstance, SolveParams,
};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HeuristicError {
    /// Fewer than `d` eligible reviewers were available for a paper in the
    /// topological greedy; the preconditions do not hold.
    #[error(
        "stuck at paper {paper:?} (iteration {iteration}): fewer than {needed} eligible reviewers"
    )]
    Stuck {
        paper: String,
        iteration: usize,
        needed: u32,
    },
    /// The topological greedy finished but its output failed the final
    /// validity/acyclicity check (possible only outside the guaranteed regime).
    #[error("output failed verification ({reason}); instance violates the solver's preconditions")]
    PostCheckFailed { reason: String },
    /// The swap step found no (receiver, donor, paper) triple for the stuck
    /// paper; the heuristic gives up.
    #[error("swap exhausted at paper {paper:?}: no one-for-two replacement exists")]
    SwapExhausted { paper: String },
    #[error("cycle bound must be finite for the swap greedy")]
    UnboundedCycleBound,
    #[error("weighted mode requires a weighted instance")]
    MissingWeights,
}

/// Mutable solver state shared by the greedy algorithms: remaining review
/// capacity per agent and, for the topological greedy, the pool of agents
/// currently allowed to take review duty.
#[derive(Debug, Clone)]
pub struct GreedyState {
    pub free_capacity: Vec<u32>,
    pub eligible_pool: Vec<bool>,
}

/// Result of a greedy run, with the primitive-operation counter used by the
/// linear-time verification.
#[derive(Debug, Clone)]
pub struct GreedyRun {
    pub assignment: Assignment,
    pub operations: u64,
    /// Number of one-for-two replacements performed (swap greedy only).
    pub swaps: u64,
}

/// Topological greedy: processes papers in declared order, assigns
/// `paper_demand` reviewers to each from the pool of agents whose papers are
/// all already processed (agents without papers seed the pool), and then
/// admits the paper's first author to the pool.
///
/// Output is `d`-`d`-valid and completely cycle-free whenever the run
/// completes; both properties are re-verified before returning.
pub fn greedy_dag(
    instance: &ReviewInstance,
    paper_demand: u32,
) -> Result<GreedyRun, HeuristicError> {
    let n_a = instance.n_agents();
    let n_p = instance.n_papers();
    let mut ops: u64 = (n_a + n_p) as u64;

    let mut entered = vec![false; n_a];
    let mut capacity = vec![paper_demand; n_a];
    for a in 0..n_a {
        if instance.authored_by(a).is_empty() {
            entered[a] = true;
        }
    }
    let initial_pool_capacity: u64 =
        (0..n_a).filter(|&a| entered[a]).count() as u64 * paper_demand as u64;
    let mut pool_capacity: u64 = initial_pool_capacity;
    let mut conforming = true;

    let mut edges: Vec<(AgentId, PaperId)> = Vec::with_capacity(n_p * paper_demand as usize);
    for p in 0..n_p {
        ops += 1;
        let mut assigned = 0u32;
        for &b in instance.reviewers_of(p) {
            ops += 1;
            if assigned == paper_demand {
                break;
            }
            if entered[b] && capacity[b] > 0 {
                capacity[b] -= 1;
                pool_capacity -= 1;
                edges.push((b, p));
                assigned += 1;
            }
        }
        if assigned < paper_demand {
            return Err(HeuristicError::Stuck {
                paper: instance.paper_name(p).to_owned(),
                iteration: p,
                needed: paper_demand,
            });
        }
        // Admit the paper's first author (declared order) to the pool.
        let author = instance.authors_of(p).first().copied();
        let fresh = matches!(author, Some(a) if !entered[a]);
        if let Some(a) = author {
            if !entered[a] {
                entered[a] = true;
                pool_capacity += u64::from(capacity[a]);
            }
        }
        // Capacity conservation from the correctness argument: while every
        // paper has a fresh single author and takes exactly d reviews, the
        // pool's total free capacity never moves.
        conforming = conforming
            && fresh
            && instance.authors_of(p).len() == 1
            && capacity[*instance.authors_of(p).first().unwrap()] == paper_demand;
        if conforming {
            debug_assert_eq!(pool_capacity, initial_pool_capacity);
        }
    }

    let assignment = Assignment::from_edges(edges);
    let params = SolveParams::new(paper_demand, paper_demand, CycleBound::Unbounded);
    let report = is_valid_assignment(instance, &assignment, &params).map_err(|e| {
        HeuristicError::PostCheckFailed {
            reason: e.to_string(),
        }
    })?;
    if !report.valid {
        return Err(HeuristicError::PostCheckFailed {
            reason: "not d-d-valid".into(),
        });
    }
    if !is_acyclic(instance, &assignment) {
        return Err(HeuristicError::PostCheckFailed {
            reason: "review graph contains a cycle".into(),
        });
    }
    Ok(GreedyRun {
        assignment,
        operations: ops,
        swaps: 0,
    })
}

/// The swap step's view of a stuck paper: who could still review it without
/// closing a short cycle, which papers those agents currently review (swap
/// donors), and which papers a given spare-capacity agent could take.
#[derive(Debug, Clone)]
pub struct SwapContext {
    pub stuck_paper: PaperId,
    /// Agents whose assignment to the stuck paper keeps the assignment
    /// z-cycle-free (qualified, not yet assigned to it).
    pub cycle_safe_reviewers: Vec<AgentId>,
    /// Papers currently reviewed by the cycle-safe reviewers.
    pub donor_papers: Vec<PaperId>,
    /// Papers the probed receiver agent could take without creating a
    /// z-cycle, when a receiver was probed.
    pub receiver_papers: Vec<PaperId>,
}

/// Builds the swap context for `paper` against the current partial
/// assignment. `receiver`, when given, also fills `receiver_papers`.
pub fn swap_context(
    instance: &ReviewInstance,
    adj: &ReviewAdjacency,
    assigned: &HashSet<(AgentId, PaperId)>,
    paper: PaperId,
    depth: usize,
    receiver: Option<AgentId>,
) -> SwapContext {
    let unsafe_agents =
        collect_reachable_agents(instance, adj, paper, depth, None).expect("no stop agent");
    let mut cycle_safe_reviewers = Vec::new();
    for &a in instance.reviewers_of(paper) {
        if !unsafe_agents[a] && !assigned.contains(&(a, paper)) {
            cycle_safe_reviewers.push(a);
        }
    }
    let mut donor_seen = vec![false; instance.n_papers()];
    let mut donor_papers = Vec::new();
    for &a in &cycle_safe_reviewers {
        for &q in &adj.reviews_of[a] {
            if !donor_seen[q] {
                donor_seen[q] = true;
                donor_papers.push(q);
            }
        }
    }
    donor_papers.sort_unstable();
    let mut receiver_papers = Vec::new();
    if let Some(r) = receiver {
        for &q in instance.reviewable_by(r) {
            if !assigned.contains(&(r, q)) && !reaches_within(instance, adj, q, r, depth) {
                receiver_papers.push(q);
            }
        }
    }
    SwapContext {
        stuck_paper: paper,
        cycle_safe_reviewers,
        donor_papers,
        receiver_papers,
    }
}

/// Greedy with one-for-two repair. Papers are revisited lowest-index-first;
/// case 1 adds a single non-cycle-creating edge onto the stuck paper (in
/// weighted mode, the eligible edge of maximum weight; ties and the
/// unweighted mode take the first agent in declared order). When no edge
/// fits, case 2 scans papers, donors and receivers in declared order and
/// applies the first z-cycle-free replacement.
pub fn greedy_swap(
    instance: &ReviewInstance,
    params: &SolveParams,
) -> Result<GreedyRun, HeuristicError> {
    let z = params
        .cycle_bound
        .finite()
        .ok_or(HeuristicError::UnboundedCycleBound)? as usize;
    if params.weighted && !instance.is_weighted() {
        return Err(HeuristicError::MissingWeights);
    }
    let n_a = instance.n_agents();
    let n_p = instance.n_papers();
    let cap = params.reviewer_cap;
    let demand = params.paper_demand;
    let depth = 2 * z - 1;

    let mut adj = ReviewAdjacency::new(n_a, n_p);
    let mut assigned: HashSet<(AgentId, PaperId)> = HashSet::new();
    let mut agent_load = vec![0u32; n_a];
    let mut paper_load = vec![0u32; n_p];
    let mut ops: u64 = 0;
    let mut swaps: u64 = 0;

    let total_required = n_p as u64 * demand as u64;
    let mut iterations: u64 = 0;
    let mut next_deficit = 0usize;
    loop {
        while next_deficit < n_p && paper_load[next_deficit] >= demand {
            next_deficit += 1;
        }
        if next_deficit == n_p {
            break;
        }
        let p = next_deficit;
        iterations += 1;
        debug_assert!(iterations <= total_required, "swap loop exceeded its bound");

        // Case 1: a single new edge onto p. One bounded reachability pass
        // from p marks every agent whose assignment would close a cycle of
        // length <= z.
        let unsafe_agents =
            collect_reachable_agents(instance, &adj, p, depth, None).expect("no stop agent");
        let mut chosen: Option<(AgentId, i64)> = None;
        for &a in instance.reviewers_of(p) {
            ops += 1;
            if agent_load[a] >= cap || unsafe_agents[a] || assigned.contains(&(a, p)) {
                continue;
            }
            if params.weighted {
                let w = instance.weight_or_unit(a, p);
                if chosen.is_none_or(|(_, best)| w > best) {
                    chosen = Some((a, w));
                }
            } else {
                chosen = Some((a, 0));
                break;
            }
        }
        if let Some((a, _)) = chosen {
            adj.insert(a, p);
            assigned.insert((a, p));
            agent_load[a] += 1;
            paper_load[p] += 1;
            continue;
        }

        // Case 2: replace one review (donor, donor_paper) by (donor, p) and
        // (receiver, donor_paper). First fit over donor papers, donors, then
        // receivers, all in declared order.
        let mut performed = false;
        'scan: for q in 0..n_p {
            ops += 1;
            let mut donors = adj.reviewed_by[q].clone();
            donors.sort_unstable();
            for donor in donors {
                ops += 1;
                if !instance.is_qualified(donor, p) || assigned.contains(&(donor, p)) {
                    continue;
                }
                // Moving donor from q to p must stay cycle-free once (donor, q)
                // is dropped.
                adj.remove(donor, q);
                if reaches_within(instance, &adj, p, donor, depth) {
                    adj.insert(donor, q);
                    continue;
                }
                adj.insert(donor, p);
                for a in 0..n_a {
                    ops += 1;
                    if agent_load[a] >= cap
                        || !instance.is_qualified(a, q)
                        || assigned.contains(&(a, q))
                        || a == donor
                    {
                        continue;
                    }
                    if !reaches_within(instance, &adj, q, a, depth) {
                        // Commit the replacement.
                        assigned.remove(&(donor, q));
                        assigned.insert((donor, p));
                        assigned.insert((a, q));
                        adj.insert(a, q);
                        agent_load[a] += 1;
                        paper_load[p] += 1;
                        swaps += 1;
                        performed = true;
                        break 'scan;
                    }
                }
                adj.remove(donor, p);
                adj.insert(donor, q);
            }
        }
        if !performed {
            return Err(HeuristicError::SwapExhausted {
                paper: instance.paper_name(p).to_owned(),
            });
        }
    }

    let assignment = Assignment::from_edges(assigned);
    Ok(GreedyRun {
        assignment,
        operations: ops,
        swaps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cycles::find_review_cycles;

    fn inst(
        n_a: usize,
        n_p: usize,
        authorship: &[(usize, usize)],
        qualification: &[(usize, usize)],
    ) -> ReviewInstance {
        ReviewInstance::from_indexed(
            (0..n_a).map(|i| format!("a{i}")).collect(),
            (0..n_p).map(|i| format!("p{i}")).collect(),
            authorship,
            qualification,
            None,
            true,
        )
        .unwrap()
    }

    #[test]
    fn dag_assigns_only_free_agents() {
        // a0 authors p0; a1, a2, a3 are free and qualified; d = 3.
        let inst = inst(4, 1, &[(0, 0)], &[(1, 0), (2, 0), (3, 0)]);
        let run = greedy_dag(&inst, 3).unwrap();
        let edges: Vec<_> = run.assignment.edges().collect();
        assert_eq!(edges, vec![(1, 0), (2, 0), (3, 0)]);
        assert!(is_acyclic(&inst, &run.assignment));
    }

    #[test]
    fn dag_faults_when_stuck() {
        // Two single-author papers, one free agent; each paper reviewable
        // only by the free agent and the other paper's author; d = 1 drains
        // the free agent... make d = 2 so the second paper lacks reviewers.
        let inst = inst(3, 2, &[(0, 0), (1, 1)], &[(2, 0), (2, 1), (0, 1), (1, 0)]);
        let err = greedy_dag(&inst, 2).unwrap_err();
        assert!(matches!(err, HeuristicError::Stuck { .. }));
    }

    #[test]
    fn dag_author_becomes_eligible_after_own_paper() {
        // p0 by a0, p1 by a1; a0 qualified for p1, free agent a2 for p0.
        let inst = inst(3, 2, &[(0, 0), (1, 1)], &[(2, 0), (0, 1)]);
        let run = greedy_dag(&inst, 1).unwrap();
        let edges: Vec<_> = run.assignment.edges().collect();
        assert_eq!(edges, vec![(0, 1), (2, 0)]);
    }

    #[test]
    fn swap_mutual_pair_is_exhausted() {
        // Two agents authoring one paper each, each qualified only for the
        // other's paper: the unique full assignment is a 2-cycle.
        let inst = inst(2, 2, &[(0, 0), (1, 1)], &[(0, 1), (1, 0)]);
        let params = SolveParams::new(1, 1, CycleBound::Bounded(2));
        // p0 receives its review from a1; p1 is then unservable.
        let err = greedy_swap(&inst, &params).unwrap_err();
        assert_eq!(err, HeuristicError::SwapExhausted { paper: "p1".into() });
    }

    #[test]
    fn swap_repairs_via_case_two() {
        // Three single-author papers in a ring of qualifications plus one
        // free agent; z = 2 forces a repair at some point under c = d = 1.
        let inst = inst(
            4,
            3,
            &[(0, 0), (1, 1), (2, 2)],
            &[
                (0, 1),
                (1, 2),
                (2, 0),
                (3, 0),
                (3, 1),
                (3, 2),
                (0, 2),
                (1, 0),
                (2, 1),
            ],
        );
        let params = SolveParams::new(1, 1, CycleBound::Bounded(2));
        let run = greedy_swap(&inst, &params).unwrap();
        let validity = is_valid_assignment(&inst, &run.assignment, &params).unwrap();
        assert!(validity.valid);
        assert!(find_review_cycles(&inst, &run.assignment, CycleBound::Bounded(2)).is_cycle_free());
    }

    #[test]
    fn swap_context_reflects_feasibility_condition() {
        // Stuck state: a0 authors p0, a1 authors p1; E' = {(a1, p0)}. Paper
        // p1 is deficient and its only qualified reviewer a0 would close a
        // 2-cycle (p1 reaches a0 through a1's review of p0).
        let inst = inst(3, 2, &[(0, 0), (1, 1)], &[(0, 1), (1, 0), (2, 0)]);
        let mut adj = ReviewAdjacency::new(3, 2);
        adj.insert(1, 0);
        let assigned: HashSet<(usize, usize)> = [(1usize, 0usize)].into_iter().collect();
        let ctx = swap_context(&inst, &adj, &assigned, 1, 3, Some(2));
        assert_eq!(ctx.stuck_paper, 1);
        assert_eq!(ctx.cycle_safe_reviewers, Vec::<usize>::new());
        assert!(ctx.donor_papers.is_empty());
        // Probing p0 instead: the free agent a2 is a cycle-safe reviewer and
        // could take p0 (its receiver set), which is what a repair would use.
        let ctx0 = swap_context(&inst, &adj, &assigned, 0, 3, Some(2));
        assert_eq!(ctx0.cycle_safe_reviewers, vec![2]);
        assert!(ctx0.donor_papers.is_empty()); // a2 reviews nothing yet
        assert_eq!(ctx0.receiver_papers, vec![0]);
    }

    #[test]
    fn swap_requires_finite_bound_and_weights() {
        let inst = inst(1, 0, &[], &[]);
        let params = SolveParams::new(1, 1, CycleBound::Unbounded);
        assert_eq!(
            greedy_swap(&inst, &params).unwrap_err(),
            HeuristicError::UnboundedCycleBound
        );
        let params = SolveParams::new(1, 1, CycleBound::Bounded(2)).weighted();
        assert_eq!(
            greedy_swap(&inst, &params).unwrap_err(),
            HeuristicError::MissingWeights
        );
    }

    #[test]
    fn swap_weighted_prefers_heavier_edge() {
        let mut weights = std::collections::HashMap::new();
        weights.insert((0usize, 0usize), 1i64);
        weights.insert((1, 0), 7);
        let inst = ReviewInstance::from_indexed(
            vec!["a0".into(), "a1".into()],
            vec!["p0".into()],
            &[],
            &[(0, 0), (1, 0)],
            Some(weights),
            true,
        )
        .unwrap();
        let params = SolveParams::new(1, 1, CycleBound::Bounded(2)).weighted();
        let run = greedy_swap(&inst, &params).unwrap();
        assert_eq!(run.assignment.edges().collect::<Vec<_>>(), vec![(1, 0)]);
        // Unweighted mode takes the first agent instead.
        let params = SolveParams::new(1, 1, CycleBound::Bounded(2));
        let run = greedy_swap(&inst, &params).unwrap();
        assert_eq!(run.assignment.edges().collect::<Vec<_>>(), vec![(0, 0)]);
    }
}
