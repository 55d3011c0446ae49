//! Exhaustive references used to certify the exact solvers in tests.
//!
//! [`brute_force_oracle`] enumerates every subset of the qualification edges
//! (hard cap: 20 edges) and keeps the best valid cycle-free one. It shares no
//! search logic with the flow or branch-and-bound solvers.
//!
//! [`exhaustive_search`] is a complete backtracking search that fills papers
//! one by one (most constrained first) with capacity, cycle and optimistic
//! weight-bound pruning. It exists for structured instances — the hardness
//! gadgets — whose edge count rules out subset enumeration; on small
//! instances it must agree with the subset oracle, which is how it is itself
//! validated.

use thiserror::Error;

use crate::cycles::{find_review_cycles, reaches_within, ReviewAdjacency};
use crate::instance::{AgentId, Assignment, CycleBound, PaperId, ReviewInstance, SolveParams};

/// Subset enumeration refuses anything bigger than this.
pub const ORACLE_EDGE_CAP: usize = 20;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("instance too large for oracle: {edges} qualification edges (cap {cap})")]
    TooLarge { edges: usize, cap: usize },
    #[error("exhaustive search exceeded its node limit of {limit}")]
    NodeLimit { limit: u64 },
}

/// Best valid assignment found, or `None` when the instance is infeasible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleOutcome {
    pub best: Option<(i64, Assignment)>,
}

impl OracleOutcome {
    pub fn optimal_weight(&self) -> Option<i64> {
        self.best.as_ref().map(|(w, _)| *w)
    }

    pub fn is_infeasible(&self) -> bool {
        self.best.is_none()
    }
}

/// Enumerates all subsets of the qualification edge set, filters by
/// `c`-`d`-validity and `z`-cycle-freeness, and returns the maximum weight
/// with the first witness found.
pub fn brute_force_oracle(
    instance: &ReviewInstance,
    params: &SolveParams,
) -> Result<OracleOutcome, OracleError> {
    let edges: Vec<(AgentId, PaperId)> = instance.qualification_edges().collect();
    if edges.len() > ORACLE_EDGE_CAP {
        return Err(OracleError::TooLarge {
            edges: edges.len(),
            cap: ORACLE_EDGE_CAP,
        });
    }
    let weights: Vec<i64> = edges
        .iter()
        .map(|&(a, p)| instance.weight_or_unit(a, p))
        .collect();
    let n_a = instance.n_agents();
    let n_p = instance.n_papers();
    let mut best: Option<(i64, u32)> = None;
    for mask in 0u32..(1u32 << edges.len()) {
        let mut agent_load = vec![0u32; n_a];
        let mut paper_load = vec![0u32; n_p];
        let mut weight = 0i64;
        let mut ok = true;
        for (i, &(a, p)) in edges.iter().enumerate() {
            if mask & (1 << i) != 0 {
                agent_load[a] += 1;
                paper_load[p] += 1;
                weight += weights[i];
                if agent_load[a] > params.reviewer_cap {
                    ok = false;
                    break;
                }
            }
        }
        if !ok
            || paper_load.iter().any(|&l| l != params.paper_demand)
            || best.is_some_and(|(w, _)| weight <= w)
        {
            continue;
        }
        let assignment = Assignment::from_edges(
            edges
                .iter()
                .enumerate()
                .filter(|&(i, _)| mask & (1 << i) != 0)
                .map(|(_, &e)| e),
        );
        if find_review_cycles(instance, &assignment, params.cycle_bound).is_cycle_free() {
            best = Some((weight, mask));
        }
    }
    Ok(OracleOutcome {
        best: best.map(|(w, mask)| {
            let assignment = Assignment::from_edges(
                edges
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| mask & (1 << i) != 0)
                    .map(|(_, &e)| e),
            );
            (w, assignment)
        }),
    })
}

/// Complete backtracking search for the maximum-weight valid cycle-free
/// assignment. Exact on any instance it finishes; `node_limit` bounds the
/// number of edge placements tried and faults when exceeded.
pub fn exhaustive_search(
    instance: &ReviewInstance,
    params: &SolveParams,
    node_limit: u64,
) -> Result<OracleOutcome, OracleError> {
    let n_p = instance.n_papers();
    let demand = params.paper_demand as usize;
    // Most constrained paper first; ties by declared order. With any cycle
    // bound >= 1 an author can never review the own paper, so authors do not
    // count as viable candidates.
    let authors_blocked = params.cycle_bound != CycleBound::Bounded(0);
    let viable = |p: PaperId| {
        instance
            .reviewers_of(p)
            .iter()
            .filter(|&&a| !(authors_blocked && instance.is_author(a, p)))
            .count()
    };
    let mut order: Vec<PaperId> = (0..n_p).collect();
    order.sort_by_key(|&p| (viable(p), p));

    // Optimistic per-paper contribution: the d largest edge weights.
    let mut paper_bound = vec![0i64; n_p];
    for p in 0..n_p {
        let mut ws: Vec<i64> = instance
            .reviewers_of(p)
            .iter()
            .map(|&a| instance.weight_or_unit(a, p))
            .collect();
        ws.sort_unstable_by(|x, y| y.cmp(x));
        paper_bound[p] = ws.iter().take(demand).sum();
    }
    let mut suffix_bound = vec![0i64; n_p + 1];
    for i in (0..n_p).rev() {
        suffix_bound[i] = suffix_bound[i + 1] + paper_bound[order[i]];
    }

    let reach_depth = match params.cycle_bound {
        // z = 0 forbids nothing; the load rules alone decide.
        CycleBound::Bounded(0) => 0,
        CycleBound::Bounded(z) => 2 * z as usize - 1,
        CycleBound::Unbounded => 2 * (instance.n_agents() + n_p) + 1,
    };

    let mut search = Search {
        instance,
        params,
        order: &order,
        suffix_bound: &suffix_bound,
        reach_depth,
        adj: ReviewAdjacency::new(instance.n_agents(), n_p),
        agent_load: vec![0; instance.n_agents()],
        chosen: Vec::new(),
        best: None,
        nodes: 0,
        node_limit,
    };
    search.fill_paper(0)?;
    Ok(OracleOutcome {
        best: search
            .best
            .map(|(w, edges)| (w, Assignment::from_edges(edges))),
    })
}

struct Search<'a> {
    instance: &'a ReviewInstance,
    params: &'a SolveParams,
    order: &'a [PaperId],
    suffix_bound: &'a [i64],
    reach_depth: usize,
    adj: ReviewAdjacency,
    agent_load: Vec<u32>,
    chosen: Vec<(AgentId, PaperId)>,
    best: Option<(i64, Vec<(AgentId, PaperId)>)>,
    nodes: u64,
    node_limit: u64,
}

impl Search<'_> {
    fn current_weight(&self) -> i64 {
        self.chosen
            .iter()
            .map(|&(a, p)| self.instance.weight_or_unit(a, p))
            .sum()
    }

    fn fill_paper(&mut self, pos: usize) -> Result<(), OracleError> {
        if pos == self.order.len() {
            let weight = self.current_weight();
            if self.best.as_ref().is_none_or(|(best, _)| weight > *best) {
                self.best = Some((weight, self.chosen.clone()));
            }
            return Ok(());
        }
        if let Some((best, _)) = &self.best {
            if self.current_weight() + self.suffix_bound[pos] <= *best {
                return Ok(());
            }
        }
        let paper = self.order[pos];
        self.fill_slot(pos, paper, 0, 0)
    }

    fn fill_slot(
        &mut self,
        pos: usize,
        paper: PaperId,
        slot: usize,
        from: usize,
    ) -> Result<(), OracleError> {
        if slot == self.params.paper_demand as usize {
            return self.fill_paper(pos + 1);
        }
        let reviewers = self.instance.reviewers_of(paper);
        // Not enough candidates left to fill the remaining slots.
        let remaining = self.params.paper_demand as usize - slot;
        if reviewers.len().saturating_sub(from) < remaining {
            return Ok(());
        }
        for idx in from..reviewers.len() {
            let a = reviewers[idx];
            if self.agent_load[a] >= self.params.reviewer_cap {
                continue;
            }
            self.nodes += 1;
            if self.nodes > self.node_limit {
                return Err(OracleError::NodeLimit {
                    limit: self.node_limit,
                });
            }
            if self.reach_depth > 0
                && reaches_within(self.instance, &self.adj, paper, a, self.reach_depth)
            {
                continue;
            }
            self.adj.insert(a, paper);
            self.agent_load[a] += 1;
            self.chosen.push((a, paper));
            self.fill_slot(pos, paper, slot + 1, idx + 1)?;
            self.chosen.pop();
            self.agent_load[a] -= 1;
            self.adj.remove(a, paper);
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashMap;

    fn instance(
        n_a: usize,
        n_p: usize,
        authorship: &[(usize, usize)],
        quals: &[(usize, usize, i64)],
    ) -> ReviewInstance {
        let edges: Vec<(usize, usize)> = quals.iter().map(|&(a, p, _)| (a, p)).collect();
        let weights: HashMap<(usize, usize), i64> =
            quals.iter().map(|&(a, p, w)| ((a, p), w)).collect();
        ReviewInstance::from_indexed(
            (0..n_a).map(|i| format!("a{i}")).collect(),
            (0..n_p).map(|i| format!("p{i}")).collect(),
            authorship,
            &edges,
            Some(weights),
            true,
        )
        .unwrap()
    }

    #[test]
    fn empty_paper_set_is_weight_zero() {
        let inst = instance(1, 0, &[], &[]);
        let params = SolveParams::new(1, 1, CycleBound::Bounded(2)).weighted();
        let out = brute_force_oracle(&inst, &params).unwrap();
        assert_eq!(out.optimal_weight(), Some(0));
        assert!(out.best.unwrap().1.is_empty());
    }

    #[test]
    fn mutual_pair_infeasible_for_both_searches() {
        let inst = instance(2, 2, &[(0, 0), (1, 1)], &[(0, 1, 1), (1, 0, 1)]);
        let params = SolveParams::new(1, 1, CycleBound::Bounded(2)).weighted();
        assert!(brute_force_oracle(&inst, &params).unwrap().is_infeasible());
        assert!(exhaustive_search(&inst, &params, 1 << 20)
            .unwrap()
            .is_infeasible());
    }

    #[test]
    fn oracle_cap_enforced() {
        let quals: Vec<(usize, usize, i64)> = (0..21).map(|p| (0, p, 1)).collect();
        let inst = instance(1, 21, &[], &quals);
        let params = SolveParams::new(21, 1, CycleBound::Bounded(1)).weighted();
        assert_eq!(
            brute_force_oracle(&inst, &params).unwrap_err(),
            OracleError::TooLarge {
                edges: 21,
                cap: ORACLE_EDGE_CAP
            }
        );
    }

    #[test]
    fn searches_agree_on_weighted_optimum() {
        let inst = instance(
            3,
            2,
            &[(0, 0), (1, 1)],
            &[(0, 1, 10), (1, 0, 10), (2, 0, 1), (2, 1, 1)],
        );
        let params = SolveParams::new(1, 1, CycleBound::Bounded(2)).weighted();
        let subset = brute_force_oracle(&inst, &params).unwrap();
        let backtrack = exhaustive_search(&inst, &params, 1 << 20).unwrap();
        assert_eq!(subset.optimal_weight(), Some(11));
        assert_eq!(backtrack.optimal_weight(), Some(11));
    }

    #[test]
    fn unbounded_cycle_bound_supported() {
        let inst = instance(2, 2, &[(0, 0), (1, 1)], &[(0, 1, 1), (1, 0, 1)]);
        let params = SolveParams::new(1, 1, CycleBound::Unbounded).weighted();
        assert!(brute_force_oracle(&inst, &params).unwrap().is_infeasible());
        assert!(exhaustive_search(&inst, &params, 1 << 20)
            .unwrap()
            .is_infeasible());
    }
}
