//! Min-cost max-flow on the assignment network.
//!
//! Nodes: source, one per agent, one per paper, sink. Arcs: source→agent
//! with capacity `reviewer_cap`, agent→paper with capacity 1 and cost
//! `-weight` for each qualification edge, paper→sink with capacity
//! `paper_demand`. A flow of value `n_papers * paper_demand` corresponds
//! one-to-one with a `c`-`d`-valid assignment, and a min-cost such flow with
//! a maximum-weight one.
//!
//! Successive shortest augmenting paths with vertex potentials keep reduced
//! costs non-negative; the initial network is layered, so the first
//! potentials come from one relaxation pass in layer order.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::collections::HashSet;
use std::time::Instant;

use crate::instance::{AgentId, Assignment, PaperId, ReviewInstance, SolveParams};

use super::{Optimality, SolveOutcome, SolveStats};

const INF: i64 = i64::MAX / 4;

/// Residual network with paired forward/backward arcs.
#[derive(Debug, Clone)]
pub struct FlowNetwork {
    n_nodes: usize,
    // arc i and i^1 are twins
    to: Vec<u32>,
    residual: Vec<i64>,
    cost: Vec<i64>,
    out: Vec<Vec<u32>>,
}

impl FlowNetwork {
    pub fn new(n_nodes: usize) -> Self {
        FlowNetwork {
            n_nodes,
            to: Vec::new(),
            residual: Vec::new(),
            cost: Vec::new(),
            out: vec![Vec::new(); n_nodes],
        }
    }

    pub fn add_arc(&mut self, from: usize, to: usize, capacity: i64, cost: i64) -> usize {
        let id = self.to.len();
        self.to.push(to as u32);
        self.residual.push(capacity);
        self.cost.push(cost);
        self.out[from].push(id as u32);
        self.to.push(from as u32);
        self.residual.push(0);
        self.cost.push(-cost);
        self.out[to].push(id as u32 + 1);
        id
    }

    /// Min-cost max-flow from `source` to `sink`; returns (flow, cost).
    /// `initial_potential` must be valid shortest distances on the initial
    /// residual graph (reduced costs non-negative).
    pub fn min_cost_max_flow(
        &mut self,
        source: usize,
        sink: usize,
        mut potential: Vec<i64>,
    ) -> (i64, i64) {
        let n = self.n_nodes;
        let mut flow = 0i64;
        let mut total_cost = 0i64;
        let mut dist = vec![INF; n];
        let mut parent_arc = vec![u32::MAX; n];
        loop {
            dist.fill(INF);
            parent_arc.fill(u32::MAX);
            dist[source] = 0;
            let mut heap = BinaryHeap::new();
            heap.push(Reverse((0i64, source as u32)));
            while let Some(Reverse((d, u))) = heap.pop() {
                let u = u as usize;
                if d > dist[u] {
                    continue;
                }
                for &arc in &self.out[u] {
                    let arc = arc as usize;
                    if self.residual[arc] <= 0 {
                        continue;
                    }
                    let v = self.to[arc] as usize;
                    if potential[u] >= INF || potential[v] >= INF {
                        // v was never reachable; it cannot re-enter.
                        continue;
                    }
                    let nd = d + self.cost[arc] + potential[u] - potential[v];
                    if nd < dist[v] {
                        dist[v] = nd;
                        parent_arc[v] = arc as u32;
                        heap.push(Reverse((nd, v as u32)));
                    }
                }
            }
            if parent_arc[sink] == u32::MAX {
                break;
            }
            for v in 0..n {
                if dist[v] < INF && potential[v] < INF {
                    potential[v] += dist[v];
                }
            }
            // Bottleneck along the augmenting path.
            let mut push = INF;
            let mut v = sink;
            while v != source {
                let arc = parent_arc[v] as usize;
                push = push.min(self.residual[arc]);
                v = self.to[arc ^ 1] as usize;
            }
            let mut v = sink;
            while v != source {
                let arc = parent_arc[v] as usize;
                self.residual[arc] -= push;
                self.residual[arc ^ 1] += push;
                total_cost += push * self.cost[arc];
                v = self.to[arc ^ 1] as usize;
            }
            flow += push;
        }
        (flow, total_cost)
    }

    fn arc_flow_of_unit(&self, arc: usize) -> bool {
        self.residual[arc] == 0
    }
}

/// Outcome of one transportation solve.
pub(crate) struct TransportResult {
    /// Total weight including any forced-in edges.
    pub weight: i64,
    /// Full edge set including forced-in edges, sorted.
    pub edges: Vec<(AgentId, PaperId)>,
}

/// Solves the transportation relaxation with some edges forced into or out
/// of the assignment. Returns `None` when no completion meets every paper's
/// exact demand.
pub(crate) fn solve_transport(
    instance: &ReviewInstance,
    params: &SolveParams,
    forced_in: &[(AgentId, PaperId)],
    forced_out: &HashSet<(AgentId, PaperId)>,
) -> Option<TransportResult> {
    let n_a = instance.n_agents();
    let n_p = instance.n_papers();
    let mut cap = vec![i64::from(params.reviewer_cap); n_a];
    let mut demand = vec![i64::from(params.paper_demand); n_p];
    let mut base_weight = 0i64;
    for &(a, p) in forced_in {
        cap[a] -= 1;
        demand[p] -= 1;
        if cap[a] < 0 || demand[p] < 0 {
            return None;
        }
        base_weight += instance.weight_or_unit(a, p);
    }
    let forced_in_set: HashSet<(AgentId, PaperId)> = forced_in.iter().copied().collect();

    let source = 0usize;
    let agent_node = |a: AgentId| 1 + a;
    let paper_node = |p: PaperId| 1 + n_a + p;
    let sink = 1 + n_a + n_p;
    let mut net = FlowNetwork::new(sink + 1);
    for a in 0..n_a {
        net.add_arc(source, agent_node(a), cap[a], 0);
    }
    let mut edge_arcs: Vec<(usize, AgentId, PaperId)> = Vec::new();
    for (a, p) in instance.qualification_edges() {
        if forced_out.contains(&(a, p)) || forced_in_set.contains(&(a, p)) {
            continue;
        }
        let arc = net.add_arc(
            agent_node(a),
            paper_node(p),
            1,
            -instance.weight_or_unit(a, p),
        );
        edge_arcs.push((arc, a, p));
    }
    for p in 0..n_p {
        net.add_arc(paper_node(p), sink, demand[p], 0);
    }

    // Layered initial potentials: source, agents, papers, sink in order.
    let mut potential = vec![INF; sink + 1];
    potential[source] = 0;
    for a in 0..n_a {
        if cap[a] > 0 {
            potential[agent_node(a)] = 0;
        }
    }
    for &(arc, a, p) in &edge_arcs {
        let u = potential[agent_node(a)];
        if u < INF {
            let candidate = u + net.cost[arc];
            if candidate < potential[paper_node(p)] {
                potential[paper_node(p)] = candidate;
            }
        }
    }
    for p in 0..n_p {
        if demand[p] > 0
            && potential[paper_node(p)] < INF
            && potential[paper_node(p)] < potential[sink]
        {
            potential[sink] = potential[paper_node(p)];
        }
    }
    if potential[sink] == INF {
        potential[sink] = 0;
    }

    let target: i64 = demand.iter().sum();
    let (flow, cost) = net.min_cost_max_flow(source, sink, potential);
    if flow < target {
        return None;
    }
    let mut edges: Vec<(AgentId, PaperId)> = forced_in.to_vec();
    for &(arc, a, p) in &edge_arcs {
        if net.arc_flow_of_unit(arc) {
            edges.push((a, p));
        }
    }
    edges.sort_unstable();
    Some(TransportResult {
        weight: base_weight - cost,
        edges,
    })
}

/// Maximum-weight `c`-`d`-valid assignment (cycles permitted). Unweighted
/// instances use unit weights, so the objective counts assigned reviews.
pub fn max_weight_assignment(instance: &ReviewInstance, params: &SolveParams) -> SolveOutcome {
    let start = Instant::now();
    let solved = solve_transport(instance, params, &[], &HashSet::new());
    let wall_time_s = start.elapsed().as_secs_f64();
    match solved {
        Some(result) => SolveOutcome {
            stats: SolveStats {
                objective: Some(result.weight),
                nodes: 1,
                constraints_generated: 0,
                wall_time_s,
                optimality: Optimality::Proven,
            },
            assignment: Some(Assignment::from_edges(result.edges)),
            constraints: Vec::new(),
        },
        None => SolveOutcome {
            assignment: None,
            stats: SolveStats {
                objective: None,
                nodes: 1,
                constraints_generated: 0,
                wall_time_s,
                optimality: Optimality::Infeasible,
            },
            constraints: Vec::new(),
        },
    }
}
