//! Review-cycle detection.
//!
//! A review cycle of length `k` is a sequence of agents `a_1..a_k` and papers
//! `p_1..p_k` where `a_i` authors `p_i`, `a_i` reviews `p_{i+1}` and `a_k`
//! reviews `p_1`; it corresponds to a directed cycle of length `2k` in the
//! combined review graph over agents and papers.
//!
//! Bounded enumeration uses a depth-bounded DFS from each agent over
//! alternating review/authorship edges with path-local vertex exclusion; the
//! worst case is exponential in `z`, which stays tiny (`z <= 4`) in all
//! intended uses. The unbounded check uses a Kahn-style topological order and
//! reports at most one witness cycle.

use std::collections::BTreeSet;

use crate::instance::{AgentId, Assignment, CycleBound, PaperId, ReviewInstance};

/// One review cycle: `agents[i]` authors `papers[i]`, reviews
/// `papers[i + 1]`, and the last agent reviews `papers[0]`.
///
/// Stored in canonical rotation: the smallest agent (declared order) first.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct ReviewCycle {
    pub agents: Vec<AgentId>,
    pub papers: Vec<PaperId>,
}

impl ReviewCycle {
    pub fn len(&self) -> usize {
        self.agents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.agents.is_empty()
    }

    /// The review edges (agent, paper) the cycle is made of.
    pub fn review_edges(&self) -> Vec<(AgentId, PaperId)> {
        let k = self.len();
        (0..k)
            .map(|i| (self.agents[i], self.papers[(i + 1) % k]))
            .collect()
    }
}

/// An exact fraction reported alongside cycle counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Fraction {
    pub numer: u64,
    pub denom: u64,
}

impl Fraction {
    pub fn as_f64(self) -> f64 {
        if self.denom == 0 {
            0.0
        } else {
            self.numer as f64 / self.denom as f64
        }
    }
}

/// Enumerated cycles plus per-vertex exposure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleReport {
    pub cycles: Vec<ReviewCycle>,
    pub agents_in_cycle: BTreeSet<AgentId>,
    pub papers_in_cycle: BTreeSet<PaperId>,
    /// |agents_in_cycle| / n_A.
    pub agent_fraction: Fraction,
    /// |papers_in_cycle| / n_P.
    pub paper_fraction: Fraction,
}

impl CycleReport {
    pub fn is_cycle_free(&self) -> bool {
        self.cycles.is_empty()
    }

    fn from_cycles(instance: &ReviewInstance, cycles: Vec<ReviewCycle>) -> Self {
        let mut agents_in_cycle = BTreeSet::new();
        let mut papers_in_cycle = BTreeSet::new();
        for c in &cycles {
            agents_in_cycle.extend(c.agents.iter().copied());
            papers_in_cycle.extend(c.papers.iter().copied());
        }
        let agent_fraction = Fraction {
            numer: agents_in_cycle.len() as u64,
            denom: instance.n_agents() as u64,
        };
        let paper_fraction = Fraction {
            numer: papers_in_cycle.len() as u64,
            denom: instance.n_papers() as u64,
        };
        CycleReport {
            cycles,
            agents_in_cycle,
            papers_in_cycle,
            agent_fraction,
            paper_fraction,
        }
    }
}

/// Adjacency view of an assignment, used by the cycle search and by the
/// solvers' incremental checks.
#[derive(Debug, Clone)]
pub struct ReviewAdjacency {
    /// Papers reviewed by each agent.
    pub reviews_of: Vec<Vec<PaperId>>,
    /// Agents reviewing each paper.
    pub reviewed_by: Vec<Vec<AgentId>>,
}

impl ReviewAdjacency {
    pub fn new(n_agents: usize, n_papers: usize) -> Self {
        ReviewAdjacency {
            reviews_of: vec![Vec::new(); n_agents],
            reviewed_by: vec![Vec::new(); n_papers],
        }
    }

    pub fn from_assignment(instance: &ReviewInstance, assignment: &Assignment) -> Self {
        let mut adj = Self::new(instance.n_agents(), instance.n_papers());
        for (a, p) in assignment.edges() {
            adj.insert(a, p);
        }
        adj
    }

    pub fn insert(&mut self, a: AgentId, p: PaperId) {
        self.reviews_of[a].push(p);
        self.reviewed_by[p].push(a);
    }

    pub fn remove(&mut self, a: AgentId, p: PaperId) {
        self.reviews_of[a].retain(|&q| q != p);
        self.reviewed_by[p].retain(|&b| b != a);
    }
}

/// True when `agents`/`papers` satisfy the review-cycle definition edge by
/// edge against the instance's authorship and the given assignment.
pub fn is_review_cycle(
    instance: &ReviewInstance,
    assignment: &Assignment,
    agents: &[AgentId],
    papers: &[PaperId],
) -> bool {
    let k = agents.len();
    if k == 0 || papers.len() != k {
        return false;
    }
    for i in 0..k {
        if !instance.is_author(agents[i], papers[i]) {
            return false;
        }
        if !assignment.contains(agents[i], papers[(i + 1) % k]) {
            return false;
        }
    }
    true
}

/// Enumerates every review cycle of length `1..=z` (canonical rotation,
/// deduplicated) for a bounded `z`; for [`CycleBound::Unbounded`] performs a
/// topological existence test and reports at most one witness cycle.
///
/// For the unbounded bound, the exposure sets cover only the witness.
pub fn find_review_cycles(
    instance: &ReviewInstance,
    assignment: &Assignment,
    bound: CycleBound,
) -> CycleReport {
    let adj = ReviewAdjacency::from_assignment(instance, assignment);
    let cycles = match bound {
        CycleBound::Bounded(z) => enumerate_cycles(instance, &adj, z as usize),
        CycleBound::Unbounded => topological_witness(instance, &adj).into_iter().collect(),
    };
    CycleReport::from_cycles(instance, cycles)
}

/// All review cycles of length exactly `1..=z`, canonical smallest agent
/// first, ordered by that agent and then DFS discovery order.
fn enumerate_cycles(
    instance: &ReviewInstance,
    adj: &ReviewAdjacency,
    z: usize,
) -> Vec<ReviewCycle> {
    if z == 0 {
        // No cycle has length <= 0; bound 0 constrains nothing.
        return Vec::new();
    }
    let mut found = Vec::new();
    let mut on_path_agent = vec![false; instance.n_agents()];
    let mut on_path_paper = vec![false; instance.n_papers()];
    for start in 0..instance.n_agents() {
        let mut agents = vec![start];
        let mut papers = Vec::new();
        on_path_agent[start] = true;
        dfs_from(
            instance,
            adj,
            z,
            start,
            &mut agents,
            &mut papers,
            &mut on_path_agent,
            &mut on_path_paper,
            &mut found,
        );
        on_path_agent[start] = false;
    }
    found
}

/// Extends a path `start -> ... -> current agent`; every intermediate agent
/// has index > start, so each rotation class is discovered exactly once, with
/// the smallest agent in front.
#[allow(clippy::too_many_arguments)]
fn dfs_from(
    instance: &ReviewInstance,
    adj: &ReviewAdjacency,
    z: usize,
    start: AgentId,
    agents: &mut Vec<AgentId>,
    papers: &mut Vec<PaperId>,
    on_path_agent: &mut [bool],
    on_path_paper: &mut [bool],
    found: &mut Vec<ReviewCycle>,
) {
    let current = *agents.last().unwrap();
    for &p in &adj.reviews_of[current] {
        if on_path_paper[p] {
            continue;
        }
        // Closing the ring: p must be authored by the start agent. The
        // traversal discovered papers p_2..p_k, p_1; rotate the closing paper
        // to the front so papers[i] is authored by agents[i].
        if instance.is_author(start, p) {
            let mut cycle_papers = Vec::with_capacity(papers.len() + 1);
            cycle_papers.push(p);
            cycle_papers.extend_from_slice(papers);
            found.push(ReviewCycle {
                agents: agents.clone(),
                papers: cycle_papers,
            });
        }
        if agents.len() == z {
            continue;
        }
        on_path_paper[p] = true;
        papers.push(p);
        for &next in instance.authors_of(p) {
            if next <= start || on_path_agent[next] {
                continue;
            }
            on_path_agent[next] = true;
            agents.push(next);
            dfs_from(
                instance,
                adj,
                z,
                start,
                agents,
                papers,
                on_path_agent,
                on_path_paper,
                found,
            );
            agents.pop();
            on_path_agent[next] = false;
        }
        papers.pop();
        on_path_paper[p] = false;
    }
}

/// Kahn-style acyclicity test on the combined review graph.
pub fn is_acyclic(instance: &ReviewInstance, assignment: &Assignment) -> bool {
    let adj = ReviewAdjacency::from_assignment(instance, assignment);
    topological_witness(instance, &adj).is_none()
}

/// Runs a topological ordering; on failure extracts one directed cycle from
/// the unremoved subgraph and returns it as a review cycle.
fn topological_witness(instance: &ReviewInstance, adj: &ReviewAdjacency) -> Option<ReviewCycle> {
    let n_a = instance.n_agents();
    let n_p = instance.n_papers();
    // Vertices: agents 0..n_a, papers n_a..n_a+n_p.
    // Edges: agent -> reviewed paper (review), paper -> each author.
    let mut indeg = vec![0usize; n_a + n_p];
    for a in 0..n_a {
        indeg[a] = instance.authored_by(a).len();
    }
    for p in 0..n_p {
        indeg[n_a + p] = adj.reviewed_by[p].len();
    }
    let mut queue: Vec<usize> = (0..n_a + n_p).filter(|&v| indeg[v] == 0).collect();
    let mut removed = vec![false; n_a + n_p];
    while let Some(v) = queue.pop() {
        removed[v] = true;
        if v < n_a {
            for &p in &adj.reviews_of[v] {
                indeg[n_a + p] -= 1;
                if indeg[n_a + p] == 0 {
                    queue.push(n_a + p);
                }
            }
        } else {
            for &a in instance.authors_of(v - n_a) {
                indeg[a] -= 1;
                if indeg[a] == 0 {
                    queue.push(a);
                }
            }
        }
    }
    let first_left = (0..n_a + n_p).find(|&v| !removed[v])?;
    // Every leftover vertex keeps at least one leftover predecessor (its
    // in-degree never reached zero), so walking backward must revisit a
    // vertex; the revisited segment, reversed, is a directed cycle.
    let mut seen_at = vec![usize::MAX; n_a + n_p];
    let mut walk = Vec::new();
    let mut v = first_left;
    while seen_at[v] == usize::MAX {
        seen_at[v] = walk.len();
        walk.push(v);
        let pred = if v < n_a {
            // A paper pointing at agent v is one it authored.
            instance
                .authored_by(v)
                .iter()
                .copied()
                .map(|p| p + n_a)
                .find(|&u| !removed[u])
        } else {
            adj.reviewed_by[v - n_a]
                .iter()
                .copied()
                .find(|&a| !removed[a])
        };
        v = pred.expect("leftover vertex in Kahn residue must have a leftover predecessor");
    }
    let segment = &walk[seen_at[v]..];
    // segment[j+1] is a predecessor of segment[j]; forward order is the
    // first vertex followed by the rest reversed.
    let mut forward = Vec::with_capacity(segment.len());
    forward.push(segment[0]);
    forward.extend(segment[1..].iter().rev().copied());
    // Align the alternating vertex list to start at an agent:
    // [a_1, p_2, a_2, p_3, ..., a_k, p_1] with a_i reviewing p_{i+1}.
    let shift = forward.iter().position(|&u| u < n_a).unwrap();
    forward.rotate_left(shift);
    let mut agents = Vec::with_capacity(forward.len() / 2);
    let mut papers = Vec::with_capacity(forward.len() / 2);
    for pair in forward.chunks(2) {
        agents.push(pair[0]);
        papers.push(pair[1] - n_a);
    }
    // papers currently follow the reviewing agent; shift so papers[i] is the
    // paper authored by agents[i].
    papers.rotate_right(1);
    let min_pos = agents
        .iter()
        .enumerate()
        .min_by_key(|&(_, a)| *a)
        .map(|(i, _)| i)
        .unwrap();
    agents.rotate_left(min_pos);
    papers.rotate_left(min_pos);
    Some(ReviewCycle { agents, papers })
}

/// Bounded reachability: can `from_paper` reach `to_agent` in the combined
/// review graph (assignment plus authorship) within `max_edges` edges?
///
/// Adding review edge `(to_agent, from_paper)` to a `z`-cycle-free assignment
/// creates a review cycle of length at most `z` exactly when this holds with
/// `max_edges = 2z - 1`, which is how the solvers test candidate edges
/// without re-enumerating.
pub fn reaches_within(
    instance: &ReviewInstance,
    adj: &ReviewAdjacency,
    from_paper: PaperId,
    to_agent: AgentId,
    max_edges: usize,
) -> bool {
    collect_reachable_agents(instance, adj, from_paper, max_edges, Some(to_agent)).is_none()
}

/// Agents reachable from `from_paper` within `max_edges` edges. When `stop`
/// is given, returns `None` as soon as that agent is reached (short-circuit);
/// otherwise returns the full set.
pub fn collect_reachable_agents(
    instance: &ReviewInstance,
    adj: &ReviewAdjacency,
    from_paper: PaperId,
    max_edges: usize,
    stop: Option<AgentId>,
) -> Option<Vec<bool>> {
    let mut seen_agent = vec![false; instance.n_agents()];
    let mut seen_paper = vec![false; instance.n_papers()];
    seen_paper[from_paper] = true;
    let mut paper_frontier = vec![from_paper];
    let mut agent_frontier: Vec<AgentId> = Vec::new();
    let mut depth = 0;
    while depth < max_edges && !paper_frontier.is_empty() {
        // papers -> authors
        agent_frontier.clear();
        for &p in &paper_frontier {
            for &a in instance.authors_of(p) {
                if !seen_agent[a] {
                    if stop == Some(a) {
                        return None;
                    }
                    seen_agent[a] = true;
                    agent_frontier.push(a);
                }
            }
        }
        depth += 1;
        if depth >= max_edges {
            break;
        }
        // agents -> reviewed papers
        paper_frontier.clear();
        for &a in &agent_frontier {
            for &p in &adj.reviews_of[a] {
                if !seen_paper[p] {
                    seen_paper[p] = true;
                    paper_frontier.push(p);
                }
            }
        }
        depth += 1;
    }
    Some(seen_agent)
}
