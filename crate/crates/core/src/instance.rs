//! The review-instance data model: agents, papers, qualification and
//! authorship edges, optional integer edge weights, plus validity checking
//! and degree statistics.
//!
//! All types are immutable after construction; every operation here is a pure
//! function of its inputs.

use std::collections::BTreeSet;
use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

/// Index of an agent in the instance's declared agent sequence.
pub type AgentId = usize;
/// Index of a paper in the instance's declared paper sequence.
pub type PaperId = usize;

/// Errors raised while assembling an instance from raw parts.
///
/// These are structural faults (the data cannot be represented at all), as
/// opposed to [`Violation`]s, which are semantic problems reported as data by
/// [`validate_instance`].
#[derive(Debug, Error, PartialEq, Eq)]
pub enum BuildError {
    #[error("duplicate agent id {0:?}")]
    DuplicateAgent(String),
    #[error("duplicate paper id {0:?}")]
    DuplicatePaper(String),
    #[error("edge references unknown agent {0:?}")]
    UnknownAgent(String),
    #[error("edge references unknown paper {0:?}")]
    UnknownPaper(String),
    #[error("agent index {0} out of range")]
    AgentOutOfRange(usize),
    #[error("paper index {0} out of range")]
    PaperOutOfRange(usize),
    #[error("conflicting weights for edge {agent:?}/{paper:?}")]
    ConflictingWeight { agent: String, paper: String },
}

/// A semantic invariant violation, reported as data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// `(a,p)` is a qualification edge while `a` authors `p` and the instance
    /// forbids self-reviews.
    SelfReview { agent: String, paper: String },
    /// The weight table omits a qualification edge.
    WeightMissing { agent: String, paper: String },
    /// The weight table covers a pair that is not a qualification edge.
    WeightForeign { agent: String, paper: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::SelfReview { agent, paper } => {
                write!(f, "self-review edge {agent}/{paper}")
            }
            Violation::WeightMissing { agent, paper } => {
                write!(f, "weight missing for edge {agent}/{paper}")
            }
            Violation::WeightForeign { agent, paper } => {
                write!(f, "weight on non-qualification pair {agent}/{paper}")
            }
        }
    }
}

/// The bipartite review graph: agents, papers, qualification edges
/// (agent may review paper) and authorship edges (agent wrote paper),
/// with optional integer weights on the qualification edges.
///
/// Adjacency lists are index-based and sorted ascending; the declared
/// sequence order of agents and papers is significant (solvers break ties by
/// it) and is preserved by the JSON round trip.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReviewInstance {
    agents: Vec<String>,
    papers: Vec<String>,
    self_review_forbidden: bool,
    /// E_A, agent side: papers agent `a` is qualified to review.
    reviewable_by: Vec<Vec<PaperId>>,
    /// E_A, paper side: agents qualified to review paper `p`.
    reviewers_of: Vec<Vec<AgentId>>,
    /// E_P, agent side: papers authored by agent `a`.
    authored_by: Vec<Vec<PaperId>>,
    /// E_P, paper side: authors of paper `p`.
    authors_of: Vec<Vec<AgentId>>,
    weights: Option<HashMap<(AgentId, PaperId), i64>>,
}

impl ReviewInstance {
    /// Builds an instance from string-keyed edge lists, as found in the JSON
    /// file format. Edge lists are treated as sets (duplicates collapse).
    pub fn new(
        agents: Vec<String>,
        papers: Vec<String>,
        authorship: &[(String, String)],           // (paper, agent)
        qualification: &[(String, String)],        // (agent, paper)
        weights: Option<&[(String, String, i64)]>, // (agent, paper, w)
        self_review_forbidden: bool,
    ) -> Result<Self, BuildError> {
        let agent_index = index_names(&agents, BuildError::DuplicateAgent)?;
        let paper_index = index_names(&papers, BuildError::DuplicatePaper)?;
        let look_agent = |name: &String| {
            agent_index
                .get(name.as_str())
                .copied()
                .ok_or_else(|| BuildError::UnknownAgent(name.clone()))
        };
        let look_paper = |name: &String| {
            paper_index
                .get(name.as_str())
                .copied()
                .ok_or_else(|| BuildError::UnknownPaper(name.clone()))
        };

        let mut auth = Vec::with_capacity(authorship.len());
        for (p, a) in authorship {
            auth.push((look_paper(p)?, look_agent(a)?));
        }
        let mut qual = Vec::with_capacity(qualification.len());
        for (a, p) in qualification {
            qual.push((look_agent(a)?, look_paper(p)?));
        }
        let weights = match weights {
            None => None,
            Some(rows) => {
                let mut map = HashMap::with_capacity(rows.len());
                for (a, p, w) in rows {
                    let key = (look_agent(a)?, look_paper(p)?);
                    if let Some(prev) = map.insert(key, *w) {
                        if prev != *w {
                            return Err(BuildError::ConflictingWeight {
                                agent: a.clone(),
                                paper: p.clone(),
                            });
                        }
                    }
                }
                Some(map)
            }
        };
        Self::from_indexed(agents, papers, &auth, &qual, weights, self_review_forbidden)
    }

    /// Builds an instance from index-based edge lists (the generator path).
    /// Indices refer to positions in `agents` / `papers`.
    pub fn from_indexed(
        agents: Vec<String>,
        papers: Vec<String>,
        authorship: &[(PaperId, AgentId)],
        qualification: &[(AgentId, PaperId)],
        weights: Option<HashMap<(AgentId, PaperId), i64>>,
        self_review_forbidden: bool,
    ) -> Result<Self, BuildError> {
        let n_a = agents.len();
        let n_p = papers.len();
        let check_agent = |a: AgentId| {
            if a < n_a {
                Ok(a)
            } else {
                Err(BuildError::AgentOutOfRange(a))
            }
        };
        let check_paper = |p: PaperId| {
            if p < n_p {
                Ok(p)
            } else {
                Err(BuildError::PaperOutOfRange(p))
            }
        };

        let mut authored_by = vec![BTreeSet::new(); n_a];
        let mut authors_of = vec![BTreeSet::new(); n_p];
        for &(p, a) in authorship {
            check_paper(p)?;
            check_agent(a)?;
            authored_by[a].insert(p);
            authors_of[p].insert(a);
        }
        let mut reviewable_by = vec![BTreeSet::new(); n_a];
        let mut reviewers_of = vec![BTreeSet::new(); n_p];
        for &(a, p) in qualification {
            check_agent(a)?;
            check_paper(p)?;
            reviewable_by[a].insert(p);
            reviewers_of[p].insert(a);
        }
        if let Some(map) = &weights {
            for &(a, p) in map.keys() {
                check_agent(a)?;
                check_paper(p)?;
            }
        }

        let to_vecs = |sets: Vec<BTreeSet<usize>>| -> Vec<Vec<usize>> {
            sets.into_iter().map(|s| s.into_iter().collect()).collect()
        };
        Ok(ReviewInstance {
            agents,
            papers,
            self_review_forbidden,
            reviewable_by: to_vecs(reviewable_by),
            reviewers_of: to_vecs(reviewers_of),
            authored_by: to_vecs(authored_by),
            authors_of: to_vecs(authors_of),
            weights,
        })
    }

    pub fn n_agents(&self) -> usize {
        self.agents.len()
    }

    pub fn n_papers(&self) -> usize {
        self.papers.len()
    }

    pub fn agent_name(&self, a: AgentId) -> &str {
        &self.agents[a]
    }

    pub fn paper_name(&self, p: PaperId) -> &str {
        &self.papers[p]
    }

    pub fn agent_names(&self) -> &[String] {
        &self.agents
    }

    pub fn paper_names(&self) -> &[String] {
        &self.papers
    }

    pub fn agent_id(&self, name: &str) -> Option<AgentId> {
        self.agents.iter().position(|a| a == name)
    }

    pub fn paper_id(&self, name: &str) -> Option<PaperId> {
        self.papers.iter().position(|p| p == name)
    }

    pub fn self_review_forbidden(&self) -> bool {
        self.self_review_forbidden
    }

    /// Papers agent `a` is qualified to review, ascending.
    pub fn reviewable_by(&self, a: AgentId) -> &[PaperId] {
        &self.reviewable_by[a]
    }

    /// Agents qualified to review paper `p`, ascending.
    pub fn reviewers_of(&self, p: PaperId) -> &[AgentId] {
        &self.reviewers_of[p]
    }

    /// Papers authored by agent `a`, ascending.
    pub fn authored_by(&self, a: AgentId) -> &[PaperId] {
        &self.authored_by[a]
    }

    /// Authors of paper `p`, ascending.
    pub fn authors_of(&self, p: PaperId) -> &[AgentId] {
        &self.authors_of[p]
    }

    pub fn is_qualified(&self, a: AgentId, p: PaperId) -> bool {
        self.reviewable_by[a].binary_search(&p).is_ok()
    }

    pub fn is_author(&self, a: AgentId, p: PaperId) -> bool {
        self.authored_by[a].binary_search(&p).is_ok()
    }

    /// Qualification edges in (agent, paper) ascending order.
    pub fn qualification_edges(&self) -> impl Iterator<Item = (AgentId, PaperId)> + '_ {
        self.reviewable_by
            .iter()
            .enumerate()
            .flat_map(|(a, ps)| ps.iter().map(move |&p| (a, p)))
    }

    /// Authorship edges in (paper, agent) ascending order.
    pub fn authorship_edges(&self) -> impl Iterator<Item = (PaperId, AgentId)> + '_ {
        self.authors_of
            .iter()
            .enumerate()
            .flat_map(|(p, agents)| agents.iter().map(move |&a| (p, a)))
    }

    pub fn n_qualification_edges(&self) -> usize {
        self.reviewable_by.iter().map(Vec::len).sum()
    }

    pub fn is_weighted(&self) -> bool {
        self.weights.is_some()
    }

    /// Weight of a qualification edge in a weighted instance; `None` for
    /// unweighted instances or pairs outside the weight table.
    pub fn weight(&self, a: AgentId, p: PaperId) -> Option<i64> {
        self.weights.as_ref().and_then(|m| m.get(&(a, p)).copied())
    }

    /// Edge weight with the unweighted convention: every present edge counts 1.
    pub fn weight_or_unit(&self, a: AgentId, p: PaperId) -> i64 {
        match &self.weights {
            Some(m) => m.get(&(a, p)).copied().unwrap_or(0),
            None => 1,
        }
    }

    pub fn weight_table(&self) -> Option<&HashMap<(AgentId, PaperId), i64>> {
        self.weights.as_ref()
    }
}

fn index_names<E>(names: &[String], dup: impl Fn(String) -> E) -> Result<HashMap<&str, usize>, E> {
    let mut map = HashMap::with_capacity(names.len());
    for (i, n) in names.iter().enumerate() {
        if map.insert(n.as_str(), i).is_some() {
            return Err(dup(n.clone()));
        }
    }
    Ok(map)
}

/// Checks the semantic invariants and returns every violation found.
/// An empty result means the instance is valid.
pub fn validate_instance(instance: &ReviewInstance) -> Vec<Violation> {
    let mut violations = Vec::new();
    if instance.self_review_forbidden {
        for (a, p) in instance.qualification_edges() {
            if instance.is_author(a, p) {
                violations.push(Violation::SelfReview {
                    agent: instance.agent_name(a).to_owned(),
                    paper: instance.paper_name(p).to_owned(),
                });
            }
        }
    }
    if let Some(weights) = &instance.weights {
        for (a, p) in instance.qualification_edges() {
            if !weights.contains_key(&(a, p)) {
                violations.push(Violation::WeightMissing {
                    agent: instance.agent_name(a).to_owned(),
                    paper: instance.paper_name(p).to_owned(),
                });
            }
        }
        let mut foreign: Vec<(AgentId, PaperId)> = weights
            .keys()
            .copied()
            .filter(|&(a, p)| !instance.is_qualified(a, p))
            .collect();
        foreign.sort_unstable();
        for (a, p) in foreign {
            violations.push(Violation::WeightForeign {
                agent: instance.agent_name(a).to_owned(),
                paper: instance.paper_name(p).to_owned(),
            });
        }
    }
    violations
}

/// A review assignment: a set of (agent, paper) qualification edges.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Assignment {
    reviews: BTreeSet<(AgentId, PaperId)>,
}

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_edges<I: IntoIterator<Item = (AgentId, PaperId)>>(edges: I) -> Self {
        Assignment {
            reviews: edges.into_iter().collect(),
        }
    }

    pub fn edges(&self) -> impl Iterator<Item = (AgentId, PaperId)> + '_ {
        self.reviews.iter().copied()
    }

    pub fn contains(&self, a: AgentId, p: PaperId) -> bool {
        self.reviews.contains(&(a, p))
    }

    pub fn len(&self) -> usize {
        self.reviews.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reviews.is_empty()
    }

    /// Papers reviewed by `a` under this assignment, ascending.
    pub fn reviews_of_agent(&self, a: AgentId) -> impl Iterator<Item = PaperId> + '_ {
        self.reviews
            .range((a, 0)..=(a, usize::MAX))
            .map(|&(_, p)| p)
    }
}

impl FromIterator<(AgentId, PaperId)> for Assignment {
    fn from_iter<I: IntoIterator<Item = (AgentId, PaperId)>>(iter: I) -> Self {
        Assignment::from_edges(iter)
    }
}

/// How far cycle freedom is required to reach.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CycleBound {
    /// No review cycle of length 1..=z.
    Bounded(u32),
    /// Completely cycle-free (the combined review graph is acyclic).
    Unbounded,
}

impl CycleBound {
    pub fn finite(self) -> Option<u32> {
        match self {
            CycleBound::Bounded(z) => Some(z),
            CycleBound::Unbounded => None,
        }
    }
}

impl fmt::Display for CycleBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CycleBound::Bounded(z) => write!(f, "{z}"),
            CycleBound::Unbounded => write!(f, "unbounded"),
        }
    }
}

/// Solve parameters: per-agent review cap, exact per-paper review demand,
/// the cycle bound and whether edge weights drive the objective.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolveParams {
    /// Maximum reviews per agent (the paper cap `c`).
    pub reviewer_cap: u32,
    /// Exact reviews per paper (the demand `d`).
    pub paper_demand: u32,
    pub cycle_bound: CycleBound,
    pub weighted: bool,
}

impl SolveParams {
    pub fn new(reviewer_cap: u32, paper_demand: u32, cycle_bound: CycleBound) -> Self {
        SolveParams {
            reviewer_cap,
            paper_demand,
            cycle_bound,
            weighted: false,
        }
    }

    pub fn weighted(mut self) -> Self {
        self.weighted = true;
        self
    }
}

/// Per-vertex load report produced by [`is_valid_assignment`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidityReport {
    pub valid: bool,
    /// Reviews performed by each agent.
    pub agent_load: Vec<u32>,
    /// Reviews received by each paper.
    pub paper_load: Vec<u32>,
    /// Agents with load above the cap.
    pub overloaded_agents: Vec<AgentId>,
    /// Papers whose load differs from the exact demand.
    pub misloaded_papers: Vec<PaperId>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AssignmentError {
    #[error("foreign edge {agent}/{paper}: not a qualification edge of the instance")]
    ForeignEdge { agent: String, paper: String },
    #[error("instance carries no weights")]
    NoWeights,
}

/// Checks `c`-`d`-validity: every agent reviews at most `reviewer_cap` papers
/// and every paper is reviewed by exactly `paper_demand` agents.
///
/// Faults if the assignment uses an edge outside the instance's
/// qualification set.
pub fn is_valid_assignment(
    instance: &ReviewInstance,
    assignment: &Assignment,
    params: &SolveParams,
) -> Result<ValidityReport, AssignmentError> {
    let mut agent_load = vec![0u32; instance.n_agents()];
    let mut paper_load = vec![0u32; instance.n_papers()];
    for (a, p) in assignment.edges() {
        if a >= instance.n_agents() || p >= instance.n_papers() || !instance.is_qualified(a, p) {
            return Err(AssignmentError::ForeignEdge {
                agent: if a < instance.n_agents() {
                    instance.agent_name(a).to_owned()
                } else {
                    format!("#{a}")
                },
                paper: if p < instance.n_papers() {
                    instance.paper_name(p).to_owned()
                } else {
                    format!("#{p}")
                },
            });
        }
        agent_load[a] += 1;
        paper_load[p] += 1;
    }
    let overloaded_agents: Vec<AgentId> = (0..instance.n_agents())
        .filter(|&a| agent_load[a] > params.reviewer_cap)
        .collect();
    let misloaded_papers: Vec<PaperId> = (0..instance.n_papers())
        .filter(|&p| paper_load[p] != params.paper_demand)
        .collect();
    Ok(ValidityReport {
        valid: overloaded_agents.is_empty() && misloaded_papers.is_empty(),
        agent_load,
        paper_load,
        overloaded_agents,
        misloaded_papers,
    })
}

/// Total weight of the assigned edges. Faults on unweighted instances.
pub fn assignment_weight(
    instance: &ReviewInstance,
    assignment: &Assignment,
) -> Result<i64, AssignmentError> {
    let weights = instance
        .weights
        .as_ref()
        .ok_or(AssignmentError::NoWeights)?;
    Ok(assignment
        .edges()
        .map(|e| weights.get(&e).copied().unwrap_or(0))
        .sum())
}

/// The eight degree extrema of the review graph plus the conflict count.
///
/// Maxima over an empty vertex set are 0; minima over an empty set are `None`
/// (an explicit "undefined", never 0), so precondition checks cannot be
/// satisfied vacuously.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeStats {
    pub max_papers_per_author: u32,
    pub min_papers_per_author: Option<u32>,
    pub max_authors_per_paper: u32,
    pub min_authors_per_paper: Option<u32>,
    pub max_reviewable_per_agent: u32,
    pub min_reviewable_per_agent: Option<u32>,
    pub max_reviewers_per_paper: u32,
    pub min_reviewers_per_paper: Option<u32>,
    /// Maximum over agents of (n_P - qualification degree): the largest
    /// number of papers any single agent cannot review. 0 when there are no
    /// agents.
    pub conflict_count: u32,
}

fn extrema(degrees: impl Iterator<Item = usize>) -> (u32, Option<u32>) {
    let mut max = 0u32;
    let mut min: Option<u32> = None;
    for d in degrees {
        let d = d as u32;
        max = max.max(d);
        min = Some(min.map_or(d, |m: u32| m.min(d)));
    }
    (max, min)
}

/// Exact degree extrema over the declared vertex sets.
pub fn degree_stats(instance: &ReviewInstance) -> DegreeStats {
    let (max_papers_per_author, min_papers_per_author) =
        extrema(instance.authored_by.iter().map(Vec::len));
    let (max_authors_per_paper, min_authors_per_paper) =
        extrema(instance.authors_of.iter().map(Vec::len));
    let (max_reviewable_per_agent, min_reviewable_per_agent) =
        extrema(instance.reviewable_by.iter().map(Vec::len));
    let (max_reviewers_per_paper, min_reviewers_per_paper) =
        extrema(instance.reviewers_of.iter().map(Vec::len));
    let conflict_count = min_reviewable_per_agent
        .map(|d| instance.n_papers() as u32 - d.min(instance.n_papers() as u32))
        .unwrap_or(0);
    DegreeStats {
        max_papers_per_author,
        min_papers_per_author,
        max_authors_per_paper,
        min_authors_per_paper,
        max_reviewable_per_agent,
        min_reviewable_per_agent,
        max_reviewers_per_paper,
        min_reviewers_per_paper,
        conflict_count,
    }
}
