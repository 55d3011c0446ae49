//! Hardness-gadget constructions, used as structured test instances, plus
//! the padding and weight-encoding transforms. Identifiers are
//! human-readable (`a_pos_x3`, `p_c2_1`) so the instances stay debuggable.
//!
//! Each gadget ships with an exhaustive reference check on its source object
//! (formula satisfiability, multicolored independent set), which is what the
//! fidelity tests compare solver feasibility against.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::instance::{BuildError, ReviewInstance};

#[derive(Debug, Error)]
pub enum GadgetError {
    #[error("clause {index} has {found} literals, expected {expected}")]
    ClauseArity {
        index: usize,
        found: usize,
        expected: usize,
    },
    #[error("clause {index} contains a zero literal")]
    ZeroLiteral { index: usize },
    #[error("clause {index} repeats a literal")]
    DuplicateLiteral { index: usize },
    #[error("variable {variable} occurs {count} times {polarity}, allowed {allowed}")]
    OccurrenceBound {
        variable: i32,
        polarity: &'static str,
        count: usize,
        allowed: String,
    },
    #[error("edge ({0}, {1}) references a vertex outside 0..{2}")]
    BadEdge(usize, usize, usize),
    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),
    #[error("color classes must partition the vertex set: vertex {0} appears {1} times")]
    NotPartition(usize, usize),
    #[error("at least one color class required")]
    NoClasses,
    #[error("instance already carries weights")]
    AlreadyWeighted,
    #[error("dimacs parse error: {0}")]
    Dimacs(String),
    #[error("instance assembly failed: {0}")]
    Build(#[from] BuildError),
}

fn parse_dimacs_clauses(text: &str) -> Result<Vec<Vec<i32>>, GadgetError> {
    let mut clauses = Vec::new();
    let mut current = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') || line.starts_with('p') {
            continue;
        }
        for token in line.split_whitespace() {
            let lit: i32 = token
                .parse()
                .map_err(|e| GadgetError::Dimacs(format!("bad literal {token:?}: {e}")))?;
            if lit == 0 {
                clauses.push(std::mem::take(&mut current));
            } else {
                current.push(lit);
            }
        }
    }
    if !current.is_empty() {
        clauses.push(current);
    }
    Ok(clauses)
}

fn check_clauses(clauses: &[Vec<i32>], arity: usize) -> Result<(), GadgetError> {
    for (index, clause) in clauses.iter().enumerate() {
        if clause.len() != arity {
            return Err(GadgetError::ClauseArity {
                index,
                found: clause.len(),
                expected: arity,
            });
        }
        if clause.contains(&0) {
            return Err(GadgetError::ZeroLiteral { index });
        }
        let distinct: HashSet<i32> = clause.iter().copied().collect();
        if distinct.len() != clause.len() {
            return Err(GadgetError::DuplicateLiteral { index });
        }
    }
    Ok(())
}

fn occurrence_counts(clauses: &[Vec<i32>]) -> BTreeMap<i32, (usize, usize)> {
    let mut counts: BTreeMap<i32, (usize, usize)> = BTreeMap::new();
    for clause in clauses {
        for &lit in clause {
            let entry = counts.entry(lit.abs()).or_default();
            if lit > 0 {
                entry.0 += 1;
            } else {
                entry.1 += 1;
            }
        }
    }
    counts
}

/// 3-CNF with every variable occurring at most twice positive and twice
/// negative (DIMACS literal convention).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThreeSatFormula {
    clauses: Vec<[i32; 3]>,
    variables: Vec<i32>,
}

impl ThreeSatFormula {
    pub fn new(clauses: Vec<[i32; 3]>) -> Result<Self, GadgetError> {
        let as_vecs: Vec<Vec<i32>> = clauses.iter().map(|c| c.to_vec()).collect();
        check_clauses(&as_vecs, 3)?;
        let counts = occurrence_counts(&as_vecs);
        for (&variable, &(pos, neg)) in &counts {
            if pos > 2 {
                return Err(GadgetError::OccurrenceBound {
                    variable,
                    polarity: "positive",
                    count: pos,
                    allowed: "at most 2".into(),
                });
            }
            if neg > 2 {
                return Err(GadgetError::OccurrenceBound {
                    variable,
                    polarity: "negative",
                    count: neg,
                    allowed: "at most 2".into(),
                });
            }
        }
        Ok(ThreeSatFormula {
            clauses,
            variables: counts.keys().copied().collect(),
        })
    }

    pub fn parse_dimacs(text: &str) -> Result<Self, GadgetError> {
        let clauses = parse_dimacs_clauses(text)?;
        let fixed: Result<Vec<[i32; 3]>, GadgetError> = clauses
            .iter()
            .enumerate()
            .map(|(index, c)| {
                <[i32; 3]>::try_from(c.as_slice()).map_err(|_| GadgetError::ClauseArity {
                    index,
                    found: c.len(),
                    expected: 3,
                })
            })
            .collect();
        Self::new(fixed?)
    }

    pub fn clauses(&self) -> &[[i32; 3]] {
        &self.clauses
    }

    pub fn variables(&self) -> &[i32] {
        &self.variables
    }

    /// Exhaustive satisfiability check (reference for the gadget fidelity
    /// tests; formulas stay tiny there).
    pub fn brute_force_satisfiable(&self) -> bool {
        let n = self.variables.len();
        let index: HashMap<i32, usize> = self
            .variables
            .iter()
            .enumerate()
            .map(|(i, &v)| (v, i))
            .collect();
        (0u32..(1 << n)).any(|mask| {
            self.clauses.iter().all(|clause| {
                clause.iter().any(|&lit| {
                    let bit = mask >> index[&lit.abs()] & 1 == 1;
                    if lit > 0 {
                        bit
                    } else {
                        !bit
                    }
                })
            })
        })
    }
}

/// Builds the sparse-degree reduction instance from a 3-CNF formula.
/// Intended parameters: cap 1, demand 1, any cycle bound of at least 2.
///
/// Per variable x: agents `a_pos_x`, `a_neg_x`, `b_x` and papers `p_pos_x`,
/// `p_neg_x`, `q_x` (the last authorless). Per clause: agents `a_cJ_i` and
/// papers `p_cJ_i` (i in 1..=3) plus two dummy agents reviewing the clause
/// papers and two authorless dummy papers reviewable by the clause agents.
/// Clause agent i authors the paper of its literal, and the literal's agent
/// authors clause paper i.
pub fn gen_sat_gadget(formula: &ThreeSatFormula) -> Result<ReviewInstance, GadgetError> {
    let mut agents: Vec<String> = Vec::new();
    let mut papers: Vec<String> = Vec::new();
    let mut agent_idx: HashMap<String, usize> = HashMap::new();
    let mut paper_idx: HashMap<String, usize> = HashMap::new();
    let add_agent = |name: String, agents: &mut Vec<String>, idx: &mut HashMap<String, usize>| {
        idx.insert(name.clone(), agents.len());
        agents.push(name);
    };

    for &v in formula.variables() {
        for name in [
            format!("a_pos_x{v}"),
            format!("a_neg_x{v}"),
            format!("b_x{v}"),
        ] {
            add_agent(name, &mut agents, &mut agent_idx);
        }
        for name in [
            format!("p_pos_x{v}"),
            format!("p_neg_x{v}"),
            format!("q_x{v}"),
        ] {
            add_agent(name, &mut papers, &mut paper_idx);
        }
    }
    for j in 1..=formula.clauses().len() {
        for i in 1..=3 {
            add_agent(format!("a_c{j}_{i}"), &mut agents, &mut agent_idx);
        }
        for i in 1..=2 {
            add_agent(format!("a_dummy_c{j}_{i}"), &mut agents, &mut agent_idx);
        }
        for i in 1..=3 {
            add_agent(format!("p_c{j}_{i}"), &mut papers, &mut paper_idx);
        }
        for i in 1..=2 {
            add_agent(format!("p_dummy_c{j}_{i}"), &mut papers, &mut paper_idx);
        }
    }

    let literal_paper = |lit: i32| {
        let v = lit.abs();
        if lit > 0 {
            format!("p_pos_x{v}")
        } else {
            format!("p_neg_x{v}")
        }
    };
    let literal_agent = |lit: i32| {
        let v = lit.abs();
        if lit > 0 {
            format!("a_pos_x{v}")
        } else {
            format!("a_neg_x{v}")
        }
    };

    let mut qualification: Vec<(usize, usize)> = Vec::new();
    let mut authorship: Vec<(usize, usize)> = Vec::new();
    {
        let a = |name: &str| agent_idx[name];
        let p = |name: &str| paper_idx[name];
        for &v in formula.variables() {
            qualification.push((a(&format!("a_pos_x{v}")), p(&format!("p_pos_x{v}"))));
            qualification.push((a(&format!("a_pos_x{v}")), p(&format!("q_x{v}"))));
            qualification.push((a(&format!("a_neg_x{v}")), p(&format!("p_neg_x{v}"))));
            qualification.push((a(&format!("a_neg_x{v}")), p(&format!("q_x{v}"))));
            qualification.push((a(&format!("b_x{v}")), p(&format!("p_pos_x{v}"))));
            qualification.push((a(&format!("b_x{v}")), p(&format!("p_neg_x{v}"))));
        }
        for (j0, clause) in formula.clauses().iter().enumerate() {
            let j = j0 + 1;
            for i in 1..=3 {
                let clause_agent = a(&format!("a_c{j}_{i}"));
                qualification.push((clause_agent, p(&format!("p_c{j}_{i}"))));
                qualification.push((clause_agent, p(&format!("p_dummy_c{j}_1"))));
                qualification.push((clause_agent, p(&format!("p_dummy_c{j}_2"))));
            }
            for i in 1..=2 {
                let dummy = a(&format!("a_dummy_c{j}_{i}"));
                for t in 1..=3 {
                    qualification.push((dummy, p(&format!("p_c{j}_{t}"))));
                }
            }
            for (i0, &lit) in clause.iter().enumerate() {
                let i = i0 + 1;
                authorship.push((p(&literal_paper(lit)), a(&format!("a_c{j}_{i}"))));
                authorship.push((p(&format!("p_c{j}_{i}")), a(&literal_agent(lit))));
            }
        }
    }
    Ok(ReviewInstance::from_indexed(
        agents,
        papers,
        &authorship,
        &qualification,
        None,
        true,
    )?)
}

/// Raises both minimum degrees (papers reviewable per agent, qualified
/// reviewers per paper) to at least `delta` by adding two groups of `delta`
/// paper-less agents and two groups of `delta` authorless papers: the first
/// agent group reviews the first paper group and every original paper; the
/// original agents and the second agent group review the second paper group.
/// Feasibility of the original instance is preserved.
pub fn pad_min_degrees(instance: &ReviewInstance, delta: u32) -> ReviewInstance {
    let delta = delta as usize;
    let n_a = instance.n_agents();
    let n_p = instance.n_papers();
    let mut agents: Vec<String> = instance.agent_names().to_vec();
    let mut papers: Vec<String> = instance.paper_names().to_vec();
    for i in 0..delta {
        agents.push(format!("pad_a1_{i}"));
    }
    for i in 0..delta {
        agents.push(format!("pad_a2_{i}"));
    }
    for i in 0..delta {
        papers.push(format!("pad_p1_{i}"));
    }
    for i in 0..delta {
        papers.push(format!("pad_p2_{i}"));
    }
    let group_one_agent = |i: usize| n_a + i;
    let group_two_agent = |i: usize| n_a + delta + i;
    let group_one_paper = |i: usize| n_p + i;
    let group_two_paper = |i: usize| n_p + delta + i;

    let authorship: Vec<(usize, usize)> = instance.authorship_edges().collect();
    let mut qualification: Vec<(usize, usize)> = instance.qualification_edges().collect();
    let weighted = instance.is_weighted();
    let mut weights: HashMap<(usize, usize), i64> = match instance.weight_table() {
        Some(map) => map.clone(),
        None => HashMap::new(),
    };
    let mut push = |edge: (usize, usize), qualification: &mut Vec<(usize, usize)>| {
        qualification.push(edge);
        if weighted {
            weights.insert(edge, 0);
        }
    };
    for i in 0..delta {
        for j in 0..delta {
            push((group_one_agent(i), group_one_paper(j)), &mut qualification);
        }
        for p in 0..n_p {
            push((group_one_agent(i), p), &mut qualification);
        }
    }
    for a in 0..n_a {
        for j in 0..delta {
            push((a, group_two_paper(j)), &mut qualification);
        }
    }
    for i in 0..delta {
        for j in 0..delta {
            push((group_two_agent(i), group_two_paper(j)), &mut qualification);
        }
    }
    ReviewInstance::from_indexed(
        agents,
        papers,
        &authorship,
        &qualification,
        if weighted { Some(weights) } else { None },
        instance.self_review_forbidden(),
    )
    .expect("padding preserves well-formedness")
}

/// A graph with vertices partitioned into color classes.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ColoredGraph {
    pub vertex_count: usize,
    pub edges: Vec<(usize, usize)>,
    pub classes: Vec<Vec<usize>>,
}

impl ColoredGraph {
    pub fn validate(&self) -> Result<(), GadgetError> {
        if self.classes.is_empty() {
            return Err(GadgetError::NoClasses);
        }
        for &(u, v) in &self.edges {
            if u >= self.vertex_count || v >= self.vertex_count {
                return Err(GadgetError::BadEdge(u, v, self.vertex_count));
            }
            if u == v {
                return Err(GadgetError::SelfLoop(u));
            }
        }
        let mut seen = vec![0usize; self.vertex_count];
        for class in &self.classes {
            for &v in class {
                if v >= self.vertex_count {
                    return Err(GadgetError::BadEdge(v, v, self.vertex_count));
                }
                seen[v] += 1;
            }
        }
        if let Some(v) = seen.iter().position(|&c| c != 1) {
            return Err(GadgetError::NotPartition(v, seen[v]));
        }
        Ok(())
    }

    /// Exhaustive multicolored-independent-set check: one vertex per class,
    /// pairwise non-adjacent.
    pub fn brute_force_multicolored_independent_set(&self) -> bool {
        let adjacent: HashSet<(usize, usize)> = self
            .edges
            .iter()
            .flat_map(|&(u, v)| [(u, v), (v, u)])
            .collect();
        let mut chosen: Vec<usize> = Vec::new();
        fn go(
            classes: &[Vec<usize>],
            adjacent: &HashSet<(usize, usize)>,
            chosen: &mut Vec<usize>,
        ) -> bool {
            if chosen.len() == classes.len() {
                return true;
            }
            for &v in &classes[chosen.len()] {
                if chosen.iter().all(|&u| !adjacent.contains(&(u, v))) {
                    chosen.push(v);
                    if go(classes, adjacent, chosen) {
                        return true;
                    }
                    chosen.pop();
                }
            }
            false
        }
        go(&self.classes, &adjacent, &mut chosen)
    }
}

/// Builds the no-conflict reduction instance from a colored graph. Every
/// agent is qualified for every paper (self-reviews are fenced off by the
/// cycle constraint, not the qualification set), so the instance is emitted
/// with `self_review_forbidden = false`. Intended parameters: cap 1,
/// demand 1, cycle bound 2.
///
/// The input is first normalized: class `c` (1-based) is padded to size
/// `n + c - 1` with fresh vertices adjacent to everything, where
/// `n = max(k + 1, ...)` makes every class large enough. Padding cannot
/// change whether a multicolored independent set exists (for k >= 2 the
/// universal vertices are never usable).
pub fn gen_mis_gadget(graph: &ColoredGraph) -> Result<ReviewInstance, GadgetError> {
    graph.validate()?;
    let k = graph.classes.len();
    let mut n = k + 1;
    for (c0, class) in graph.classes.iter().enumerate() {
        n = n.max(class.len().saturating_sub(c0));
    }
    // Padded copy: class c0 grows to n + c0 vertices with universal vertices.
    let mut classes: Vec<Vec<usize>> = graph.classes.clone();
    let mut vertex_count = graph.vertex_count;
    let mut universal: Vec<usize> = Vec::new();
    for (c0, class) in classes.iter_mut().enumerate() {
        while class.len() < n + c0 {
            class.push(vertex_count);
            universal.push(vertex_count);
            vertex_count += 1;
        }
    }
    let mut adjacent: HashSet<(usize, usize)> = graph
        .edges
        .iter()
        .flat_map(|&(u, v)| [(u, v), (v, u)])
        .collect();
    for &u in &universal {
        for v in 0..vertex_count {
            if u != v {
                adjacent.insert((u, v));
                adjacent.insert((v, u));
            }
        }
    }

    let mut agents: Vec<String> = Vec::new();
    let mut papers: Vec<String> = Vec::new();
    // Agent/paper ids line up: paper i is the same name with a `p` prefix.
    let mut special_agent = vec![0usize; k];
    let mut special_paper = vec![0usize; k];
    let mut vertex_agent: HashMap<usize, usize> = HashMap::new();
    let mut vertex_paper: HashMap<usize, usize> = HashMap::new();
    let mut dummy_agents: Vec<Vec<usize>> = vec![Vec::new(); k];
    let mut dummy_papers: Vec<Vec<usize>> = vec![Vec::new(); k];
    for (c0, class) in classes.iter().enumerate() {
        let c = c0 + 1;
        special_agent[c0] = agents.len();
        agents.push(format!("a_star_c{c}"));
        special_paper[c0] = papers.len();
        papers.push(format!("p_star_c{c}"));
        for &v in class {
            vertex_agent.insert(v, agents.len());
            agents.push(format!("a_c{c}_v{v}"));
            vertex_paper.insert(v, papers.len());
            papers.push(format!("p_c{c}_v{v}"));
        }
        for i in 1..=(n + c0 - 1) {
            dummy_agents[c0].push(agents.len());
            agents.push(format!("a_dummy_c{c}_{i}"));
            dummy_papers[c0].push(papers.len());
            papers.push(format!("p_dummy_c{c}_{i}"));
        }
    }
    let star_agent = agents.len();
    agents.push("a_star".into());
    let star_paper = papers.len();
    papers.push("p_star".into());

    let mut authorship: Vec<(usize, usize)> = Vec::new();
    // p_star: authored by all vertex and dummy agents.
    for (c0, class) in classes.iter().enumerate() {
        for &v in class {
            authorship.push((star_paper, vertex_agent[&v]));
        }
        for &d in &dummy_agents[c0] {
            authorship.push((star_paper, d));
        }
    }
    // p_star_c: authored by vertex und dummy agents of other colors and a_star.
    for c0 in 0..k {
        authorship.push((special_paper[c0], star_agent));
        for (c1, class) in classes.iter().enumerate() {
            if c1 == c0 {
                continue;
            }
            for &v in class {
                authorship.push((special_paper[c0], vertex_agent[&v]));
            }
            for &d in &dummy_agents[c1] {
                authorship.push((special_paper[c0], d));
            }
        }
    }
    // Dummy papers: authored by their color's special agent.
    for c0 in 0..k {
        for &dp in &dummy_papers[c0] {
            authorship.push((dp, special_agent[c0]));
        }
    }
    // Vertex papers: special agent, same-class other vertices, adjacent
    // vertices anywhere.
    for (c0, class) in classes.iter().enumerate() {
        for &v in class {
            let paper = vertex_paper[&v];
            authorship.push((paper, special_agent[c0]));
            for &v2 in class {
                if v2 != v {
                    authorship.push((paper, vertex_agent[&v2]));
                }
            }
            for other_class in classes.iter() {
                for &u in other_class {
                    if adjacent.contains(&(v, u)) {
                        authorship.push((paper, vertex_agent[&u]));
                    }
                }
            }
        }
    }

    let n_a = agents.len();
    let n_p = papers.len();
    let mut qualification: Vec<(usize, usize)> = Vec::with_capacity(n_a * n_p);
    for a in 0..n_a {
        for p in 0..n_p {
            qualification.push((a, p));
        }
    }
    Ok(ReviewInstance::from_indexed(
        agents,
        papers,
        &authorship,
        &qualification,
        None,
        false,
    )?)
}

/// 4-CNF where every variable occurs exactly twice positive and twice
/// negative and each clause has four distinct literals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FourSatFormula {
    clauses: Vec<[i32; 4]>,
    variables: Vec<i32>,
}

impl FourSatFormula {
    pub fn new(clauses: Vec<[i32; 4]>) -> Result<Self, GadgetError> {
        let as_vecs: Vec<Vec<i32>> = clauses.iter().map(|c| c.to_vec()).collect();
        check_clauses(&as_vecs, 4)?;
        let counts = occurrence_counts(&as_vecs);
        for (&variable, &(pos, neg)) in &counts {
            if pos != 2 {
                return Err(GadgetError::OccurrenceBound {
                    variable,
                    polarity: "positive",
                    count: pos,
                    allowed: "exactly 2".into(),
                });
            }
            if neg != 2 {
                return Err(GadgetError::OccurrenceBound {
                    variable,
                    polarity: "negative",
                    count: neg,
                    allowed: "exactly 2".into(),
                });
            }
        }
        Ok(FourSatFormula {
            clauses,
            variables: counts.keys().copied().collect(),
        })
    }

    pub fn parse_dimacs(text: &str) -> Result<Self, GadgetError> {
        let clauses = parse_dimacs_clauses(text)?;
        let fixed: Result<Vec<[i32; 4]>, GadgetError> = clauses
            .iter()
            .enumerate()
            .map(|(index, c)| {
                <[i32; 4]>::try_from(c.as_slice()).map_err(|_| GadgetError::ClauseArity {
                    index,
                    found: c.len(),
                    expected: 4,
                })
            })
            .collect();
        Self::new(fixed?)
    }

    pub fn clauses(&self) -> &[[i32; 4]] {
        &self.clauses
    }

    pub fn variables(&self) -> &[i32] {
        &self.variables
    }

    /// Exhaustive two-in-four check: some assignment makes exactly two
    /// literals true in every clause.
    pub fn brute_force_two_in_four_satisfiable(&self) -> bool {
        let n = self.variables.len();
        let index: HashMap<i32, usize> = self
            .variables
            .iter()
            .enumerate()
            .map(|(i, &v)| (v, i))
            .collect();
        (0u32..(1 << n)).any(|mask| {
            self.clauses.iter().all(|clause| {
                let sat = clause
                    .iter()
                    .filter(|&&lit| {
                        let bit = mask >> index[&lit.abs()] & 1 == 1;
                        if lit > 0 {
                            bit
                        } else {
                            !bit
                        }
                    })
                    .count();
                sat == 2
            })
        })
    }
}

/// Builds the single-author symmetric-qualification reduction instance from
/// a two-in-four formula. Every agent writes one single-author paper and is
/// qualified for exactly four papers; qualifications are symmetric.
/// Intended parameters: cap 2, demand 2, cycle bound 3.
pub fn gen_2in4_gadget(formula: &FourSatFormula) -> Result<ReviewInstance, GadgetError> {
    let vars = formula.variables();
    let n = vars.len();
    let mut agents: Vec<String> = Vec::new();
    let mut positive_agent: HashMap<i32, usize> = HashMap::new();
    let mut negative_agent: HashMap<i32, usize> = HashMap::new();
    let mut chain_one: Vec<usize> = Vec::new();
    let mut chain_two: Vec<usize> = Vec::new();
    for &v in vars {
        positive_agent.insert(v, agents.len());
        agents.push(format!("a_pos_x{v}"));
        negative_agent.insert(v, agents.len());
        agents.push(format!("a_neg_x{v}"));
        chain_one.push(agents.len());
        agents.push(format!("a1_x{v}"));
        chain_two.push(agents.len());
        agents.push(format!("a2_x{v}"));
    }
    let mut clause_agent: Vec<usize> = Vec::new();
    for j in 1..=formula.clauses().len() {
        clause_agent.push(agents.len());
        agents.push(format!("b_c{j}"));
    }
    // Single-author setting: paper i belongs to agent i.
    let papers: Vec<String> = agents.iter().map(|a| format!("p_{a}")).collect();
    let authorship: Vec<(usize, usize)> = (0..agents.len()).map(|i| (i, i)).collect();

    let mut pair_set: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut link = |x: usize, y: usize| {
        pair_set.insert((x.min(y), x.max(y)));
    };
    // Clause occurrences in clause order.
    let mut pos_occurrences: HashMap<i32, Vec<usize>> = HashMap::new();
    let mut neg_occurrences: HashMap<i32, Vec<usize>> = HashMap::new();
    for (j, clause) in formula.clauses().iter().enumerate() {
        for &lit in clause {
            if lit > 0 {
                pos_occurrences.entry(lit).or_default().push(j);
            } else {
                neg_occurrences.entry(-lit).or_default().push(j);
            }
        }
    }
    for (vi, &v) in vars.iter().enumerate() {
        let pos = positive_agent[&v];
        let neg = negative_agent[&v];
        link(pos, chain_one[vi]);
        link(pos, chain_two[vi]);
        link(neg, chain_one[vi]);
        link(neg, chain_two[vi]);
        for &j in &pos_occurrences[&v] {
            link(pos, clause_agent[j]);
        }
        for &j in &neg_occurrences[&v] {
            link(neg, clause_agent[j]);
        }
        link(chain_one[vi], chain_two[vi]);
        link(chain_two[vi], chain_one[(vi + 1) % n]);
    }
    let mut qualification: Vec<(usize, usize)> = Vec::new();
    for &(x, y) in &pair_set {
        qualification.push((x, y));
        qualification.push((y, x));
    }
    Ok(ReviewInstance::from_indexed(
        agents,
        papers,
        &authorship,
        &qualification,
        None,
        true,
    )?)
}

/// Encodes qualifications into weights: the output instance qualifies every
/// agent for every paper they did not author, weighting original
/// qualification edges 1 and everything else 0.
pub fn qualifications_to_weights(instance: &ReviewInstance) -> Result<ReviewInstance, GadgetError> {
    if instance.is_weighted() {
        return Err(GadgetError::AlreadyWeighted);
    }
    let authorship: Vec<(usize, usize)> = instance.authorship_edges().collect();
    let mut qualification: Vec<(usize, usize)> = Vec::new();
    let mut weights: HashMap<(usize, usize), i64> = HashMap::new();
    for a in 0..instance.n_agents() {
        for p in 0..instance.n_papers() {
            if instance.is_author(a, p) {
                continue;
            }
            qualification.push((a, p));
            weights.insert((a, p), i64::from(instance.is_qualified(a, p)));
        }
    }
    Ok(ReviewInstance::from_indexed(
        instance.agent_names().to_vec(),
        instance.paper_names().to_vec(),
        &authorship,
        &qualification,
        Some(weights),
        true,
    )?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{degree_stats, validate_instance};

    fn one_clause() -> ThreeSatFormula {
        // (x1 v x2 v x3), each variable once positive.
        ThreeSatFormula::new(vec![[1, 2, 3]]).unwrap()
    }

    #[test]
    fn sat_gadget_degrees_and_counts() {
        let inst = gen_sat_gadget(&one_clause()).unwrap();
        assert_eq!(inst.n_agents(), 3 * 3 + 5);
        assert_eq!(inst.n_papers(), 3 * 3 + 5);
        assert!(validate_instance(&inst).is_empty());
        let stats = degree_stats(&inst);
        assert!(stats.max_reviewable_per_agent <= 3);
        assert!(stats.max_reviewers_per_paper <= 3);
        assert!(stats.max_papers_per_author <= 2);
        assert!(stats.max_authors_per_paper <= 2);
    }

    #[test]
    fn sat_gadget_authorship_links() {
        let formula = one_clause();
        let inst = gen_sat_gadget(&formula).unwrap();
        let a = |n: &str| inst.agent_id(n).unwrap();
        let p = |n: &str| inst.paper_id(n).unwrap();
        // Clause agent 1 authors the paper of literal x1.
        assert!(inst.is_author(a("a_c1_1"), p("p_pos_x1")));
        assert!(inst.is_author(a("a_pos_x1"), p("p_c1_1")));
        // q papers are dummy: no author.
        assert!(inst.authors_of(p("q_x1")).is_empty());
    }

    #[test]
    fn sat_occurrence_bounds_enforced() {
        let err = ThreeSatFormula::new(vec![[1, 2, 3], [1, 4, 5], [1, 6, 7]]).unwrap_err();
        assert!(matches!(
            err,
            GadgetError::OccurrenceBound { variable: 1, .. }
        ));
    }

    #[test]
    fn padding_raises_min_degrees() {
        let inst = gen_sat_gadget(&one_clause()).unwrap();
        let padded = pad_min_degrees(&inst, 5);
        assert!(validate_instance(&padded).is_empty());
        let stats = degree_stats(&padded);
        assert!(stats.min_reviewable_per_agent.unwrap() >= 5);
        assert!(stats.min_reviewers_per_paper.unwrap() >= 5);
        // Authorship untouched.
        assert_eq!(
            padded.authorship_edges().count(),
            inst.authorship_edges().count()
        );
    }

    #[test]
    fn padding_zero_is_identity_up_to_empty_additions() {
        let inst = gen_sat_gadget(&one_clause()).unwrap();
        let padded = pad_min_degrees(&inst, 0);
        assert_eq!(padded, inst);
    }

    #[test]
    fn mis_gadget_counts() {
        // k = 2, classes {0}, {1, 2}, edge (0, 1).
        let graph = ColoredGraph {
            vertex_count: 3,
            edges: vec![(0, 1)],
            classes: vec![vec![0], vec![1, 2]],
        };
        let inst = gen_mis_gadget(&graph).unwrap();
        // n = 3: classes padded to 3 and 4; per class 1 + |V| + |V|-1, plus 1.
        let expect = (1 + 3 + 2) + (1 + 4 + 3) + 1;
        assert_eq!(inst.n_agents(), expect);
        assert_eq!(inst.n_papers(), expect);
        assert_eq!(
            inst.n_qualification_edges(),
            inst.n_agents() * inst.n_papers()
        );
        assert!(graph.brute_force_multicolored_independent_set());
    }

    #[test]
    fn mis_brute_force_detects_blocked_graph() {
        // Complete bipartite between the classes: no multicolored IS.
        let graph = ColoredGraph {
            vertex_count: 3,
            edges: vec![(0, 1), (0, 2)],
            classes: vec![vec![0], vec![1, 2]],
        };
        assert!(!graph.brute_force_multicolored_independent_set());
    }

    #[test]
    fn two_in_four_gadget_shape() {
        // Two copies of (x1 v -x1 v x2 v -x2).
        let formula = FourSatFormula::new(vec![[1, -1, 2, -2], [1, -1, 2, -2]]).unwrap();
        let inst = gen_2in4_gadget(&formula).unwrap();
        assert_eq!(inst.n_agents(), 4 * 2 + 2);
        assert_eq!(inst.n_agents(), inst.n_papers());
        assert!(validate_instance(&inst).is_empty());
        let stats = degree_stats(&inst);
        // Every agent qualified for exactly four papers.
        assert_eq!(stats.min_reviewable_per_agent, Some(4));
        assert_eq!(stats.max_reviewable_per_agent, 4);
        // Symmetry: a can review b's paper iff b can review a's.
        for (a, p) in inst.qualification_edges() {
            let owner = inst.authors_of(p)[0];
            assert!(inst.is_qualified(owner, inst.authored_by(a)[0]));
        }
        assert!(formula.brute_force_two_in_four_satisfiable());
    }

    #[test]
    fn two_in_four_occurrences_exact() {
        assert!(matches!(
            FourSatFormula::new(vec![[1, 2, 3, 4]]).unwrap_err(),
            GadgetError::OccurrenceBound { .. }
        ));
    }

    #[test]
    fn weight_encoding_counts_original_edges() {
        let inst = gen_sat_gadget(&one_clause()).unwrap();
        let q = inst.n_qualification_edges();
        let encoded = qualifications_to_weights(&inst).unwrap();
        assert!(validate_instance(&encoded).is_empty());
        let ones = encoded
            .qualification_edges()
            .filter(|&(a, p)| encoded.weight(a, p) == Some(1))
            .count();
        assert_eq!(ones, q);
        // Full qualification minus self-authored pairs.
        let self_pairs: usize = (0..encoded.n_agents())
            .map(|a| encoded.authored_by(a).len())
            .sum();
        assert_eq!(
            encoded.n_qualification_edges(),
            encoded.n_agents() * encoded.n_papers() - self_pairs
        );
        assert!(matches!(
            qualifications_to_weights(&encoded).unwrap_err(),
            GadgetError::AlreadyWeighted
        ));
    }

    #[test]
    fn dimacs_parsing() {
        let formula = ThreeSatFormula::parse_dimacs("c comment\np cnf 3 1\n1 -2 3 0\n").unwrap();
        assert_eq!(formula.clauses(), &[[1, -2, 3]]);
        assert!(ThreeSatFormula::parse_dimacs("1 2 0\n").is_err());
    }
}
