//! Seeded random instances with controllable degree structure, used to probe
//! the guarantee regimes empirically.

use std::collections::HashSet;

use thiserror::Error;

use crate::instance::{BuildError, ReviewInstance};

use super::rng::SplitMix64;

#[derive(Debug, Error)]
pub enum RandomGenError {
    #[error("degree bounds unsatisfiable after {attempts} attempts: {reason}")]
    Unsatisfiable { attempts: u32, reason: String },
    #[error("instance assembly failed: {0}")]
    Build(#[from] BuildError),
}

/// Degree controls. Authorship is drawn paper by paper; every agent is then
/// qualified for all papers except their own and `conflicts_per_agent`
/// further random papers.
#[derive(Debug, Clone, Copy)]
pub struct RandomControls {
    pub min_authors_per_paper: u32,
    pub max_authors_per_paper: u32,
    pub max_papers_per_agent: u32,
    pub conflicts_per_agent: u32,
}

impl RandomControls {
    /// Single-author papers, one paper per agent, no conflicts.
    pub fn single_author() -> Self {
        RandomControls {
            min_authors_per_paper: 1,
            max_authors_per_paper: 1,
            max_papers_per_agent: 1,
            conflicts_per_agent: 0,
        }
    }
}

const MAX_ATTEMPTS: u32 = 100;

/// Draws an instance meeting the controls; re-samples up to 100 times before
/// giving up.
pub fn gen_random(
    n_agents: usize,
    n_papers: usize,
    controls: &RandomControls,
    seed: u64,
) -> Result<ReviewInstance, RandomGenError> {
    let mut rng = SplitMix64::new(seed);
    let mut last_reason = String::new();
    for _ in 0..MAX_ATTEMPTS {
        match attempt(n_agents, n_papers, controls, &mut rng) {
            Ok(instance) => return Ok(instance?),
            Err(reason) => last_reason = reason,
        }
    }
    Err(RandomGenError::Unsatisfiable {
        attempts: MAX_ATTEMPTS,
        reason: last_reason,
    })
}

fn attempt(
    n_agents: usize,
    n_papers: usize,
    controls: &RandomControls,
    rng: &mut SplitMix64,
) -> Result<Result<ReviewInstance, BuildError>, String> {
    let span = controls.max_authors_per_paper - controls.min_authors_per_paper;
    let mut papers_left = vec![controls.max_papers_per_agent; n_agents];
    let mut authorship: Vec<(usize, usize)> = Vec::new();
    let mut authored: Vec<HashSet<usize>> = vec![HashSet::new(); n_agents];
    for p in 0..n_papers {
        let k = controls.min_authors_per_paper + rng.below(u64::from(span) + 1) as u32;
        let eligible: Vec<usize> = (0..n_agents).filter(|&a| papers_left[a] > 0).collect();
        if eligible.len() < k as usize {
            return Err(format!(
                "paper {p} needs {k} authors, only {} agents have authorship quota",
                eligible.len()
            ));
        }
        for i in rng.sample_indices(eligible.len(), k as usize) {
            let a = eligible[i];
            papers_left[a] -= 1;
            authored[a].insert(p);
            authorship.push((p, a));
        }
    }
    let mut qualification: Vec<(usize, usize)> = Vec::new();
    for a in 0..n_agents {
        let non_authored: Vec<usize> = (0..n_papers).filter(|p| !authored[a].contains(p)).collect();
        let conflicts = controls.conflicts_per_agent as usize;
        if non_authored.len() < conflicts {
            return Err(format!(
                "agent {a} has only {} non-authored papers, cannot carry {conflicts} conflicts",
                non_authored.len()
            ));
        }
        let conflicted: HashSet<usize> = rng
            .sample_indices(non_authored.len(), conflicts)
            .into_iter()
            .map(|i| non_authored[i])
            .collect();
        for &p in &non_authored {
            if !conflicted.contains(&p) {
                qualification.push((a, p));
            }
        }
    }
    Ok(ReviewInstance::from_indexed(
        (0..n_agents).map(|i| format!("a{i}")).collect(),
        (0..n_papers).map(|i| format!("p{i}")).collect(),
        &authorship,
        &qualification,
        None,
        true,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{degree_stats, validate_instance};

    #[test]
    fn single_author_structure() {
        let inst = gen_random(12, 6, &RandomControls::single_author(), 5).unwrap();
        assert!(validate_instance(&inst).is_empty());
        let stats = degree_stats(&inst);
        assert_eq!(stats.max_papers_per_author, 1);
        assert_eq!(stats.max_authors_per_paper, 1);
        // Non-authors review all 6 papers, authors all but their own.
        assert_eq!(stats.min_reviewable_per_agent, Some(5));
    }

    #[test]
    fn same_seed_same_instance() {
        let c = RandomControls {
            min_authors_per_paper: 1,
            max_authors_per_paper: 2,
            max_papers_per_agent: 2,
            conflicts_per_agent: 1,
        };
        assert_eq!(
            gen_random(10, 5, &c, 11).unwrap(),
            gen_random(10, 5, &c, 11).unwrap()
        );
    }

    #[test]
    fn impossible_bounds_fault() {
        let c = RandomControls {
            min_authors_per_paper: 3,
            max_authors_per_paper: 3,
            max_papers_per_agent: 1,
            conflicts_per_agent: 0,
        };
        // 2 agents cannot give any paper 3 authors.
        assert!(matches!(
            gen_random(2, 1, &c, 0).unwrap_err(),
            RandomGenError::Unsatisfiable { .. }
        ));
    }

    #[test]
    fn conflicts_shrink_qualifications() {
        let c = RandomControls {
            min_authors_per_paper: 1,
            max_authors_per_paper: 1,
            max_papers_per_agent: 1,
            conflicts_per_agent: 2,
        };
        let inst = gen_random(10, 6, &c, 7).unwrap();
        let stats = degree_stats(&inst);
        // Authors: 6 - 1 - 2 = 3; non-authors: 6 - 2 = 4.
        assert_eq!(stats.min_reviewable_per_agent, Some(3));
        assert_eq!(stats.conflict_count, 3);
    }
}
