//! Similarity-dataset ingestion and the seeded sampling protocol.
//!
//! A dataset is a directory holding two CSV files:
//!
//! * `authorship.csv` with header `paper_id,author_id`;
//! * `similarity.csv` with header `reviewer_id,paper_id,similarity`, scores
//!   in `[0, 1]`, sparse entries defaulting to 0.
//!
//! Sampling draws `n_papers` papers uniformly without replacement, collects
//! the pool of authors of the sampled papers, draws
//! `round(agent_ratio * n_papers)` agents from that pool (round half up),
//! qualifies every agent for every sampled paper they did not author, and
//! converts scores to integer weights by `round(score * weight_scale)`
//! (half up). Sampled subsets keep the dataset's declaration order, so the
//! full-sample instance does not depend on the seed.

use std::collections::{HashMap, HashSet};
use std::path::Path;

use thiserror::Error;

use crate::instance::{BuildError, ReviewInstance};

use super::rng::SplitMix64;

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}: no header")]
    NoHeader { path: String },
    #[error("{path}: expected header {expected:?}, found {found:?}")]
    BadHeader {
        path: String,
        expected: &'static str,
        found: String,
    },
    #[error("{path}:{line}: malformed row: {reason}")]
    MalformedRow {
        path: String,
        line: u64,
        reason: String,
    },
    #[error("{path}:{line}: duplicate (reviewer, paper) row")]
    DuplicateRow { path: String, line: u64 },
    #[error("{path}:{line}: similarity score {score} out of range [0, 1]")]
    ScoreOutOfRange { path: String, line: u64, score: f64 },
    #[error("paper {paper:?} has no author")]
    PaperWithoutAuthors { paper: String },
    #[error("requested {requested} papers but the dataset has {available}")]
    NotEnoughPapers { requested: usize, available: usize },
    #[error(
        "requested {requested} agents but the author pool of the sampled papers has {available}"
    )]
    AuthorPoolTooSmall { requested: usize, available: usize },
    #[error("instance assembly failed: {0}")]
    Build(#[from] BuildError),
}

/// Papers with author lists, the reviewer pool, and a sparse similarity map.
#[derive(Debug, Clone)]
pub struct SimilarityDataset {
    /// Declaration order: first appearance in `authorship.csv`.
    pub papers: Vec<String>,
    /// Reviewer pool; authors first (appearance order), then reviewers that
    /// only occur in the similarity file.
    pub reviewers: Vec<String>,
    /// Author indices (into `reviewers`) per paper.
    pub authors_of: Vec<Vec<usize>>,
    /// Sparse (reviewer, paper) -> score map; missing entries are 0.
    pub similarity: HashMap<(usize, usize), f64>,
}

impl SimilarityDataset {
    pub fn n_papers(&self) -> usize {
        self.papers.len()
    }

    pub fn n_authors(&self) -> usize {
        self.authors_of
            .iter()
            .flatten()
            .collect::<HashSet<_>>()
            .len()
    }

    pub fn score(&self, reviewer: usize, paper: usize) -> f64 {
        self.similarity
            .get(&(reviewer, paper))
            .copied()
            .unwrap_or(0.0)
    }
}

/// Sampling parameters for one instance.
#[derive(Debug, Clone)]
pub struct SampleSpec {
    pub n_papers: usize,
    /// Agents = round(agent_ratio * n_papers), half up.
    pub agent_ratio: f64,
    pub seed: u64,
    /// Score-to-integer-weight multiplier.
    pub weight_scale: i64,
}

impl SampleSpec {
    pub fn new(n_papers: usize, agent_ratio: f64, seed: u64) -> Self {
        SampleSpec {
            n_papers,
            agent_ratio,
            seed,
            weight_scale: 1_000_000,
        }
    }

    pub fn agent_count(&self) -> usize {
        (self.agent_ratio * self.n_papers as f64 + 0.5).floor() as usize
    }
}

/// Loads `authorship.csv` and `similarity.csv` from a dataset directory.
pub fn load_dataset(dir: &Path) -> Result<SimilarityDataset, DatasetError> {
    load_dataset_files(&dir.join("similarity.csv"), &dir.join("authorship.csv"))
}

/// Loads a dataset from explicit file paths.
pub fn load_dataset_files(
    similarity_path: &Path,
    authorship_path: &Path,
) -> Result<SimilarityDataset, DatasetError> {
    let mut papers: Vec<String> = Vec::new();
    let mut paper_index: HashMap<String, usize> = HashMap::new();
    let mut reviewers: Vec<String> = Vec::new();
    let mut reviewer_index: HashMap<String, usize> = HashMap::new();
    let intern = |name: &str, names: &mut Vec<String>, index: &mut HashMap<String, usize>| {
        if let Some(&i) = index.get(name) {
            i
        } else {
            let i = names.len();
            names.push(name.to_owned());
            index.insert(name.to_owned(), i);
            i
        }
    };

    // authorship.csv
    let path_str = authorship_path.display().to_string();
    let mut reader = open_csv(authorship_path, &path_str, "paper_id,author_id")?;
    let mut authors_of: Vec<Vec<usize>> = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| malformed(&path_str, &e))?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != 2 {
            return Err(DatasetError::MalformedRow {
                path: path_str.clone(),
                line,
                reason: format!("expected 2 fields, found {}", record.len()),
            });
        }
        let p = intern(&record[0], &mut papers, &mut paper_index);
        let a = intern(&record[1], &mut reviewers, &mut reviewer_index);
        if authors_of.len() <= p {
            authors_of.resize(p + 1, Vec::new());
        }
        if !authors_of[p].contains(&a) {
            authors_of[p].push(a);
        }
    }

    // similarity.csv
    let path_str = similarity_path.display().to_string();
    let mut reader = open_csv(
        similarity_path,
        &path_str,
        "reviewer_id,paper_id,similarity",
    )?;
    let mut similarity: HashMap<(usize, usize), f64> = HashMap::new();
    for record in reader.records() {
        let record = record.map_err(|e| malformed(&path_str, &e))?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != 3 {
            return Err(DatasetError::MalformedRow {
                path: path_str.clone(),
                line,
                reason: format!("expected 3 fields, found {}", record.len()),
            });
        }
        let r = intern(&record[0], &mut reviewers, &mut reviewer_index);
        let p = intern(&record[1], &mut papers, &mut paper_index);
        let score: f64 = record[2].parse().map_err(|e| DatasetError::MalformedRow {
            path: path_str.clone(),
            line,
            reason: format!("bad similarity: {e}"),
        })?;
        if !(0.0..=1.0).contains(&score) || !score.is_finite() {
            return Err(DatasetError::ScoreOutOfRange {
                path: path_str.clone(),
                line,
                score,
            });
        }
        if similarity.insert((r, p), score).is_some() {
            return Err(DatasetError::DuplicateRow {
                path: path_str.clone(),
                line,
            });
        }
    }

    authors_of.resize(papers.len(), Vec::new());
    for (p, authors) in authors_of.iter().enumerate() {
        if authors.is_empty() {
            return Err(DatasetError::PaperWithoutAuthors {
                paper: papers[p].clone(),
            });
        }
    }
    Ok(SimilarityDataset {
        papers,
        reviewers,
        authors_of,
        similarity,
    })
}

fn open_csv(
    path: &Path,
    path_str: &str,
    expected_header: &'static str,
) -> Result<csv::Reader<std::fs::File>, DatasetError> {
    let file = std::fs::File::open(path).map_err(|source| DatasetError::Io {
        path: path_str.to_owned(),
        source,
    })?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(file);
    let headers = reader.headers().map_err(|_| DatasetError::NoHeader {
        path: path_str.to_owned(),
    })?;
    if headers.is_empty() || (headers.len() == 1 && headers[0].is_empty()) {
        return Err(DatasetError::NoHeader {
            path: path_str.to_owned(),
        });
    }
    let found = headers.iter().collect::<Vec<_>>().join(",");
    if found != expected_header {
        return Err(DatasetError::BadHeader {
            path: path_str.to_owned(),
            expected: expected_header,
            found,
        });
    }
    Ok(reader)
}

fn malformed(path: &str, e: &csv::Error) -> DatasetError {
    let line = match e.position() {
        Some(p) => p.line(),
        None => 0,
    };
    DatasetError::MalformedRow {
        path: path.to_owned(),
        line,
        reason: e.to_string(),
    }
}

/// Round half up for non-negative values.
fn round_half_up(x: f64) -> i64 {
    (x + 0.5).floor() as i64
}

/// Draws one weighted instance per the sampling protocol.
pub fn sample_instance(
    dataset: &SimilarityDataset,
    spec: &SampleSpec,
) -> Result<ReviewInstance, DatasetError> {
    if spec.n_papers > dataset.n_papers() {
        return Err(DatasetError::NotEnoughPapers {
            requested: spec.n_papers,
            available: dataset.n_papers(),
        });
    }
    let mut rng = SplitMix64::new(spec.seed);
    let mut paper_picks = rng.sample_indices(dataset.n_papers(), spec.n_papers);
    paper_picks.sort_unstable();

    // Author pool: union of the sampled papers' authors, dataset order.
    let mut in_pool = vec![false; dataset.reviewers.len()];
    for &p in &paper_picks {
        for &a in &dataset.authors_of[p] {
            in_pool[a] = true;
        }
    }
    let pool: Vec<usize> = (0..dataset.reviewers.len())
        .filter(|&a| in_pool[a])
        .collect();
    let n_agents = spec.agent_count();
    if n_agents > pool.len() {
        return Err(DatasetError::AuthorPoolTooSmall {
            requested: n_agents,
            available: pool.len(),
        });
    }
    let mut agent_picks: Vec<usize> = rng
        .sample_indices(pool.len(), n_agents)
        .into_iter()
        .map(|i| pool[i])
        .collect();
    agent_picks.sort_unstable();

    let agents: Vec<String> = agent_picks
        .iter()
        .map(|&a| dataset.reviewers[a].clone())
        .collect();
    let papers: Vec<String> = paper_picks
        .iter()
        .map(|&p| dataset.papers[p].clone())
        .collect();

    let mut authorship: Vec<(usize, usize)> = Vec::new();
    for (pi, &p) in paper_picks.iter().enumerate() {
        for &author in &dataset.authors_of[p] {
            if let Ok(ai) = agent_picks.binary_search(&author) {
                authorship.push((pi, ai));
            }
        }
    }
    let mut qualification: Vec<(usize, usize)> = Vec::new();
    let mut weights: HashMap<(usize, usize), i64> = HashMap::new();
    for (ai, &agent) in agent_picks.iter().enumerate() {
        for (pi, &paper) in paper_picks.iter().enumerate() {
            if dataset.authors_of[paper].contains(&agent) {
                continue;
            }
            qualification.push((ai, pi));
            weights.insert(
                (ai, pi),
                round_half_up(dataset.score(agent, paper) * spec.weight_scale as f64),
            );
        }
    }
    Ok(ReviewInstance::from_indexed(
        agents,
        papers,
        &authorship,
        &qualification,
        Some(weights),
        true,
    )?)
}
