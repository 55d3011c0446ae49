//! JSON file formats.
//!
//! Instance files carry exactly the fields `agents`, `papers`, `authorship`
//! (list of `[paper, agent]` pairs), `qualification` (list of
//! `[agent, paper]` pairs), optional `weights` (list of
//! `[agent, paper, weight]` triples) and `self_review_forbidden` (default
//! true); unknown fields are rejected. Assignment files are a bare JSON list
//! of `[agent, paper]` pairs. Writers emit canonical ordering, so equal
//! inputs produce byte-identical files.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cycles::CycleReport;
use crate::guarantees::GuaranteeVerdict;
use crate::instance::{Assignment, BuildError, ReviewInstance};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Json {
        path: String,
        source: serde_json::Error,
    },
    #[error("{path}: {source}")]
    Build { path: String, source: BuildError },
    #[error("{path}: assignment references unknown {kind} {name:?}")]
    UnknownName {
        path: String,
        kind: &'static str,
        name: String,
    },
}

/// On-disk instance document.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub agents: Vec<String>,
    pub papers: Vec<String>,
    /// `[paper, agent]` pairs.
    pub authorship: Vec<(String, String)>,
    /// `[agent, paper]` pairs.
    pub qualification: Vec<(String, String)>,
    /// `[agent, paper, weight]` triples; absent means unweighted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<(String, String, i64)>>,
    #[serde(default = "default_true")]
    pub self_review_forbidden: bool,
}

fn default_true() -> bool {
    true
}

impl InstanceFile {
    pub fn from_instance(instance: &ReviewInstance) -> Self {
        let agents = instance.agent_names().to_vec();
        let papers = instance.paper_names().to_vec();
        let authorship = instance
            .authorship_edges()
            .map(|(p, a)| (papers[p].clone(), agents[a].clone()))
            .collect();
        let qualification: Vec<(String, String)> = instance
            .qualification_edges()
            .map(|(a, p)| (agents[a].clone(), papers[p].clone()))
            .collect();
        let weights = instance.weight_table().map(|_| {
            instance
                .qualification_edges()
                .map(|(a, p)| {
                    (
                        agents[a].clone(),
                        papers[p].clone(),
                        instance.weight(a, p).unwrap_or(0),
                    )
                })
                .collect()
        });
        InstanceFile {
            agents,
            papers,
            authorship,
            qualification,
            weights,
            self_review_forbidden: instance.self_review_forbidden(),
        }
    }

    pub fn into_instance(self) -> Result<ReviewInstance, BuildError> {
        ReviewInstance::new(
            self.agents,
            self.papers,
            &self.authorship,
            &self.qualification,
            self.weights.as_deref(),
            self.self_review_forbidden,
        )
    }
}

pub fn read_instance(path: &Path) -> Result<ReviewInstance, IoError> {
    let text = fs::read_to_string(path).map_err(|source| IoError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let file: InstanceFile = serde_json::from_str(&text).map_err(|source| IoError::Json {
        path: path.display().to_string(),
        source,
    })?;
    file.into_instance().map_err(|source| IoError::Build {
        path: path.display().to_string(),
        source,
    })
}

pub fn write_instance(path: &Path, instance: &ReviewInstance) -> Result<(), IoError> {
    write_json(path, &InstanceFile::from_instance(instance))
}

pub fn read_assignment(path: &Path, instance: &ReviewInstance) -> Result<Assignment, IoError> {
    let text = fs::read_to_string(path).map_err(|source| IoError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let pairs: Vec<(String, String)> =
        serde_json::from_str(&text).map_err(|source| IoError::Json {
            path: path.display().to_string(),
            source,
        })?;
    let mut edges = Vec::with_capacity(pairs.len());
    for (agent, paper) in pairs {
        let a = instance
            .agent_id(&agent)
            .ok_or_else(|| IoError::UnknownName {
                path: path.display().to_string(),
                kind: "agent",
                name: agent.clone(),
            })?;
        let p = instance
            .paper_id(&paper)
            .ok_or_else(|| IoError::UnknownName {
                path: path.display().to_string(),
                kind: "paper",
                name: paper.clone(),
            })?;
        edges.push((a, p));
    }
    Ok(Assignment::from_edges(edges))
}

pub fn write_assignment(
    path: &Path,
    instance: &ReviewInstance,
    assignment: &Assignment,
) -> Result<(), IoError> {
    let pairs: Vec<(String, String)> = assignment
        .edges()
        .map(|(a, p)| {
            (
                instance.agent_name(a).to_owned(),
                instance.paper_name(p).to_owned(),
            )
        })
        .collect();
    write_json(path, &pairs)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), IoError> {
    let mut text = serde_json::to_string_pretty(value).expect("serialization cannot fail");
    text.push('\n');
    fs::write(path, text).map_err(|source| IoError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// JSON view of a cycle report, with vertex names instead of indices.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CycleReportFile {
    pub cycles: Vec<CycleFile>,
    pub agents_in_cycle: Vec<String>,
    pub papers_in_cycle: Vec<String>,
    pub agent_fraction: FractionFile,
    pub paper_fraction: FractionFile,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CycleFile {
    pub agents: Vec<String>,
    pub papers: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FractionFile {
    pub numer: u64,
    pub denom: u64,
}

impl CycleReportFile {
    pub fn from_report(instance: &ReviewInstance, report: &CycleReport) -> Self {
        CycleReportFile {
            cycles: report
                .cycles
                .iter()
                .map(|c| CycleFile {
                    agents: c
                        .agents
                        .iter()
                        .map(|&a| instance.agent_name(a).to_owned())
                        .collect(),
                    papers: c
                        .papers
                        .iter()
                        .map(|&p| instance.paper_name(p).to_owned())
                        .collect(),
                })
                .collect(),
            agents_in_cycle: report
                .agents_in_cycle
                .iter()
                .map(|&a| instance.agent_name(a).to_owned())
                .collect(),
            papers_in_cycle: report
                .papers_in_cycle
                .iter()
                .map(|&p| instance.paper_name(p).to_owned())
                .collect(),
            agent_fraction: FractionFile {
                numer: report.agent_fraction.numer,
                denom: report.agent_fraction.denom,
            },
            paper_fraction: FractionFile {
                numer: report.paper_fraction.numer,
                denom: report.paper_fraction.denom,
            },
        }
    }
}

/// JSON view of a guarantee verdict: one entry per condition with exact
/// values rendered as strings.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerdictFile {
    pub holds: bool,
    pub conditions: Vec<ConditionFile>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConditionFile {
    pub name: String,
    pub left: String,
    pub right: String,
    pub satisfied: bool,
}

impl VerdictFile {
    pub fn from_verdict(verdict: &GuaranteeVerdict) -> Self {
        VerdictFile {
            holds: verdict.holds,
            conditions: verdict
                .conditions
                .iter()
                .map(|c| ConditionFile {
                    name: c.name.clone(),
                    left: c.render_left(),
                    right: c.render_right(),
                    satisfied: c.satisfied,
                })
                .collect(),
        }
    }
}
