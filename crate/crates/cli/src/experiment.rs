//! The experiment runner: takes a JSON spec describing an instance grid and
//! a solver set, executes every cell (in parallel across instances when the
//! `parallel` feature is on; rows always come out in deterministic cell
//! order) and writes `results.csv` plus `summary.json`.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use ringfree::batch;
use ringfree::cycles::find_review_cycles;
use ringfree::exact::{max_weight_assignment, max_weight_zcycle_free, Optimality, SearchLimits};
use ringfree::gen::{self, derive_seed};
use ringfree::heuristics::greedy_swap;
use ringfree::instance::{assignment_weight, Assignment, CycleBound, ReviewInstance, SolveParams};
use ringfree::io;

use crate::CliError;

/// Instance source: a dataset directory with a sampling grid, a random
/// generator grid, or a fixed list of instance files.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case", deny_unknown_fields)]
pub enum InstanceSource {
    Dataset {
        dir: PathBuf,
        n_papers: Vec<usize>,
        agent_ratio: Vec<f64>,
        #[serde(default = "default_weight_scale")]
        weight_scale: i64,
    },
    Random {
        n_agents: Vec<usize>,
        n_papers: Vec<usize>,
        controls: RandomControlsSpec,
    },
    Files {
        paths: Vec<PathBuf>,
    },
}

fn default_weight_scale() -> i64 {
    1_000_000
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RandomControlsSpec {
    pub min_authors_per_paper: u32,
    pub max_authors_per_paper: u32,
    pub max_papers_per_agent: u32,
    pub conflicts_per_agent: u32,
    /// When set, attach seeded uniform integer weights in `0..=weight_max`
    /// to every qualification edge.
    #[serde(default)]
    pub weight_max: Option<i64>,
}

impl RandomControlsSpec {
    fn to_controls(&self) -> gen::RandomControls {
        gen::RandomControls {
            min_authors_per_paper: self.min_authors_per_paper,
            max_authors_per_paper: self.max_authors_per_paper,
            max_papers_per_agent: self.max_papers_per_agent,
            conflicts_per_agent: self.conflicts_per_agent,
        }
    }
}

/// One solver in the experiment's solver set.
#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq)]
#[serde(tag = "id", rename_all = "kebab-case", deny_unknown_fields)]
pub enum SolverSpec {
    /// Maximum-weight assignment, cycles permitted.
    Optimal,
    /// Maximum-weight z-cycle-free assignment (branch and bound).
    OptimalZfree { z: u32 },
    /// Weighted swap greedy, z-cycle-free.
    HeuristicZfree { z: u32 },
}

impl SolverSpec {
    fn label(&self) -> String {
        match self {
            SolverSpec::Optimal => "optimal".into(),
            SolverSpec::OptimalZfree { .. } => "optimal-zfree".into(),
            SolverSpec::HeuristicZfree { .. } => "heuristic-zfree".into(),
        }
    }

    fn z(&self) -> Option<u32> {
        match self {
            SolverSpec::Optimal => None,
            SolverSpec::OptimalZfree { z } | SolverSpec::HeuristicZfree { z } => Some(*z),
        }
    }
}

/// The experiment description consumed from `--spec`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub source: InstanceSource,
    pub solvers: Vec<SolverSpec>,
    pub repetitions: u32,
    pub seed_base: u64,
    pub reviewer_cap: u32,
    pub paper_demand: u32,
    #[serde(default)]
    pub budget_nodes: Option<u64>,
    #[serde(default)]
    pub budget_seconds: Option<f64>,
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.repetitions < 1 {
            return Err(CliError::io_format("repetitions must be at least 1"));
        }
        if self.solvers.is_empty() {
            return Err(CliError::io_format("solver set must not be empty"));
        }
        if let InstanceSource::Dataset { dir, .. } = &self.source {
            if !dir.join("similarity.csv").is_file() || !dir.join("authorship.csv").is_file() {
                return Err(CliError::io_format(format!(
                    "dataset not found under {} (expected similarity.csv and authorship.csv)",
                    dir.display()
                )));
            }
        }
        if let InstanceSource::Files { paths } = &self.source {
            for p in paths {
                if !p.is_file() {
                    return Err(CliError::io_format(format!(
                        "instance file missing: {}",
                        p.display()
                    )));
                }
            }
        }
        Ok(())
    }
}

/// One CSV row: one (instance, solver) result.
#[derive(Debug, Clone, Serialize)]
pub struct ResultRow {
    pub instance_id: String,
    pub solver: String,
    pub z: Option<u32>,
    pub status: String,
    pub weight: Option<i64>,
    pub normalized_weight: Option<f64>,
    pub frac_agents_le2: Option<f64>,
    pub frac_agents_le3: Option<f64>,
    pub frac_agents_le4: Option<f64>,
    pub frac_papers_le2: Option<f64>,
    pub frac_papers_le3: Option<f64>,
    pub frac_papers_le4: Option<f64>,
    pub wall_time_s: f64,
}

/// Aggregates per grid cell, written to `summary.json`.
#[derive(Debug, Clone, Serialize)]
pub struct CellSummary {
    pub cell: String,
    pub instances: u32,
    pub solvers: BTreeMap<String, SolverSummary>,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct SolverSummary {
    pub solved: u32,
    pub failed: u32,
    pub mean_weight: Option<f64>,
    pub mean_normalized_weight: Option<f64>,
    pub mean_frac_agents_le2: Option<f64>,
    pub mean_frac_agents_le3: Option<f64>,
    pub mean_frac_agents_le4: Option<f64>,
    pub mean_frac_papers_le2: Option<f64>,
    pub mean_frac_papers_le3: Option<f64>,
    pub mean_frac_papers_le4: Option<f64>,
}

pub struct ExperimentOutput {
    pub rows: Vec<ResultRow>,
    pub summary: Vec<CellSummary>,
}

/// One unit of work: an instance to obtain and the solvers to run on it.
#[derive(Debug, Clone)]
struct Cell {
    cell_id: String,
    instance_id: String,
    seed: u64,
    input: CellInput,
}

#[derive(Debug, Clone)]
enum CellInput {
    Sample {
        n_papers: usize,
        agent_ratio: f64,
        weight_scale: i64,
    },
    Random {
        n_agents: usize,
        n_papers: usize,
    },
    File(PathBuf),
}

/// Runs the experiment and writes `results.csv` and `summary.json` under
/// `out_dir`. Failed solves are recorded in their rows, never dropped.
pub fn run_experiment(
    spec: &ExperimentSpec,
    out_dir: &Path,
    zero_time: bool,
) -> Result<ExperimentOutput, CliError> {
    spec.validate()?;
    std::fs::create_dir_all(out_dir)
        .map_err(|e| CliError::io_format(format!("{}: {e}", out_dir.display())))?;

    let dataset = match &spec.source {
        InstanceSource::Dataset { dir, .. } => {
            Some(gen::load_dataset(dir).map_err(CliError::io_format)?)
        }
        _ => None,
    };
    let controls = match &spec.source {
        InstanceSource::Random { controls, .. } => Some(controls.to_controls()),
        _ => None,
    };

    let mut cells: Vec<Cell> = Vec::new();
    match &spec.source {
        InstanceSource::Dataset {
            n_papers,
            agent_ratio,
            weight_scale,
            ..
        } => {
            for &np in n_papers {
                for &ratio in agent_ratio {
                    let cell_id = format!("np={np},rap={ratio}");
                    for rep in 0..spec.repetitions {
                        cells.push(Cell {
                            cell_id: cell_id.clone(),
                            instance_id: format!("{cell_id}#rep{rep}"),
                            seed: derive_seed(spec.seed_base, &format!("{cell_id}#rep{rep}")),
                            input: CellInput::Sample {
                                n_papers: np,
                                agent_ratio: ratio,
                                weight_scale: *weight_scale,
                            },
                        });
                    }
                }
            }
        }
        InstanceSource::Random {
            n_agents, n_papers, ..
        } => {
            for &na in n_agents {
                for &np in n_papers {
                    let cell_id = format!("na={na},np={np}");
                    for rep in 0..spec.repetitions {
                        cells.push(Cell {
                            cell_id: cell_id.clone(),
                            instance_id: format!("{cell_id}#rep{rep}"),
                            seed: derive_seed(spec.seed_base, &format!("{cell_id}#rep{rep}")),
                            input: CellInput::Random {
                                n_agents: na,
                                n_papers: np,
                            },
                        });
                    }
                }
            }
        }
        InstanceSource::Files { paths } => {
            for path in paths {
                let cell_id = path
                    .file_stem()
                    .map(|s| s.to_string_lossy().into_owned())
                    .unwrap_or_else(|| path.display().to_string());
                for rep in 0..spec.repetitions {
                    cells.push(Cell {
                        cell_id: cell_id.clone(),
                        instance_id: format!("{cell_id}#rep{rep}"),
                        seed: derive_seed(spec.seed_base, &format!("{cell_id}#rep{rep}")),
                        input: CellInput::File(path.clone()),
                    });
                }
            }
        }
    }

    let limits = SearchLimits {
        max_nodes: spec.budget_nodes.unwrap_or(1_000_000),
        max_seconds: spec.budget_seconds.unwrap_or(300.0),
    };
    let per_cell: Vec<Result<Vec<ResultRow>, String>> = batch::map(&cells, |cell| {
        run_cell(
            cell,
            spec,
            dataset.as_ref(),
            controls.as_ref(),
            &limits,
            zero_time,
        )
        .map_err(|e| e.message)
    });
    let mut rows = Vec::new();
    for outcome in per_cell {
        match outcome {
            Ok(mut cell_rows) => rows.append(&mut cell_rows),
            Err(message) => return Err(CliError::io_format(message)),
        }
    }

    let summary = summarize(&cells, &rows);
    write_rows(&out_dir.join("results.csv"), &rows)?;
    io::write_json(&out_dir.join("summary.json"), &summary).map_err(CliError::io_format)?;
    Ok(ExperimentOutput { rows, summary })
}

fn run_cell(
    cell: &Cell,
    spec: &ExperimentSpec,
    dataset: Option<&gen::SimilarityDataset>,
    controls: Option<&gen::RandomControls>,
    limits: &SearchLimits,
    zero_time: bool,
) -> Result<Vec<ResultRow>, CliError> {
    let instance = match &cell.input {
        CellInput::Sample {
            n_papers,
            agent_ratio,
            weight_scale,
        } => {
            let mut sample_spec = gen::SampleSpec::new(*n_papers, *agent_ratio, cell.seed);
            sample_spec.weight_scale = *weight_scale;
            gen::sample_instance(dataset.expect("dataset present"), &sample_spec)
                .map_err(CliError::io_format)?
        }
        CellInput::Random { n_agents, n_papers } => {
            let base = gen::gen_random(
                *n_agents,
                *n_papers,
                controls.expect("controls present"),
                cell.seed,
            )
            .map_err(CliError::io_format)?;
            let weight_max = match &spec.source {
                InstanceSource::Random { controls, .. } => controls.weight_max,
                _ => None,
            };
            match weight_max {
                Some(max) if max > 0 => attach_random_weights(&base, cell.seed, max),
                _ => base,
            }
        }
        CellInput::File(path) => io::read_instance(path).map_err(CliError::io_format)?,
    };

    // The optimal weight normalizes every other row of the same instance.
    let optimal_weight: Option<i64> = if spec.solvers.contains(&SolverSpec::Optimal) {
        let params = solve_params(spec, CycleBound::Bounded(1), instance.is_weighted());
        max_weight_assignment(&instance, &params).stats.objective
    } else {
        None
    };

    let mut rows = Vec::new();
    for solver in &spec.solvers {
        let started = Instant::now();
        let (status, weight, assignment): (&str, Option<i64>, Option<Assignment>) = match solver {
            SolverSpec::Optimal => {
                let params = solve_params(spec, CycleBound::Bounded(1), instance.is_weighted());
                let out = max_weight_assignment(&instance, &params);
                match out.assignment {
                    Some(a) => ("ok", out.stats.objective, Some(a)),
                    None => ("infeasible", None, None),
                }
            }
            SolverSpec::OptimalZfree { z } => {
                let params = solve_params(spec, CycleBound::Bounded(*z), instance.is_weighted());
                let out = max_weight_zcycle_free(&instance, &params, limits);
                let status = match out.stats.optimality {
                    Optimality::Proven => "ok",
                    Optimality::FeasibleOnly | Optimality::NoIncumbent => "budget",
                    Optimality::Infeasible => "infeasible",
                };
                (status, out.stats.objective, out.assignment)
            }
            SolverSpec::HeuristicZfree { z } => {
                let params = solve_params(spec, CycleBound::Bounded(*z), instance.is_weighted());
                match greedy_swap(&instance, &params) {
                    Ok(run) => {
                        let w = assignment_weight(&instance, &run.assignment)
                            .unwrap_or(run.assignment.len() as i64);
                        ("ok", Some(w), Some(run.assignment))
                    }
                    Err(_) => ("fault", None, None),
                }
            }
        };
        let wall_time_s = if zero_time {
            0.0
        } else {
            started.elapsed().as_secs_f64()
        };
        let exposure = assignment
            .as_ref()
            .map(|a| exposure_fractions(&instance, a));
        let normalized_weight = match (weight, optimal_weight) {
            (Some(w), Some(opt)) if opt != 0 => Some(w as f64 / opt as f64),
            _ => None,
        };
        rows.push(ResultRow {
            instance_id: cell.instance_id.clone(),
            solver: solver.label(),
            z: solver.z(),
            status: status.to_owned(),
            weight,
            normalized_weight,
            frac_agents_le2: exposure.map(|e| e.agents[0]),
            frac_agents_le3: exposure.map(|e| e.agents[1]),
            frac_agents_le4: exposure.map(|e| e.agents[2]),
            frac_papers_le2: exposure.map(|e| e.papers[0]),
            frac_papers_le3: exposure.map(|e| e.papers[1]),
            frac_papers_le4: exposure.map(|e| e.papers[2]),
            wall_time_s,
        });
    }
    Ok(rows)
}

/// Rebuilds an unweighted instance with seeded uniform weights on its
/// qualification edges (used by the random source).
fn attach_random_weights(instance: &ReviewInstance, seed: u64, weight_max: i64) -> ReviewInstance {
    let mut rng = gen::SplitMix64::new(seed ^ 0xC0FF_EE00_BEEF_0011);
    let authorship: Vec<(usize, usize)> = instance.authorship_edges().collect();
    let qualification: Vec<(usize, usize)> = instance.qualification_edges().collect();
    let weights = qualification
        .iter()
        .map(|&e| (e, rng.below(weight_max as u64 + 1) as i64))
        .collect();
    ReviewInstance::from_indexed(
        instance.agent_names().to_vec(),
        instance.paper_names().to_vec(),
        &authorship,
        &qualification,
        Some(weights),
        instance.self_review_forbidden(),
    )
    .expect("reweighting preserves well-formedness")
}

fn solve_params(spec: &ExperimentSpec, bound: CycleBound, weighted: bool) -> SolveParams {
    let mut params = SolveParams::new(spec.reviewer_cap, spec.paper_demand, bound);
    params.weighted = weighted;
    params
}

#[derive(Debug, Clone, Copy)]
struct Exposure {
    agents: [f64; 3],
    papers: [f64; 3],
}

/// Fractions of agents/papers on a review cycle of length <= 2, 3 and 4,
/// from one enumeration at bound 4.
fn exposure_fractions(instance: &ReviewInstance, assignment: &Assignment) -> Exposure {
    let report = find_review_cycles(instance, assignment, CycleBound::Bounded(4));
    let mut agents = [0f64; 3];
    let mut papers = [0f64; 3];
    for (i, z) in [2usize, 3, 4].iter().enumerate() {
        let mut in_agents = std::collections::BTreeSet::new();
        let mut in_papers = std::collections::BTreeSet::new();
        for c in report.cycles.iter().filter(|c| c.len() <= *z) {
            in_agents.extend(c.agents.iter().copied());
            in_papers.extend(c.papers.iter().copied());
        }
        agents[i] = in_agents.len() as f64 / instance.n_agents().max(1) as f64;
        papers[i] = in_papers.len() as f64 / instance.n_papers().max(1) as f64;
    }
    Exposure { agents, papers }
}

fn summarize(cells: &[Cell], rows: &[ResultRow]) -> Vec<CellSummary> {
    let mut cell_order: Vec<String> = Vec::new();
    for cell in cells {
        if !cell_order.contains(&cell.cell_id) {
            cell_order.push(cell.cell_id.clone());
        }
    }
    let mut summaries = Vec::new();
    for cell_id in cell_order {
        let prefix = format!("{cell_id}#");
        let cell_rows: Vec<&ResultRow> = rows
            .iter()
            .filter(|r| r.instance_id.starts_with(&prefix))
            .collect();
        let mut instances: Vec<&str> = cell_rows.iter().map(|r| r.instance_id.as_str()).collect();
        instances.dedup();
        let mut solvers: BTreeMap<String, SolverSummary> = BTreeMap::new();
        for row in &cell_rows {
            let entry = solvers.entry(row.solver.clone()).or_default();
            if row.status == "ok" {
                entry.solved += 1;
            } else {
                entry.failed += 1;
            }
        }
        for (solver, summary) in solvers.iter_mut() {
            let solver_rows: Vec<&&ResultRow> = cell_rows
                .iter()
                .filter(|r| &r.solver == solver && r.status == "ok")
                .collect();
            let mean = |f: &dyn Fn(&ResultRow) -> Option<f64>| -> Option<f64> {
                let values: Vec<f64> = solver_rows.iter().filter_map(|r| f(r)).collect();
                if values.is_empty() {
                    None
                } else {
                    Some(values.iter().sum::<f64>() / values.len() as f64)
                }
            };
            summary.mean_weight = mean(&|r| r.weight.map(|w| w as f64));
            summary.mean_normalized_weight = mean(&|r| r.normalized_weight);
            summary.mean_frac_agents_le2 = mean(&|r| r.frac_agents_le2);
            summary.mean_frac_agents_le3 = mean(&|r| r.frac_agents_le3);
            summary.mean_frac_agents_le4 = mean(&|r| r.frac_agents_le4);
            summary.mean_frac_papers_le2 = mean(&|r| r.frac_papers_le2);
            summary.mean_frac_papers_le3 = mean(&|r| r.frac_papers_le3);
            summary.mean_frac_papers_le4 = mean(&|r| r.frac_papers_le4);
        }
        summaries.push(CellSummary {
            cell: cell_id,
            instances: instances.len() as u32,
            solvers,
        });
    }
    summaries
}

fn write_rows(path: &Path, rows: &[ResultRow]) -> Result<(), CliError> {
    let mut writer = csv::Writer::from_path(path)
        .map_err(|e| CliError::io_format(format!("{}: {e}", path.display())))?;
    for row in rows {
        writer.serialize(row).map_err(CliError::io_format)?;
    }
    writer.flush().map_err(CliError::io_format)?;
    Ok(())
}
