//! Implementations of the `solve`, `audit` and `generate` subcommands.

use std::path::{Path, PathBuf};

use serde::Serialize;

use ringfree::cycles::find_review_cycles;
use ringfree::exact::{max_weight_assignment, max_weight_zcycle_free, Optimality, SearchLimits};
use ringfree::gen;
use ringfree::heuristics::{greedy_dag, greedy_swap, HeuristicError};
use ringfree::instance::{
    assignment_weight, is_valid_assignment, Assignment, CycleBound, ReviewInstance, SolveParams,
};
use ringfree::io;

use crate::{exit_codes, CliError};

/// Solver selector, mirroring the `--solver` flag.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolverChoice {
    /// Min-cost-flow maximum-weight assignment (cycles permitted).
    Flow,
    /// Branch-and-bound maximum-weight z-cycle-free assignment.
    ExactZfree,
    /// Topological greedy (completely cycle-free, d-d-valid).
    GreedyDag,
    /// Greedy with one-for-two repair (z-cycle-free).
    GreedySwap,
}

impl std::str::FromStr for SolverChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "flow" => Ok(SolverChoice::Flow),
            "exact-zfree" => Ok(SolverChoice::ExactZfree),
            "greedy-dag" => Ok(SolverChoice::GreedyDag),
            "greedy-swap" => Ok(SolverChoice::GreedySwap),
            other => Err(format!(
                "unknown solver {other:?} (expected flow, exact-zfree, greedy-dag or greedy-swap)"
            )),
        }
    }
}

/// Parses the `--params c,d,z` triple; `z` may be `unbounded`.
pub fn parse_params(text: &str) -> Result<SolveParams, CliError> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 3 {
        return Err(CliError::io_format(format!(
            "--params expects c,d,z, found {text:?}"
        )));
    }
    let cap: u32 = parts[0]
        .trim()
        .parse()
        .map_err(|e| CliError::io_format(format!("bad reviewer cap: {e}")))?;
    let demand: u32 = parts[1]
        .trim()
        .parse()
        .map_err(|e| CliError::io_format(format!("bad paper demand: {e}")))?;
    let bound = parse_cycle_bound(parts[2].trim())?;
    Ok(SolveParams::new(cap, demand, bound))
}

pub fn parse_cycle_bound(text: &str) -> Result<CycleBound, CliError> {
    if text.eq_ignore_ascii_case("unbounded") || text == "inf" {
        return Ok(CycleBound::Unbounded);
    }
    let z: u32 = text
        .parse()
        .map_err(|e| CliError::io_format(format!("bad cycle bound {text:?}: {e}")))?;
    if z == 0 {
        return Err(CliError::io_format(
            "cycle bound must be positive or unbounded",
        ));
    }
    Ok(CycleBound::Bounded(z))
}

fn read_instance(path: &Path) -> Result<ReviewInstance, CliError> {
    io::read_instance(path).map_err(CliError::io_format)
}

fn ensure_dir(path: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(path)
        .map_err(|e| CliError::io_format(format!("{}: {e}", path.display())))
}

#[derive(Debug, Serialize)]
struct SolveStatsFile {
    solver: &'static str,
    reviewer_cap: u32,
    paper_demand: u32,
    cycle_bound: String,
    weighted: bool,
    status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    objective: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    nodes: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    constraints_generated: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    operations: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    swaps: Option<u64>,
    wall_time_s: f64,
}

pub struct SolveArgs {
    pub instance: PathBuf,
    pub params: SolveParams,
    pub solver: SolverChoice,
    pub weighted: bool,
    pub budget_nodes: Option<u64>,
    pub budget_seconds: Option<f64>,
    pub out: PathBuf,
    pub zero_time: bool,
}

/// Runs one solver on one instance; writes `assignment.json` and
/// `stats.json` into the output directory. The stats file is written even
/// for infeasible and budget outcomes.
pub fn cmd_solve(args: &SolveArgs) -> Result<(), CliError> {
    let instance = read_instance(&args.instance)?;
    let mut params = args.params;
    params.weighted = args.weighted;
    ensure_dir(&args.out)?;
    let started = std::time::Instant::now();

    let solver_name = match args.solver {
        SolverChoice::Flow => "flow",
        SolverChoice::ExactZfree => "exact-zfree",
        SolverChoice::GreedyDag => "greedy-dag",
        SolverChoice::GreedySwap => "greedy-swap",
    };
    let mut stats = SolveStatsFile {
        solver: solver_name,
        reviewer_cap: params.reviewer_cap,
        paper_demand: params.paper_demand,
        cycle_bound: params.cycle_bound.to_string(),
        weighted: params.weighted,
        status: "ok",
        objective: None,
        nodes: None,
        constraints_generated: None,
        operations: None,
        swaps: None,
        wall_time_s: 0.0,
    };

    let mut assignment: Option<Assignment> = None;
    let mut failure: Option<CliError> = None;
    match args.solver {
        SolverChoice::Flow => {
            let out = max_weight_assignment(&instance, &params);
            stats.objective = out.stats.objective;
            stats.nodes = Some(out.stats.nodes);
            match out.assignment {
                Some(a) => assignment = Some(a),
                None => {
                    stats.status = "infeasible";
                    failure = Some(CliError::infeasible("no c-d-valid assignment exists"));
                }
            }
        }
        SolverChoice::ExactZfree => {
            if params.cycle_bound.finite().is_none() {
                return Err(CliError::precondition(
                    "exact-zfree requires a finite cycle bound",
                ));
            }
            let mut limits = SearchLimits::default();
            if let Some(n) = args.budget_nodes {
                limits.max_nodes = n;
            }
            if let Some(s) = args.budget_seconds {
                limits.max_seconds = s;
            }
            let out = max_weight_zcycle_free(&instance, &params, &limits);
            stats.objective = out.stats.objective;
            stats.nodes = Some(out.stats.nodes);
            stats.constraints_generated = Some(out.stats.constraints_generated);
            match out.stats.optimality {
                Optimality::Proven => assignment = out.assignment,
                Optimality::FeasibleOnly => {
                    stats.status = "budget";
                    assignment = out.assignment;
                    failure = Some(CliError::budget("budget exhausted; best incumbent written"));
                }
                Optimality::Infeasible => {
                    stats.status = "infeasible";
                    failure = Some(CliError::infeasible(
                        "no z-cycle-free c-d-valid assignment exists",
                    ));
                }
                Optimality::NoIncumbent => {
                    stats.status = "budget";
                    failure = Some(CliError::budget("no solution found within limits"));
                }
            }
        }
        SolverChoice::GreedyDag => match greedy_dag(&instance, params.paper_demand) {
            Ok(run) => {
                stats.operations = Some(run.operations);
                stats.objective = Some(objective_of(&instance, &run.assignment));
                assignment = Some(run.assignment);
            }
            Err(e) => {
                stats.status = "fault";
                failure = Some(heuristic_error(e));
            }
        },
        SolverChoice::GreedySwap => match greedy_swap(&instance, &params) {
            Ok(run) => {
                stats.operations = Some(run.operations);
                stats.swaps = Some(run.swaps);
                stats.objective = Some(objective_of(&instance, &run.assignment));
                assignment = Some(run.assignment);
            }
            Err(e) => {
                stats.status = match e {
                    HeuristicError::SwapExhausted { .. } => "infeasible",
                    _ => "fault",
                };
                failure = Some(heuristic_error(e));
            }
        },
    }

    stats.wall_time_s = if args.zero_time {
        0.0
    } else {
        started.elapsed().as_secs_f64()
    };
    if let Some(a) = &assignment {
        io::write_assignment(&args.out.join("assignment.json"), &instance, a)
            .map_err(CliError::io_format)?;
    }
    io::write_json(&args.out.join("stats.json"), &stats).map_err(CliError::io_format)?;
    match failure {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

/// Weighted objective when weights are present, assigned review count
/// otherwise (the unit-weight convention).
fn objective_of(instance: &ReviewInstance, assignment: &Assignment) -> i64 {
    assignment_weight(instance, assignment).unwrap_or(assignment.len() as i64)
}

fn heuristic_error(e: HeuristicError) -> CliError {
    let code = match e {
        HeuristicError::SwapExhausted { .. } => exit_codes::INFEASIBLE,
        _ => exit_codes::PRECONDITION,
    };
    CliError::new(code, e.to_string())
}

pub struct AuditArgs {
    pub instance: PathBuf,
    pub assignment: PathBuf,
    pub cycle_bound: CycleBound,
    pub out: PathBuf,
}

#[derive(Debug, Serialize)]
struct ExposureRow<'a> {
    kind: &'static str,
    id: &'a str,
    in_cycle: bool,
    min_cycle_len: Option<usize>,
}

/// Audits an assignment: writes `cycles.json` (the cycle report) and
/// `exposure.csv` (one row per agent and paper with its shortest cycle
/// length, if any).
pub fn cmd_audit(args: &AuditArgs) -> Result<(), CliError> {
    let instance = read_instance(&args.instance)?;
    let assignment =
        io::read_assignment(&args.assignment, &instance).map_err(CliError::io_format)?;
    for (a, p) in assignment.edges() {
        if !instance.is_qualified(a, p) {
            return Err(CliError::precondition(format!(
                "foreign edge {}/{}: not a qualification edge of the instance",
                instance.agent_name(a),
                instance.paper_name(p)
            )));
        }
    }
    ensure_dir(&args.out)?;
    let report = find_review_cycles(&instance, &assignment, args.cycle_bound);
    io::write_json(
        &args.out.join("cycles.json"),
        &io::CycleReportFile::from_report(&instance, &report),
    )
    .map_err(CliError::io_format)?;

    let mut min_agent: Vec<Option<usize>> = vec![None; instance.n_agents()];
    let mut min_paper: Vec<Option<usize>> = vec![None; instance.n_papers()];
    for cycle in &report.cycles {
        for &a in &cycle.agents {
            min_agent[a] = Some(min_agent[a].map_or(cycle.len(), |m| m.min(cycle.len())));
        }
        for &p in &cycle.papers {
            min_paper[p] = Some(min_paper[p].map_or(cycle.len(), |m| m.min(cycle.len())));
        }
    }
    let path = args.out.join("exposure.csv");
    let mut writer = csv::Writer::from_path(&path)
        .map_err(|e| CliError::io_format(format!("{}: {e}", path.display())))?;
    for (a, &min_len) in min_agent.iter().enumerate() {
        writer
            .serialize(ExposureRow {
                kind: "agent",
                id: instance.agent_name(a),
                in_cycle: min_len.is_some(),
                min_cycle_len: min_len,
            })
            .map_err(CliError::io_format)?;
    }
    for (p, &min_len) in min_paper.iter().enumerate() {
        writer
            .serialize(ExposureRow {
                kind: "paper",
                id: instance.paper_name(p),
                in_cycle: min_len.is_some(),
                min_cycle_len: min_len,
            })
            .map_err(CliError::io_format)?;
    }
    writer.flush().map_err(CliError::io_format)?;
    Ok(())
}

/// Generator selection for `generate`.
pub enum GenerateArgs {
    SatGadget {
        cnf: PathBuf,
        out: PathBuf,
    },
    TwoInFourGadget {
        cnf: PathBuf,
        out: PathBuf,
    },
    MisGadget {
        graph: PathBuf,
        out: PathBuf,
    },
    Pad {
        instance: PathBuf,
        delta: u32,
        out: PathBuf,
    },
    WeightEncode {
        instance: PathBuf,
        out: PathBuf,
    },
    Random {
        n_agents: usize,
        n_papers: usize,
        controls: gen::RandomControls,
        seed: u64,
        out: PathBuf,
    },
    Sample {
        dataset: PathBuf,
        n_papers: usize,
        agent_ratio: f64,
        weight_scale: i64,
        seed: u64,
        out: PathBuf,
    },
}

pub fn cmd_generate(args: &GenerateArgs) -> Result<(), CliError> {
    let (instance, out) = match args {
        GenerateArgs::SatGadget { cnf, out } => {
            let text = std::fs::read_to_string(cnf)
                .map_err(|e| CliError::io_format(format!("{}: {e}", cnf.display())))?;
            let formula = gen::ThreeSatFormula::parse_dimacs(&text).map_err(CliError::io_format)?;
            (
                gen::gen_sat_gadget(&formula).map_err(CliError::io_format)?,
                out,
            )
        }
        GenerateArgs::TwoInFourGadget { cnf, out } => {
            let text = std::fs::read_to_string(cnf)
                .map_err(|e| CliError::io_format(format!("{}: {e}", cnf.display())))?;
            let formula = gen::FourSatFormula::parse_dimacs(&text).map_err(CliError::io_format)?;
            (
                gen::gen_2in4_gadget(&formula).map_err(CliError::io_format)?,
                out,
            )
        }
        GenerateArgs::MisGadget { graph, out } => {
            let text = std::fs::read_to_string(graph)
                .map_err(|e| CliError::io_format(format!("{}: {e}", graph.display())))?;
            let graph: gen::ColoredGraph =
                serde_json::from_str(&text).map_err(CliError::io_format)?;
            (
                gen::gen_mis_gadget(&graph).map_err(CliError::io_format)?,
                out,
            )
        }
        GenerateArgs::Pad {
            instance,
            delta,
            out,
        } => {
            let base = read_instance(instance)?;
            (gen::pad_min_degrees(&base, *delta), out)
        }
        GenerateArgs::WeightEncode { instance, out } => {
            let base = read_instance(instance)?;
            (
                gen::qualifications_to_weights(&base).map_err(CliError::io_format)?,
                out,
            )
        }
        GenerateArgs::Random {
            n_agents,
            n_papers,
            controls,
            seed,
            out,
        } => (
            gen::gen_random(*n_agents, *n_papers, controls, *seed).map_err(CliError::io_format)?,
            out,
        ),
        GenerateArgs::Sample {
            dataset,
            n_papers,
            agent_ratio,
            weight_scale,
            seed,
            out,
        } => {
            let ds = gen::load_dataset(dataset).map_err(CliError::io_format)?;
            let mut spec = gen::SampleSpec::new(*n_papers, *agent_ratio, *seed);
            spec.weight_scale = *weight_scale;
            (
                gen::sample_instance(&ds, &spec).map_err(CliError::io_format)?,
                out,
            )
        }
    };
    if let Some(parent) = out.parent() {
        if !parent.as_os_str().is_empty() {
            ensure_dir(parent)?;
        }
    }
    io::write_instance(out, &instance).map_err(CliError::io_format)?;
    Ok(())
}

/// Sanity helper shared by tests: verifies a written assignment against its
/// instance at the given parameters.
pub fn verify_solution(
    instance: &ReviewInstance,
    assignment: &Assignment,
    params: &SolveParams,
) -> Result<bool, CliError> {
    let validity =
        is_valid_assignment(instance, assignment, params).map_err(CliError::precondition)?;
    let cycles = find_review_cycles(instance, assignment, params.cycle_bound);
    Ok(validity.valid && cycles.is_cycle_free())
}
