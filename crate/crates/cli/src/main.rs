//! `ringfree` — compute, verify and audit peer-review assignments that are
//! c-d-valid and free of short review cycles.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use ringfree_cli::commands::{
    cmd_audit, cmd_generate, cmd_solve, parse_cycle_bound, parse_params, AuditArgs, GenerateArgs,
    SolveArgs, SolverChoice,
};
use ringfree_cli::experiment::{run_experiment, ExperimentSpec};
use ringfree_cli::CliError;

#[derive(Parser)]
#[command(
    name = "ringfree",
    about = "Review assignments without short review cycles",
    version
)]
struct Cli {
    /// Record wall times as 0 in all outputs (byte-reproducible runs).
    #[arg(long, global = true)]
    zero_time: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance with one of the solvers.
    Solve(SolveCli),
    /// Enumerate review cycles of an assignment and report exposure.
    Audit(AuditCli),
    /// Generate instances: gadgets, random instances, dataset samples.
    #[command(subcommand)]
    Generate(GenerateCli),
    /// Run an experiment grid described by a JSON spec.
    Experiment(ExperimentCli),
}

#[derive(Args)]
struct SolveCli {
    /// Instance JSON file.
    #[arg(long)]
    instance: PathBuf,
    /// Parameters as c,d,z (z may be "unbounded").
    #[arg(long)]
    params: String,
    /// Solver: flow | exact-zfree | greedy-dag | greedy-swap.
    #[arg(long)]
    solver: SolverChoice,
    /// Pick maximum-weight edges in the greedy (requires instance weights).
    #[arg(long)]
    weighted: bool,
    /// Branch-and-bound node budget (exact-zfree).
    #[arg(long)]
    budget_nodes: Option<u64>,
    /// Branch-and-bound time budget in seconds (exact-zfree).
    #[arg(long)]
    budget_seconds: Option<f64>,
    /// Output directory (assignment.json, stats.json).
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct AuditCli {
    /// Instance JSON file.
    #[arg(long)]
    instance: PathBuf,
    /// Assignment JSON file.
    #[arg(long)]
    assignment: PathBuf,
    /// Cycle length bound (positive integer or "unbounded").
    #[arg(short, long)]
    z: String,
    /// Output directory (cycles.json, exposure.csv).
    #[arg(long)]
    out: PathBuf,
}

#[derive(Subcommand)]
enum GenerateCli {
    /// Sparse-degree reduction instance from a 3-CNF (DIMACS).
    SatGadget {
        #[arg(long)]
        cnf: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Symmetric single-author reduction instance from a 2-in-4 formula
    /// (DIMACS with 4-literal clauses).
    TwoInFourGadget {
        #[arg(long)]
        cnf: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// No-conflict reduction instance from a colored graph (JSON).
    MisGadget {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Raise an instance's minimum degrees with padding agents and papers.
    Pad {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        delta: u32,
        #[arg(long)]
        out: PathBuf,
    },
    /// Encode qualifications into 0/1 weights over a full qualification set.
    WeightEncode {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Random instance with degree controls.
    Random {
        #[arg(long)]
        agents: usize,
        #[arg(long)]
        papers: usize,
        #[arg(long, default_value_t = 1)]
        authors_min: u32,
        #[arg(long, default_value_t = 1)]
        authors_max: u32,
        #[arg(long, default_value_t = 1)]
        max_papers_per_agent: u32,
        #[arg(long, default_value_t = 0)]
        conflicts: u32,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Sample an instance from a similarity dataset directory.
    Sample {
        #[arg(long)]
        dataset: PathBuf,
        #[arg(long)]
        papers: usize,
        #[arg(long)]
        ratio: f64,
        #[arg(long, default_value_t = 1_000_000)]
        weight_scale: i64,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct ExperimentCli {
    /// Experiment spec JSON file.
    #[arg(long)]
    spec: PathBuf,
    /// Output directory (results.csv, summary.json); overrides the spec's
    /// output_dir.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Solve(args) => {
            let params = parse_params(&args.params)?;
            cmd_solve(&SolveArgs {
                instance: args.instance,
                params,
                solver: args.solver,
                weighted: args.weighted,
                budget_nodes: args.budget_nodes,
                budget_seconds: args.budget_seconds,
                out: args.out,
                zero_time: cli.zero_time,
            })
        }
        Command::Audit(args) => cmd_audit(&AuditArgs {
            instance: args.instance,
            assignment: args.assignment,
            cycle_bound: parse_cycle_bound(&args.z)?,
            out: args.out,
        }),
        Command::Generate(g) => {
            let args = match g {
                GenerateCli::SatGadget { cnf, out } => GenerateArgs::SatGadget { cnf, out },
                GenerateCli::TwoInFourGadget { cnf, out } => {
                    GenerateArgs::TwoInFourGadget { cnf, out }
                }
                GenerateCli::MisGadget { graph, out } => GenerateArgs::MisGadget { graph, out },
                GenerateCli::Pad {
                    instance,
                    delta,
                    out,
                } => GenerateArgs::Pad {
                    instance,
                    delta,
                    out,
                },
                GenerateCli::WeightEncode { instance, out } => {
                    GenerateArgs::WeightEncode { instance, out }
                }
                GenerateCli::Random {
                    agents,
                    papers,
                    authors_min,
                    authors_max,
                    max_papers_per_agent,
                    conflicts,
                    seed,
                    out,
                } => GenerateArgs::Random {
                    n_agents: agents,
                    n_papers: papers,
                    controls: ringfree::gen::RandomControls {
                        min_authors_per_paper: authors_min,
                        max_authors_per_paper: authors_max,
                        max_papers_per_agent,
                        conflicts_per_agent: conflicts,
                    },
                    seed,
                    out,
                },
                GenerateCli::Sample {
                    dataset,
                    papers,
                    ratio,
                    weight_scale,
                    seed,
                    out,
                } => GenerateArgs::Sample {
                    dataset,
                    n_papers: papers,
                    agent_ratio: ratio,
                    weight_scale,
                    seed,
                    out,
                },
            };
            cmd_generate(&args)
        }
        Command::Experiment(args) => {
            let text = std::fs::read_to_string(&args.spec)
                .map_err(|e| CliError::io_format(format!("{}: {e}", args.spec.display())))?;
            let spec: ExperimentSpec = serde_json::from_str(&text).map_err(CliError::io_format)?;
            let out_dir = args
                .out
                .clone()
                .or_else(|| spec.output_dir.clone())
                .ok_or_else(|| {
                    CliError::io_format("no output directory (set --out or output_dir)")
                })?;
            run_experiment(&spec, &out_dir, cli.zero_time).map(|_| ())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("ringfree: {}", e.message);
            ExitCode::from(e.code as u8)
        }
    }
}
