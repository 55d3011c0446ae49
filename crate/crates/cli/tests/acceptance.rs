//! Acceptance gate: one test per criterion, each printing a pass line
//! (run with `--nocapture` to see them).
//!
//! 1. Exact solvers match the exhaustive references on random tiny
//!    instances and on the reduction gadgets.
//! 2. Wherever the general swap-greedy guarantee holds, the greedy returns a
//!    valid cycle-free assignment without faults (>= 500 instances).
//! 3. Wherever the topological-greedy guarantee holds, the output is
//!    d-d-valid and acyclic (>= 200 instances), and the operation counter
//!    grows linearly over three decades of instance size.
//! 4. The symmetric-case corollary reproduces its worked example exactly.
//! 5. Gadget feasibility coincides with the exhaustive checks on the source
//!    formulas/graphs, and feasible gadget solutions decode back to
//!    satisfying assignments.
//! 6. With the conference dataset present, a desk-scale replica reproduces
//!    the reported quality and exposure numbers; without it, the runner's
//!    ordering and monotonicity invariants are checked on synthetic data.
//! 7. Every command is byte-deterministic across repeated runs.

use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::process::Command;

use ringfree::cycles::{find_review_cycles, is_acyclic};
use ringfree::exact::{
    brute_force_oracle, exhaustive_search, max_weight_assignment, max_weight_zcycle_free,
    Optimality, SearchLimits,
};
use ringfree::gen::{
    gen_2in4_gadget, gen_mis_gadget, gen_random, gen_sat_gadget, ColoredGraph, FourSatFormula,
    RandomControls, SplitMix64, ThreeSatFormula,
};
use ringfree::guarantees::{
    check_swap_guarantee, check_symmetric_guarantee, check_topological_guarantee, Rational,
};
use ringfree::heuristics::{greedy_dag, greedy_swap};
use ringfree::instance::{
    is_valid_assignment, Assignment, CycleBound, ReviewInstance, SolveParams,
};
use ringfree_cli::experiment::{run_experiment, ExperimentSpec};

const BB_LIMITS: SearchLimits = SearchLimits {
    max_nodes: 1_000_000,
    max_seconds: 300.0,
};

fn names(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

/// Random weighted instance with at most `max_edges` qualification edges.
fn random_tiny(seed: u64, max_edges: usize) -> ReviewInstance {
    let mut rng = SplitMix64::new(seed);
    loop {
        let n_a = 1 + rng.below(4) as usize;
        let n_p = 1 + rng.below(4) as usize;
        let mut authorship = Vec::new();
        for p in 0..n_p {
            if rng.below(2) == 0 {
                authorship.push((p, rng.below(n_a as u64) as usize));
            }
        }
        let mut qualification = Vec::new();
        let mut weights = HashMap::new();
        for a in 0..n_a {
            for p in 0..n_p {
                if rng.below(5) < 3 {
                    qualification.push((a, p));
                    weights.insert((a, p), rng.below(100) as i64);
                }
            }
        }
        if qualification.len() > max_edges {
            continue;
        }
        return ReviewInstance::from_indexed(
            names("a", n_a),
            names("p", n_p),
            &authorship,
            &qualification,
            Some(weights),
            false,
        )
        .unwrap();
    }
}

/// Compares the flow and branch-and-bound solvers against the exhaustive
/// reference on one instance; `reference` chooses subset enumeration or the
/// backtracking search.
fn assert_exact_solvers_match(
    instance: &ReviewInstance,
    cap: u32,
    demand: u32,
    z_values: &[u32],
    use_subset_oracle: bool,
    label: &str,
) {
    // Unconstrained optimum: flow vs reference with a zero bound.
    let free = SolveParams::new(cap, demand, CycleBound::Bounded(0)).weighted();
    let reference_free = if use_subset_oracle {
        brute_force_oracle(instance, &free)
            .unwrap()
            .optimal_weight()
    } else {
        exhaustive_search(instance, &free, 1 << 34)
            .unwrap()
            .optimal_weight()
    };
    let flow = max_weight_assignment(instance, &free);
    assert_eq!(
        flow.stats.objective, reference_free,
        "{label}: flow vs reference"
    );
    for &z in z_values {
        let params = SolveParams::new(cap, demand, CycleBound::Bounded(z)).weighted();
        let reference = if use_subset_oracle {
            brute_force_oracle(instance, &params)
                .unwrap()
                .optimal_weight()
        } else {
            exhaustive_search(instance, &params, 1 << 34)
                .unwrap()
                .optimal_weight()
        };
        let solved = max_weight_zcycle_free(instance, &params, &BB_LIMITS);
        assert!(
            solved.stats.optimality == Optimality::Proven
                || solved.stats.optimality == Optimality::Infeasible,
            "{label}: budget must not trip on acceptance instances"
        );
        assert_eq!(solved.stats.objective, reference, "{label}: z = {z}");
        if let Some(assn) = &solved.assignment {
            assert!(is_valid_assignment(instance, assn, &params).unwrap().valid);
            assert!(find_review_cycles(instance, assn, params.cycle_bound).is_cycle_free());
        }
    }
}

/// All 3-literal clauses with distinct variables drawn from `vars`.
fn clause_universe(vars: &[i32]) -> Vec<[i32; 3]> {
    let mut out = Vec::new();
    for i in 0..vars.len() {
        for j in i + 1..vars.len() {
            for k in j + 1..vars.len() {
                for signs in 0..8u8 {
                    let lit = |v: i32, bit: bool| if bit { v } else { -v };
                    out.push([
                        lit(vars[i], signs & 1 != 0),
                        lit(vars[j], signs & 2 != 0),
                        lit(vars[k], signs & 4 != 0),
                    ]);
                }
            }
        }
    }
    out
}

/// Deterministic family of formulas with at most three clauses, within the
/// occurrence bounds: all single clauses and clause pairs over four
/// variables, plus a strided sample of the triples.
fn sat_formula_family() -> Vec<ThreeSatFormula> {
    let universe = clause_universe(&[1, 2, 3, 4]);
    let mut family = Vec::new();
    for c in &universe {
        family.push(ThreeSatFormula::new(vec![*c]).unwrap());
    }
    for i in 0..universe.len() {
        for j in i..universe.len() {
            if let Ok(f) = ThreeSatFormula::new(vec![universe[i], universe[j]]) {
                family.push(f);
            }
        }
    }
    let mut count = 0usize;
    for i in 0..universe.len() {
        for j in i..universe.len() {
            for k in j..universe.len() {
                count += 1;
                if !count.is_multiple_of(17) {
                    continue;
                }
                if let Ok(f) = ThreeSatFormula::new(vec![universe[i], universe[j], universe[k]]) {
                    family.push(f);
                }
            }
        }
    }
    family
}

fn mis_graph_family() -> Vec<ColoredGraph> {
    let mut graphs = Vec::new();
    let all_edges = [(0usize, 1usize), (0, 2), (1, 2)];
    for classes in [vec![vec![0usize], vec![1, 2]], vec![vec![0, 1], vec![2]]] {
        for mask in 0u8..8 {
            let edges: Vec<(usize, usize)> = all_edges
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &e)| e)
                .collect();
            graphs.push(ColoredGraph {
                vertex_count: 3,
                edges,
                classes: classes.clone(),
            });
        }
    }
    graphs
}

fn two_in_four_family() -> Vec<FourSatFormula> {
    vec![
        // The only shape possible at two clauses; trivially satisfiable.
        FourSatFormula::new(vec![[1, -1, 2, -2], [1, -1, 2, -2]]).unwrap(),
        // A four-clause formula with no two-in-four assignment.
        FourSatFormula::new(vec![
            [3, -1, -4, -2],
            [1, 2, -4, -3],
            [4, 1, -3, 2],
            [3, -1, 4, -2],
        ])
        .unwrap(),
    ]
}

#[test]
fn criterion_1_oracle_equivalence() {
    // Random tiny instances against subset enumeration.
    for seed in 0..200u64 {
        let instance = random_tiny(1000 + seed, 12);
        let mut rng = SplitMix64::new(seed);
        let cap = 1 + rng.below(3) as u32;
        let demand = 1 + rng.below(2) as u32;
        assert_exact_solvers_match(
            &instance,
            cap,
            demand,
            &[1, 2, 3],
            true,
            &format!("random seed {seed}"),
        );
    }

    // Gadget instances against the backtracking reference (their edge count
    // is beyond subset enumeration; the reference itself is validated
    // against the subset oracle in the solver test suite).
    let mut gadgets = 0usize;
    for (i, formula) in sat_formula_family().into_iter().enumerate() {
        if i % 9 != 0 {
            continue; // strided: the full family runs in criterion 5
        }
        let instance = gen_sat_gadget(&formula).unwrap();
        assert_exact_solvers_match(
            &instance,
            1,
            1,
            &[1, 2, 3],
            false,
            &format!("sat gadget {i}"),
        );
        gadgets += 1;
    }
    for (i, graph) in mis_graph_family().into_iter().enumerate() {
        let instance = gen_mis_gadget(&graph).unwrap();
        assert_exact_solvers_match(
            &instance,
            1,
            1,
            &[1, 2, 3],
            false,
            &format!("mis gadget {i}"),
        );
        gadgets += 1;
    }
    for (i, formula) in two_in_four_family().into_iter().enumerate() {
        let instance = gen_2in4_gadget(&formula).unwrap();
        assert_exact_solvers_match(
            &instance,
            2,
            2,
            &[1, 2, 3],
            false,
            &format!("2in4 gadget {i}"),
        );
        gadgets += 1;
    }
    println!(
        "acceptance criterion 1 (oracle equivalence): PASS — 200 random instances and {gadgets} gadget instances, z in {{1,2,3}}, exact weight agreement"
    );
}

#[test]
fn criterion_2_general_guarantee() {
    let mut conforming = 0u32;
    let mut seed = 0u64;
    while conforming < 500 {
        seed += 1;
        let mut rng = SplitMix64::new(77_000 + seed);
        let z = 1 + rng.below(2) as u32; // z in {1, 2}
        let controls = RandomControls {
            min_authors_per_paper: 1,
            max_authors_per_paper: if z == 1 { 2 } else { 1 },
            max_papers_per_agent: 1,
            conflicts_per_agent: rng.below(3) as u32,
        };
        let n_papers = 26 + rng.below(6) as usize;
        let n_agents = 190 + rng.below(30) as usize;
        let instance = gen_random(n_agents, n_papers, &controls, seed).unwrap();
        let params = SolveParams::new(6, 3, CycleBound::Bounded(z));
        if !check_swap_guarantee(&instance, &params).holds {
            continue;
        }
        conforming += 1;
        let run = greedy_swap(&instance, &params)
            .unwrap_or_else(|e| panic!("guaranteed instance (seed {seed}, z {z}) faulted: {e}"));
        assert!(
            is_valid_assignment(&instance, &run.assignment, &params)
                .unwrap()
                .valid
        );
        assert!(find_review_cycles(&instance, &run.assignment, params.cycle_bound).is_cycle_free());
    }
    println!(
        "acceptance criterion 2 (general guarantee): PASS — {conforming} conforming instances (cap 6, demand 3, z in {{1,2}}), zero faults"
    );
}

/// Sparse stuck-free family used for the linear-operation-count check:
/// papers have dedicated fresh reviewers plus a chain through the authors.
fn scaling_instance(m: usize) -> ReviewInstance {
    let n_agents = 2 * m;
    let authorship: Vec<(usize, usize)> = (0..m).map(|p| (p, p)).collect();
    let mut qualification: Vec<(usize, usize)> = Vec::with_capacity(2 * m);
    for p in 0..m {
        qualification.push((m + p, p)); // dedicated paper-less reviewer
        if p + 1 < m {
            qualification.push((p, p + 1)); // author of p reviews p+1
        }
    }
    ReviewInstance::from_indexed(
        names("a", n_agents),
        names("p", m),
        &authorship,
        &qualification,
        None,
        true,
    )
    .unwrap()
}

#[test]
fn criterion_3_topological_guarantee_and_linear_complexity() {
    let mut conforming = 0u32;
    let mut seed = 0u64;
    while conforming < 200 {
        seed += 1;
        let mut rng = SplitMix64::new(88_000 + seed);
        let demand = 1 + rng.below(3) as u32;
        let n_papers = 3 + rng.below(8) as usize;
        let n_agents = n_papers + demand as usize + 1 + rng.below(6) as usize;
        let instance =
            gen_random(n_agents, n_papers, &RandomControls::single_author(), seed).unwrap();
        if !check_topological_guarantee(&instance, demand).holds {
            continue;
        }
        conforming += 1;
        let run = greedy_dag(&instance, demand)
            .unwrap_or_else(|e| panic!("guaranteed instance (seed {seed}) faulted: {e}"));
        let params = SolveParams::new(demand, demand, CycleBound::Unbounded);
        assert!(
            is_valid_assignment(&instance, &run.assignment, &params)
                .unwrap()
                .valid
        );
        assert!(is_acyclic(&instance, &run.assignment));
    }

    // Linear growth of the operation counter over three decades, within a
    // factor of 3 between the per-size ratios.
    let mut ratios = Vec::new();
    for &m in &[1_000usize, 10_000, 100_000] {
        let instance = scaling_instance(m);
        let run = greedy_dag(&instance, 1).unwrap();
        let size =
            (instance.n_agents() + instance.n_papers() + instance.n_qualification_edges()) as f64;
        ratios.push(run.operations as f64 / size);
    }
    let min = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = ratios.iter().cloned().fold(0.0f64, f64::max);
    assert!(
        max / min <= 3.0,
        "operation counter not linear: ratios {ratios:?}"
    );
    println!(
        "acceptance criterion 3 (topological guarantee + linear time): PASS — {conforming} conforming instances; ops/size ratios {ratios:?}"
    );
}

#[test]
fn criterion_4_corollary_arithmetic() {
    let verdict = check_symmetric_guarantee(9251, 700, 10, 2);
    assert!(verdict.holds);
    let condition = &verdict.conditions[0];
    assert_eq!(condition.left, Some(Rational::from_integer(9245)));
    assert_eq!(condition.right, Some(Rational::from_integer(9150)));
    println!(
        "acceptance criterion 4 (corollary arithmetic): PASS — 9245 >= 9150 for n=9251, coi=700, Delta=10, z=2"
    );
}

/// Decodes a 1-1-valid cycle-free gadget solution back to a variable
/// assignment (x true when the negative-literal agent reviews the
/// negative-literal paper) and evaluates the formula under it.
fn decoded_assignment_satisfies(
    formula: &ThreeSatFormula,
    instance: &ReviewInstance,
    solution: &Assignment,
) -> bool {
    let truth: HashMap<i32, bool> = formula
        .variables()
        .iter()
        .map(|&v| {
            let agent = instance.agent_id(&format!("a_neg_x{v}")).unwrap();
            let paper = instance.paper_id(&format!("p_neg_x{v}")).unwrap();
            (v, solution.contains(agent, paper))
        })
        .collect();
    formula.clauses().iter().all(|clause| {
        clause.iter().any(|&lit| {
            let value = truth[&lit.abs()];
            if lit > 0 {
                value
            } else {
                !value
            }
        })
    })
}

#[test]
fn criterion_5_gadget_fidelity() {
    // Every formula with at most three clauses within the occurrence bounds
    // is satisfiable (three clauses rule out at most 3 * 2^(n-3) < 2^n
    // assignments), so the equivalence check requires feasibility plus a
    // decodable solution throughout this family.
    let family = sat_formula_family();
    let sat_count = family.len();
    for (i, formula) in family.into_iter().enumerate() {
        assert!(
            formula.brute_force_satisfiable(),
            "three-clause formulas are always satisfiable"
        );
        let instance = gen_sat_gadget(&formula).unwrap();
        let params = SolveParams::new(1, 1, CycleBound::Bounded(2));
        let solved = exhaustive_search(&instance, &params, 1 << 34).unwrap();
        let (_, solution) = solved
            .best
            .unwrap_or_else(|| panic!("gadget {i} infeasible for a satisfiable formula"));
        assert!(
            decoded_assignment_satisfies(&formula, &instance, &solution),
            "gadget {i}: decoded assignment does not satisfy the formula"
        );
    }

    // Two-in-four gadgets: solver feasibility (cap 2, demand 2, bound 3)
    // equals the exhaustive two-in-four check.
    let mut two_in_four = 0usize;
    for (i, formula) in two_in_four_family().into_iter().enumerate() {
        let instance = gen_2in4_gadget(&formula).unwrap();
        let params = SolveParams::new(2, 2, CycleBound::Bounded(3));
        let feasible = !exhaustive_search(&instance, &params, 1 << 34)
            .unwrap()
            .is_infeasible();
        assert_eq!(
            feasible,
            formula.brute_force_two_in_four_satisfiable(),
            "2in4 gadget {i}"
        );
        two_in_four += 1;
    }

    // Independent-set gadgets: solver feasibility (cap 1, demand 1, bound 2)
    // equals the multicolored-independent-set brute force, including a
    // three-class five-vertex pair (one admitting a set, one blocked).
    let mut mis = 0usize;
    let mut graphs = mis_graph_family();
    graphs.push(ColoredGraph {
        vertex_count: 5,
        edges: vec![(0, 1), (1, 3), (2, 4)],
        classes: vec![vec![0], vec![1, 2], vec![3, 4]],
    });
    graphs.push(ColoredGraph {
        vertex_count: 5,
        edges: vec![
            (0, 1),
            (0, 2),
            (0, 3),
            (0, 4),
            (1, 3),
            (1, 4),
            (2, 3),
            (2, 4),
        ],
        classes: vec![vec![0], vec![1, 2], vec![3, 4]],
    });
    for (i, graph) in graphs.into_iter().enumerate() {
        let instance = gen_mis_gadget(&graph).unwrap();
        let params = SolveParams::new(1, 1, CycleBound::Bounded(2));
        let feasible = !exhaustive_search(&instance, &params, 1 << 34)
            .unwrap()
            .is_infeasible();
        assert_eq!(
            feasible,
            graph.brute_force_multicolored_independent_set(),
            "mis gadget {i}"
        );
        mis += 1;
    }
    println!(
        "acceptance criterion 5 (gadget fidelity): PASS — {sat_count} satisfiable 3-CNF gadgets decoded, {two_in_four} two-in-four gadgets, {mis} independent-set gadgets"
    );
}

fn dataset_dir() -> Option<PathBuf> {
    if let Ok(dir) = std::env::var("RINGFREE_ICLR_DIR") {
        let path = PathBuf::from(dir);
        if path.join("similarity.csv").is_file() {
            return Some(path);
        }
    }
    let default = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/iclr18");
    if default.join("similarity.csv").is_file() {
        return Some(default);
    }
    None
}

#[test]
fn criterion_6_figure_reproduction_or_synthetic_invariants() {
    if let Some(dir) = dataset_dir() {
        let spec = ExperimentSpec {
            source: ringfree_cli::experiment::InstanceSource::Dataset {
                dir,
                n_papers: vec![150, 200, 250],
                agent_ratio: vec![0.5],
                weight_scale: 1_000_000,
            },
            solvers: vec![
                ringfree_cli::experiment::SolverSpec::Optimal,
                ringfree_cli::experiment::SolverSpec::OptimalZfree { z: 2 },
                ringfree_cli::experiment::SolverSpec::HeuristicZfree { z: 2 },
                ringfree_cli::experiment::SolverSpec::HeuristicZfree { z: 3 },
                ringfree_cli::experiment::SolverSpec::HeuristicZfree { z: 4 },
            ],
            repetitions: 10,
            seed_base: 2018,
            reviewer_cap: 6,
            paper_demand: 3,
            budget_nodes: None,
            budget_seconds: None,
            output_dir: None,
        };
        let out_dir = tempfile::tempdir().unwrap();
        let output = run_experiment(&spec, out_dir.path(), true).unwrap();
        let mean =
            |cell: &str,
             solver: &str,
             f: &dyn Fn(&ringfree_cli::experiment::SolverSummary) -> Option<f64>| {
                output
                    .summary
                    .iter()
                    .find(|c| c.cell == cell)
                    .and_then(|c| c.solvers.get(solver))
                    .and_then(f)
                    .unwrap_or(f64::NAN)
            };
        for cell in ["np=150,rap=0.5", "np=200,rap=0.5", "np=250,rap=0.5"] {
            let zfree = mean(cell, "optimal-zfree", &|s| s.mean_normalized_weight);
            assert!(zfree >= 0.97, "{cell}: optimal 2-cycle-free {zfree}");
            let heuristic = mean(cell, "heuristic-zfree", &|s| s.mean_normalized_weight);
            assert!(
                (0.95..=0.99).contains(&heuristic),
                "{cell}: heuristic {heuristic}"
            );
        }
        let e2 = mean("np=150,rap=0.5", "optimal", &|s| s.mean_frac_agents_le2);
        let e3 = mean("np=150,rap=0.5", "optimal", &|s| s.mean_frac_agents_le3);
        let e4 = mean("np=150,rap=0.5", "optimal", &|s| s.mean_frac_agents_le4);
        assert!((0.38..=0.42).contains(&e2), "exposure z<=2: {e2}");
        assert!((0.56..=0.60).contains(&e3), "exposure z<=3: {e3}");
        assert!((0.74..=0.78).contains(&e4), "exposure z<=4: {e4}");
        println!(
            "acceptance criterion 6 (figure reproduction): PASS — desk-scale replica within tolerance"
        );
        return;
    }

    // Dataset absent: exercise the runner on synthetic weighted data and
    // assert its row-wise invariants instead.
    let spec = ExperimentSpec {
        source: ringfree_cli::experiment::InstanceSource::Random {
            n_agents: vec![24, 36],
            n_papers: vec![12],
            controls: ringfree_cli::experiment::RandomControlsSpec {
                min_authors_per_paper: 1,
                max_authors_per_paper: 2,
                max_papers_per_agent: 2,
                conflicts_per_agent: 1,
                weight_max: Some(1_000_000),
            },
        },
        solvers: vec![
            ringfree_cli::experiment::SolverSpec::Optimal,
            ringfree_cli::experiment::SolverSpec::OptimalZfree { z: 2 },
            ringfree_cli::experiment::SolverSpec::HeuristicZfree { z: 2 },
        ],
        repetitions: 10,
        seed_base: 99,
        reviewer_cap: 6,
        paper_demand: 3,
        budget_nodes: None,
        budget_seconds: None,
        output_dir: None,
    };
    let out_dir = tempfile::tempdir().unwrap();
    let output = run_experiment(&spec, out_dir.path(), true).unwrap();
    assert_eq!(output.rows.len(), 2 * 10 * 3);

    let mut by_instance: HashMap<&str, HashMap<&str, &ringfree_cli::experiment::ResultRow>> =
        HashMap::new();
    for row in &output.rows {
        by_instance
            .entry(&row.instance_id)
            .or_default()
            .insert(&row.solver, row);
    }
    let mut ordered = 0;
    for rows in by_instance.values() {
        // Row-wise ordering: optimal >= optimal-zfree >= heuristic-zfree.
        if let (Some(opt), Some(zfree), Some(heur)) = (
            rows.get("optimal"),
            rows.get("optimal-zfree"),
            rows.get("heuristic-zfree"),
        ) {
            if opt.status == "ok" && zfree.status == "ok" && heur.status == "ok" {
                assert!(opt.weight.unwrap() >= zfree.weight.unwrap());
                assert!(zfree.weight.unwrap() >= heur.weight.unwrap());
                ordered += 1;
            }
        }
        // Exposure monotonicity per row.
        for row in rows.values() {
            if let (Some(a2), Some(a3), Some(a4)) = (
                row.frac_agents_le2,
                row.frac_agents_le3,
                row.frac_agents_le4,
            ) {
                assert!(a2 <= a3 && a3 <= a4, "agent exposure not monotone");
            }
            if let (Some(p2), Some(p3), Some(p4)) = (
                row.frac_papers_le2,
                row.frac_papers_le3,
                row.frac_papers_le4,
            ) {
                assert!(p2 <= p3 && p3 <= p4, "paper exposure not monotone");
            }
        }
    }
    assert!(ordered >= 15, "only {ordered} fully solved instances");
    println!(
        "acceptance criterion 6 (dataset absent): PASS — fallback invariants on synthetic data; row-wise ordering held on {ordered} instances"
    );
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ringfree"))
}

fn run_ok(args: &[&str]) {
    let out = bin().args(args).output().unwrap();
    assert!(
        out.status.success(),
        "command {:?} failed: {}",
        args,
        String::from_utf8_lossy(&out.stderr)
    );
}

fn hash_dir(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut entries: Vec<(String, Vec<u8>)> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (
                e.file_name().to_string_lossy().into_owned(),
                std::fs::read(e.path()).unwrap(),
            )
        })
        .collect();
    entries.sort();
    entries
}

#[test]
fn criterion_7_byte_determinism_of_every_command() {
    let dir = tempfile::tempdir().unwrap();
    let base = dir.path();
    let dataset = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data/mini-dataset");

    std::fs::write(base.join("f.cnf"), "1 -2 3 0\n-1 2 4 0\n").unwrap();
    std::fs::write(base.join("f4.cnf"), "1 -1 2 -2 0\n1 -1 2 -2 0\n").unwrap();
    std::fs::write(
        base.join("g.json"),
        r#"{"vertex_count":3,"edges":[[0,1]],"classes":[[0],[1,2]]}"#,
    )
    .unwrap();
    std::fs::write(
        base.join("spec.json"),
        format!(
            r#"{{
  "source": {{"type": "dataset", "dir": {:?}, "n_papers": [6], "agent_ratio": [0.5]}},
  "solvers": [{{"id": "optimal"}}, {{"id": "optimal-zfree", "z": 2}}, {{"id": "heuristic-zfree", "z": 2}}],
  "repetitions": 3,
  "seed_base": 5,
  "reviewer_cap": 6,
  "paper_demand": 2
}}"#,
            dataset.to_str().unwrap()
        ),
    )
    .unwrap();

    let sampled = base.join("sampled.json");
    let commands: Vec<Vec<String>> = vec![
        vec![
            "generate".into(),
            "sat-gadget".into(),
            "--cnf".into(),
            base.join("f.cnf").display().to_string(),
            "--out".into(),
            base.join("sat.json").display().to_string(),
        ],
        vec![
            "generate".into(),
            "two-in-four-gadget".into(),
            "--cnf".into(),
            base.join("f4.cnf").display().to_string(),
            "--out".into(),
            base.join("two.json").display().to_string(),
        ],
        vec![
            "generate".into(),
            "mis-gadget".into(),
            "--graph".into(),
            base.join("g.json").display().to_string(),
            "--out".into(),
            base.join("mis.json").display().to_string(),
        ],
        vec![
            "generate".into(),
            "random".into(),
            "--agents".into(),
            "16".into(),
            "--papers".into(),
            "8".into(),
            "--conflicts".into(),
            "1".into(),
            "--seed".into(),
            "3".into(),
            "--out".into(),
            base.join("rand.json").display().to_string(),
        ],
        vec![
            "generate".into(),
            "sample".into(),
            "--dataset".into(),
            dataset.display().to_string(),
            "--papers".into(),
            "8".into(),
            "--ratio".into(),
            "0.75".into(),
            "--seed".into(),
            "9".into(),
            "--out".into(),
            sampled.display().to_string(),
        ],
        vec![
            "generate".into(),
            "pad".into(),
            "--instance".into(),
            base.join("sat.json").display().to_string(),
            "--delta".into(),
            "3".into(),
            "--out".into(),
            base.join("padded.json").display().to_string(),
        ],
        vec![
            "generate".into(),
            "weight-encode".into(),
            "--instance".into(),
            base.join("sat.json").display().to_string(),
            "--out".into(),
            base.join("encoded.json").display().to_string(),
        ],
        vec![
            "--zero-time".into(),
            "solve".into(),
            "--instance".into(),
            sampled.display().to_string(),
            "--params".into(),
            "6,2,2".into(),
            "--solver".into(),
            "flow".into(),
            "--out".into(),
            base.join("flow-out").display().to_string(),
        ],
        vec![
            "--zero-time".into(),
            "solve".into(),
            "--instance".into(),
            sampled.display().to_string(),
            "--params".into(),
            "6,2,2".into(),
            "--solver".into(),
            "exact-zfree".into(),
            "--out".into(),
            base.join("zfree-out").display().to_string(),
        ],
        vec![
            "--zero-time".into(),
            "solve".into(),
            "--instance".into(),
            sampled.display().to_string(),
            "--params".into(),
            "6,2,2".into(),
            "--solver".into(),
            "greedy-swap".into(),
            "--weighted".into(),
            "--out".into(),
            base.join("swap-out").display().to_string(),
        ],
        vec![
            "--zero-time".into(),
            "experiment".into(),
            "--spec".into(),
            base.join("spec.json").display().to_string(),
            "--out".into(),
            base.join("exp-out").display().to_string(),
        ],
    ];

    // First pass.
    for command in &commands {
        let args: Vec<&str> = command.iter().map(String::as_str).collect();
        run_ok(&args);
    }
    // Solve a dag-friendly instance separately (the sampled instance's
    // demand exceeds what the free-agent pool supports).
    let dag_args = |out: &str| {
        vec![
            "--zero-time".to_string(),
            "solve".into(),
            "--instance".into(),
            base.join("rand.json").display().to_string(),
            "--params".into(),
            "1,1,unbounded".into(),
            "--solver".into(),
            "greedy-dag".into(),
            "--out".into(),
            base.join(out).display().to_string(),
        ]
    };
    run_ok(
        &dag_args("dag-out")
            .iter()
            .map(String::as_str)
            .collect::<Vec<_>>(),
    );
    let audit_args = |out: &str| {
        vec![
            "audit".to_string(),
            "--instance".into(),
            sampled.display().to_string(),
            "--assignment".into(),
            base.join("flow-out/assignment.json").display().to_string(),
            "-z".into(),
            "4".into(),
            "--out".into(),
            base.join(out).display().to_string(),
        ]
    };
    run_ok(
        &audit_args("audit-out")
            .iter()
            .map(String::as_str)
            .collect::<Vec<_>>(),
    );

    type Snapshot = Vec<(String, Vec<u8>)>;
    let mut snapshots: Vec<(String, Snapshot)> = Vec::new();
    let files = [
        "sat.json",
        "two.json",
        "mis.json",
        "rand.json",
        "padded.json",
        "encoded.json",
    ];
    for f in files {
        snapshots.push((
            f.into(),
            vec![(f.into(), std::fs::read(base.join(f)).unwrap())],
        ));
    }
    snapshots.push((
        "sampled".into(),
        vec![("sampled.json".into(), std::fs::read(&sampled).unwrap())],
    ));
    for d in [
        "flow-out",
        "zfree-out",
        "swap-out",
        "dag-out",
        "audit-out",
        "exp-out",
    ] {
        snapshots.push((d.into(), hash_dir(&base.join(d))));
    }

    // Second pass: everything must be byte-identical.
    for command in &commands {
        let args: Vec<&str> = command.iter().map(String::as_str).collect();
        run_ok(&args);
    }
    run_ok(
        &dag_args("dag-out")
            .iter()
            .map(String::as_str)
            .collect::<Vec<_>>(),
    );
    run_ok(
        &audit_args("audit-out")
            .iter()
            .map(String::as_str)
            .collect::<Vec<_>>(),
    );

    for f in files {
        assert_eq!(
            std::fs::read(base.join(f)).unwrap(),
            snapshots.iter().find(|(n, _)| n == f).unwrap().1[0].1,
            "{f} changed between runs"
        );
    }
    assert_eq!(
        std::fs::read(&sampled).unwrap(),
        snapshots.iter().find(|(n, _)| n == "sampled").unwrap().1[0].1
    );
    for d in [
        "flow-out",
        "zfree-out",
        "swap-out",
        "dag-out",
        "audit-out",
        "exp-out",
    ] {
        assert_eq!(
            hash_dir(&base.join(d)),
            snapshots.iter().find(|(n, _)| n == d).unwrap().1,
            "{d} changed between runs"
        );
    }
    println!(
        "acceptance criterion 7 (determinism): PASS — byte-identical outputs for generate/solve/audit/experiment across two runs"
    );
}
