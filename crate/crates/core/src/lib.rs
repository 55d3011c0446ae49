//! Review assignments without short review cycles.
//!
//! A review instance is a directed bipartite graph over agents and papers:
//! qualification edges say who may review what, authorship edges say who
//! wrote what. An assignment is a subset of qualification edges; it is
//! `c`-`d`-valid when every agent reviews at most `c` papers and every paper
//! receives exactly `d` reviews, and `z`-cycle-free when no group of up to
//! `z` agents reviews each other's papers in a ring.
//!
//! The crate provides:
//!
//! * [`instance`] — the data model, validity checking and degree statistics;
//! * [`cycles`] — bounded-length review-cycle enumeration and acyclicity tests;
//! * [`heuristics`] — the greedy topological and greedy-with-swap-repair solvers;
//! * [`guarantees`] — degree-based sufficient conditions under which the
//!   heuristics provably succeed;
//! * [`exact`] — a min-cost-flow solver for maximum-weight valid assignments,
//!   a branch-and-bound solver with lazily generated cycle constraints for the
//!   cycle-free variant, and exhaustive reference searches for testing;
//! * [`gen`] — dataset ingestion, seeded sampling, random instances and the
//!   hardness-gadget constructions used as structured test inputs;
//! * [`batch`] — data-parallel mapping over independent solver runs
//!   (rayon-backed behind the `parallel` feature, sequential otherwise);
//! * [`io`] — the JSON file formats shared by the library and the CLI.

// Index loops over the vertex ranges mirror the adjacency structure; the
// iterator forms clippy suggests obscure which side is being walked.
#![allow(clippy::needless_range_loop)]

pub mod batch;
pub mod cycles;
pub mod exact;
pub mod gen;
pub mod guarantees;
pub mod heuristics;
pub mod instance;
pub mod io;

pub use cycles::{find_review_cycles, CycleReport, ReviewCycle};
pub use instance::{
    degree_stats, is_valid_assignment, validate_instance, Assignment, CycleBound, DegreeStats,
    ReviewInstance, SolveParams,
};
