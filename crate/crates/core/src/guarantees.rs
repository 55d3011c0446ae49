//! Degree-based sufficient conditions under which the greedy solvers
//! provably succeed.
//!
//! Each checker is a pure predicate over [`DegreeStats`]; the verdict lists
//! every inequality with its numeric instantiation. Comparisons involving
//! ratios (the cap/demand term, the 1.5 factor) use exact rational
//! arithmetic, so boundary cases cannot be misclassified by rounding.

use num_rational::Ratio;

use crate::instance::{degree_stats, ReviewInstance, SolveParams};

/// Exact rational value used in guarantee reports.
pub type Rational = Ratio<i128>;

/// One checked inequality. `left`/`right` are `None` when a side is
/// undefined (an extremum over an empty set), which never satisfies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionCheck {
    pub name: String,
    pub left: Option<Rational>,
    pub right: Option<Rational>,
    pub satisfied: bool,
}

impl ConditionCheck {
    fn compare(
        name: &str,
        left: Option<Rational>,
        right: Option<Rational>,
        cmp: fn(&Rational, &Rational) -> bool,
    ) -> Self {
        let satisfied = match (&left, &right) {
            (Some(l), Some(r)) => cmp(l, r),
            _ => false,
        };
        ConditionCheck {
            name: name.to_owned(),
            left,
            right,
            satisfied,
        }
    }

    pub fn render_left(&self) -> String {
        render(&self.left)
    }

    pub fn render_right(&self) -> String {
        render(&self.right)
    }
}

fn render(v: &Option<Rational>) -> String {
    match v {
        Some(r) => r.to_string(),
        None => "undefined".to_owned(),
    }
}

/// Verdict of a guarantee check: holds exactly when every condition is
/// satisfied.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GuaranteeVerdict {
    pub holds: bool,
    pub conditions: Vec<ConditionCheck>,
}

impl GuaranteeVerdict {
    fn from_conditions(conditions: Vec<ConditionCheck>) -> Self {
        GuaranteeVerdict {
            holds: conditions.iter().all(|c| c.satisfied),
            conditions,
        }
    }

    pub fn condition(&self, name: &str) -> Option<&ConditionCheck> {
        self.conditions.iter().find(|c| c.name == name)
    }
}

fn int(v: impl Into<i128>) -> Option<Rational> {
    Some(Rational::from_integer(v.into()))
}

fn opt(v: Option<u32>) -> Option<Rational> {
    v.map(|x| Rational::from_integer(i128::from(x)))
}

fn le(l: &Rational, r: &Rational) -> bool {
    l <= r
}

fn ge(l: &Rational, r: &Rational) -> bool {
    l >= r
}

fn gt(l: &Rational, r: &Rational) -> bool {
    l > r
}

fn eq(l: &Rational, r: &Rational) -> bool {
    l == r
}

fn sat_mul(a: i128, b: i128) -> i128 {
    a.saturating_mul(b)
}

fn sat_pow(base: i128, exp: u32) -> i128 {
    let mut acc: i128 = 1;
    for _ in 0..exp {
        acc = sat_mul(acc, base);
    }
    acc
}

/// Conditions under which the topological greedy is guaranteed to produce a
/// `d`-`d`-valid completely cycle-free assignment: single-author papers, at
/// most one paper per agent, and every paper reviewable by at least
/// `n_papers + d` agents.
pub fn check_topological_guarantee(
    instance: &ReviewInstance,
    paper_demand: u32,
) -> GuaranteeVerdict {
    let stats = degree_stats(instance);
    let n_p = instance.n_papers() as i128;
    GuaranteeVerdict::from_conditions(vec![
        ConditionCheck::compare(
            "max_papers_per_author <= 1",
            int(stats.max_papers_per_author),
            int(1),
            le,
        ),
        ConditionCheck::compare(
            "min_authors_per_paper == 1",
            opt(stats.min_authors_per_paper),
            int(1),
            eq,
        ),
        ConditionCheck::compare(
            "max_authors_per_paper == 1",
            int(stats.max_authors_per_paper),
            int(1),
            eq,
        ),
        ConditionCheck::compare(
            "min_reviewers_per_paper >= n_papers + demand",
            opt(stats.min_reviewers_per_paper),
            int(n_p + i128::from(paper_demand)),
            ge,
        ),
    ])
}

/// Conditions of the single-review regime for the swap greedy: the
/// single-author single-paper setting with unit cap and demand, enough
/// agents, both minimum degrees above `z`, and
/// `n_papers <= min_reviewable + min_reviewers - 2z`.
pub fn check_unit_swap_guarantee(
    instance: &ReviewInstance,
    params: &SolveParams,
) -> GuaranteeVerdict {
    let z = match params.cycle_bound.finite() {
        Some(z) => i128::from(z),
        None => {
            return GuaranteeVerdict::from_conditions(vec![ConditionCheck::compare(
                "cycle bound finite",
                None,
                None,
                eq,
            )])
        }
    };
    let stats = degree_stats(instance);
    let slack = match (
        stats.min_reviewable_per_agent,
        stats.min_reviewers_per_paper,
    ) {
        (Some(a), Some(p)) => Some(Rational::from_integer(
            i128::from(a) + i128::from(p) - 2 * z,
        )),
        _ => None,
    };
    GuaranteeVerdict::from_conditions(vec![
        ConditionCheck::compare(
            "max_papers_per_author <= 1",
            int(stats.max_papers_per_author),
            int(1),
            le,
        ),
        ConditionCheck::compare(
            "min_authors_per_paper == 1",
            opt(stats.min_authors_per_paper),
            int(1),
            eq,
        ),
        ConditionCheck::compare(
            "max_authors_per_paper == 1",
            int(stats.max_authors_per_paper),
            int(1),
            eq,
        ),
        ConditionCheck::compare("reviewer_cap == 1", int(params.reviewer_cap), int(1), eq),
        ConditionCheck::compare("paper_demand == 1", int(params.paper_demand), int(1), eq),
        ConditionCheck::compare(
            "n_agents >= n_papers",
            int(instance.n_agents() as i128),
            int(instance.n_papers() as i128),
            ge,
        ),
        ConditionCheck::compare(
            "min_reviewable_per_agent > z",
            opt(stats.min_reviewable_per_agent),
            int(z),
            gt,
        ),
        ConditionCheck::compare(
            "min_reviewers_per_paper > z",
            opt(stats.min_reviewers_per_paper),
            int(z),
            gt,
        ),
        ConditionCheck::compare(
            "n_papers <= min_reviewable + min_reviewers - 2z",
            int(instance.n_papers() as i128),
            slack,
            le,
        ),
    ])
}

/// The general swap-greedy guarantee. All four inequalities are evaluated;
/// the cap/demand ratio in the last one is exact.
pub fn check_swap_guarantee(instance: &ReviewInstance, params: &SolveParams) -> GuaranteeVerdict {
    let z = match params.cycle_bound.finite() {
        Some(z) => z,
        None => {
            return GuaranteeVerdict::from_conditions(vec![ConditionCheck::compare(
                "cycle bound finite",
                None,
                None,
                eq,
            )])
        }
    };
    let stats = degree_stats(instance);
    let n_a = instance.n_agents() as i128;
    let n_p = instance.n_papers() as i128;
    let cap = i128::from(params.reviewer_cap);
    let demand = i128::from(params.paper_demand);

    // 2 * (max_papers_per_author * demand)^z — papers an extra review could
    // reach backward; 2 * (max_authors_per_paper * cap)^z — agents reachable
    // forward from a paper.
    let reach_agent_side = sat_mul(
        2,
        sat_pow(sat_mul(i128::from(stats.max_papers_per_author), demand), z),
    );
    let reach_paper_side = sat_mul(
        2,
        sat_pow(sat_mul(i128::from(stats.max_authors_per_paper), cap), z),
    );

    let reviewable_slack = stats
        .min_reviewable_per_agent
        .map(|d| Rational::from_integer(i128::from(d) - reach_agent_side - cap));
    let reviewers_slack = stats
        .min_reviewers_per_paper
        .map(|d| Rational::from_integer(i128::from(d) - reach_paper_side - demand));
    let combined = match (reviewable_slack, reviewers_slack) {
        (Some(a), Some(p)) if demand > 0 => Some(a + Rational::new(cap, demand) * p),
        _ => None,
    };

    GuaranteeVerdict::from_conditions(vec![
        ConditionCheck::compare(
            "n_agents * cap >= n_papers * demand",
            int(sat_mul(n_a, cap)),
            int(sat_mul(n_p, demand)),
            ge,
        ),
        ConditionCheck::compare(
            "min_reviewable_per_agent > 2*(max_papers_per_author*demand)^z + cap",
            opt(stats.min_reviewable_per_agent),
            int(reach_agent_side.saturating_add(cap)),
            gt,
        ),
        ConditionCheck::compare(
            "min_reviewers_per_paper > 2*(max_authors_per_paper*cap)^z + demand",
            opt(stats.min_reviewers_per_paper),
            int(reach_paper_side.saturating_add(demand)),
            gt,
        ),
        ConditionCheck::compare(
            "n_papers <= reviewable_slack + (cap/demand)*reviewers_slack",
            int(n_p),
            combined,
            le,
        ),
    ])
}

/// The symmetric-case corollary specialized to cap 6 and demand 3:
/// `n - 6 >= 1.5*coi + Delta^z * (2*6^z + 3^z)` guarantees a 6-3-valid
/// z-cycle-free assignment exists.
pub fn check_symmetric_guarantee(n_papers: u64, coi: u64, delta: u64, z: u32) -> GuaranteeVerdict {
    let left = Rational::from_integer(i128::from(n_papers)) - Rational::from_integer(6);
    let coi_term = Rational::new(3, 2) * Rational::from_integer(i128::from(coi));
    let reach = sat_mul(
        sat_pow(i128::from(delta), z),
        sat_mul(2, sat_pow(6, z)).saturating_add(sat_pow(3, z)),
    );
    let right = coi_term + Rational::from_integer(reach);
    GuaranteeVerdict::from_conditions(vec![ConditionCheck::compare(
        "n - 6 >= 1.5*coi + Delta^z*(2*6^z + 3^z)",
        Some(left),
        Some(right),
        ge,
    )])
}
