use std::time::{Duration, Instant};

use serde::Serialize;

use super::branch::{first_unrelated_pair, select_branch_variable};
use super::heuristic::{improve_schedule, initial_heuristic, repair_order};
use crate::lagrangian::compute_bound_observed;
use crate::sched::{evaluate_schedule, Instance, PrecedenceRelation, Schedule};
use crate::trace::{Event, Observer, Silent};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Limits {
    pub node_cap: Option<u64>,
    pub time_cap: Option<Duration>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SolveOptions {
    pub limits: Limits,
    /// Seed of the random initial schedule.
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LimitKind {
    NodeLimit,
    TimeLimit,
}

impl LimitKind {
    pub fn as_str(self) -> &'static str {
        match self {
            LimitKind::NodeLimit => "node-limit",
            LimitKind::TimeLimit => "time-limit",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult {
    pub best_schedule: Schedule,
    pub best_objective: u64,
    /// Lower bound on the optimum over the whole tree.
    pub global_lb: u64,
    pub nodes_explored: u64,
    pub proven_optimal: bool,
    pub wall_time_ms: f64,
    pub limit_hit: Option<LimitKind>,
}

/// Open subproblem: the instance precedence plus the pairs fixed on the way down.
struct Node {
    precedence: PrecedenceRelation,
    depth: usize,
    /// Order the reference schedule is repaired from.
    hint: Vec<usize>,
    /// Bound of the parent, valid for every schedule in this subtree.
    parent_lb: u64,
}

pub fn solve(inst: &Instance, options: &SolveOptions) -> SolveResult {
    solve_observed(inst, options, &mut Silent)
}

/// Depth-first branch and bound on the Lagrangian bound.
pub fn solve_observed(
    inst: &Instance,
    options: &SolveOptions,
    observer: &mut dyn Observer,
) -> SolveResult {
    let started = Instant::now();
    let mut best = improve_schedule(inst, &initial_heuristic(inst, options.seed));
    let mut stack = vec![Node {
        precedence: inst.precedence().clone(),
        depth: 0,
        hint: best.order().to_vec(),
        parent_lb: 0,
    }];
    let mut nodes = 0u64;
    let mut limit_hit = None;

    while let Some(node) = stack.pop() {
        if node.parent_lb >= best.objective() {
            continue;
        }
        if options.limits.node_cap.is_some_and(|cap| nodes >= cap) {
            limit_hit = Some(LimitKind::NodeLimit);
        } else if options
            .limits
            .time_cap
            .is_some_and(|cap| started.elapsed() >= cap)
        {
            limit_hit = Some(LimitKind::TimeLimit);
        }
        if limit_hit.is_some() {
            stack.push(node);
            break;
        }
        nodes += 1;
        let id = nodes;

        let sub = inst.with_precedence(node.precedence);
        let prec = sub.precedence();
        let reference = improve_schedule(
            &sub,
            &evaluate_schedule(&sub, &repair_order(prec, &node.hint))
                .expect("repaired order is a permutation"),
        );
        if reference.objective() < best.objective() {
            best = reference.clone();
        }
        let outcome = compute_bound_observed(&sub, &reference, observer)
            .expect("validated instance has an acyclic precedence");
        let lb = outcome.lb();
        if let Some(s) = &outcome.schedule {
            if s.objective() < best.objective() {
                best = s.clone();
            }
        }
        observer.on_event(
            &Event::NodeBounded {
                node: id,
                depth: node.depth,
                instance: &sub,
                reference: reference.order(),
                extracted: outcome.schedule.as_ref().map(|s| s.order()),
                upper_bound: outcome.upper_bound,
                incumbent: best.objective(),
            },
            Some(&outcome.state),
        );
        if lb >= best.objective() {
            observer.on_event(
                &Event::NodePruned {
                    node: id,
                    lb,
                    incumbent: best.objective(),
                },
                None,
            );
            continue;
        }

        let guide = outcome.schedule.as_ref().unwrap_or(&reference);
        let pair = select_branch_variable(&outcome.state, guide, prec)
            .or_else(|| first_unrelated_pair(guide.order(), prec));
        // A total order leaves nothing to branch on; its only schedule was evaluated.
        let Some((n, m)) = pair else { continue };
        observer.on_event(
            &Event::Branched {
                node: id,
                before: n,
                after: m,
            },
            None,
        );
        let hint = guide.order().to_vec();
        for (a, b) in [(n, m), (m, n)] {
            stack.push(Node {
                precedence: prec.with_pair(a, b).expect("branch pair is unrelated"),
                depth: node.depth + 1,
                hint: hint.clone(),
                parent_lb: lb,
            });
        }
    }

    let best_objective = best.objective();
    let global_lb = stack
        .iter()
        .map(|n| n.parent_lb)
        .fold(best_objective, u64::min);
    SolveResult {
        best_objective,
        best_schedule: best,
        global_lb,
        nodes_explored: nodes,
        proven_optimal: limit_hit.is_none(),
        wall_time_ms: started.elapsed().as_secs_f64() * 1e3,
        limit_hit,
    }
}
