use super::heuristic::topological_by;
use crate::sched::{evaluate_schedule, Instance, Schedule};

/// Baseline: repeatedly transmit the heaviest job with no unscheduled predecessor
/// (ties to the smaller index).
pub fn greedy_baseline(inst: &Instance) -> Schedule {
    let w = inst.weights();
    let order = topological_by(inst.precedence(), |available| {
        // `available` is ascending, so the first maximum is the smallest index.
        let mut best = 0;
        for k in 1..available.len() {
            if w[available[k]] > w[available[best]] {
                best = k;
            }
        }
        best
    });
    evaluate_schedule(inst, &order).expect("topological order is a permutation")
}
