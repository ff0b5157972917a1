//! Exact reference solvers used to check the bounding and search code.

use super::schedule::{evaluate_schedule, objective_of};
use super::{Instance, SchedError, Schedule};

/// Largest instance the exhaustive oracle accepts.
pub const BRUTE_FORCE_MAX_JOBS: usize = 10;

/// Smith's rule: nonincreasing w/p, ties by smaller index. Optimal without precedence.
pub fn wspt_order(inst: &Instance) -> Result<Schedule, SchedError> {
    if !inst.precedence().is_empty() {
        return Err(SchedError::HasPrecedence);
    }
    let p = inst.proc_times();
    let w = inst.weights();
    let mut order: Vec<usize> = (0..inst.n_jobs()).collect();
    // w_a/p_a > w_b/p_b  <=>  w_a p_b > w_b p_a
    order.sort_by(|&a, &b| (w[b] * p[a]).cmp(&(w[a] * p[b])).then(a.cmp(&b)));
    evaluate_schedule(inst, &order)
}

/// Minimum-objective linear extension; ties go to the lexicographically smallest order.
pub fn brute_force_optimal(inst: &Instance) -> Result<Schedule, SchedError> {
    let n = inst.n_jobs();
    if n > BRUTE_FORCE_MAX_JOBS {
        return Err(SchedError::TooLarge {
            n_jobs: n,
            limit: BRUTE_FORCE_MAX_JOBS,
        });
    }
    let mut best: Option<(u64, Vec<usize>)> = None;
    for_each_linear_extension(inst, |order| {
        let obj = objective_of(inst, order);
        if best.as_ref().map_or(true, |(b, _)| obj < *b) {
            best = Some((obj, order.to_vec()));
        }
    });
    let (_, order) = best.expect("an acyclic instance has a linear extension");
    evaluate_schedule(inst, &order)
}

/// Number of feasible permutations.
pub fn count_linear_extensions(inst: &Instance) -> u64 {
    let mut count = 0;
    for_each_linear_extension(inst, |_| count += 1);
    count
}

/// Visits every feasible permutation in lexicographic order.
pub fn for_each_linear_extension(inst: &Instance, mut visit: impl FnMut(&[usize])) {
    let n = inst.n_jobs();
    let prec = inst.precedence();
    let mut missing: Vec<usize> = (0..n).map(|j| prec.predecessors(j).count()).collect();
    let mut used = vec![false; n];
    let mut order = Vec::with_capacity(n);
    recurse(inst, &mut missing, &mut used, &mut order, &mut visit);

    fn recurse(
        inst: &Instance,
        missing: &mut [usize],
        used: &mut [bool],
        order: &mut Vec<usize>,
        visit: &mut impl FnMut(&[usize]),
    ) {
        let n = used.len();
        if order.len() == n {
            visit(order);
            return;
        }
        let prec = inst.precedence();
        for j in 0..n {
            if used[j] || missing[j] != 0 {
                continue;
            }
            used[j] = true;
            order.push(j);
            for k in 0..n {
                if prec.precedes(j, k) {
                    missing[k] -= 1;
                }
            }
            recurse(inst, missing, used, order, visit);
            for k in 0..n {
                if prec.precedes(j, k) {
                    missing[k] += 1;
                }
            }
            order.pop();
            used[j] = false;
        }
    }
}
