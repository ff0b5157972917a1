use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::sched::{evaluate_schedule, Instance, PrecedenceRelation, Schedule};

/// A random linear extension: each step picks uniformly among the jobs whose
/// predecessors are all placed.
pub fn initial_heuristic(inst: &Instance, seed: u64) -> Schedule {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let order = topological_by(inst.precedence(), |available| {
        rng.gen_range(0..available.len())
    });
    evaluate_schedule(inst, &order).expect("topological order is a permutation")
}

/// Repairs `hint` into a feasible order, keeping jobs as close to their hinted
/// positions as precedence allows.
pub fn repair_order(prec: &PrecedenceRelation, hint: &[usize]) -> Vec<usize> {
    let rank = crate::sched::positions_of(hint);
    topological_by(prec, |available| {
        (0..available.len())
            .min_by_key(|&k| rank[available[k]])
            .expect("nonempty")
    })
}

/// Kahn's algorithm; `choose` picks an index into the ascending list of available jobs.
pub(crate) fn topological_by(
    prec: &PrecedenceRelation,
    mut choose: impl FnMut(&[usize]) -> usize,
) -> Vec<usize> {
    let n = prec.n();
    let mut missing: Vec<usize> = (0..n).map(|j| prec.predecessors(j).count()).collect();
    let mut available: Vec<usize> = (0..n).filter(|&j| missing[j] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while !available.is_empty() {
        let k = choose(&available);
        let j = available.remove(k);
        order.push(j);
        for s in 0..n {
            if prec.precedes(j, s) {
                missing[s] -= 1;
                if missing[s] == 0 {
                    let at = available.partition_point(|&x| x < s);
                    available.insert(at, s);
                }
            }
        }
    }
    assert_eq!(order.len(), n, "precedence relation must be acyclic");
    order
}

/// Group-move local search.
///
/// The schedule is cut into maximal runs whose adjacent jobs are precedence-linked.
/// Each run is tried at every other insertion point; the first feasible move that
/// strictly lowers Σ wC is taken and the scan restarts, until no move improves.
pub fn improve_schedule(inst: &Instance, s: &Schedule) -> Schedule {
    let prec = inst.precedence();
    let p = inst.proc_times();
    let w = inst.weights();
    let mut order = s.order().to_vec();
    let n = order.len();
    'restart: loop {
        let mut start = 0;
        while start < n {
            let mut end = start + 1;
            while end < n && prec.precedes(order[end - 1], order[end]) {
                end += 1;
            }
            let group = &order[start..end];
            let gp: i128 = group.iter().map(|&j| p[j] as i128).sum();
            let gw: i128 = group.iter().map(|&j| w[j] as i128).sum();

            // Earlier insertion points, scanning from the front.
            for ins in 0..start {
                let jumped = &order[ins..start];
                if jumped
                    .iter()
                    .any(|&x| group.iter().any(|&g| prec.precedes(x, g)))
                {
                    continue;
                }
                let xp: i128 = jumped.iter().map(|&j| p[j] as i128).sum();
                let xw: i128 = jumped.iter().map(|&j| w[j] as i128).sum();
                if xw * gp - gw * xp < 0 {
                    order[ins..end].rotate_right(end - start);
                    continue 'restart;
                }
            }
            // Later insertion points: the run ends up right after order[ins - 1].
            for ins in end + 1..=n {
                let jumped = &order[end..ins];
                if jumped
                    .iter()
                    .any(|&x| group.iter().any(|&g| prec.precedes(g, x)))
                {
                    continue;
                }
                let xp: i128 = jumped.iter().map(|&j| p[j] as i128).sum();
                let xw: i128 = jumped.iter().map(|&j| w[j] as i128).sum();
                if gw * xp - xw * gp < 0 {
                    order[start..ins].rotate_left(end - start);
                    continue 'restart;
                }
            }
            start = end;
        }
        break;
    }
    evaluate_schedule(inst, &order).expect("moves keep a permutation")
}
