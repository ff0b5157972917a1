use crate::lagrangian::LagrangianState;
use crate::sched::{PrecedenceRelation, Schedule};

/// Picks the pair to branch on.
///
/// Among constraints left slack by `schedule`, the one with the largest multiplier
/// (ties to the earlier one) supplies its first active edge (n, m) whose jobs are not
/// precedence-related. Returns `(n, m)` with n scheduled before m, or `None` when no
/// slack constraint offers such an edge.
pub fn select_branch_variable(
    state: &LagrangianState,
    schedule: &Schedule,
    prec: &PrecedenceRelation,
) -> Option<(usize, usize)> {
    let pos = schedule.positions();
    let mut slack: Vec<usize> = state
        .constraints()
        .iter()
        .enumerate()
        .filter(|(_, c)| c.beta() > 0 && c.active_edges(&pos) >= 2)
        .map(|(i, _)| i)
        .collect();
    // stable sort keeps application order among equal β
    slack.sort_by_key(|&i| std::cmp::Reverse(state.constraints()[i].beta()));
    slack.into_iter().find_map(|i| {
        state.constraints()[i]
            .edges()
            .find(|&(a, b)| pos[a] < pos[b] && !prec.related(a, b))
    })
}

/// Any pair adjacent-first in `order` that precedence leaves open.
pub(crate) fn first_unrelated_pair(
    order: &[usize],
    prec: &PrecedenceRelation,
) -> Option<(usize, usize)> {
    let n = order.len();
    (1..n).find_map(|gap| {
        (0..n - gap)
            .map(|k| (order[k], order[k + gap]))
            .find(|&(a, b)| !prec.related(a, b))
    })
}
