//! Splitting a slack cycle constraint into tight ones via max-flow.

use super::cost::Cost;
use super::flow::{max_flow, FlowNetwork};
use super::state::{CycleConstraint, LagrangianState};
use super::BoundError;
use crate::sched::positions_of;

/// What one strengthening step did.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Strengthening {
    /// Active edges of the split constraint.
    pub eta: usize,
    /// Multiplier moved from the old constraint onto the new ones.
    pub beta_star: u64,
    /// Constraints created, one per flow path.
    pub added: Vec<CycleConstraint>,
}

impl Strengthening {
    pub fn lb_gain(&self) -> u64 {
        (self.eta as u64).saturating_sub(1) * self.beta_star
    }
}

/// Splits constraint `idx`, which `order` satisfies as a strict inequality.
///
/// `order` must have been read off the reduced matrix: every entry c_ab with `a`
/// scheduled before `b` is zero. For each active edge (a, b) a network on the positions
/// from a to b carries flow from b back to a over the reduced costs of the backward
/// pairs, with at most β leaving the source. Each flow path closes with (a, b) into a
/// new tight cycle constraint. The common amount β* that every active edge can route
/// is moved off the old constraint, so the bound rises by (η − 1)β*.
pub fn strengthen_by_maxflow(
    state: &mut LagrangianState,
    idx: usize,
    order: &[usize],
) -> Result<Strengthening, BoundError> {
    let n = state.n();
    if order.len() != n {
        return Err(BoundError::InfeasibleSchedule);
    }
    let pos = positions_of(order);
    let reduced = state.reduced();
    for (k, &a) in order.iter().enumerate() {
        for &b in &order[k + 1..] {
            if reduced.get(a, b).is_positive() {
                return Err(BoundError::NotTriangular { n: a, m: b });
            }
        }
    }
    let constraint = state.constraints()[idx].clone();
    let beta = constraint.beta();
    let active: Vec<(usize, usize)> = constraint
        .edges()
        .filter(|&(a, b)| pos[a] < pos[b])
        .collect();
    let eta = active.len();
    let unchanged = Strengthening {
        eta,
        beta_star: 0,
        added: Vec::new(),
    };
    if eta < 2 || beta == 0 {
        return Ok(unchanged);
    }

    // Residual capacities shared by the successive networks; only backward pairs are
    // used. No active edge routes more than β, so η·β stands in for an infinite entry.
    let unbounded = beta * eta as u64;
    let mut capacity: Vec<u64> = vec![0; n * n];
    for (k, &a) in order.iter().enumerate() {
        for &b in &order[k + 1..] {
            capacity[b * n + a] = reduced.get(b, a).min_finite(unbounded);
        }
    }
    let mut routed: Vec<Vec<(Vec<usize>, u64)>> = Vec::with_capacity(eta);
    for &(a, b) in &active {
        let (lo, hi) = (pos[a], pos[b]);
        let width = hi - lo + 1;
        // Local vertex k is the job at position lo + k; one extra super source.
        let super_source = width;
        let mut net = FlowNetwork::new(width + 1, super_source, 0);
        net.add_arc(super_source, width - 1, beta);
        let mut arc_pair = Vec::new();
        for i in (1..width).rev() {
            for j in 0..i {
                let (from, to) = (order[lo + i], order[lo + j]);
                let cap = capacity[from * n + to];
                if cap > 0 {
                    net.add_arc(i, j, cap);
                    arc_pair.push((from, to));
                }
            }
        }
        let flow = max_flow(&net);
        for (k, &f) in flow.arc_flow.iter().enumerate().skip(1) {
            let (from, to) = arc_pair[k - 1];
            capacity[from * n + to] -= f;
        }
        let paths = flow
            .paths
            .into_iter()
            .map(|p| {
                let jobs: Vec<usize> = p.vertices[1..].iter().map(|&v| order[lo + v]).collect();
                (jobs, p.flow)
            })
            .collect();
        routed.push(paths);
    }
    let beta_star = routed
        .iter()
        .map(|paths| paths.iter().map(|(_, f)| *f).sum::<u64>())
        .min()
        .unwrap_or(0)
        .min(beta);
    if beta_star == 0 {
        return Ok(unchanged);
    }

    state.release(idx);
    let mut added = Vec::new();
    for paths in &routed {
        let mut left = beta_star;
        for (jobs, f) in paths {
            if left == 0 {
                break;
            }
            let take = (*f).min(left);
            left -= take;
            // path runs b -> ... -> a; the edge (a, b) closes the cycle
            let c = CycleConstraint::new(jobs.clone(), take);
            state.apply_constraint(c.clone())?;
            added.push(c);
        }
    }
    state.reinstate(idx, beta - beta_star)?;
    Ok(Strengthening {
        eta,
        beta_star,
        added,
    })
}

/// True when every pair ordered forward by `order` has zero reduced cost.
pub fn is_lower_triangular(state: &LagrangianState, order: &[usize]) -> bool {
    let c = state.reduced();
    order
        .iter()
        .enumerate()
        .all(|(k, &a)| order[k + 1..].iter().all(|&b| c.get(a, b) == Cost::ZERO))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lagrangian::{build_cost_matrix, init_multipliers, CostMatrix};
    use crate::sched::Instance;

    /// Builds a state over an explicit reduced matrix with no α contribution.
    fn state_from(cost: CostMatrix) -> LagrangianState {
        // α = min of each pair; choose matrices where one side of every pair is 0.
        init_multipliers(&cost, 0).unwrap()
    }

    /// Reduced matrix over jobs (0,1,2,3) scheduled in that order, holding the slack
    /// constraint 0->2->1->3->0 with β applied on top of `extra` backward entries.
    fn slack_state(beta: u64, extra: &[((usize, usize), u64)]) -> LagrangianState {
        let mut c = CostMatrix::zeros(4);
        for (a, b) in [(0, 2), (2, 1), (1, 3), (3, 0)] {
            c.set(a, b, Cost::Finite(beta));
        }
        for &((a, b), v) in extra {
            let cur = c.get(a, b).finite().unwrap();
            c.set(a, b, Cost::Finite(cur + v));
        }
        let mut s = state_from(c);
        s.apply_constraint(CycleConstraint::new(vec![0, 2, 1, 3], beta))
            .unwrap();
        s
    }

    #[test]
    fn zero_flow_leaves_state_unchanged() {
        let mut s = slack_state(5, &[]);
        let before = s.clone();
        let out = strengthen_by_maxflow(&mut s, 0, &[0, 1, 2, 3]).unwrap();
        assert_eq!(out.eta, 2);
        assert_eq!(out.beta_star, 0);
        assert_eq!(s.lb(), before.lb());
        assert_eq!(s.reduced(), before.reduced());
    }

    #[test]
    fn eta_two_full_transfer_gains_beta() {
        // paths 2->1->0 and 3->2->1 each carry 4 after the constraint is applied
        let mut s = slack_state(4, &[((2, 1), 8), ((1, 0), 4), ((3, 2), 4)]);
        assert_eq!(s.lb(), 4);
        let order = [0, 1, 2, 3];
        assert!(is_lower_triangular(&s, &order));
        let out = strengthen_by_maxflow(&mut s, 0, &order).unwrap();
        assert_eq!((out.eta, out.beta_star), (2, 4));
        assert_eq!(s.lb(), 8);
        assert_eq!(out.lb_gain(), 4);
        s.check_invariants().unwrap();
        assert!(is_lower_triangular(&s, &order));
        assert_eq!(s.constraints()[0].beta(), 0);
        let pos = positions_of(&order);
        for c in &out.added {
            assert_eq!(c.active_edges(&pos), 1);
        }
        assert_eq!(s.reduced().get(2, 1), Cost::Finite(4));
        assert_eq!(s.reduced().get(3, 0), Cost::Finite(4));
    }

    #[test]
    fn rejects_non_triangular_order() {
        let inst = Instance::new(vec![1, 2, 3], vec![3, 2, 1], &[(2, 0)]).unwrap();
        let mut s = init_multipliers(&build_cost_matrix(&inst), inst.self_cost()).unwrap();
        s.apply_constraint(CycleConstraint::new(vec![0, 2, 1], 4))
            .unwrap();
        // job 3 before job 1 is fine, but 1 before 3 hits the infinite entry
        assert!(matches!(
            strengthen_by_maxflow(&mut s, 0, &[0, 1, 2]),
            Err(BoundError::NotTriangular { .. })
        ));
    }

    #[test]
    fn upper_bound_kept_while_lb_rises() {
        // edge (0,2) can route only 1 (through 1->0), edge (1,3) can route 3
        let mut s = slack_state(4, &[((2, 1), 4), ((1, 0), 1), ((3, 2), 3)]);
        let order = [0, 1, 2, 3];
        let ub = s.upper_bound(&order).unwrap();
        assert_eq!(ub, 8);
        let out = strengthen_by_maxflow(&mut s, 0, &order).unwrap();
        assert_eq!(out.beta_star, 1);
        assert_eq!(s.lb(), 5);
        assert_eq!(s.upper_bound(&order).unwrap(), ub);
        assert_eq!(s.constraints()[0].beta(), 3);
        s.check_invariants().unwrap();
    }
}
