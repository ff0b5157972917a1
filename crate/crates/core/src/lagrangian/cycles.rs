//! Search for cycles of strictly positive reduced cost.

use super::cost::CostMatrix;
use super::state::{CycleConstraint, LagrangianState};

/// Length of the short cycles enumerated during the constraint passes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CycleLength {
    Three,
    Four,
}

/// All 3- or 4-edge cycles with positive reduced cost on every edge that the reference
/// schedule (given as job positions) satisfies with equality.
///
/// Cycles are rooted at their smallest job and listed in lexicographic order of the
/// job sequence. Each candidate carries β = min reduced cost over its edges, as of the
/// state passed in.
pub fn find_cycle_constraints(
    state: &LagrangianState,
    len: CycleLength,
    positions: &[usize],
) -> Vec<CycleConstraint> {
    let c = state.reduced();
    let n = c.n();
    let comp = positive_components(c, &vec![true; n]);
    // Positive successors sharing a strongly connected component, ascending.
    let succ: Vec<Vec<usize>> = (0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| j != i && comp[j] == comp[i] && c.get(i, j).is_positive())
                .collect()
        })
        .collect();
    let tight = |jobs: &[usize]| {
        let q = jobs.len();
        (0..q)
            .filter(|&k| positions[jobs[k]] < positions[jobs[(k + 1) % q]])
            .count()
            == 1
    };
    let mut out = Vec::new();
    for a in 0..n {
        for &b in succ[a].iter().filter(|&&b| b > a) {
            for &d in succ[b].iter().filter(|&&d| d > a && d != b) {
                match len {
                    CycleLength::Three => {
                        if c.get(d, a).is_positive() && tight(&[a, b, d]) {
                            push(&mut out, c, vec![a, b, d]);
                        }
                    }
                    CycleLength::Four => {
                        for &e in succ[d].iter().filter(|&&e| e > a && e != b && e != d) {
                            if c.get(e, a).is_positive() && tight(&[a, b, d, e]) {
                                push(&mut out, c, vec![a, b, d, e]);
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

fn push(out: &mut Vec<CycleConstraint>, c: &CostMatrix, jobs: Vec<usize>) {
    let probe = CycleConstraint::new(jobs, 0);
    let beta = probe
        .min_reduced(c)
        .finite()
        .expect("acyclic precedence cannot yield an all-infinite cycle");
    out.push(CycleConstraint::new(probe.jobs().to_vec(), beta));
}

/// A positive-cost cycle among the unscheduled jobs, or `None` when their positive
/// subgraph is acyclic.
///
/// Jobs are scanned by ascending number of positive successors (ties by index); for
/// each, a depth-first search looks for a path back to it.
pub fn find_blocking_cycle(
    state: &LagrangianState,
    unscheduled: &[usize],
) -> Option<CycleConstraint> {
    let c = state.reduced();
    let n = c.n();
    let mut alive = vec![false; n];
    for &j in unscheduled {
        alive[j] = true;
    }
    let out_degree = |i: usize| {
        unscheduled
            .iter()
            .filter(|&&j| j != i && c.get(i, j).is_positive())
            .count()
    };
    let mut scan: Vec<(usize, usize)> = unscheduled.iter().map(|&j| (out_degree(j), j)).collect();
    scan.sort_unstable();
    for &(_, root) in &scan {
        if let Some(jobs) = cycle_through(c, &alive, root) {
            let probe = CycleConstraint::new(jobs, 0);
            let beta = probe.min_reduced(c).finite()?;
            return Some(CycleConstraint::new(probe.jobs().to_vec(), beta));
        }
    }
    None
}

fn cycle_through(c: &CostMatrix, alive: &[bool], root: usize) -> Option<Vec<usize>> {
    let n = c.n();
    let mut visited = vec![false; n];
    let mut parent = vec![usize::MAX; n];
    let mut stack = vec![(root, 0usize)];
    visited[root] = true;
    while let Some(top) = stack.last_mut() {
        let (v, next) = (top.0, top.1);
        if next >= n {
            stack.pop();
            continue;
        }
        top.1 += 1;
        let s = next;
        if s == v || !alive[s] || !c.get(v, s).is_positive() {
            continue;
        }
        if s == root {
            let mut jobs = vec![v];
            let mut u = v;
            while u != root {
                u = parent[u];
                jobs.push(u);
            }
            jobs.reverse();
            return Some(jobs);
        }
        if !visited[s] {
            visited[s] = true;
            parent[s] = v;
            stack.push((s, 0));
        }
    }
    None
}

/// Strongly connected components of the positive-entry graph over the `alive` jobs
/// (iterative Tarjan). Dead jobs get `usize::MAX`.
pub(crate) fn positive_components(c: &CostMatrix, alive: &[bool]) -> Vec<usize> {
    let n = c.n();
    const UNSET: usize = usize::MAX;
    let mut index = vec![UNSET; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut comp = vec![UNSET; n];
    let mut tarjan_stack = Vec::new();
    let mut next_index = 0;
    let mut next_comp = 0;
    for root in 0..n {
        if !alive[root] || index[root] != UNSET {
            continue;
        }
        let mut call = vec![(root, 0usize)];
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        tarjan_stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut next)) = call.last_mut() {
            if *next < n {
                let s = *next;
                *next += 1;
                if s == v || !alive[s] || !c.get(v, s).is_positive() {
                    continue;
                }
                if index[s] == UNSET {
                    index[s] = next_index;
                    low[s] = next_index;
                    next_index += 1;
                    tarjan_stack.push(s);
                    on_stack[s] = true;
                    call.push((s, 0));
                } else if on_stack[s] {
                    low[v] = low[v].min(index[s]);
                }
            } else {
                call.pop();
                if let Some(&(u, _)) = call.last() {
                    low[u] = low[u].min(low[v]);
                }
                if low[v] == index[v] {
                    loop {
                        let w = tarjan_stack.pop().expect("tarjan stack");
                        on_stack[w] = false;
                        comp[w] = next_comp;
                        if w == v {
                            break;
                        }
                    }
                    next_comp += 1;
                }
            }
        }
    }
    comp
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lagrangian::{build_cost_matrix, init_multipliers, Cost};
    use crate::sched::Instance;

    fn trace_state() -> LagrangianState {
        let inst = Instance::new(vec![1, 2, 3], vec![3, 2, 1], &[(2, 0)]).unwrap();
        init_multipliers(&build_cost_matrix(&inst), inst.self_cost()).unwrap()
    }

    #[test]
    fn trace_triangle() {
        let s = trace_state();
        // reference (2,3,1) in 1-based jobs
        let pos = crate::sched::positions_of(&[1, 2, 0]);
        let found = find_cycle_constraints(&s, CycleLength::Three, &pos);
        assert_eq!(found, vec![CycleConstraint::new(vec![0, 2, 1], 4)]);
        assert!(find_cycle_constraints(&s, CycleLength::Four, &pos).is_empty());
    }

    #[test]
    fn zero_matrix_has_no_cycles() {
        let inst = Instance::new(vec![1; 4], vec![1; 4], &[]).unwrap();
        let s = init_multipliers(&build_cost_matrix(&inst), inst.self_cost()).unwrap();
        let pos = [0, 1, 2, 3];
        assert!(find_cycle_constraints(&s, CycleLength::Three, &pos).is_empty());
        assert!(find_cycle_constraints(&s, CycleLength::Four, &pos).is_empty());
        assert!(find_blocking_cycle(&s, &[0, 1, 2, 3]).is_none());
    }

    #[test]
    fn no_two_cycles_after_init() {
        let inst = crate::sched::random_instance(3, 7, 0.2, 10);
        let s = init_multipliers(&build_cost_matrix(&inst), inst.self_cost()).unwrap();
        for i in 0..7 {
            for j in 0..7 {
                if i != j {
                    assert!(s.reduced().get(i, j).is_zero() || s.reduced().get(j, i).is_zero());
                }
            }
        }
    }

    #[test]
    fn blocking_cycle_on_trace() {
        let s = trace_state();
        let c = find_blocking_cycle(&s, &[0, 1, 2]).unwrap();
        assert_eq!(c.beta(), 4);
        let mut edges: Vec<_> = c.edges().collect();
        edges.sort();
        assert_eq!(edges, vec![(0, 2), (1, 0), (2, 1)]);
    }

    #[test]
    fn acyclic_positive_graph_has_no_blocking_cycle() {
        let inst = Instance::new(vec![1, 2, 3], vec![3, 2, 1], &[(0, 1), (1, 2)]).unwrap();
        let s = init_multipliers(&build_cost_matrix(&inst), inst.self_cost()).unwrap();
        assert!(find_blocking_cycle(&s, &[0, 1, 2]).is_none());
    }

    #[test]
    fn components_split_acyclic_graph() {
        let mut m = CostMatrix::zeros(4);
        m.set(0, 1, Cost::Finite(1));
        m.set(1, 0, Cost::Finite(1));
        m.set(1, 2, Cost::Finite(1));
        m.set(2, 3, Cost::Infinite);
        let comp = positive_components(&m, &[true; 4]);
        assert_eq!(comp[0], comp[1]);
        assert_ne!(comp[1], comp[2]);
        assert_ne!(comp[2], comp[3]);
    }
}
