use super::{Instance, SchedError};

/// A complete non-preemptive, idle-free processing order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schedule {
    order: Vec<usize>,
    completions: Vec<u64>,
    objective: u64,
    frame_length: u64,
}

impl Schedule {
    /// Job indices in processing order.
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// Completion time C_n, indexed by job.
    pub fn completions(&self) -> &[u64] {
        &self.completions
    }

    /// Σ w_n C_n.
    pub fn objective(&self) -> u64 {
        self.objective
    }

    pub fn frame_length(&self) -> u64 {
        self.frame_length
    }

    /// Position of each job in the order.
    pub fn positions(&self) -> Vec<usize> {
        positions_of(&self.order)
    }

    pub fn into_order(self) -> Vec<usize> {
        self.order
    }
}

pub(crate) fn positions_of(order: &[usize]) -> Vec<usize> {
    let mut pos = vec![0; order.len()];
    for (k, &j) in order.iter().enumerate() {
        pos[j] = k;
    }
    pos
}

fn check_permutation(n: usize, order: &[usize]) -> Result<(), SchedError> {
    if order.len() != n {
        return Err(SchedError::NotAPermutation);
    }
    let mut seen = vec![false; n];
    for &j in order {
        if j >= n || std::mem::replace(&mut seen[j], true) {
            return Err(SchedError::NotAPermutation);
        }
    }
    Ok(())
}

/// Completion times and objective of `order`. Precedence is not checked.
pub fn evaluate_schedule(inst: &Instance, order: &[usize]) -> Result<Schedule, SchedError> {
    check_permutation(inst.n_jobs(), order)?;
    let p = inst.proc_times();
    let w = inst.weights();
    let mut completions = vec![0; order.len()];
    let mut clock = 0u64;
    let mut objective = 0u64;
    for &j in order {
        clock += p[j];
        completions[j] = clock;
        objective += w[j] * clock;
    }
    Ok(Schedule {
        order: order.to_vec(),
        completions,
        objective,
        frame_length: clock,
    })
}

/// Objective only, for hot loops that already know `order` is a permutation.
pub(crate) fn objective_of(inst: &Instance, order: &[usize]) -> u64 {
    let p = inst.proc_times();
    let w = inst.weights();
    let mut clock = 0u64;
    let mut objective = 0u64;
    for &j in order {
        clock += p[j];
        objective += w[j] * clock;
    }
    objective
}

/// True iff every closed precedence pair is respected by `order`.
pub fn is_feasible(inst: &Instance, order: &[usize]) -> bool {
    let n = inst.n_jobs();
    if check_permutation(n, order).is_err() {
        return false;
    }
    let prec = inst.precedence();
    let pos = positions_of(order);
    prec.closed_pairs().all(|(i, j)| pos[i] < pos[j])
}
