use super::cost::{Cost, CostMatrix};
use super::BoundError;

/// A relaxed cycle elimination constraint `Σ δ over the cycle ≥ 1` with its multiplier.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleConstraint {
    jobs: Vec<usize>,
    beta: u64,
}

impl CycleConstraint {
    /// `jobs` lists the cycle's vertices; the closing edge back to `jobs[0]` is implicit.
    pub fn new(jobs: Vec<usize>, beta: u64) -> Self {
        assert!(jobs.len() >= 2, "a cycle needs at least two jobs");
        debug_assert!({
            let mut s = jobs.clone();
            s.sort_unstable();
            s.windows(2).all(|w| w[0] != w[1])
        });
        Self { jobs, beta }
    }

    pub fn jobs(&self) -> &[usize] {
        &self.jobs
    }

    /// Number of edges q.
    pub fn len(&self) -> usize {
        self.jobs.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn beta(&self) -> u64 {
        self.beta
    }

    pub(crate) fn set_beta(&mut self, beta: u64) {
        self.beta = beta;
    }

    /// Edges `(n_i, n_{i+1})`, wrapping around.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let q = self.jobs.len();
        (0..q).map(move |i| (self.jobs[i], self.jobs[(i + 1) % q]))
    }

    /// Number of edges with δ = 1 under the schedule given by `positions`.
    pub fn active_edges(&self, positions: &[usize]) -> usize {
        self.edges()
            .filter(|&(a, b)| positions[a] < positions[b])
            .count()
    }

    /// Smallest reduced cost over the edges.
    pub fn min_reduced(&self, reduced: &CostMatrix) -> Cost {
        self.edges()
            .map(|(a, b)| reduced.get(a, b))
            .min()
            .expect("nonempty cycle")
    }
}

/// Multipliers, reduced costs and the running lower bound.
///
/// Pairwise multipliers are held doubled (`2α_nm = min{c_nm, c_mn}`) so every
/// quantity stays integral.
#[derive(Debug, Clone)]
pub struct LagrangianState {
    cost: CostMatrix,
    reduced: CostMatrix,
    alpha2: Vec<u64>,
    constraints: Vec<CycleConstraint>,
    lb: u64,
    base: u64,
}

/// Sets α_nm = α_mn = ½ min{c_nm, c_mn} and builds the reduced matrix C⁽⁰⁾.
///
/// `base` is the constant Σ p_m w_m.
pub fn init_multipliers(cost: &CostMatrix, base: u64) -> Result<LagrangianState, BoundError> {
    let n = cost.n();
    let mut reduced = cost.clone();
    let mut alpha2 = vec![0u64; n * n];
    let mut lb = base;
    for i in 0..n {
        for j in i + 1..n {
            let m = match cost.get(i, j).min(cost.get(j, i)) {
                Cost::Finite(v) => v,
                Cost::Infinite => return Err(BoundError::BothInfinite { n: i, m: j }),
            };
            alpha2[i * n + j] = m;
            alpha2[j * n + i] = m;
            lb += m;
            reduced.set(
                i,
                j,
                cost.get(i, j).checked_sub(m).expect("m is the minimum"),
            );
            reduced.set(
                j,
                i,
                cost.get(j, i).checked_sub(m).expect("m is the minimum"),
            );
        }
    }
    Ok(LagrangianState {
        cost: cost.clone(),
        reduced,
        alpha2,
        constraints: Vec::new(),
        lb,
        base,
    })
}

impl LagrangianState {
    pub fn n(&self) -> usize {
        self.reduced.n()
    }

    pub fn lb(&self) -> u64 {
        self.lb
    }

    pub fn base(&self) -> u64 {
        self.base
    }

    pub fn reduced(&self) -> &CostMatrix {
        &self.reduced
    }

    pub fn cost(&self) -> &CostMatrix {
        &self.cost
    }

    /// 2α_nm.
    pub fn alpha_doubled(&self, n: usize, m: usize) -> u64 {
        self.alpha2[n * self.n() + m]
    }

    /// Σ_{n≠m} α_nm.
    pub fn alpha_sum(&self) -> u64 {
        let n = self.n();
        (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .map(|(i, j)| self.alpha2[i * n + j])
            .sum()
    }

    pub fn beta_sum(&self) -> u64 {
        self.constraints.iter().map(|c| c.beta).sum()
    }

    pub fn constraints(&self) -> &[CycleConstraint] {
        &self.constraints
    }

    /// Number of constraints relaxed so far.
    pub fn r(&self) -> usize {
        self.constraints.len()
    }

    /// Relaxes `c` with its multiplier, which must not exceed any reduced cost on its edges.
    pub fn apply_constraint(&mut self, c: CycleConstraint) -> Result<(), BoundError> {
        if c.beta == 0 {
            return Err(BoundError::NonPositiveBeta);
        }
        for (a, b) in c.edges() {
            if self.reduced.get(a, b).checked_sub(c.beta).is_none() {
                return Err(BoundError::BetaExceedsReducedCost {
                    edge: (a, b),
                    beta: c.beta,
                });
            }
        }
        for (a, b) in c.edges() {
            let v = self.reduced.get(a, b).checked_sub(c.beta).expect("checked");
            self.reduced.set(a, b, v);
        }
        self.lb += c.beta;
        self.constraints.push(c);
        Ok(())
    }

    /// Takes constraint `idx`'s multiplier back out of the Lagrangian (multiplier becomes 0).
    pub(crate) fn release(&mut self, idx: usize) -> u64 {
        let beta = self.constraints[idx].beta;
        let jobs = self.constraints[idx].jobs.clone();
        let q = jobs.len();
        for i in 0..q {
            let (a, b) = (jobs[i], jobs[(i + 1) % q]);
            let v = self.reduced.get(a, b).add(beta);
            self.reduced.set(a, b, v);
        }
        self.constraints[idx].beta = 0;
        self.lb -= beta;
        beta
    }

    /// Puts `beta` back on a released constraint.
    pub(crate) fn reinstate(&mut self, idx: usize, beta: u64) -> Result<(), BoundError> {
        debug_assert_eq!(self.constraints[idx].beta, 0);
        if beta == 0 {
            return Ok(());
        }
        let edges: Vec<_> = self.constraints[idx].edges().collect();
        for &(a, b) in &edges {
            if self.reduced.get(a, b).checked_sub(beta).is_none() {
                return Err(BoundError::BetaExceedsReducedCost { edge: (a, b), beta });
            }
        }
        for (a, b) in edges {
            let v = self.reduced.get(a, b).checked_sub(beta).expect("checked");
            self.reduced.set(a, b, v);
        }
        self.constraints[idx].set_beta(beta);
        self.lb += beta;
        Ok(())
    }

    /// Upper bound for a complete feasible order.
    ///
    /// UB = LB + Σ c⁽ʳ⁾_nm δ_nm + Σ_i β⁽ⁱ⁾ (active_i − 1). The middle term vanishes for
    /// an order extracted from the reduced matrix, and the result always equals the
    /// order's weighted completion time.
    pub fn upper_bound(&self, order: &[usize]) -> Result<u64, BoundError> {
        let n = self.n();
        if order.len() != n {
            return Err(BoundError::InfeasibleSchedule);
        }
        let pos = crate::sched::positions_of(order);
        let mut residual = 0u64;
        for (k, &a) in order.iter().enumerate() {
            for &b in &order[k + 1..] {
                match self.reduced.get(a, b) {
                    Cost::Finite(v) => residual += v,
                    Cost::Infinite => return Err(BoundError::InfeasibleSchedule),
                }
            }
        }
        let mut slack = 0u64;
        for c in &self.constraints {
            let active = c.active_edges(&pos) as u64;
            // A feasible order satisfies every cycle constraint.
            debug_assert!(active >= 1);
            slack += c.beta * (active.max(1) - 1);
        }
        Ok(self.lb + residual + slack)
    }

    /// Recomputes LB and every reduced entry from C, α and β and compares.
    pub fn check_invariants(&self) -> Result<(), String> {
        let expected = self.alpha_sum() + self.beta_sum() + self.base;
        if expected != self.lb {
            return Err(format!("lb {} != Σα + Σβ + Σpw = {}", self.lb, expected));
        }
        let n = self.n();
        let mut used = vec![0u64; n * n];
        for c in &self.constraints {
            for (a, b) in c.edges() {
                used[a * n + b] += c.beta;
            }
        }
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let want = self
                    .cost
                    .get(i, j)
                    .checked_sub(self.alpha2[i * n + j] + used[i * n + j]);
                match want {
                    None => return Err(format!("reduced cost ({i},{j}) would be negative")),
                    Some(w) if w != self.reduced.get(i, j) => {
                        return Err(format!(
                            "reduced cost ({i},{j}) is {} but C − α − Σβb gives {w}",
                            self.reduced.get(i, j)
                        ))
                    }
                    _ => {}
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lagrangian::build_cost_matrix;
    use crate::sched::{evaluate_schedule, Instance};

    fn trace_state() -> (Instance, LagrangianState) {
        let inst = Instance::new(vec![1, 2, 3], vec![3, 2, 1], &[(2, 0)]).unwrap();
        let s = init_multipliers(&build_cost_matrix(&inst), inst.self_cost()).unwrap();
        (inst, s)
    }

    #[test]
    fn two_jobs_no_precedence() {
        let inst = Instance::new(vec![2, 3], vec![4, 5], &[]).unwrap();
        let s = init_multipliers(&build_cost_matrix(&inst), inst.self_cost()).unwrap();
        assert_eq!(s.alpha_doubled(0, 1), 10);
        assert_eq!(s.reduced().get(0, 1), Cost::Finite(0));
        assert_eq!(s.reduced().get(1, 0), Cost::Finite(2));
        assert_eq!(s.lb(), 33);
    }

    #[test]
    fn trace_initial_multipliers() {
        let (_, s) = trace_state();
        // α pairs (1, 4.5, 1) held doubled
        assert_eq!(s.alpha_doubled(0, 1), 2);
        assert_eq!(s.alpha_doubled(0, 2), 9);
        assert_eq!(s.alpha_doubled(1, 2), 2);
        assert_eq!(s.lb(), 23);
        let r = s.reduced();
        assert_eq!(
            [
                r.get(0, 1),
                r.get(1, 0),
                r.get(0, 2),
                r.get(2, 0),
                r.get(1, 2),
                r.get(2, 1)
            ],
            [
                Cost::Finite(0),
                Cost::Finite(4),
                Cost::Infinite,
                Cost::Finite(0),
                Cost::Finite(0),
                Cost::Finite(4)
            ]
        );
        s.check_invariants().unwrap();
    }

    #[test]
    fn identical_jobs_zero_matrix() {
        let inst = Instance::new(vec![1; 3], vec![1; 3], &[]).unwrap();
        let s = init_multipliers(&build_cost_matrix(&inst), inst.self_cost()).unwrap();
        assert!(s.reduced().is_zero());
        assert_eq!(s.lb(), 6);
    }

    #[test]
    fn both_infinite_is_corruption() {
        let mut c = CostMatrix::zeros(2);
        c.set(0, 1, Cost::Infinite);
        c.set(1, 0, Cost::Infinite);
        assert_eq!(
            init_multipliers(&c, 0).unwrap_err(),
            BoundError::BothInfinite { n: 0, m: 1 }
        );
    }

    #[test]
    fn apply_triangle_on_trace() {
        let (inst, mut s) = trace_state();
        let c = CycleConstraint::new(vec![0, 2, 1], 4);
        assert_eq!(c.min_reduced(s.reduced()), Cost::Finite(4));
        s.apply_constraint(c).unwrap();
        assert_eq!(s.lb(), 27);
        assert_eq!(s.reduced().get(2, 1), Cost::ZERO);
        assert_eq!(s.reduced().get(1, 0), Cost::ZERO);
        assert_eq!(s.reduced().get(0, 2), Cost::Infinite);
        assert_eq!(s.constraints()[0].min_reduced(s.reduced()), Cost::ZERO);
        s.check_invariants().unwrap();

        // (2,3,1) is tight, (3,2,1) leaves the constraint slack by one edge
        assert_eq!(s.upper_bound(&[1, 2, 0]).unwrap(), 27);
        assert_eq!(s.upper_bound(&[2, 1, 0]).unwrap(), 31);
        assert_eq!(
            evaluate_schedule(&inst, &[2, 1, 0]).unwrap().objective(),
            31
        );
        assert_eq!(
            s.upper_bound(&[0, 1, 2]),
            Err(BoundError::InfeasibleSchedule)
        );
    }

    #[test]
    fn apply_rejects_bad_beta() {
        let (_, mut s) = trace_state();
        assert_eq!(
            s.apply_constraint(CycleConstraint::new(vec![0, 2, 1], 0)),
            Err(BoundError::NonPositiveBeta)
        );
        assert!(matches!(
            s.apply_constraint(CycleConstraint::new(vec![0, 2, 1], 5)),
            Err(BoundError::BetaExceedsReducedCost { .. })
        ));
        assert_eq!(s.lb(), 23);
    }

    #[test]
    fn release_and_reinstate_round_trip() {
        let (_, mut s) = trace_state();
        s.apply_constraint(CycleConstraint::new(vec![0, 2, 1], 4))
            .unwrap();
        let before = s.reduced().clone();
        assert_eq!(s.release(0), 4);
        assert_eq!(s.lb(), 23);
        s.check_invariants().unwrap();
        s.reinstate(0, 4).unwrap();
        assert_eq!(s.reduced(), &before);
        assert_eq!(s.lb(), 27);
    }
}
