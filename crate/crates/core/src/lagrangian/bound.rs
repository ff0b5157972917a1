use super::cost::build_cost_matrix;
use super::cycles::{find_blocking_cycle, find_cycle_constraints, CycleLength};
use super::extract::{extract_schedule, Extraction};
use super::state::{init_multipliers, LagrangianState};
use super::strengthen::strengthen_by_maxflow;
use super::BoundError;
use crate::sched::{evaluate_schedule, Instance, Schedule};
use crate::trace::{Event, Observer, Phase, Silent};

/// Final state of the bound pipeline at one instance.
#[derive(Debug, Clone)]
pub struct BoundOutcome {
    pub state: LagrangianState,
    pub extraction: Extraction,
    /// The extracted schedule, when extraction placed every job.
    pub schedule: Option<Schedule>,
    /// UB of `schedule` from the multiplier formula.
    pub upper_bound: Option<u64>,
}

impl BoundOutcome {
    pub fn lb(&self) -> u64 {
        self.state.lb()
    }

    /// LB = UB: the extracted schedule is optimal for this instance.
    pub fn is_closed(&self) -> bool {
        self.upper_bound == Some(self.state.lb())
    }
}

pub fn compute_bound(inst: &Instance, reference: &Schedule) -> Result<BoundOutcome, BoundError> {
    compute_bound_observed(inst, reference, &mut Silent)
}

/// Cost matrix and α, then all tight triangles and quads, then blocking cycles until a
/// schedule can be read off, then one max-flow pass over the slack constraints.
pub fn compute_bound_observed(
    inst: &Instance,
    reference: &Schedule,
    observer: &mut dyn Observer,
) -> Result<BoundOutcome, BoundError> {
    let cost = build_cost_matrix(inst);
    let mut state = init_multipliers(&cost, inst.self_cost())?;
    observer.on_event(&Event::Initialized, Some(&state));
    let ref_pos = reference.positions();

    for (len, phase) in [
        (CycleLength::Three, Phase::Triangle),
        (CycleLength::Four, Phase::Quad),
    ] {
        for candidate in find_cycle_constraints(&state, len, &ref_pos) {
            // Earlier applications in this pass may have lowered or zeroed an edge.
            let beta = match candidate.min_reduced(state.reduced()).finite() {
                Some(b) if b > 0 => b,
                _ => continue,
            };
            let c = super::CycleConstraint::new(candidate.jobs().to_vec(), beta);
            apply(&mut state, c, phase, observer)?;
        }
    }

    let extraction = loop {
        let extraction = extract_schedule(&state, &ref_pos);
        if extraction.is_complete() {
            break extraction;
        }
        match find_blocking_cycle(&state, &extraction.unscheduled) {
            Some(c) => apply(&mut state, c, Phase::Blocking, observer)?,
            None => break extraction,
        }
    };

    let order = extraction.order();
    if let Some(order) = &order {
        let pos = crate::sched::positions_of(order);
        let applied = state.r();
        for idx in 0..applied {
            let c = &state.constraints()[idx];
            if c.beta() == 0 || c.active_edges(&pos) < 2 {
                continue;
            }
            let lb_before = state.lb();
            let step = strengthen_by_maxflow(&mut state, idx, order)?;
            if step.beta_star > 0 {
                observer.on_event(
                    &Event::Strengthened {
                        eta: step.eta,
                        beta_star: step.beta_star,
                        lb_before,
                    },
                    Some(&state),
                );
            }
        }
    }

    let (schedule, upper_bound) = match order {
        Some(order) => {
            let ub = state.upper_bound(&order)?;
            let schedule =
                evaluate_schedule(inst, &order).expect("extraction yields a permutation");
            (Some(schedule), Some(ub))
        }
        None => (None, None),
    };
    Ok(BoundOutcome {
        state,
        extraction,
        schedule,
        upper_bound,
    })
}

fn apply(
    state: &mut LagrangianState,
    c: super::CycleConstraint,
    phase: Phase,
    observer: &mut dyn Observer,
) -> Result<(), BoundError> {
    let lb_before = state.lb();
    state.apply_constraint(c)?;
    let applied = state.constraints().last().expect("just pushed");
    observer.on_event(
        &Event::Applied {
            phase,
            constraint: applied,
            lb_before,
        },
        Some(state),
    );
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lagrangian::Cost;
    use crate::sched::{brute_force_optimal, evaluate_schedule, random_instance, wspt_order};

    #[test]
    fn trace_instance_end_to_end() {
        let inst = Instance::new(vec![1, 2, 3], vec![3, 2, 1], &[(2, 0)]).unwrap();
        let reference = evaluate_schedule(&inst, &[1, 2, 0]).unwrap();
        let out = compute_bound(&inst, &reference).unwrap();
        assert_eq!(out.lb(), 27);
        assert_eq!(out.state.r(), 1);
        assert_eq!(out.state.constraints()[0].beta(), 4);
        assert_eq!(out.schedule.as_ref().unwrap().order(), &[1, 2, 0]);
        assert_eq!(out.upper_bound, Some(27));
        assert!(out.is_closed());
        let r = out.state.reduced();
        assert_eq!(r.get(2, 1), Cost::ZERO);
        assert_eq!(r.get(1, 0), Cost::ZERO);
        assert_eq!(r.get(0, 2), Cost::Infinite);
    }

    #[test]
    fn no_precedence_bound_is_wspt() {
        for seed in 0..30 {
            let inst = random_instance(seed, 1 + (seed as usize % 8), 0.0, 10);
            let reference = wspt_order(&inst).unwrap();
            let out = compute_bound(&inst, &reference).unwrap();
            assert_eq!(out.lb(), reference.objective());
            assert_eq!(out.state.r(), 0);
        }
    }

    #[test]
    fn chain_bound_is_exact() {
        let inst = random_instance(5, 9, 1.0, 10);
        let order: Vec<usize> = (0..9).collect();
        let reference = evaluate_schedule(&inst, &order).unwrap();
        let out = compute_bound(&inst, &reference).unwrap();
        assert_eq!(out.lb(), reference.objective());
        assert_eq!(out.upper_bound, Some(reference.objective()));
    }

    #[test]
    fn sandwich_on_small_instances() {
        for seed in 0..60 {
            let inst = random_instance(seed, 2 + (seed as usize % 6), 0.3, 10);
            let reference = brute_force_optimal(&inst).unwrap();
            let out = compute_bound(&inst, &reference).unwrap();
            out.state.check_invariants().unwrap();
            assert!(out.lb() <= reference.objective());
            let s = out
                .schedule
                .expect("extraction completes when no blocking cycle is left");
            assert!(crate::sched::is_feasible(&inst, s.order()));
            assert_eq!(out.upper_bound, Some(s.objective()));
        }
    }
}
