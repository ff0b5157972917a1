//! Lagrangian lower bounds from relaxed pairwise and cycle elimination constraints.
//!
//! Every reduced cost is kept nonnegative, so the bound is always
//! `Σ α + Σ β + Σ p w` for the multipliers in the state.

mod bound;
mod cost;
mod cycles;
mod extract;
pub mod flow;
mod state;
mod strengthen;

use thiserror::Error;

pub use bound::{compute_bound, compute_bound_observed, BoundOutcome};
pub use cost::{build_cost_matrix, Cost, CostMatrix};
pub use cycles::{find_blocking_cycle, find_cycle_constraints, CycleLength};
pub use extract::{extract_schedule, Extraction};
pub use flow::{max_flow, FlowNetwork, FlowPath, MaxFlow};
pub use state::{init_multipliers, CycleConstraint, LagrangianState};
pub use strengthen::{is_lower_triangular, strengthen_by_maxflow, Strengthening};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundError {
    #[error("jobs {n} and {m} each must precede the other")]
    BothInfinite { n: usize, m: usize },
    #[error("cycle multiplier must be positive")]
    NonPositiveBeta,
    #[error("multiplier {beta} exceeds the reduced cost on edge {edge:?}")]
    BetaExceedsReducedCost { edge: (usize, usize), beta: u64 },
    #[error("schedule is incomplete or violates precedence")]
    InfeasibleSchedule,
    #[error("reduced cost ({n},{m}) is positive although {n} is scheduled first")]
    NotTriangular { n: usize, m: usize },
}
