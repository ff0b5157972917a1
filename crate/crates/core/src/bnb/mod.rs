//! Branch and bound over pairwise orderings, plus the heuristics around it.

mod branch;
mod greedy;
mod heuristic;
mod search;

pub use branch::select_branch_variable;
pub use greedy::greedy_baseline;
pub use heuristic::{improve_schedule, initial_heuristic, repair_order};
pub use search::{solve, solve_observed, LimitKind, Limits, SolveOptions, SolveResult};
