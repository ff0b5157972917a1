//! Problem model for single-machine weighted completion time with precedence.

mod generate;
mod instance;
pub mod oracle;
mod precedence;
mod schedule;

use thiserror::Error;

pub use generate::{random_instance, DEFAULT_WEIGHT_MAX, MAX_PROC_TIME_MS};
pub use instance::{frame_stats, FrameStats, Instance, RawInstance};
pub use oracle::{brute_force_optimal, wspt_order};
pub use precedence::{transitive_closure, PrecedenceRelation};
pub(crate) use schedule::positions_of;
pub use schedule::{evaluate_schedule, is_feasible, Schedule};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchedError {
    #[error("precedence contains a cycle through jobs {cycle:?}")]
    CyclicPrecedence { cycle: Vec<usize> },
    #[error("job {job} has non-positive processing time {value}")]
    NonPositiveProcTime { job: usize, value: i64 },
    #[error("job {job} has negative weight {value}")]
    NegativeWeight { job: usize, value: i64 },
    #[error("job index {index} out of range for {n_jobs} jobs")]
    BadJobIndex { index: usize, n_jobs: usize },
    #[error("n = {n_jobs} but p has {p_len} entries and w has {w_len}")]
    LengthMismatch {
        n_jobs: usize,
        p_len: usize,
        w_len: usize,
    },
    #[error("order is not a permutation of the jobs")]
    NotAPermutation,
    #[error("instance has precedence constraints")]
    HasPrecedence,
    #[error("{n_jobs} jobs exceeds the exhaustive search limit of {limit}")]
    TooLarge { n_jobs: usize, limit: usize },
    #[error("malformed instance: {0}")]
    Format(String),
}
