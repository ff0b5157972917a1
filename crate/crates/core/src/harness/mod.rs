//! Batch drivers behind the command line: oracle verification sweeps and benchmark suites.

mod batch;
pub mod bench;
pub mod verify;

use thiserror::Error;

pub use batch::{map_batch, map_batch_sequential, solve_batch, solve_batch_sequential};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid suite: {0}")]
    Suite(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}
