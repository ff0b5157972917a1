//! Scheduling of phasor data transmissions as single-machine weighted completion
//! time with precedence constraints (1|prec|ΣwC).
//!
//! [`lagrangian`] computes lower bounds from relaxed cycle elimination constraints,
//! [`bnb`] searches over precedence fixings with those bounds, and [`grid`] turns a
//! power network case into an instance.

pub mod bnb;
pub mod grid;
pub mod harness;
pub mod lagrangian;
pub mod sched;
pub mod trace;
