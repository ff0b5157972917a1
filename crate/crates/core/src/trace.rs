//! Observation hooks for the bound pipeline and the tree search.

use std::io::Write;

use crate::lagrangian::{CycleConstraint, LagrangianState};
use crate::sched::Instance;

/// Where a relaxed constraint came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    Triangle,
    Quad,
    Blocking,
    MaxFlow,
}

impl Phase {
    pub fn as_str(self) -> &'static str {
        match self {
            Phase::Triangle => "tri",
            Phase::Quad => "quad",
            Phase::Blocking => "block",
            Phase::MaxFlow => "flow",
        }
    }
}

#[derive(Debug)]
pub enum Event<'a> {
    /// Multipliers α set; `state.lb()` is LB⁽⁰⁾.
    Initialized,
    /// A cycle constraint was relaxed; `state.lb()` is the bound after it.
    Applied {
        phase: Phase,
        constraint: &'a CycleConstraint,
        lb_before: u64,
    },
    /// A slack constraint was split by max-flow.
    Strengthened {
        eta: usize,
        beta_star: u64,
        lb_before: u64,
    },
    /// A search node finished bounding.
    NodeBounded {
        node: u64,
        depth: usize,
        instance: &'a Instance,
        reference: &'a [usize],
        extracted: Option<&'a [usize]>,
        upper_bound: Option<u64>,
        incumbent: u64,
    },
    NodePruned {
        node: u64,
        lb: u64,
        incumbent: u64,
    },
    Branched {
        node: u64,
        before: usize,
        after: usize,
    },
}

pub trait Observer {
    fn on_event(&mut self, event: &Event<'_>, state: Option<&LagrangianState>);
}

/// Discards everything.
#[derive(Debug, Default, Clone, Copy)]
pub struct Silent;

impl Observer for Silent {
    fn on_event(&mut self, _: &Event<'_>, _: Option<&LagrangianState>) {}
}

/// Line-oriented diagnostic dump: lb per step, constraint edges and β. Jobs are 1-based.
pub struct TextTrace<W: Write> {
    out: W,
}

impl<W: Write> TextTrace<W> {
    pub fn new(out: W) -> Self {
        Self { out }
    }

    pub fn into_inner(self) -> W {
        self.out
    }
}

impl<W: Write> Observer for TextTrace<W> {
    fn on_event(&mut self, event: &Event<'_>, state: Option<&LagrangianState>) {
        let lb = state.map(|s| s.lb()).unwrap_or(0);
        // Diagnostics are best effort; a closed pipe must not abort the solve.
        let _ = match event {
            Event::Initialized => writeln!(self.out, "init lb={lb}"),
            Event::Applied {
                phase, constraint, ..
            } => {
                let edges: Vec<String> = constraint
                    .edges()
                    .map(|(a, b)| format!("{}->{}", a + 1, b + 1))
                    .collect();
                writeln!(
                    self.out,
                    "apply {} beta={} lb={lb} edges={}",
                    phase.as_str(),
                    constraint.beta(),
                    edges.join(",")
                )
            }
            Event::Strengthened { eta, beta_star, .. } => {
                writeln!(self.out, "flow eta={eta} beta*={beta_star} lb={lb}")
            }
            Event::NodeBounded {
                node,
                depth,
                upper_bound,
                incumbent,
                ..
            } => writeln!(
                self.out,
                "node {node} depth={depth} lb={lb} ub={} incumbent={incumbent}",
                upper_bound.map_or("-".to_string(), |u| u.to_string())
            ),
            Event::NodePruned {
                node,
                lb,
                incumbent,
            } => {
                writeln!(self.out, "prune {node} lb={lb} incumbent={incumbent}")
            }
            Event::Branched {
                node,
                before,
                after,
            } => writeln!(
                self.out,
                "branch {node} on {}<{} / {}<{}",
                after + 1,
                before + 1,
                before + 1,
                after + 1
            ),
        };
    }
}
